//! The polynomial flux `f(u) = sum_i c_i u^(p_i+1) / (p_i+1)`, its discrete
//! right-hand side `(f(u_h)_x, chi)`, and the Jacobian of that residual.
//!
//! The nonlinear term is evaluated elementwise as `f'(u_h) * (u_h)_x` with
//! no interface fluxes, matching the analyzed scheme.

use crate::banded::BandedMatrix;
use crate::basis::eval_basis;
use crate::error::Result;
use crate::quadrature::{gauss_rule, MAX_POINTS};
use crate::space::DgVector;

/// Flux specification: a list of `(c_i, p_i)` terms. `p_i = 0` terms are
/// permitted (they carry linear parts such as the advection term of the
/// decay problem folded into the flux). An empty list is `f = 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FluxSpec {
    terms: Vec<(f64, u32)>,
}

impl FluxSpec {
    pub fn new(terms: Vec<(f64, u32)>) -> Self {
        Self { terms }
    }

    /// The benchmark flux `f(u) = 10u^3 - 12u^5 - (3/2)u`.
    pub fn benchmark() -> Self {
        Self::new(vec![(30.0, 2), (-60.0, 4), (-1.5, 0)])
    }

    /// The decay-problem flux `c_1 = -1, p_1 = 7; c_2 = 4/7, p_2 = 8;
    /// c_3 = -4/3, p_3 = 9`, without the advection term.
    pub fn decay() -> Self {
        Self::new(vec![(-1.0, 7), (4.0 / 7.0, 8), (-4.0 / 3.0, 9)])
    }

    pub fn terms(&self) -> &[(f64, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.terms.iter().all(|&(c, _)| c == 0.0)
    }

    /// Returns a copy with an appended `(c, p)` term. Appending `(-1, 0)`
    /// realizes an extra `+u_x` advection term on the left-hand side.
    pub fn with_term(&self, c: f64, p: u32) -> Self {
        let mut terms = self.terms.clone();
        terms.push((c, p));
        Self { terms }
    }

    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|&(_, p)| p).max().unwrap_or(0)
    }

    /// `f(u) = sum c_i u^(p_i+1)/(p_i+1)`; `f(0) = 0` for every spec.
    pub fn f_eval(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, p)| c * u.powi(p as i32 + 1) / (p as f64 + 1.0))
            .sum()
    }

    /// `f'(u) = sum c_i u^p_i`.
    pub fn f_prime(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(c, p)| c * u.powi(p as i32)).sum()
    }

    /// `f''(u) = sum c_i p_i u^(p_i-1)`; `p = 0` terms contribute zero.
    pub fn f_double_prime(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .filter(|&&(_, p)| p > 0)
            .map(|&(c, p)| c * p as f64 * u.powi(p as i32 - 1))
            .sum()
    }

    /// Quadrature point count integrating `f'(u_h) (u_h)_x chi` exactly for
    /// polynomial fluxes, capped at the supported maximum.
    pub fn quadrature_points(&self, k: usize) -> usize {
        let p_max = self.max_power() as usize;
        let exact = (k * (p_max + 1) + k + 1).div_ceil(2) + 1;
        exact.max(k + 2).min(MAX_POINTS)
    }
}

/// Assembles the residual-space vector `F_i = sum_n int f'(u_h) (u_h)_x
/// phi_i dx`.
pub fn assemble_rhs(spec: &FluxSpec, u: &DgVector) -> Result<DgVector> {
    let space = u.space();
    let k = space.degree();
    let k1 = space.n_local();
    let rule = gauss_rule(spec.quadrature_points(k))?;
    let basis = eval_basis(k, rule.points())?;
    let mut out = space.zero_vector();
    for el in 0..space.n_elements() {
        let h = space.mesh().element_length(el);
        let coeffs = u.element_coeffs(el);
        let dref = 2.0 / h;
        for (p, &w) in rule.weights().iter().enumerate() {
            let mut uq = 0.0;
            let mut du = 0.0;
            for j in 0..k1 {
                uq += coeffs[j] * basis.values()[j][p];
                du += coeffs[j] * basis.first()[j][p];
            }
            let ux = dref * du;
            // (h/2) * w * f'(u) u_x * phi_i
            let common = 0.5 * h * w * spec.f_prime(uq) * ux;
            let row = el * k1;
            for i in 0..k1 {
                out.coeffs_mut()[row + i] += common * basis.values()[i][p];
            }
        }
    }
    Ok(out)
}

/// Jacobian of [`assemble_rhs`] with respect to the coefficients:
/// `dF_i/dU_j = sum_n int (f''(u_h) phi_j (u_h)_x + f'(u_h) phi_j') phi_i dx`.
/// Block-diagonal (no cross-element coupling).
pub fn assemble_rhs_jacobian(spec: &FluxSpec, u: &DgVector) -> Result<BandedMatrix> {
    let space = u.space();
    let k = space.degree();
    let k1 = space.n_local();
    let rule = gauss_rule(spec.quadrature_points(k))?;
    let basis = eval_basis(k, rule.points())?;
    let mut out = BandedMatrix::zeros(space.n_elements(), k1);
    for el in 0..space.n_elements() {
        let h = space.mesh().element_length(el);
        let coeffs = u.element_coeffs(el);
        let dref = 2.0 / h;
        for (p, &w) in rule.weights().iter().enumerate() {
            let mut uq = 0.0;
            let mut du = 0.0;
            for j in 0..k1 {
                uq += coeffs[j] * basis.values()[j][p];
                du += coeffs[j] * basis.first()[j][p];
            }
            let ux = dref * du;
            let fp = spec.f_prime(uq);
            let fpp = spec.f_double_prime(uq);
            let scale = 0.5 * h * w;
            for i in 0..k1 {
                let phi_i = basis.values()[i][p];
                for j in 0..k1 {
                    let dres = fpp * basis.values()[j][p] * ux + fp * dref * basis.first()[j][p];
                    out.add_local(el, i, j, scale * dres * phi_i);
                }
            }
        }
    }
    Ok(out)
}
