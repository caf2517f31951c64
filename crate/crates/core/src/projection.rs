//! Discrete initial data: the elliptic (auxiliary) projection defined by
//! `B(u - u~, chi) = 0`, and an L2 projection fallback for data without
//! analytic derivatives.

use crate::analytic::AnalyticFunction;
use crate::basis::eval_basis;
use crate::error::{Error, Result};
use crate::operator::{assemble_b_form, assemble_mass, PenaltyParams};
use crate::quadrature::{gauss_rule, MAX_POINTS};
use crate::solver::BandedLu;
use crate::space::{DgSpace, DgVector};

/// How the boundary jumps of a smooth function enter the analytic action
/// `B(u, phi_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BoundaryJumps {
    /// Use the one-sided traces of `u` itself: `[u](x_0) = -u(a)`,
    /// `[u](x_N) = u(b)`, and likewise for `u_x`. This is the projection
    /// convention.
    FromTrace,
    /// Treat `u` as satisfying the clamped boundary conditions exactly, so
    /// every jump of `u` vanishes; used by the weak-residual consistency
    /// check.
    Clamped,
}

/// Assembles `b_i = B(w, phi_i)` for a smooth function `w` with analytic
/// derivatives through order three. Interior jumps of `w` vanish; averages
/// are the point values; boundary jumps follow `boundary`.
pub(crate) fn analytic_b_action(
    w: &AnalyticFunction,
    space: &DgSpace,
    penalty: &PenaltyParams,
    epsilon: f64,
    quad_points: usize,
    boundary: BoundaryJumps,
) -> Result<Vec<f64>> {
    if !w.has_derivatives() {
        return Err(Error::MissingDerivative(1));
    }
    let k = space.degree();
    let k1 = space.n_local();
    let n_el = space.n_elements();
    let rule = gauss_rule(quad_points.min(MAX_POINTS))?;
    let basis = eval_basis(k, rule.points())?;
    let mut b = vec![0.0; space.n_dofs()];

    // volume: eps * int w'' phi_i''
    for el in 0..n_el {
        let h = space.mesh().element_length(el);
        let scale2 = (2.0 / h).powi(2);
        for (p, &wq) in rule.weights().iter().enumerate() {
            let x = space.mesh().to_physical(el, rule.points()[p]);
            let w2 = w.derivative(2, x)?;
            let common = epsilon * 0.5 * h * wq * w2 * scale2;
            for i in 0..k1 {
                b[el * k1 + i] += common * basis.second()[i][p];
            }
        }
    }

    // node terms
    for node in 0..=n_el {
        let x = space.mesh().nodes()[node];
        let w2 = w.derivative(2, x)?;
        let w3 = w.derivative(3, x)?;
        let (jump_w0, jump_w1) = match (node, boundary) {
            (_, BoundaryJumps::Clamped) => (0.0, 0.0),
            (0, BoundaryJumps::FromTrace) => (-w.eval(x), -w.derivative(1, x)?),
            (n, BoundaryJumps::FromTrace) if n == n_el => (w.eval(x), w.derivative(1, x)?),
            _ => (0.0, 0.0), // interior jumps of a smooth function vanish
        };
        let h = space.mesh().node_h(node);
        let w0 = penalty.weight0(h);
        let w1 = penalty.weight1(h);
        let interior = node >= 1 && node < n_el;
        let avg_w = if interior { 0.5 } else { 1.0 };
        // sides adjacent to this node: (element, trace side, jump sign)
        let mut sides: Vec<(usize, crate::basis::Side, f64)> = Vec::with_capacity(2);
        if node >= 1 {
            sides.push((node - 1, crate::basis::Side::Right, 1.0));
        }
        if node < n_el {
            sides.push((node, crate::basis::Side::Left, -1.0));
        }
        for &(el, side, jsign) in &sides {
            let hs = space.mesh().element_length(el);
            let trace = space.trace(side);
            let s = 2.0 / hs;
            let scale = [1.0, s, s * s, s * s * s];
            for i in 0..k1 {
                let phi0 = jsign * scale[0] * trace.values[i]; // contribution to [phi_i]
                let phi1 = jsign * scale[1] * trace.first[i]; // contribution to [phi_i']
                let phi2 = avg_w * scale[2] * trace.second[i]; // contribution to {phi_i''}
                let phi3 = avg_w * scale[3] * trace.third[i]; // contribution to {phi_i'''}
                let a_terms = w3 * phi0 + phi3 * jump_w0 - w2 * phi1 - phi2 * jump_w1;
                let pen = w0 * jump_w0 * phi0 + w1 * jump_w1 * phi1;
                b[el * k1 + i] += epsilon * a_terms + pen;
            }
        }
    }
    Ok(b)
}

/// Quadrature count for analytic integrands: two points beyond the linear
/// rule so the data integration error sits below the discretization error.
fn analytic_quadrature(k: usize) -> usize {
    (k + 4).min(MAX_POINTS)
}

/// Elliptic (auxiliary) projection: the discrete function with
/// `B(u - u~, chi) = 0` for all discrete `chi`, computed by solving
/// `B u~ = b` with `b` assembled from analytic traces and integrals of `u`.
///
/// Requires value and derivatives through order three. Fails if the
/// penalized operator is singular.
pub fn elliptic_projection(
    u: &AnalyticFunction,
    space: &DgSpace,
    penalty: &PenaltyParams,
    epsilon: f64,
) -> Result<DgVector> {
    let b = analytic_b_action(
        u,
        space,
        penalty,
        epsilon,
        analytic_quadrature(space.degree()),
        BoundaryJumps::FromTrace,
    )?;
    let b_form = assemble_b_form(space, penalty, epsilon)?;
    let lu = BandedLu::factor(&b_form)?;
    let coeffs = lu.solve(&b)?;
    DgVector::new(space.clone(), coeffs)
}

/// L2 projection: solves `M w = (u, phi_i)`. Needs only point values of `u`.
pub fn l2_projection(u: &AnalyticFunction, space: &DgSpace) -> Result<DgVector> {
    let k = space.degree();
    let k1 = space.n_local();
    let rule = gauss_rule(analytic_quadrature(k))?;
    let basis = eval_basis(k, rule.points())?;
    let mut rhs = vec![0.0; space.n_dofs()];
    for el in 0..space.n_elements() {
        let h = space.mesh().element_length(el);
        for (p, &wq) in rule.weights().iter().enumerate() {
            let x = space.mesh().to_physical(el, rule.points()[p]);
            let common = 0.5 * h * wq * u.eval(x);
            for i in 0..k1 {
                rhs[el * k1 + i] += common * basis.values()[i][p];
            }
        }
    }
    let mass = assemble_mass(space);
    let lu = BandedLu::factor(&mass)?;
    let coeffs = lu.solve(&rhs)?;
    DgVector::new(space.clone(), coeffs)
}

/// Residual vector `b - B u~` of a computed projection; used by the
/// Galerkin-orthogonality checks.
pub fn projection_residual(
    u: &AnalyticFunction,
    projected: &DgVector,
    penalty: &PenaltyParams,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let space = projected.space();
    let b = analytic_b_action(
        u,
        space,
        penalty,
        epsilon,
        analytic_quadrature(space.degree()),
        BoundaryJumps::FromTrace,
    )?;
    let b_form = assemble_b_form(space, penalty, epsilon)?;
    let bu = b_form.apply(projected.coeffs())?;
    Ok(b.iter().zip(&bu).map(|(x, y)| x - y).collect())
}
