//! Assembly of the mass matrix and the penalized bilinear form
//!
//! ```text
//! B(u, v) = eps * A(u, v) + J_sigma0(u, v) + J_sigma1(u, v),
//!
//! A(u, v) = sum_n int u_xx v_xx dx
//!         + sum_m ( {u_xxx}[v] + {v_xxx}[u] - {u_xx}[v_x] - {v_xx}[u_x] )
//!
//! J_sigma0 = sum_m sigma0 / h^beta * [u][v]
//! J_sigma1 = sum_m sigma1 / h     * [u_x][v_x]
//! ```
//!
//! with node sums over all mesh nodes `m = 0..=N`. Jumps and averages follow
//! `[v(x_n)] = v(x_n^-) - v(x_n^+)`, `{v(x_n)} = (v(x_n^-) + v(x_n^+)) / 2`
//! at interior nodes and the one-sided conventions `[v(x_0)] = -v(x_0)`,
//! `[v(x_N)] = v(x_N)`, `{v(x_0)} = v(x_0)`, `{v(x_N)} = v(x_N)` at the
//! boundary. The weak clamped boundary conditions are carried entirely by
//! these boundary jump terms; no rows are eliminated.
//!
//! Only `A` is scaled by the dispersive coefficient `eps`; the penalty terms
//! are consistency terms and keep the same strength for every equation
//! variant.

use crate::banded::BandedMatrix;
use crate::basis::{eval_basis, Side};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_rule, MAX_POINTS};
use crate::space::{DgSpace, DgVector};

/// Interior-penalty parameters `sigma0`, `sigma1` and the mesh exponent
/// `beta` of the value-jump weight `sigma0 / h^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    sigma0: f64,
    sigma1: f64,
    beta: f64,
}

impl PenaltyParams {
    /// Requires `sigma0, sigma1 > 0` and `beta >= 3` (the optimal-order
    /// condition of the error analysis).
    pub fn new(sigma0: f64, sigma1: f64, beta: f64) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be positive, got {sigma0}"
            )));
        }
        if !(sigma1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma1 must be positive, got {sigma1}"
            )));
        }
        if !(beta >= 3.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be >= 3, got {beta}"
            )));
        }
        Ok(Self {
            sigma0,
            sigma1,
            beta,
        })
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Value-jump weight `sigma0 / h^beta` at a node with length scale `h`.
    pub fn weight0(&self, h: f64) -> f64 {
        self.sigma0 / h.powf(self.beta)
    }

    /// Slope-jump weight `sigma1 / h`.
    pub fn weight1(&self, h: f64) -> f64 {
        self.sigma1 / h
    }
}

/// Quadrature point count for bilinear (polynomial) integrands of the
/// degree-`k` space.
pub fn linear_quadrature_points(k: usize) -> usize {
    (k + 2).min(MAX_POINTS)
}

/// Jump `[v^(d)]` of a discrete function at mesh node `n`, `d` in `{0, 1}`.
pub fn jump_at_node(v: &DgVector, n: usize, d: usize) -> Result<f64> {
    if d > 1 {
        return Err(Error::InvalidDerivativeOrder {
            order: d,
            context: "jump (only values and slopes are penalized)",
        });
    }
    let n_el = v.space().n_elements();
    if n > n_el {
        return Err(Error::NodeOutOfRange {
            index: n,
            max: n_el,
        });
    }
    let minus = if n >= 1 {
        Some(v.element_trace_value(n - 1, Side::Right, d))
    } else {
        None
    };
    let plus = if n < n_el {
        Some(v.element_trace_value(n, Side::Left, d))
    } else {
        None
    };
    Ok(match (minus, plus) {
        (Some(m), Some(p)) => m - p,
        (None, Some(p)) => -p,
        (Some(m), None) => m,
        (None, None) => unreachable!("mesh has at least one element"),
    })
}

/// Average `{v^(d)}` of a discrete function at mesh node `n`, `d` in
/// `{2, 3}` (the orders entering `A`).
pub fn average_at_node(v: &DgVector, n: usize, d: usize) -> Result<f64> {
    if !(d == 2 || d == 3) {
        return Err(Error::InvalidDerivativeOrder {
            order: d,
            context: "average (only second and third derivatives enter A)",
        });
    }
    let n_el = v.space().n_elements();
    if n > n_el {
        return Err(Error::NodeOutOfRange {
            index: n,
            max: n_el,
        });
    }
    let minus = if n >= 1 {
        Some(v.element_trace_value(n - 1, Side::Right, d))
    } else {
        None
    };
    let plus = if n < n_el {
        Some(v.element_trace_value(n, Side::Left, d))
    } else {
        None
    };
    Ok(match (minus, plus) {
        (Some(m), Some(p)) => 0.5 * (m + p),
        (None, Some(p)) => p,
        (Some(m), None) => m,
        (None, None) => unreachable!(),
    })
}

/// Assembles the block-diagonal mass matrix `M_ij = int phi_j phi_i`.
pub fn assemble_mass(space: &DgSpace) -> BandedMatrix {
    let k = space.degree();
    let k1 = space.n_local();
    let rule = gauss_rule(linear_quadrature_points(k)).expect("within cap");
    let basis = eval_basis(k, rule.points()).expect("within cap");
    let mut m = BandedMatrix::zeros(space.n_elements(), k1);
    for el in 0..space.n_elements() {
        let h = space.mesh().element_length(el);
        for i in 0..k1 {
            for j in 0..k1 {
                let mut acc = 0.0;
                for (p, &w) in rule.weights().iter().enumerate() {
                    acc += w * basis.values()[i][p] * basis.values()[j][p];
                }
                m.add_local(el, i, j, 0.5 * h * acc);
            }
        }
    }
    m
}

/// One side of a mesh node during assembly: the owning element, its trace
/// tables, and the jump/average weights of the node conventions.
struct NodeSide<'a> {
    element: usize,
    jump_w: f64,
    avg_w: f64,
    /// physical-derivative scale factors `(2/h)^d`, d = 0..=3
    scale: [f64; 4],
    trace: &'a crate::basis::ElementTrace,
}

impl NodeSide<'_> {
    fn trace_value(&self, d: usize, mode: usize) -> f64 {
        self.scale[d] * self.trace.table(d)[mode]
    }
}

fn node_sides<'a>(space: &'a DgSpace, node: usize) -> Vec<NodeSide<'a>> {
    let n_el = space.n_elements();
    let interior = node >= 1 && node < n_el;
    let mut sides = Vec::with_capacity(2);
    let scales = |el: usize| {
        let s = 2.0 / space.mesh().element_length(el);
        [1.0, s, s * s, s * s * s]
    };
    if node >= 1 {
        // minus side: right endpoint of element node-1
        sides.push(NodeSide {
            element: node - 1,
            jump_w: 1.0,
            avg_w: if interior { 0.5 } else { 1.0 },
            scale: scales(node - 1),
            trace: space.trace(Side::Right),
        });
    }
    if node < n_el {
        // plus side: left endpoint of element node
        sides.push(NodeSide {
            element: node,
            jump_w: -1.0,
            avg_w: if interior { 0.5 } else { 1.0 },
            scale: scales(node),
            trace: space.trace(Side::Left),
        });
    }
    sides
}

/// Applies an assembled operator to a discrete function.
pub fn apply_b(matrix: &BandedMatrix, v: &DgVector) -> Result<DgVector> {
    let coeffs = matrix.apply(v.coeffs())?;
    DgVector::new(v.space().clone(), coeffs)
}

/// Bilinear value `u . (B v)`; symmetric in its arguments for the operators
/// assembled here.
pub fn bilinear_value(matrix: &BandedMatrix, u: &DgVector, v: &DgVector) -> Result<f64> {
    matrix.bilinear(u.coeffs(), v.coeffs())
}

/// Assembles the penalty part `J_sigma0 + J_sigma1` alone (used by energy
/// cross-checks).
pub fn assemble_penalty(space: &DgSpace, penalty: &PenaltyParams) -> BandedMatrix {
    let k1 = space.n_local();
    let mut b = BandedMatrix::zeros(space.n_elements(), k1);
    for node in 0..=space.n_elements() {
        let sides = node_sides(space, node);
        let h = space.mesh().node_h(node);
        let w0 = penalty.weight0(h);
        let w1 = penalty.weight1(h);
        for su in &sides {
            for sv in &sides {
                let col0 = su.element * k1;
                let row0 = sv.element * k1;
                for i in 0..k1 {
                    for j in 0..k1 {
                        let pen = w0
                            * (su.jump_w * su.trace_value(0, j))
                            * (sv.jump_w * sv.trace_value(0, i))
                            + w1 * (su.jump_w * su.trace_value(1, j))
                                * (sv.jump_w * sv.trace_value(1, i));
                        b.add(row0 + i, col0 + j, pen);
                    }
                }
            }
        }
    }
    b
}

/// Assembles `B = eps*A + J_sigma0 + J_sigma1`. The result is symmetric and
/// block-tridiagonal; `eps` is the coefficient of `u_xxxxt` and must be
/// positive.
pub fn assemble_b_form(
    space: &DgSpace,
    penalty: &PenaltyParams,
    epsilon: f64,
) -> Result<BandedMatrix> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let k = space.degree();
    let k1 = space.n_local();
    let rule = gauss_rule(linear_quadrature_points(k)).expect("within cap");
    let basis = eval_basis(k, rule.points()).expect("within cap");
    let mut b = BandedMatrix::zeros(space.n_elements(), k1);

    // volume term: eps * int u_xx v_xx per element
    for el in 0..space.n_elements() {
        let h = space.mesh().element_length(el);
        let scale2 = (2.0 / h).powi(2);
        let factor = epsilon * 0.5 * h * scale2 * scale2;
        for i in 0..k1 {
            for j in 0..k1 {
                let mut acc = 0.0;
                for (p, &w) in rule.weights().iter().enumerate() {
                    acc += w * basis.second()[i][p] * basis.second()[j][p];
                }
                b.add_local(el, i, j, factor * acc);
            }
        }
    }

    // node terms: trace couplings and penalties
    for node in 0..=space.n_elements() {
        let sides = node_sides(space, node);
        let h = space.mesh().node_h(node);
        let w0 = penalty.weight0(h);
        let w1 = penalty.weight1(h);
        for su in &sides {
            for sv in &sides {
                let col0 = su.element * k1;
                let row0 = sv.element * k1;
                for i in 0..k1 {
                    for j in 0..k1 {
                        // A-part: {u_xxx}[v] + {v_xxx}[u] - {u_xx}[v_x] - {v_xx}[u_x]
                        let a = su.avg_w * su.trace_value(3, j) * sv.jump_w * sv.trace_value(0, i)
                            + sv.avg_w * sv.trace_value(3, i) * su.jump_w * su.trace_value(0, j)
                            - su.avg_w * su.trace_value(2, j) * sv.jump_w * sv.trace_value(1, i)
                            - sv.avg_w * sv.trace_value(2, i) * su.jump_w * su.trace_value(1, j);
                        let pen = w0
                            * (su.jump_w * su.trace_value(0, j))
                            * (sv.jump_w * sv.trace_value(0, i))
                            + w1 * (su.jump_w * su.trace_value(1, j))
                                * (sv.jump_w * sv.trace_value(1, i));
                        b.add(row0 + i, col0 + j, epsilon * a + pen);
                    }
                }
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_uniform_mesh;
    use crate::solver::BandedLu;
    use approx::assert_abs_diff_eq;

    fn space(a: f64, b: f64, n: usize, k: usize) -> DgSpace {
        DgSpace::new(build_uniform_mesh(a, b, n).unwrap(), k).unwrap()
    }

    /// Continuous interpolant at k+1 equispaced reference points including
    /// both endpoints, so that interior jumps vanish exactly.
    fn continuous_interpolant(space: &DgSpace, f: impl Fn(f64) -> f64) -> DgVector {
        let k = space.degree();
        let k1 = k + 1;
        assert!(k >= 1, "interpolation needs endpoint nodes");
        let pts: Vec<f64> = (0..k1).map(|i| -1.0 + 2.0 * i as f64 / k as f64).collect();
        let basis = eval_basis(k, &pts).unwrap();
        let mut v = space.zero_vector();
        for el in 0..space.n_elements() {
            // solve the local Vandermonde system sum_j c_j P_j(xi_p) = f(x(xi_p))
            let mut vand = BandedMatrix::zeros(1, k1);
            for p in 0..k1 {
                for j in 0..k1 {
                    vand.add(p, j, basis.values()[j][p]);
                }
            }
            let rhs: Vec<f64> = pts
                .iter()
                .map(|&xi| f(space.mesh().to_physical(el, xi)))
                .collect();
            let lu = BandedLu::factor(&vand).unwrap();
            let c = lu.solve(&rhs).unwrap();
            v.coeffs_mut()[el * k1..(el + 1) * k1].copy_from_slice(&c);
        }
        v
    }

    #[test]
    fn penalty_params_validation() {
        assert!(PenaltyParams::new(2000.0, 2000.0, 3.0).is_ok());
        assert!(PenaltyParams::new(0.0, 1.0, 3.0).is_err());
        assert!(PenaltyParams::new(1.0, -1.0, 3.0).is_err());
        assert!(PenaltyParams::new(1.0, 1.0, 2.9).is_err());
    }

    #[test]
    fn jump_of_continuous_interpolant_vanishes() {
        let space = space(-2.0, 2.0, 7, 3);
        let v = continuous_interpolant(&space, |x| x.sin());
        for n in 1..7 {
            assert_abs_diff_eq!(jump_at_node(&v, n, 0).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn boundary_jump_conventions_for_constant_one() {
        let space = space(0.0, 1.0, 4, 2);
        let mut v = space.zero_vector();
        for el in 0..4 {
            v.coeffs_mut()[el * 3] = 1.0;
        }
        assert_abs_diff_eq!(jump_at_node(&v, 0, 0).unwrap(), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jump_at_node(&v, 4, 0).unwrap(), 1.0, epsilon = 1e-14);
        for n in 1..4 {
            assert_abs_diff_eq!(jump_at_node(&v, n, 0).unwrap(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn jump_rejects_bad_orders_and_nodes() {
        let space = space(0.0, 1.0, 2, 1);
        let v = space.zero_vector();
        assert!(jump_at_node(&v, 0, 2).is_err());
        assert!(jump_at_node(&v, 3, 0).is_err());
        assert!(average_at_node(&v, 0, 0).is_err());
        assert!(average_at_node(&v, 0, 1).is_err());
        assert!(average_at_node(&v, 3, 2).is_err());
    }

    #[test]
    fn average_of_cubic_third_derivative() {
        // u = x^3 has u''' = 6 everywhere
        let space = space(-1.0, 1.0, 4, 3);
        let v = continuous_interpolant(&space, |x| x * x * x);
        for n in 0..=4 {
            assert_abs_diff_eq!(average_at_node(&v, n, 3).unwrap(), 6.0, epsilon = 1e-10);
        }
        let w = continuous_interpolant(&space, |x| x * x);
        for n in 0..=4 {
            assert_abs_diff_eq!(average_at_node(&w, n, 2).unwrap(), 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn average_is_arithmetic_mean_of_traces() {
        // piecewise: u'' = 1 on the left element, u'' = 3 on the right
        let space = space(0.0, 2.0, 2, 2);
        let mut v = space.zero_vector();
        // P_2(xi) = (3 xi^2 - 1)/2 has second reference derivative 3; physical
        // u'' = (2/h)^2 * 3 * c2, h = 1 -> u'' = 12 c2
        v.coeffs_mut()[2] = 1.0 / 12.0;
        v.coeffs_mut()[5] = 3.0 / 12.0;
        assert_abs_diff_eq!(average_at_node(&v, 1, 2).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn mass_matrix_k0_single_element() {
        let space = space(0.0, 0.7, 1, 0);
        let m = assemble_mass(&space);
        assert_abs_diff_eq!(m.get(0, 0), 0.7, epsilon = 1e-15);
    }

    #[test]
    fn mass_matrix_matches_legendre_norms() {
        // int P_j^2 over an element = (h/2) * 2/(2j+1)
        let space = space(-3.0, 5.0, 5, 4);
        let m = assemble_mass(&space);
        let h = 8.0 / 5.0;
        for el in 0..5 {
            for i in 0..5 {
                for j in 0..5 {
                    let exact = if i == j {
                        0.5 * h * 2.0 / (2.0 * i as f64 + 1.0)
                    } else {
                        0.0
                    };
                    assert_abs_diff_eq!(m.get(el * 5 + i, el * 5 + j), exact, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn b_form_is_symmetric() {
        let space = space(-10.0, 10.0, 9, 3);
        let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
        let b = assemble_b_form(&space, &penalty, 0.5).unwrap();
        assert!(b.symmetry_defect() <= 1e-12 * b.max_abs());
    }

    #[test]
    fn b_form_rejects_nonpositive_epsilon() {
        let space = space(0.0, 1.0, 2, 1);
        let penalty = PenaltyParams::new(1.0, 1.0, 3.0).unwrap();
        assert!(assemble_b_form(&space, &penalty, 0.0).is_err());
        assert!(assemble_b_form(&space, &penalty, -1.0).is_err());
    }

    #[test]
    fn clamped_polynomial_reduces_to_volume_term() {
        // v = x^2 (1-x)^2 on (0,1): v = v' = 0 at both ends, degree 4
        let space = space(0.0, 1.0, 6, 4);
        let poly = |x: f64| x * x * (1.0 - x) * (1.0 - x);
        let v = continuous_interpolant(&space, poly);
        let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
        for eps in [1.0, 0.5] {
            let b = assemble_b_form(&space, &penalty, eps).unwrap();
            let bvv = b.bilinear(v.coeffs(), v.coeffs()).unwrap();
            // v'' = 2 - 12x + 12x^2; int_0^1 (v'')^2 dx = 4/5
            let exact = eps * 0.8;
            assert_abs_diff_eq!(bvv, exact, epsilon = 1e-10 * exact.abs());
        }
    }

    #[test]
    fn mass_bilinear_is_l2_norm_squared() {
        let space = space(0.0, 1.0, 3, 2);
        let v = continuous_interpolant(&space, |x| 1.0 + x);
        let m = assemble_mass(&space);
        // int_0^1 (1+x)^2 dx = 7/3
        assert_abs_diff_eq!(
            bilinear_value(&m, &v, &v).unwrap(),
            7.0 / 3.0,
            epsilon = 1e-12
        );
        let zero = space.zero_vector();
        let mz = apply_b(&m, &zero).unwrap();
        assert!(mz.coeffs().iter().all(|&c| c == 0.0));
    }

    proptest::proptest! {
        #[test]
        fn b_form_symmetric_for_any_shape(
            n in 1usize..8,
            k in 0usize..=4,
            sigma0 in 1.0f64..1e5,
            sigma1 in 1.0f64..1e4,
            beta in 3.0f64..5.0,
            eps in 0.01f64..2.0,
        ) {
            let space = space(-1.0, 2.0, n, k);
            let penalty = PenaltyParams::new(sigma0, sigma1, beta).unwrap();
            let b = assemble_b_form(&space, &penalty, eps).unwrap();
            proptest::prop_assert!(b.symmetry_defect() <= 1e-12 * b.max_abs().max(1.0));
        }
    }
}
