//! Legendre modal basis on the reference element `[-1, 1]`.
//!
//! The local space on each element is spanned by the Legendre polynomials
//! `P_0 .. P_k` pulled back through the affine map
//! `x = x_n + (xi + 1) h_n / 2`. Tables carry reference-scale derivatives;
//! callers apply the chain-rule factor `(2/h_n)^order` for physical
//! derivatives.

use crate::error::{Error, Result};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 6;

/// Tabulated basis values and derivatives up to order three at a set of
/// reference points. Tables are mode-major: `values[j][p]` holds
/// `P_j(xi_p)`.
#[derive(Debug, Clone)]
pub struct BasisEval {
    degree: usize,
    values: Vec<Vec<f64>>,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    third: Vec<Vec<f64>>,
}

impl BasisEval {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of local modes, `k + 1`.
    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn first(&self) -> &[Vec<f64>] {
        &self.first
    }

    pub fn second(&self) -> &[Vec<f64>] {
        &self.second
    }

    pub fn third(&self) -> &[Vec<f64>] {
        &self.third
    }

    /// Table for the given derivative order (0..=3).
    pub fn table(&self, order: usize) -> &[Vec<f64>] {
        match order {
            0 => &self.values,
            1 => &self.first,
            2 => &self.second,
            3 => &self.third,
            _ => panic!("derivative order {order} not tabulated"),
        }
    }
}

/// Evaluates Legendre polynomials `P_0 .. P_k` and derivatives up to order
/// three at a single reference point. Returns `tab[d][j] = P_j^{(d)}(xi)`.
fn legendre_all(k: usize, xi: f64) -> [Vec<f64>; 4] {
    let n = k + 1;
    let mut tab = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    tab[0][0] = 1.0;
    if k == 0 {
        return tab;
    }
    tab[0][1] = xi;
    tab[1][1] = 1.0;
    for j in 1..k {
        let jf = j as f64;
        // Bonnet recurrence differentiated d times:
        // (j+1) P_{j+1}^{(d)} = (2j+1) (xi P_j^{(d)} + d P_j^{(d-1)}) - j P_{j-1}^{(d)}
        for d in 0..4 {
            let lower = if d == 0 { 0.0 } else { tab[d - 1][j] };
            tab[d][j + 1] = ((2.0 * jf + 1.0) * (xi * tab[d][j] + d as f64 * lower)
                - jf * tab[d][j - 1])
                / (jf + 1.0);
        }
    }
    tab
}

/// Tabulates the degree-`k` Legendre basis and derivatives up to order
/// three at the given reference points.
pub fn eval_basis(k: usize, points: &[f64]) -> Result<BasisEval> {
    if k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            requested: k,
            cap: MAX_DEGREE,
        });
    }
    for &p in points {
        if !(-1.0..=1.0).contains(&p) {
            return Err(Error::PointOutOfRange(p));
        }
    }
    let n = k + 1;
    let np = points.len();
    let mut values = vec![vec![0.0; np]; n];
    let mut first = vec![vec![0.0; np]; n];
    let mut second = vec![vec![0.0; np]; n];
    let mut third = vec![vec![0.0; np]; n];
    for (p, &xi) in points.iter().enumerate() {
        let tab = legendre_all(k, xi);
        for j in 0..n {
            values[j][p] = tab[0][j];
            first[j][p] = tab[1][j];
            second[j][p] = tab[2][j];
            third[j][p] = tab[3][j];
        }
    }
    Ok(BasisEval {
        degree: k,
        values,
        first,
        second,
        third,
    })
}

/// L2 norm of `P_j` on `[-1, 1]`: `sqrt(2 / (2j + 1))`.
pub fn reference_mode_norm(j: usize) -> f64 {
    (2.0 / (2.0 * j as f64 + 1.0)).sqrt()
}

/// Element endpoint selector for trace evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Reference point `-1`.
    Left,
    /// Reference point `+1`.
    Right,
}

impl Side {
    pub fn reference_point(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Per-mode endpoint traces of the basis and its derivatives, reference
/// scale (callers apply `(2/h)^order`).
#[derive(Debug, Clone)]
pub struct ElementTrace {
    pub values: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub third: Vec<f64>,
}

impl ElementTrace {
    pub fn table(&self, order: usize) -> &[f64] {
        match order {
            0 => &self.values,
            1 => &self.first,
            2 => &self.second,
            3 => &self.third,
            _ => panic!("derivative order {order} not tabulated"),
        }
    }
}

/// Traces of `P_j` and derivatives up to order three at an element endpoint.
pub fn element_trace(k: usize, side: Side) -> Result<ElementTrace> {
    if k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            requested: k,
            cap: MAX_DEGREE,
        });
    }
    let tab = legendre_all(k, side.reference_point());
    let [values, first, second, third] = tab;
    Ok(ElementTrace {
        values,
        first,
        second,
        third,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_mode() {
        let b = eval_basis(0, &[0.0]).unwrap();
        assert_eq!(b.values()[0], vec![1.0]);
        assert_eq!(b.first()[0], vec![0.0]);
        assert_eq!(b.second()[0], vec![0.0]);
        assert_eq!(b.third()[0], vec![0.0]);
    }

    #[test]
    fn linear_mode_antisymmetric() {
        let b = eval_basis(1, &[-1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(b.values()[1][0], -b.values()[1][1], epsilon = 1e-15);
        assert_abs_diff_eq!(b.values()[1][1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cubic_has_constant_third_derivative() {
        let pts: Vec<f64> = (0..10).map(|i| -0.97 + 0.21 * i as f64).collect();
        let b = eval_basis(3, &pts).unwrap();
        let c = b.third()[3][0];
        for &v in &b.third()[3] {
            assert_abs_diff_eq!(v, c, epsilon = 1e-12);
        }
        // P_3 = (5x^3 - 3x)/2 -> P_3''' = 15
        assert_abs_diff_eq!(c, 15.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let rule = gauss_rule(8).unwrap();
        let b = eval_basis(MAX_DEGREE, rule.points()).unwrap();
        for i in 0..=MAX_DEGREE {
            for j in 0..=MAX_DEGREE {
                let v: f64 = rule
                    .weights()
                    .iter()
                    .enumerate()
                    .map(|(p, &w)| w * b.values()[i][p] * b.values()[j][p])
                    .sum();
                let exact = if i == j {
                    2.0 / (2.0 * i as f64 + 1.0)
                } else {
                    0.0
                };
                assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let delta = 1e-5;
        let interior: Vec<f64> = (0..9).map(|i| -0.9 + 0.2 * i as f64).collect();
        for k in 0..=MAX_DEGREE {
            let b = eval_basis(k, &interior).unwrap();
            for (p, &xi) in interior.iter().enumerate() {
                let plus = eval_basis(k, &[xi + delta]).unwrap();
                let minus = eval_basis(k, &[xi - delta]).unwrap();
                for j in 0..=k {
                    let fd1 = (plus.values()[j][0] - minus.values()[j][0]) / (2.0 * delta);
                    assert_abs_diff_eq!(b.first()[j][p], fd1, epsilon = 1e-6);
                    let fd2 = (plus.first()[j][0] - minus.first()[j][0]) / (2.0 * delta);
                    assert_abs_diff_eq!(b.second()[j][p], fd2, epsilon = 1e-5);
                    let fd3 = (plus.second()[j][0] - minus.second()[j][0]) / (2.0 * delta);
                    assert_abs_diff_eq!(b.third()[j][p], fd3, epsilon = 1e-4);
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(eval_basis(2, &[1.0001]).is_err());
        assert!(eval_basis(MAX_DEGREE + 1, &[0.0]).is_err());
    }

    #[test]
    fn trace_parity() {
        let left = element_trace(2, Side::Left).unwrap();
        let right = element_trace(2, Side::Right).unwrap();
        // even modes equal, odd modes negated at opposite endpoints
        assert_abs_diff_eq!(left.values[0], right.values[0]);
        assert_abs_diff_eq!(left.values[1], -right.values[1]);
        assert_abs_diff_eq!(left.values[2], right.values[2]);
    }

    #[test]
    fn trace_third_derivative_constant_for_cubic() {
        let left = element_trace(3, Side::Left).unwrap();
        let right = element_trace(3, Side::Right).unwrap();
        assert_abs_diff_eq!(left.third[3], right.third[3], epsilon = 1e-12);
        assert_abs_diff_eq!(left.third[3], 15.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_constant_mode() {
        for side in [Side::Left, Side::Right] {
            let t = element_trace(0, side).unwrap();
            assert_eq!(t.values, vec![1.0]);
            assert_eq!(t.first, vec![0.0]);
            assert_eq!(t.second, vec![0.0]);
            assert_eq!(t.third, vec![0.0]);
        }
    }

    #[test]
    fn traces_match_eval_basis_at_endpoints() {
        for k in 0..=MAX_DEGREE {
            let b = eval_basis(k, &[-1.0, 1.0]).unwrap();
            let left = element_trace(k, Side::Left).unwrap();
            let right = element_trace(k, Side::Right).unwrap();
            for j in 0..=k {
                for (order, (l, r)) in [
                    (&left.values, &right.values),
                    (&left.first, &right.first),
                    (&left.second, &right.second),
                    (&left.third, &right.third),
                ]
                .iter()
                .enumerate()
                {
                    assert_abs_diff_eq!(l[j], b.table(order)[j][0]);
                    assert_abs_diff_eq!(r[j], b.table(order)[j][1]);
                }
            }
        }
    }
}
