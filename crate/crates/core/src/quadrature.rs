//! Gauss-Legendre quadrature on the reference element `[-1, 1]`.

use crate::error::{Error, Result};

/// Largest supported point count.
pub const MAX_POINTS: usize = 20;

/// A quadrature rule on `[-1, 1]`: `int f ≈ sum_i w_i f(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f` over `[-1, 1]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Integrates `f` over the physical interval `[x0, x0 + h]`.
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, x0: f64, h: f64, mut f: F) -> f64 {
        0.5 * h
            * self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(&xi, &w)| w * f(x0 + 0.5 * (xi + 1.0) * h))
                .sum::<f64>()
    }
}

/// Legendre polynomial `P_q` and its derivative at `x`, by the three-term
/// recurrence.
fn legendre_and_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for j in 1..q {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // derivative from P_q and P_{q-1}
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Returns the `q`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Exact for polynomials of degree up to `2q - 1`. The point count is capped
/// at [`MAX_POINTS`].
pub fn gauss_rule(q: usize) -> Result<QuadratureRule> {
    if q == 0 || q > MAX_POINTS {
        return Err(Error::InvalidQuadrature {
            requested: q,
            cap: MAX_POINTS,
        });
    }
    let mut points = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let m = q.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess, refined by Newton on P_q
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_and_derivative(q, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        points[i] = -x;
        points[q - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        points[q / 2] = 0.0;
    }
    Ok(QuadratureRule { points, weights })
}
