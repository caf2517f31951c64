//! Banded LU factorization and the Newton iteration for the implicit step.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

/// Options for the Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Absolute residual 2-norm tolerance.
    pub abs_tol: f64,
    /// Tolerance relative to the initial residual.
    pub rel_tol: f64,
    pub max_iters: usize,
    /// Divergence is declared when the residual grows past
    /// `divergence_factor * initial`.
    pub divergence_factor: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_iters: 25,
            divergence_factor: 1e4,
        }
    }
}

/// Outcome of a Newton solve. When `converged` is true the final residual
/// satisfies `final_residual <= max(abs_tol, rel_tol * initial_residual)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub converged: bool,
}

/// LU factorization of a block-tridiagonal matrix in compact band storage
/// with partial pivoting confined to the band.
///
/// The scalar bandwidth of a block-tridiagonal matrix with block size `bs`
/// is `m = 2*bs - 1` on both sides; pivoting introduces fill only within an
/// extra `m` superdiagonals, which the compact storage accommodates.
#[derive(Debug)]
pub struct BandedLu {
    n: usize,
    /// lower bandwidth (= upper bandwidth before pivoting)
    m1: usize,
    /// upper bandwidth
    m2: usize,
    /// upper factor, row-compact: `upper[i][j]` holds column `i - m1 + j`
    upper: Vec<f64>,
    /// row width of `upper`
    mm: usize,
    /// multipliers of the elimination
    lower: Vec<f64>,
    /// pivot row chosen at each elimination step
    pivots: Vec<usize>,
}

impl BandedLu {
    /// Factors the matrix. Fails with the offending row index when a pivot
    /// is singular to working precision.
    pub fn factor(a: &BandedMatrix) -> Result<Self> {
        let n = a.n_global();
        let bs = a.block_size();
        let m1 = if a.n_elements() > 1 {
            2 * bs - 1
        } else {
            bs - 1
        };
        let m2 = m1;
        let mm = m1 + m2 + 1;
        let mut upper = vec![0.0; n * mm];
        let mut lower = vec![0.0; n * m1.max(1)];
        let mut pivots = vec![0usize; n];

        // compact band layout: upper[i*mm + (j - i + m1)] = A[i][j]
        for i in 0..n {
            let lo = i.saturating_sub(m1);
            let hi = (i + m2 + 1).min(n);
            for j in lo..hi {
                upper[i * mm + (j + m1 - i)] = a.get(i, j);
            }
        }
        // left-justify the top m1 rows
        for i in 0..m1.min(n) {
            let shift = m1 - i;
            for j in shift..mm {
                upper[i * mm + j - shift] = upper[i * mm + j];
            }
            for j in (mm - shift)..mm {
                upper[i * mm + j] = 0.0;
            }
        }

        let tol = a.max_abs() * f64::EPSILON * (n as f64);
        let mut l = m1;
        for k in 0..n {
            if l < n {
                l += 1;
            }
            // pivot search within the band
            let mut piv = k;
            let mut dum = upper[k * mm].abs();
            for i in (k + 1)..l {
                if upper[i * mm].abs() > dum {
                    dum = upper[i * mm].abs();
                    piv = i;
                }
            }
            pivots[k] = piv;
            if dum <= tol {
                return Err(Error::SingularMatrix { row: k });
            }
            if piv != k {
                for j in 0..mm {
                    upper.swap(k * mm + j, piv * mm + j);
                }
            }
            for i in (k + 1)..l {
                let f = upper[i * mm] / upper[k * mm];
                lower[k * m1.max(1) + (i - k - 1)] = f;
                for j in 1..mm {
                    upper[i * mm + j - 1] = upper[i * mm + j] - f * upper[k * mm + j];
                }
                upper[i * mm + mm - 1] = 0.0;
            }
        }
        Ok(Self {
            n,
            m1,
            m2,
            upper,
            mm,
            lower,
            pivots,
        })
    }

    /// Solves `A x = rhs` using the stored factorization.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        let (n, m1, mm) = (self.n, self.m1, self.mm);
        let mw = m1.max(1);
        let mut x = rhs.to_vec();
        // forward substitution with the recorded row interchanges
        let mut l = m1;
        for k in 0..n {
            if l < n {
                l += 1;
            }
            let piv = self.pivots[k];
            if piv != k {
                x.swap(k, piv);
            }
            for i in (k + 1)..l {
                x[i] -= self.lower[k * mw + (i - k - 1)] * x[k];
            }
        }
        // back substitution
        let mut used = 1;
        for i in (0..n).rev() {
            let mut sum = x[i];
            for j in 1..used {
                sum -= self.upper[i * mm + j] * x[i + j];
            }
            x[i] = sum / self.upper[i * mm];
            if used < mm {
                used += 1;
            }
        }
        Ok(x)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Upper bandwidth in scalar terms (before pivot fill).
    pub fn bandwidth(&self) -> usize {
        self.m2
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// Full (undamped) Newton iteration: solves `G(x) = 0` with Jacobian
/// callback `J`, starting from `x0`.
///
/// Errors: [`Error::NonConvergence`] after `max_iters`, [`Error::Divergence`]
/// when the residual grows past `divergence_factor * initial`, and any
/// singular-Jacobian failure from the banded factorization.
pub fn newton_solve<G, J>(
    mut residual: G,
    mut jacobian: J,
    x0: &[f64],
    opts: &NewtonOptions,
) -> Result<(Vec<f64>, SolveReport)>
where
    G: FnMut(&[f64]) -> Vec<f64>,
    J: FnMut(&[f64]) -> BandedMatrix,
{
    let mut x = x0.to_vec();
    let mut r = residual(&x);
    if r.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: r.len(),
        });
    }
    let initial = norm2(&r);
    let tol = opts.abs_tol.max(opts.rel_tol * initial);
    let mut rn = initial;
    let mut iterations = 0;
    loop {
        if !rn.is_finite() {
            return Err(Error::Divergence {
                residual: rn,
                initial,
                factor: opts.divergence_factor,
            });
        }
        if rn <= tol {
            return Ok((
                x,
                SolveReport {
                    iterations,
                    initial_residual: initial,
                    final_residual: rn,
                    converged: true,
                },
            ));
        }
        if rn > opts.divergence_factor * initial.max(opts.abs_tol) {
            return Err(Error::Divergence {
                residual: rn,
                initial,
                factor: opts.divergence_factor,
            });
        }
        if iterations >= opts.max_iters {
            return Err(Error::NonConvergence {
                iterations,
                residual: rn,
                tolerance: tol,
            });
        }
        let lu = BandedLu::factor(&jacobian(&x))?;
        let dx = lu.solve(&r)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi -= di;
        }
        iterations += 1;
        r = residual(&x);
        rn = norm2(&r);
    }
}
