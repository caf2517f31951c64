//! Block-tridiagonal matrix storage.
//!
//! All operators assembled by this crate (mass matrix, penalized bilinear
//! form, flux Jacobians) couple only coefficients of identical or adjacent
//! elements, so each is stored as one diagonal block per element plus
//! sub/super blocks between neighbors.

use crate::error::{Error, Result};

/// Block-tridiagonal matrix with square blocks of size `block` (the local
/// mode count `k + 1`). Entry `(i, j)` is implicitly zero whenever the
/// owning elements of `i` and `j` are neither identical nor adjacent.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n_elements: usize,
    block: usize,
    /// `diag[n]` couples element `n` with itself.
    diag: Vec<f64>,
    /// `sub[n - 1]` couples rows of element `n` with columns of `n - 1`.
    sub: Vec<f64>,
    /// `sup[n]` couples rows of element `n` with columns of `n + 1`.
    sup: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n_elements: usize, block: usize) -> Self {
        let b2 = block * block;
        let off = n_elements.saturating_sub(1) * b2;
        Self {
            n_elements,
            block,
            diag: vec![0.0; n_elements * b2],
            sub: vec![0.0; off],
            sup: vec![0.0; off],
        }
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    /// Global matrix dimension `N * (k + 1)`.
    pub fn n_global(&self) -> usize {
        self.n_elements * self.block
    }

    fn block_slice(&self, row_el: usize, col_el: usize) -> Option<&[f64]> {
        let b2 = self.block * self.block;
        if row_el == col_el {
            Some(&self.diag[row_el * b2..(row_el + 1) * b2])
        } else if col_el + 1 == row_el {
            Some(&self.sub[(row_el - 1) * b2..row_el * b2])
        } else if row_el + 1 == col_el {
            Some(&self.sup[row_el * b2..(row_el + 1) * b2])
        } else {
            None
        }
    }

    fn block_slice_mut(&mut self, row_el: usize, col_el: usize) -> Option<&mut [f64]> {
        let b2 = self.block * self.block;
        if row_el == col_el {
            Some(&mut self.diag[row_el * b2..(row_el + 1) * b2])
        } else if col_el + 1 == row_el {
            Some(&mut self.sub[(row_el - 1) * b2..row_el * b2])
        } else if row_el + 1 == col_el {
            Some(&mut self.sup[row_el * b2..(row_el + 1) * b2])
        } else {
            None
        }
    }

    /// Entry by global indices; zero outside the block-tridiagonal band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (ri, li) = (i / self.block, i % self.block);
        let (rj, lj) = (j / self.block, j % self.block);
        match self.block_slice(ri, rj) {
            Some(blk) => blk[li * self.block + lj],
            None => 0.0,
        }
    }

    /// Adds `value` at global indices; panics outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (ri, li) = (i / self.block, i % self.block);
        let (rj, lj) = (j / self.block, j % self.block);
        let block = self.block;
        let blk = self
            .block_slice_mut(ri, rj)
            .expect("entry outside the block-tridiagonal band");
        blk[li * block + lj] += value;
    }

    /// Adds `factor * value` into the diagonal block of element `n` at local
    /// indices `(li, lj)`.
    pub fn add_local(&mut self, n: usize, li: usize, lj: usize, value: f64) {
        let b2 = self.block * self.block;
        self.diag[n * b2 + li * self.block + lj] += value;
    }

    /// `self += factor * other`; shapes must match.
    pub fn add_scaled(&mut self, other: &BandedMatrix, factor: f64) -> Result<()> {
        if self.n_elements != other.n_elements || self.block != other.block {
            return Err(Error::DimensionMismatch {
                expected: self.n_global(),
                got: other.n_global(),
            });
        }
        for (a, b) in self.diag.iter_mut().zip(&other.diag) {
            *a += factor * b;
        }
        for (a, b) in self.sub.iter_mut().zip(&other.sub) {
            *a += factor * b;
        }
        for (a, b) in self.sup.iter_mut().zip(&other.sup) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Returns `self + other`.
    pub fn plus(&self, other: &BandedMatrix) -> Result<BandedMatrix> {
        let mut out = self.clone();
        out.add_scaled(other, 1.0)?;
        Ok(out)
    }

    /// Matrix-vector product `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.n_global();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let b = self.block;
        let b2 = b * b;
        let mut y = vec![0.0; n];
        let mul_block = |blk: &[f64], xs: &[f64], ys: &mut [f64]| {
            for li in 0..b {
                let mut acc = 0.0;
                for lj in 0..b {
                    acc += blk[li * b + lj] * xs[lj];
                }
                ys[li] += acc;
            }
        };
        for el in 0..self.n_elements {
            let row0 = el * b;
            mul_block(
                &self.diag[el * b2..(el + 1) * b2],
                &x[row0..row0 + b],
                &mut y[row0..row0 + b],
            );
            if el > 0 {
                mul_block(
                    &self.sub[(el - 1) * b2..el * b2],
                    &x[row0 - b..row0],
                    &mut y[row0..row0 + b],
                );
            }
            if el + 1 < self.n_elements {
                mul_block(
                    &self.sup[el * b2..(el + 1) * b2],
                    &x[row0 + b..row0 + 2 * b],
                    &mut y[row0..row0 + b],
                );
            }
        }
        Ok(y)
    }

    /// Bilinear value `u . (A v)`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let av = self.apply(v)?;
        if u.len() != av.len() {
            return Err(Error::DimensionMismatch {
                expected: av.len(),
                got: u.len(),
            });
        }
        Ok(u.iter().zip(&av).map(|(&a, &b)| a * b).sum())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    /// Largest absolute asymmetry `|A_ij - A_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let b = self.block;
        let b2 = b * b;
        let mut worst = 0.0_f64;
        for el in 0..self.n_elements {
            let blk = &self.diag[el * b2..(el + 1) * b2];
            for i in 0..b {
                for j in (i + 1)..b {
                    worst = worst.max((blk[i * b + j] - blk[j * b + i]).abs());
                }
            }
        }
        for iface in 0..self.n_elements.saturating_sub(1) {
            let lower = &self.sub[iface * b2..(iface + 1) * b2];
            let upper = &self.sup[iface * b2..(iface + 1) * b2];
            for i in 0..b {
                for j in 0..b {
                    worst = worst.max((lower[i * b + j] - upper[j * b + i]).abs());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample() -> BandedMatrix {
        // 3 elements, block 2; fill with distinct entries
        let mut m = BandedMatrix::zeros(3, 2);
        let mut v = 1.0;
        for el in 0..3 {
            for i in 0..2 {
                for j in 0..2 {
                    m.add(el * 2 + i, el * 2 + j, v);
                    v += 1.0;
                }
            }
        }
        for el in 1..3 {
            for i in 0..2 {
                for j in 0..2 {
                    m.add(el * 2 + i, (el - 1) * 2 + j, v);
                    v += 1.0;
                    m.add((el - 1) * 2 + i, el * 2 + j, v);
                    v += 1.0;
                }
            }
        }
        m
    }

    #[test]
    fn get_outside_band_is_zero() {
        let m = sample();
        assert_eq!(m.get(0, 4), 0.0);
        assert_eq!(m.get(5, 0), 0.0);
        assert!(m.get(0, 2) != 0.0);
    }

    #[test]
    fn apply_matches_dense_multiplication() {
        let m = sample();
        let n = m.n_global();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let y = m.apply(&x).unwrap();
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += m.get(i, j) * x[j];
            }
            assert_abs_diff_eq!(y[i], acc, epsilon = 1e-12);
        }
    }

    #[test]
    fn apply_zero_gives_zero() {
        let m = sample();
        let y = m.apply(&[0.0; 6]).unwrap();
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let m = sample();
        assert!(m.apply(&[1.0, 2.0]).is_err());
        assert!(m.bilinear(&[1.0; 6], &[1.0; 5]).is_err());
    }

    #[test]
    fn add_scaled_combines() {
        let a = sample();
        let mut b = BandedMatrix::zeros(3, 2);
        b.add_scaled(&a, 2.0).unwrap();
        assert_abs_diff_eq!(b.get(2, 3), 2.0 * a.get(2, 3));
        assert!(b.add_scaled(&BandedMatrix::zeros(2, 2), 1.0).is_err());
    }

    #[test]
    fn symmetry_defect_detects_asymmetry() {
        let mut m = BandedMatrix::zeros(2, 2);
        m.add(0, 1, 3.0);
        m.add(1, 0, 3.0);
        assert_eq!(m.symmetry_defect(), 0.0);
        m.add(0, 2, 1.0);
        assert_abs_diff_eq!(m.symmetry_defect(), 1.0);
    }
}
