//! Dense, brute-force reference implementations for test cross-checks.
//!
//! Everything here deliberately avoids the banded storage and assembly loops
//! of `rosenau-core`: matrices are dense `Vec<Vec<f64>>`, assembly is a
//! naive double loop over global basis-function pairs, and the linear solver
//! is textbook dense LU. These paths are slow and only suitable for the
//! small systems used in tests.

use rosenau_core::basis::{eval_basis, Side};
use rosenau_core::operator::PenaltyParams;
use rosenau_core::quadrature::gauss_rule;
use rosenau_core::space::DgSpace;
use rosenau_core::BandedMatrix;

/// Dense square matrix as nested rows.
pub type Dense = Vec<Vec<f64>>;

/// Expands a banded matrix entrywise.
pub fn dense_from_banded(m: &BandedMatrix) -> Dense {
    let n = m.n_global();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Solves `A x = b` by dense LU with partial pivoting. Panics on singular
/// input (tests construct nonsingular systems).
pub fn dense_solve(a: &Dense, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut lu: Dense = a.clone();
    let mut x: Vec<f64> = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| lu[i][col].abs().partial_cmp(&lu[j][col].abs()).unwrap())
            .unwrap();
        assert!(lu[piv][col].abs() > 0.0, "dense_solve: singular matrix");
        lu.swap(col, piv);
        perm.swap(col, piv);
        x.swap(col, piv);
        for row in (col + 1)..n {
            let f = lu[row][col] / lu[col][col];
            lu[row][col] = f;
            for j in (col + 1)..n {
                let v = lu[col][j];
                lu[row][j] -= f * v;
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..n).rev() {
        for j in (row + 1)..n {
            let v = x[j];
            x[row] -= lu[row][j] * v;
        }
        x[row] /= lu[row][row];
    }
    x
}

/// Jump weight of the global basis function `g` at mesh node `m`, following
/// the conventions `[v(x_n)] = v(x_n^-) - v(x_n^+)`, `[v(x_0)] = -v(x_0)`,
/// `[v(x_N)] = v(x_N)`. Returns the jump of the `order`-th derivative.
fn basis_jump(space: &DgSpace, g: usize, m: usize, order: usize) -> f64 {
    let k1 = space.n_local();
    let (el, mode) = (g / k1, g % k1);
    let n_nodes = space.n_elements();
    let mut jump = 0.0;
    // trace from the left element (side -)
    if m >= 1 && el == m - 1 {
        let scale = (2.0 / space.mesh().element_length(el)).powi(order as i32);
        jump += scale * space.trace(Side::Right).table(order)[mode];
    }
    // trace from the right element (side +)
    if m <= n_nodes - 1 && el == m {
        let scale = (2.0 / space.mesh().element_length(el)).powi(order as i32);
        jump -= scale * space.trace(Side::Left).table(order)[mode];
    }
    jump
}

/// Average weight of the global basis function `g` at mesh node `m`:
/// `{v} = (v^- + v^+)/2` inside, the one-sided trace at the boundary.
fn basis_average(space: &DgSpace, g: usize, m: usize, order: usize) -> f64 {
    let k1 = space.n_local();
    let (el, mode) = (g / k1, g % k1);
    let n_nodes = space.n_elements();
    let interior = m >= 1 && m <= n_nodes - 1;
    let w = if interior { 0.5 } else { 1.0 };
    let mut avg = 0.0;
    if m >= 1 && el == m - 1 {
        let scale = (2.0 / space.mesh().element_length(el)).powi(order as i32);
        avg += w * scale * space.trace(Side::Right).table(order)[mode];
    }
    if m <= n_nodes - 1 && el == m {
        let scale = (2.0 / space.mesh().element_length(el)).powi(order as i32);
        avg += w * scale * space.trace(Side::Left).table(order)[mode];
    }
    avg
}

/// Second-derivative volume integral `sum_n int phi_g'' phi_f'' dx` for a
/// pair of global basis functions.
fn volume_second(space: &DgSpace, g: usize, f: usize, q: usize) -> f64 {
    let k1 = space.n_local();
    let (el_g, mode_g) = (g / k1, g % k1);
    let (el_f, mode_f) = (f / k1, f % k1);
    if el_g != el_f {
        return 0.0;
    }
    let rule = gauss_rule(q).unwrap();
    let basis = eval_basis(space.degree(), rule.points()).unwrap();
    let h = space.mesh().element_length(el_g);
    let scale = (2.0 / h).powi(2);
    let mut acc = 0.0;
    for (p, &w) in rule.weights().iter().enumerate() {
        acc += w * basis.second()[mode_g][p] * basis.second()[mode_f][p];
    }
    0.5 * h * scale * scale * acc
}

/// Naive dense assembly of `B = eps*A + J_sigma0 + J_sigma1`, evaluating the
/// bilinear form entry by entry for every global basis pair.
pub fn dense_b_form(space: &DgSpace, penalty: &PenaltyParams, epsilon: f64, q: usize) -> Dense {
    let n = space.n_dofs();
    let n_nodes = space.n_elements();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            // A(u, v) with u = phi_j (trial), v = phi_i (test)
            let mut a = volume_second(space, j, i, q);
            for m in 0..=n_nodes {
                let ju0 = basis_jump(space, j, m, 0);
                let jv0 = basis_jump(space, i, m, 0);
                let ju1 = basis_jump(space, j, m, 1);
                let jv1 = basis_jump(space, i, m, 1);
                let au2 = basis_average(space, j, m, 2);
                let av2 = basis_average(space, i, m, 2);
                let au3 = basis_average(space, j, m, 3);
                let av3 = basis_average(space, i, m, 3);
                a += au3 * jv0 + av3 * ju0 - au2 * jv1 - av2 * ju1;
            }
            let mut b = epsilon * a;
            for m in 0..=n_nodes {
                let h = space.mesh().node_h(m);
                b += penalty.sigma0() / h.powf(penalty.beta())
                    * basis_jump(space, j, m, 0)
                    * basis_jump(space, i, m, 0);
                b += penalty.sigma1() / h * basis_jump(space, j, m, 1) * basis_jump(space, i, m, 1);
            }
            out[i][j] = b;
        }
    }
    out
}

/// Naive dense mass matrix `M_ij = int phi_j phi_i`.
pub fn dense_mass(space: &DgSpace, q: usize) -> Dense {
    let n = space.n_dofs();
    let k1 = space.n_local();
    let rule = gauss_rule(q).unwrap();
    let basis = eval_basis(space.degree(), rule.points()).unwrap();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (el_i, mode_i) = (i / k1, i % k1);
            let (el_j, mode_j) = (j / k1, j % k1);
            if el_i != el_j {
                continue;
            }
            let h = space.mesh().element_length(el_i);
            let mut acc = 0.0;
            for (p, &w) in rule.weights().iter().enumerate() {
                acc += w * basis.values()[mode_i][p] * basis.values()[mode_j][p];
            }
            out[i][j] = 0.5 * h * acc;
        }
    }
    out
}

/// Max absolute entrywise difference between a banded matrix and a dense
/// reference.
pub fn max_entry_diff(banded: &BandedMatrix, dense: &Dense) -> f64 {
    let n = banded.n_global();
    assert_eq!(dense.len(), n);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((banded.get(i, j) - dense[i][j]).abs());
        }
    }
    worst
}
