//! Cross-checks of the banded assembly and solver paths against the dense
//! brute-force references in `rosenau-verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rosenau_core::mesh::build_uniform_mesh;
use rosenau_core::norms::energy_norm;
use rosenau_core::operator::{assemble_b_form, assemble_mass, PenaltyParams};
use rosenau_core::solver::BandedLu;
use rosenau_core::space::DgSpace;
use rosenau_core::BandedMatrix;
use rosenau_verify::{dense_b_form, dense_from_banded, dense_mass, dense_solve, max_entry_diff};

fn space(a: f64, b: f64, n: usize, k: usize) -> DgSpace {
    DgSpace::new(build_uniform_mesh(a, b, n).unwrap(), k).unwrap()
}

#[test]
fn banded_b_matches_dense_double_loop() {
    let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
    for k in 0..=3usize {
        for n in 1..=4usize {
            let space = space(-1.0, 1.5, n, k);
            let banded = assemble_b_form(&space, &penalty, 0.5).unwrap();
            let dense = dense_b_form(&space, &penalty, 0.5, k + 2);
            let diff = max_entry_diff(&banded, &dense);
            let scale = banded.max_abs();
            assert!(
                diff <= 1e-12 * scale,
                "k={k} n={n}: entry diff {diff} vs scale {scale}"
            );
        }
    }
}

#[test]
fn banded_mass_matches_dense() {
    for k in 0..=3usize {
        let space = space(0.0, 2.0, 4, k);
        let banded = assemble_mass(&space);
        let dense = dense_mass(&space, k + 2);
        assert!(max_entry_diff(&banded, &dense) <= 1e-13);
    }
}

#[test]
fn nonadjacent_entries_are_exactly_zero() {
    let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
    let space = space(-3.0, 3.0, 6, 2);
    let b = assemble_b_form(&space, &penalty, 1.0).unwrap();
    for i in 0..3 {
        for j in 6..b.n_global() {
            assert_eq!(b.get(i, j), 0.0);
            assert_eq!(b.get(j, i), 0.0);
        }
    }
}

#[test]
fn banded_lu_matches_dense_solver_on_random_spd_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for &(n_el, bs) in &[(10usize, 3usize), (30, 1), (15, 4), (20, 3)] {
        // random symmetric diagonally dominant block-tridiagonal matrix
        let n = n_el * bs;
        let mut m = BandedMatrix::zeros(n_el, bs);
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (i / bs, j / bs);
                if ej > ei || ej + 1 < ei {
                    continue;
                }
                let v: f64 = rng.gen_range(-1.0..1.0);
                if i == j {
                    m.add(i, j, 4.0 * bs as f64 + v.abs());
                } else {
                    m.add(i, j, v);
                    m.add(j, i, v);
                }
            }
        }
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lu = BandedLu::factor(&m).unwrap();
        let x = lu.solve(&rhs).unwrap();
        let xd = dense_solve(&dense_from_banded(&m), &rhs);
        let num: f64 = x
            .iter()
            .zip(&xd)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den: f64 = xd.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(num <= 1e-10 * den.max(1.0), "n={n}: diff {num} vs {den}");
        // and the residual is small
        let ax = m.apply(&x).unwrap();
        let rn: f64 = ax
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let bn: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(rn <= 1e-10 * bn);
    }
}

#[test]
fn banded_lu_matches_dense_on_assembled_operators() {
    let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for &(n_el, k) in &[(5usize, 2usize), (20, 2), (15, 3)] {
        let space = space(-2.0, 2.0, n_el, k);
        let mass = assemble_mass(&space);
        let b = assemble_b_form(&space, &penalty, 0.5).unwrap();
        let sys = mass.plus(&b).unwrap();
        if sys.n_global() > 60 {
            continue;
        }
        let rhs: Vec<f64> = (0..sys.n_global())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let x = BandedLu::factor(&sys).unwrap().solve(&rhs).unwrap();
        let xd = dense_solve(&dense_from_banded(&sys), &rhs);
        let num: f64 = x
            .iter()
            .zip(&xd)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let den: f64 = xd.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(num <= 1e-10 * den.max(1e-10), "diff {num} vs {den}");
    }
}

#[test]
fn bilinear_value_matches_dense_computation() {
    let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
    let space = space(0.0, 1.0, 3, 2);
    let b = assemble_b_form(&space, &penalty, 1.0).unwrap();
    let dense = dense_from_banded(&b);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = b.n_global();
    for _ in 0..5 {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let fast = b.bilinear(&u, &v).unwrap();
        let mut slow = 0.0;
        for i in 0..n {
            for j in 0..n {
                slow += u[i] * dense[i][j] * v[j];
            }
        }
        assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0));
        // symmetry of the bilinear form
        let rev = b.bilinear(&v, &u).unwrap();
        assert!((fast - rev).abs() <= 1e-12 * fast.abs().max(1.0));
    }
}

#[test]
fn sampled_coercivity_of_b() {
    let penalty = PenaltyParams::new(2000.0, 2000.0, 3.0).unwrap();
    let space = space(-10.0, 10.0, 12, 2);
    let b = assemble_b_form(&space, &penalty, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let mut v = space.zero_vector();
        for c in v.coeffs_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        let bvv = b.bilinear(v.coeffs(), v.coeffs()).unwrap();
        assert!(bvv > 0.0, "B(v,v) = {bvv} not positive");
        // B(v,v) vanishes only when the energy norm does
        let e = energy_norm(&v, &penalty);
        if bvv.abs() <= 1e-12 {
            assert!(e <= 1e-10);
        }
    }
}
