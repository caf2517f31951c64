//! Backward Euler time stepping for the fully discrete scheme
//!
//! ```text
//! (M + B)(U^{n+1} - U^n) = dt * F(U^{n+1}),
//! ```
//!
//! solved per step by Newton with Jacobian `(M + B) - dt * F'(U)`. `M + B`
//! is time independent and assembled once per run; only the block-diagonal
//! flux Jacobian changes between iterations.

use crate::analytic::SpaceTimeFunction;
use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::flux::{assemble_rhs, assemble_rhs_jacobian, FluxSpec};
use crate::mesh::Mesh;
use crate::quadrature::gauss_rule;
use crate::solver::{newton_solve, NewtonOptions, SolveReport};
use crate::space::DgVector;

/// Uniform time grid `0 = t_0 < t_1 < ... < t_M = T` with `dt = T / M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    n_steps: usize,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_steps: usize) -> Result<Self> {
        if !(t_final > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "final time must be positive, got {t_final}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter("need at least one step".into()));
        }
        Ok(Self {
            t_final,
            n_steps,
            dt: t_final / n_steps as f64,
        })
    }

    /// Grid with `dt` rounded so that an integer number of steps reaches
    /// `t_final`.
    pub fn with_dt(t_final: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        let n_steps = (t_final / dt).round().max(1.0) as usize;
        Self::new(t_final, n_steps)
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time_at(&self, step: usize) -> f64 {
        if step == self.n_steps {
            self.t_final
        } else {
            step as f64 * self.dt
        }
    }
}

/// Evolving state of a simulation: the current solution, step counter,
/// Newton reports, and captured snapshots.
#[derive(Debug, Clone)]
pub struct SimulationState {
    current: DgVector,
    step: usize,
    time: f64,
    reports: Vec<SolveReport>,
    snapshots: Vec<(f64, DgVector)>,
}

impl SimulationState {
    pub fn new(initial: DgVector) -> Self {
        Self {
            current: initial,
            step: 0,
            time: 0.0,
            reports: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn current(&self) -> &DgVector {
        &self.current
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn reports(&self) -> &[SolveReport] {
        &self.reports
    }

    pub fn snapshots(&self) -> &[(f64, DgVector)] {
        &self.snapshots
    }

    fn capture(&mut self) {
        debug_assert!(
            self.snapshots.last().is_none_or(|(t, _)| *t < self.time),
            "snapshot times must be strictly increasing"
        );
        self.snapshots.push((self.time, self.current.clone()));
    }
}

/// Advances one backward Euler step with the given mass matrix and bilinear
/// form. Convenience wrapper that forms `M + B` on the fly; [`run`]
/// assembles the sum once.
pub fn backward_euler_step(
    state: &mut SimulationState,
    mass: &BandedMatrix,
    b_form: &BandedMatrix,
    flux: &FluxSpec,
    dt: f64,
    opts: &NewtonOptions,
) -> Result<SolveReport> {
    let mb = mass.plus(b_form)?;
    step_with_operator(state, &mb, flux, dt, opts)
}

/// Advances one step given the preassembled `M + B`.
pub fn step_with_operator(
    state: &mut SimulationState,
    m_plus_b: &BandedMatrix,
    flux: &FluxSpec,
    dt: f64,
    opts: &NewtonOptions,
) -> Result<SolveReport> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let u_prev = state.current.coeffs().to_vec();
    let space = state.current.space().clone();
    let residual = |x: &[f64]| -> Vec<f64> {
        let diff: Vec<f64> = x.iter().zip(&u_prev).map(|(a, b)| a - b).collect();
        let mut g = m_plus_b.apply(&diff).expect("dimensions match");
        let xv = DgVector::new(space.clone(), x.to_vec()).expect("dimensions match");
        let f = assemble_rhs(flux, &xv).expect("assembly is infallible for valid spaces");
        for (gi, fi) in g.iter_mut().zip(f.coeffs()) {
            *gi -= dt * fi;
        }
        g
    };
    let space_j = state.current.space().clone();
    let jacobian = |x: &[f64]| -> BandedMatrix {
        let xv = DgVector::new(space_j.clone(), x.to_vec()).expect("dimensions match");
        let fp = assemble_rhs_jacobian(flux, &xv).expect("assembly is infallible");
        let mut j = m_plus_b.clone();
        j.add_scaled(&fp, -dt).expect("same shape");
        j
    };
    let annotate = |e: Error, state: &SimulationState| Error::StepFailed {
        step: state.step,
        time: state.time,
        source: Box::new(e),
    };
    let (x, report) = match newton_solve(residual, jacobian, &u_prev, opts) {
        Ok(ok) => ok,
        Err(e) => return Err(annotate(e, state)),
    };
    state.current = DgVector::new(state.current.space().clone(), x)?;
    state.step += 1;
    state.time += dt;
    state.reports.push(report);
    Ok(report)
}

/// Runs the scheme over a full time grid, capturing `snapshot_count`
/// uniformly spaced snapshots plus the initial and final states.
pub fn run(
    initial: DgVector,
    mass: &BandedMatrix,
    b_form: &BandedMatrix,
    flux: &FluxSpec,
    grid: &TimeGrid,
    opts: &NewtonOptions,
    snapshot_count: usize,
) -> Result<SimulationState> {
    let m_plus_b = mass.plus(b_form)?;
    let mut state = SimulationState::new(initial);
    let m = grid.n_steps();
    // snapshot step indices: 0, ..(uniform interior).., M
    let mut capture_at = vec![false; m + 1];
    capture_at[0] = true;
    capture_at[m] = true;
    for j in 1..=snapshot_count {
        let idx = (j as f64 * m as f64 / (snapshot_count + 1) as f64).round() as usize;
        capture_at[idx.min(m)] = true;
    }
    state.capture();
    for n in 0..m {
        step_with_operator(&mut state, &m_plus_b, flux, grid.dt(), opts)?;
        state.time = grid.time_at(n + 1); // avoid drift from repeated addition
        if capture_at[n + 1] {
            state.capture();
        }
    }
    Ok(state)
}

/// Per-step record of the backward-difference truncation check: the
/// left/right sides of `||sigma^n||^2 <= dt * int ||u_tt||^2 ds` with
/// `sigma^n = u_t(t_n) - (u(t_n) - u(t_{n-1}))/dt`.
#[derive(Debug, Clone, Copy)]
pub struct TruncationRecord {
    pub step: usize,
    /// `||sigma^n||^2`
    pub lhs: f64,
    /// `dt * int_{t_{n-1}}^{t_n} ||u_tt||^2 ds`
    pub rhs: f64,
}

impl TruncationRecord {
    /// The bound with float slack: an absolute floor of `1e-20` absorbs
    /// rounding noise when both sides are analytically zero.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-10) + 1e-20
    }
}

/// Evaluates both sides of the truncation bound for every step of the grid,
/// integrating in space over the given mesh and in time by Gauss
/// quadrature.
pub fn truncation_check(
    u: &SpaceTimeFunction,
    grid: &TimeGrid,
    mesh: &Mesh,
) -> Result<Vec<TruncationRecord>> {
    let space_rule = gauss_rule(10)?;
    let time_rule = gauss_rule(8)?;
    let l2_sq = |f: &dyn Fn(f64) -> f64| -> f64 {
        (0..mesh.n_elements())
            .map(|el| {
                space_rule.integrate_interval(mesh.element_left(el), mesh.element_length(el), |x| {
                    let v = f(x);
                    v * v
                })
            })
            .sum()
    };
    let dt = grid.dt();
    let mut out = Vec::with_capacity(grid.n_steps());
    for n in 1..=grid.n_steps() {
        let t1 = grid.time_at(n);
        let t0 = grid.time_at(n - 1);
        let sigma = |x: f64| u.dt(x, t1) - (u.value(x, t1) - u.value(x, t0)) / dt;
        let lhs = l2_sq(&sigma);
        let mut rhs = 0.0;
        for (p, &wt) in time_rule.weights().iter().enumerate() {
            let s = t0 + 0.5 * (time_rule.points()[p] + 1.0) * dt;
            let norm_utt = l2_sq(&|x: f64| u.dtt(x, s));
            rhs += 0.5 * dt * wt * norm_utt;
        }
        out.push(TruncationRecord {
            step: n,
            lhs,
            rhs: dt * rhs,
        });
    }
    Ok(out)
}
