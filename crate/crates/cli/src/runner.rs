//! The three experiment drivers: `solve`, `convergence`, and `decay`.

use std::path::Path;
use std::time::Instant;

use rosenau_core::flux::FluxSpec;
use rosenau_core::mesh::build_uniform_mesh;
use rosenau_core::norms::{energy_error, eoc, l2_error, linf_error, linf_norm, ErrorRecord};
use rosenau_core::operator::{assemble_b_form, assemble_mass, PenaltyParams};
use rosenau_core::projection::{elliptic_projection, l2_projection};
use rosenau_core::solver::NewtonOptions;
use rosenau_core::space::DgVector;
use rosenau_core::timestepper::{run, SimulationState, TimeGrid};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::plot::{line_plot, Series};
use crate::problem::Problem;
use crate::report::{fmt_full, write_csv, write_report_json, RunTrace};

/// Newton tolerances for the experiment runs. The defaults of
/// [`NewtonOptions`] target small systems; with penalty weights of order
/// `sigma0/h^3 ~ 1e6` the evaluated residual carries a rounding floor around
/// `1e-10`, so the runs use tolerances safely above it. The resulting
/// algebraic perturbation is orders of magnitude below the discretization
/// error of every experiment.
pub fn experiment_newton_options() -> NewtonOptions {
    NewtonOptions {
        abs_tol: 1e-8,
        rel_tol: 1e-7,
        ..Default::default()
    }
}

struct Prepared {
    mass: rosenau_core::BandedMatrix,
    b_form: rosenau_core::BandedMatrix,
    u0: DgVector,
    h: f64,
}

fn prepare(
    problem: &Problem,
    cfg: &ConfigFile,
    n_elements: usize,
    l2_init: bool,
) -> Result<Prepared, CliError> {
    let (a, b) = problem.domain;
    let mesh = build_uniform_mesh(a, b, n_elements)?;
    let h = (b - a) / n_elements as f64;
    let space = rosenau_core::space::DgSpace::new(mesh, cfg.run.degree)?;
    let penalty = PenaltyParams::new(cfg.run.sigma0, cfg.run.sigma1, cfg.run.beta)
        .map_err(|e| CliError::config(e.to_string()))?;
    let mass = assemble_mass(&space);
    let b_form = assemble_b_form(&space, &penalty, problem.epsilon)?;
    let initial = problem.initial.function();
    let u0 = if l2_init || !initial.has_derivatives() {
        l2_projection(initial, &space)?
    } else {
        elliptic_projection(initial, &space, &penalty, problem.epsilon)?
    };
    Ok(Prepared {
        mass,
        b_form,
        u0,
        h,
    })
}

fn advance(
    prepared: &Prepared,
    flux: &FluxSpec,
    t_final: f64,
    dt: f64,
    snapshots: usize,
) -> Result<SimulationState, CliError> {
    let grid = TimeGrid::with_dt(t_final, dt)?;
    let state = run(
        prepared.u0.clone(),
        &prepared.mass,
        &prepared.b_form,
        flux,
        &grid,
        &experiment_newton_options(),
        snapshots,
    )?;
    Ok(state)
}

fn single_element_count(cfg: &ConfigFile, cmd: &str) -> Result<usize, CliError> {
    let list = cfg.run.elements.as_list();
    if list.len() != 1 {
        return Err(CliError::config(format!(
            "run.elements: `{cmd}` needs a single element count, got {list:?}"
        )));
    }
    Ok(list[0])
}

/// Points per element when sampling profiles for CSV output.
const PROFILE_SAMPLES: usize = 10;

#[derive(Debug, Clone)]
pub struct SolveSummary {
    pub final_linf: f64,
    pub l2_error_vs_exact: Option<f64>,
    pub newton_iterations: Vec<usize>,
}

/// `solve`: run once, write `snapshots.csv`, `final_state.csv`,
/// `report.json`, and `solution.svg`.
pub fn run_solve(
    cfg: &ConfigFile,
    out_dir: &Path,
    l2_init: bool,
) -> Result<SolveSummary, CliError> {
    let started = Instant::now();
    let problem = Problem::from_config(cfg)?;
    let n = single_element_count(cfg, "solve")?;
    let prepared = prepare(&problem, cfg, n, l2_init)?;
    let dt = cfg.run.dt.dt_for(prepared.h, cfg.run.degree);
    let state = advance(
        &prepared,
        &problem.flux,
        problem.t_final,
        dt,
        cfg.run.snapshots,
    )?;

    std::fs::create_dir_all(out_dir)?;
    // snapshots.csv: t, x, u
    let mut rows = Vec::new();
    for (t, v) in state.snapshots() {
        for (x, u) in v.sample_uniform(PROFILE_SAMPLES) {
            rows.push(vec![fmt_full(*t), fmt_full(x), fmt_full(u)]);
        }
    }
    write_csv(&out_dir.join("snapshots.csv"), &["t", "x", "u"], rows)?;

    // final_state.csv: x, u [, exact]
    let final_profile = state.current().sample_uniform(PROFILE_SAMPLES);
    let exact_at_t = problem.exact.as_ref().map(|e| e.at_time(problem.t_final));
    let mut rows = Vec::new();
    for &(x, u) in &final_profile {
        let mut row = vec![fmt_full(x), fmt_full(u)];
        if let Some(exact) = &exact_at_t {
            row.push(fmt_full(exact.eval(x)));
        }
        rows.push(row);
    }
    let header: &[&str] = if exact_at_t.is_some() {
        &["x", "u", "u_exact"]
    } else {
        &["x", "u"]
    };
    write_csv(&out_dir.join("final_state.csv"), header, rows)?;

    // solution.svg: final approximate profile, exact overlay when configured
    let exact_profile: Vec<(f64, f64)> = exact_at_t
        .as_ref()
        .map(|e| final_profile.iter().map(|&(x, _)| (x, e.eval(x))).collect())
        .unwrap_or_default();
    let mut series = vec![Series {
        label: format!("u_h(x, T={})", problem.t_final),
        points: &final_profile,
    }];
    if !exact_profile.is_empty() {
        series.push(Series {
            label: "exact".to_string(),
            points: &exact_profile,
        });
    }
    line_plot(
        &out_dir.join("solution.svg"),
        "final solution profile",
        "x",
        "u",
        &series,
    )?;

    let newton_iterations: Vec<usize> = state.reports().iter().map(|r| r.iterations).collect();
    write_report_json(
        &out_dir.join("report.json"),
        cfg,
        &[RunTrace {
            elements: n,
            newton_iterations: newton_iterations.clone(),
        }],
        started.elapsed().as_secs_f64(),
    )?;

    let l2_error_vs_exact = exact_at_t.as_ref().map(|e| l2_error(state.current(), e));
    Ok(SolveSummary {
        final_linf: linf_norm(state.current()),
        l2_error_vs_exact,
        newton_iterations,
    })
}

/// `convergence`: run the refinement sweep, write `convergence.csv`
/// (h, l2_error, energy_error, order) and `report.json`.
pub fn run_convergence(cfg: &ConfigFile, out_dir: &Path) -> Result<Vec<ErrorRecord>, CliError> {
    let started = Instant::now();
    let problem = Problem::from_config(cfg)?;
    let exact = problem.exact.as_ref().ok_or_else(|| {
        CliError::config("problem.exact: convergence study needs an exact solution".to_string())
    })?;
    let ns = cfg.run.elements.as_list();
    if ns.len() < 2 {
        return Err(CliError::config(format!(
            "run.elements: convergence needs at least 2 element counts, got {ns:?}"
        )));
    }
    let penalty = PenaltyParams::new(cfg.run.sigma0, cfg.run.sigma1, cfg.run.beta)
        .map_err(|e| CliError::config(e.to_string()))?;
    let mut records = Vec::new();
    let mut traces = Vec::new();
    for &n in &ns {
        let prepared = prepare(&problem, cfg, n, false)?;
        let dt = cfg.run.dt.dt_for(prepared.h, cfg.run.degree);
        let state = advance(&prepared, &problem.flux, problem.t_final, dt, 0)?;
        let exact_t = exact.at_time(problem.t_final);
        records.push(ErrorRecord::new(
            prepared.h,
            l2_error(state.current(), &exact_t),
            energy_error(state.current(), &exact_t, &penalty)?,
            linf_error(state.current(), &exact_t),
        ));
        traces.push(RunTrace {
            elements: n,
            newton_iterations: state.reports().iter().map(|r| r.iterations).collect(),
        });
    }
    let records = eoc(records).map_err(|e| CliError::config(e.to_string()))?;

    std::fs::create_dir_all(out_dir)?;
    let rows = records.iter().map(|r| {
        vec![
            fmt_full(r.h),
            fmt_full(r.l2_error),
            fmt_full(r.energy_error),
            r.order.map(fmt_full).unwrap_or_default(),
        ]
    });
    write_csv(
        &out_dir.join("convergence.csv"),
        &["h", "l2_error", "energy_error", "order"],
        rows,
    )?;
    write_report_json(
        &out_dir.join("report.json"),
        cfg,
        &traces,
        started.elapsed().as_secs_f64(),
    )?;
    Ok(records)
}

#[derive(Debug, Clone)]
pub struct DecaySummary {
    /// `(t, linf)` at every snapshot.
    pub series: Vec<(f64, f64)>,
    /// Least-squares slope of `log(linf)` vs `log(1+t)` over the final half
    /// of the run.
    pub fitted_slope: f64,
    /// The theoretical decay exponent, reported for comparison.
    pub theory_slope: f64,
}

/// Least-squares slope of `log(v)` against `log(1+t)`.
fn fit_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, v) in points {
        let x = (1.0 + t).ln();
        let y = v.max(1e-300).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// `decay`: run the long-time experiment. The advection term `+u_x` of the
/// decay equation is realized by appending `(-1, 0)` to the configured flux
/// terms (set `include_advection = false` to study the pure dispersive
/// system). Writes `decay.csv`, `decay.svg`, `profiles.svg`, `report.json`.
pub fn run_decay(
    cfg: &ConfigFile,
    out_dir: &Path,
    include_advection: bool,
    l2_init: bool,
) -> Result<DecaySummary, CliError> {
    let started = Instant::now();
    let problem = Problem::from_config(cfg)?;
    let n = single_element_count(cfg, "decay")?;
    let flux = if include_advection {
        problem.flux.with_term(-1.0, 0)
    } else {
        problem.flux.clone()
    };
    let prepared = prepare(&problem, cfg, n, l2_init)?;
    let dt = cfg.run.dt.dt_for(prepared.h, cfg.run.degree);
    let state = advance(&prepared, &flux, problem.t_final, dt, cfg.run.snapshots)?;

    let series: Vec<(f64, f64)> = state
        .snapshots()
        .iter()
        .map(|(t, v)| (*t, linf_norm(v)))
        .collect();
    let late: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= 0.5 * problem.t_final)
        .collect();
    let fitted_slope = fit_log_slope(&late);
    let theory_slope = -0.2;

    std::fs::create_dir_all(out_dir)?;
    let mut rows: Vec<Vec<String>> = series
        .iter()
        .map(|&(t, v)| vec![fmt_full(t), fmt_full(v)])
        .collect();
    // footer: fitted late-time exponent and the theoretical one
    rows.push(vec!["fit_log_slope".to_string(), fmt_full(fitted_slope)]);
    rows.push(vec!["theory_log_slope".to_string(), fmt_full(theory_slope)]);
    write_csv(&out_dir.join("decay.csv"), &["t", "linf"], rows)?;

    line_plot(
        &out_dir.join("decay.svg"),
        "Linf decay",
        "t",
        "max |u|",
        &[Series {
            label: "linf(t)".to_string(),
            points: &series,
        }],
    )?;

    // profile overlay: up to 12 snapshots
    let stride = (state.snapshots().len() / 12).max(1);
    let profiles: Vec<(f64, Vec<(f64, f64)>)> = state
        .snapshots()
        .iter()
        .step_by(stride)
        .map(|(t, v)| (*t, v.sample_uniform(PROFILE_SAMPLES)))
        .collect();
    let profile_series: Vec<Series<'_>> = profiles
        .iter()
        .map(|(t, pts)| Series {
            label: format!("t = {t:.1}"),
            points: pts,
        })
        .collect();
    line_plot(
        &out_dir.join("profiles.svg"),
        "solution profiles",
        "x",
        "u",
        &profile_series,
    )?;

    write_report_json(
        &out_dir.join("report.json"),
        cfg,
        &[RunTrace {
            elements: n,
            newton_iterations: state.reports().iter().map(|r| r.iterations).collect(),
        }],
        started.elapsed().as_secs_f64(),
    )?;

    Ok(DecaySummary {
        series,
        fitted_slope,
        theory_slope,
    })
}
