//! Realized problem instances: builtins turned into analytic functions and
//! the boundary-compatibility check for configured exact solutions.

use std::collections::BTreeMap;

use rosenau_core::analytic::{AnalyticFunction, SpaceTimeFunction};
use rosenau_core::flux::FluxSpec;

use crate::config::{BuiltinSection, ConfigFile};
use crate::error::CliError;

/// Tolerance for the clamped-boundary compatibility check of a configured
/// exact solution. The sech benchmark's tails reach ~9.1e-5 at x = +-10,
/// so the check uses 1e-3 rather than a strict zero.
pub const BOUNDARY_COMPAT_TOL: f64 = 1e-3;

/// Initial data: either a builtin with analytic derivatives, or a custom
/// function supplied programmatically (not expressible in JSON).
#[derive(Debug, Clone)]
pub enum Initial {
    Builtin(AnalyticFunction),
    Custom(AnalyticFunction),
}

impl Initial {
    pub fn function(&self) -> &AnalyticFunction {
        match self {
            Initial::Builtin(f) | Initial::Custom(f) => f,
        }
    }
}

/// A fully realized problem: domain, dispersive coefficient, flux, initial
/// data, optional exact solution, and final time.
#[derive(Debug, Clone)]
pub struct Problem {
    pub domain: (f64, f64),
    pub epsilon: f64,
    pub flux: FluxSpec,
    pub initial: Initial,
    pub exact: Option<SpaceTimeFunction>,
    pub t_final: f64,
}

fn param(
    params: &BTreeMap<String, f64>,
    key: &str,
    default: f64,
    allowed: &[&str],
    ctx: &str,
) -> Result<f64, CliError> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(CliError::config(format!(
                "{ctx}: unknown parameter `{k}` (allowed: {allowed:?})"
            )));
        }
    }
    Ok(params.get(key).copied().unwrap_or(default))
}

fn builtin_spacetime(section: &BuiltinSection, ctx: &str) -> Result<SpaceTimeFunction, CliError> {
    match section.builtin.as_str() {
        "sech_soliton" => {
            let center = param(&section.params, "center", 0.0, &["center", "speed"], ctx)?;
            let speed = param(&section.params, "speed", 1.0, &["center", "speed"], ctx)?;
            Ok(SpaceTimeFunction::sech_soliton(center, speed))
        }
        "gaussian_pulse" => {
            let amplitude = param(
                &section.params,
                "amplitude",
                0.001,
                &["amplitude", "center"],
                ctx,
            )?;
            let center = param(
                &section.params,
                "center",
                0.0,
                &["amplitude", "center"],
                ctx,
            )?;
            // static in time: u_t = u_tt = 0
            let g = AnalyticFunction::gaussian_pulse(amplitude, center);
            SpaceTimeFunction::separable(g, |_| 1.0, |_| 0.0, |_| 0.0)
                .map_err(|e| CliError::config(format!("{ctx}: {e}")))
        }
        other => Err(CliError::config(format!(
            "{ctx}: unknown builtin `{other}` (expected sech_soliton or gaussian_pulse)"
        ))),
    }
}

impl Problem {
    pub fn from_config(cfg: &ConfigFile) -> Result<Self, CliError> {
        let p = &cfg.problem;
        let initial_st = builtin_spacetime(&p.initial, "problem.initial")?;
        let initial = Initial::Builtin(initial_st.at_time(0.0));
        initial
            .function()
            .check_derivatives(p.domain[0], p.domain[1])
            .map_err(|e| CliError::config(format!("problem.initial: {e}")))?;
        let exact = match &p.exact {
            Some(section) => Some(builtin_spacetime(section, "problem.exact")?),
            None => None,
        };
        let problem = Self {
            domain: (p.domain[0], p.domain[1]),
            epsilon: p.epsilon,
            flux: FluxSpec::new(p.flux.clone()),
            initial,
            exact,
            t_final: p.t_final,
        };
        problem.check_exact_boundary_compatibility()?;
        Ok(problem)
    }

    /// A configured exact solution must satisfy the clamped boundary
    /// conditions `u = u_x = 0` at both endpoints (within
    /// [`BOUNDARY_COMPAT_TOL`]) over the simulated time range.
    fn check_exact_boundary_compatibility(&self) -> Result<(), CliError> {
        let Some(exact) = &self.exact else {
            return Ok(());
        };
        for frac in [0.0, 0.5, 1.0] {
            let t = frac * self.t_final;
            for x in [self.domain.0, self.domain.1] {
                let u = exact.value(x, t).abs();
                let ux = exact.spatial(1, x, t).abs();
                if u > BOUNDARY_COMPAT_TOL || ux > BOUNDARY_COMPAT_TOL {
                    return Err(CliError::config(format!(
                        "problem.exact: boundary values |u| = {u:.2e}, |u_x| = {ux:.2e} at \
                         x = {x}, t = {t} violate the clamped conditions \
                         (tolerance {BOUNDARY_COMPAT_TOL:.0e})"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigFile;

    fn benchmark_json(domain: &str) -> String {
        format!(
            r#"{{
            "problem": {{
                "domain": {domain},
                "epsilon": 0.5,
                "flux": [[30.0, 2], [-60.0, 4], [-1.5, 0]],
                "initial": {{"builtin": "sech_soliton"}},
                "exact": {{"builtin": "sech_soliton"}},
                "T": 1.0
            }},
            "run": {{
                "degree": 2, "elements": 100,
                "sigma0": 2000.0, "sigma1": 2000.0, "beta": 3.0,
                "dt": {{"scaled": {{"factor": 0.5}}}}
            }}
        }}"#
        )
    }

    #[test]
    fn benchmark_problem_realizes() {
        let cfg: ConfigFile = serde_json::from_str(&benchmark_json("[-10.0, 10.0]")).unwrap();
        let p = Problem::from_config(&cfg).unwrap();
        assert!(p.exact.is_some());
        // f(1) = 10 - 12 - 1.5
        assert!((p.flux.f_eval(1.0) + 3.5).abs() < 1e-14);
        assert!((p.initial.function().eval(0.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_violating_boundaries_rejected() {
        // a domain cut at x = 2 leaves sech(2) ~ 0.27 at the boundary
        let cfg: ConfigFile = serde_json::from_str(&benchmark_json("[-10.0, 2.0]")).unwrap();
        match Problem::from_config(&cfg) {
            Err(CliError::Config(msg)) => assert!(msg.contains("boundary")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_builtin_and_params_rejected() {
        let bad = benchmark_json("[-10.0, 10.0]").replace("sech_soliton", "square_wave");
        let cfg: ConfigFile = serde_json::from_str(&bad).unwrap();
        assert!(Problem::from_config(&cfg).is_err());
        let bad = benchmark_json("[-10.0, 10.0]").replace(
            "{\"builtin\": \"sech_soliton\"}",
            "{\"builtin\": \"sech_soliton\", \"params\": {\"wavelength\": 2.0}}",
        );
        let cfg: ConfigFile = serde_json::from_str(&bad).unwrap();
        assert!(Problem::from_config(&cfg).is_err());
    }

    #[test]
    fn gaussian_pulse_initial() {
        let json = benchmark_json("[-10.0, 10.0]")
            .replace(
                "\"initial\": {\"builtin\": \"sech_soliton\"}",
                "\"initial\": {\"builtin\": \"gaussian_pulse\", \"params\": {\"amplitude\": 0.001}}",
            )
            .replace("\"exact\": {\"builtin\": \"sech_soliton\"},", "");
        let cfg: ConfigFile = serde_json::from_str(&json).unwrap();
        let p = Problem::from_config(&cfg).unwrap();
        assert!((p.initial.function().eval(0.0) - 0.001).abs() < 1e-15);
    }
}
