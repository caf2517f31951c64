//! Closed-form functions used as initial data, exact solutions, and
//! consistency-check inputs.

use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A scalar function of `x` with optional analytic derivatives up to order
/// three.
#[derive(Clone)]
pub struct AnalyticFunction {
    value: ScalarFn,
    derivatives: [Option<ScalarFn>; 3],
}

impl std::fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field(
                "derivatives",
                &self.derivatives.iter().filter(|d| d.is_some()).count(),
            )
            .finish()
    }
}

impl AnalyticFunction {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(value),
            derivatives: [None, None, None],
        }
    }

    pub fn with_derivatives(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d3: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            derivatives: [Some(Arc::new(d1)), Some(Arc::new(d2)), Some(Arc::new(d3))],
        }
    }

    /// Polynomial `sum_i coeffs[i] x^i` with all derivatives attached.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        fn horner(c: &[f64], x: f64) -> f64 {
            c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
        }
        fn diff(c: &[f64]) -> Vec<f64> {
            c.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| i as f64 * a)
                .collect()
        }
        let c0 = coeffs.to_vec();
        let c1 = diff(&c0);
        let c2 = diff(&c1);
        let c3 = diff(&c2);
        Self::with_derivatives(
            move |x| horner(&c0, x),
            move |x| horner(&c1, x),
            move |x| horner(&c2, x),
            move |x| horner(&c3, x),
        )
    }

    /// Gaussian pulse `amplitude * exp(-(x - center)^2)`.
    pub fn gaussian_pulse(amplitude: f64, center: f64) -> Self {
        let g = move |x: f64| amplitude * (-(x - center) * (x - center)).exp();
        Self::with_derivatives(
            g,
            move |x| {
                let y = x - center;
                -2.0 * y * g(x)
            },
            move |x| {
                let y = x - center;
                (4.0 * y * y - 2.0) * g(x)
            },
            move |x| {
                let y = x - center;
                (12.0 * y - 8.0 * y * y * y) * g(x)
            },
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn has_derivatives(&self) -> bool {
        self.derivatives.iter().all(|d| d.is_some())
    }

    /// `order`-th derivative (`order = 0` is the value itself). Errors when
    /// the derivative closure was not supplied.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        match order {
            0 => Ok(self.eval(x)),
            1..=3 => self.derivatives[order - 1]
                .as_ref()
                .map(|d| d(x))
                .ok_or(Error::MissingDerivative(order)),
            _ => Err(Error::InvalidDerivativeOrder {
                order,
                context: "analytic function (derivatives tabulated up to order 3)",
            }),
        }
    }

    /// Sanity check: supplied derivatives must agree with central finite
    /// differences of the value at sampled interior points of `(a, b)`.
    pub fn check_derivatives(&self, a: f64, b: f64) -> Result<()> {
        if !self.has_derivatives() {
            return Ok(());
        }
        let delta = 1e-5 * (b - a).abs().max(1.0);
        let samples = 9;
        for s in 1..=samples {
            let x = a + (b - a) * s as f64 / (samples + 1) as f64;
            let fd = (self.eval(x + delta) - self.eval(x - delta)) / (2.0 * delta);
            let d1 = self.derivative(1, x)?;
            let scale = d1.abs().max(fd.abs()).max(1e-8);
            if (fd - d1).abs() > 1e-5 * scale.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "declared derivative {d1} disagrees with finite difference {fd} at x = {x}"
                )));
            }
        }
        Ok(())
    }
}

/// `sech(x)` and its derivatives up to order four, written in terms of
/// `s = sech`, `t = tanh`:
/// `s' = -s t`, `s'' = s - 2 s^3`, `s''' = -s t (1 - 6 s^2)`,
/// `s'''' = s - 20 s^3 + 24 s^5`.
pub fn sech_derivatives(xi: f64) -> [f64; 5] {
    let s = 1.0 / xi.cosh();
    let t = xi.tanh();
    let s2 = s * s;
    [
        s,
        -s * t,
        s * (1.0 - 2.0 * s2),
        -s * t * (1.0 - 6.0 * s2),
        s * (1.0 - 20.0 * s2 + 24.0 * s2 * s2),
    ]
}

/// A space-time function `u(x, t)` carrying the spatial derivatives of `u`,
/// `u_t`, and the value of `u_tt`, as needed by the elliptic projection,
/// weak-residual, and truncation checks.
#[derive(Clone)]
pub struct SpaceTimeFunction {
    /// `[d] = d-th spatial derivative of u`
    u: [FieldFn; 4],
    /// `[d] = d-th spatial derivative of u_t`
    u_t: [FieldFn; 4],
    u_tt: FieldFn,
}

impl std::fmt::Debug for SpaceTimeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SpaceTimeFunction")
    }
}

impl SpaceTimeFunction {
    pub fn new(u: [FieldFn; 4], u_t: [FieldFn; 4], u_tt: FieldFn) -> Self {
        Self { u, u_t, u_tt }
    }

    /// Traveling sech profile `u(x, t) = sech(x - center - speed * t)`.
    pub fn sech_soliton(center: f64, speed: f64) -> Self {
        let field = move |order: usize, sign: f64| -> FieldFn {
            Arc::new(move |x: f64, t: f64| sign * sech_derivatives(x - center - speed * t)[order])
        };
        let u = [field(0, 1.0), field(1, 1.0), field(2, 1.0), field(3, 1.0)];
        // u_t = -speed * d/dxi sech => spatial derivatives shift one order up
        let u_t = [
            field(1, -speed),
            field(2, -speed),
            field(3, -speed),
            field(4, -speed),
        ];
        let u_tt: FieldFn =
            Arc::new(move |x, t| speed * speed * sech_derivatives(x - center - speed * t)[2]);
        Self { u, u_t, u_tt }
    }

    /// Separable `u(x, t) = a(t) g(x)`; `g` must carry derivatives to order
    /// three.
    pub fn separable(
        g: AnalyticFunction,
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        a_dot: impl Fn(f64) -> f64 + Send + Sync + 'static,
        a_ddot: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !g.has_derivatives() {
            return Err(Error::MissingDerivative(1));
        }
        let a = Arc::new(a);
        let a_dot = Arc::new(a_dot);
        let make = |time: Arc<dyn Fn(f64) -> f64 + Send + Sync>, order: usize| -> FieldFn {
            let g = g.clone();
            Arc::new(move |x, t| time(t) * g.derivative(order, x).expect("checked above"))
        };
        let u = [
            make(a.clone(), 0),
            make(a.clone(), 1),
            make(a.clone(), 2),
            make(a.clone(), 3),
        ];
        let u_t = [
            make(a_dot.clone(), 0),
            make(a_dot.clone(), 1),
            make(a_dot.clone(), 2),
            make(a_dot, 3),
        ];
        let g2 = g.clone();
        let u_tt: FieldFn = Arc::new(move |x, t| a_ddot(t) * g2.eval(x));
        Ok(Self { u, u_t, u_tt })
    }

    /// Returns a copy with every value scaled by `factor` (used for
    /// negative-control consistency tests).
    pub fn scaled(&self, factor: f64) -> Self {
        let scale = |f: &FieldFn| -> FieldFn {
            let f = f.clone();
            Arc::new(move |x, t| factor * f(x, t))
        };
        Self {
            u: [
                scale(&self.u[0]),
                scale(&self.u[1]),
                scale(&self.u[2]),
                scale(&self.u[3]),
            ],
            u_t: [
                scale(&self.u_t[0]),
                scale(&self.u_t[1]),
                scale(&self.u_t[2]),
                scale(&self.u_t[3]),
            ],
            u_tt: scale(&self.u_tt),
        }
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        (self.u[0])(x, t)
    }

    /// `d`-th spatial derivative of `u`, `d <= 3`.
    pub fn spatial(&self, d: usize, x: f64, t: f64) -> f64 {
        (self.u[d])(x, t)
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        (self.u_t[0])(x, t)
    }

    /// `d`-th spatial derivative of `u_t`, `d <= 3`.
    pub fn dt_spatial(&self, d: usize, x: f64, t: f64) -> f64 {
        (self.u_t[d])(x, t)
    }

    pub fn dtt(&self, x: f64, t: f64) -> f64 {
        (self.u_tt)(x, t)
    }

    /// The spatial slice `u(., t)` as an [`AnalyticFunction`] with
    /// derivatives.
    pub fn at_time(&self, t: f64) -> AnalyticFunction {
        let [u0, u1, u2, u3] = self.u.clone();
        AnalyticFunction::with_derivatives(
            move |x| u0(x, t),
            move |x| u1(x, t),
            move |x| u2(x, t),
            move |x| u3(x, t),
        )
    }

    /// The spatial slice `u_t(., t)` with its spatial derivatives.
    pub fn dt_at_time(&self, t: f64) -> AnalyticFunction {
        let [u0, u1, u2, u3] = self.u_t.clone();
        AnalyticFunction::with_derivatives(
            move |x| u0(x, t),
            move |x| u1(x, t),
            move |x| u2(x, t),
            move |x| u3(x, t),
        )
    }
}
