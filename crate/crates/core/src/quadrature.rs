//! Truncated composite trapezoid rules on the real line.
//!
//! Integrands are supplied in log-scaled form so that factors which
//! individually overflow (large `A_q` values against a tiny weight) combine
//! before exponentiation. The truncation window is chosen from a Gaussian
//! model of the decay and then widened by marching outward from the peak
//! until the observed envelope has decayed below tolerance; this also covers
//! integrands whose tails are only exponential in the transformed variable.

use serde::{Deserialize, Serialize};

use crate::error::{check_tol, QError, Result};
use crate::qcore::sum::NeumaierSum;
use crate::qcore::LogScaled;

/// A quadrature node: `t` on the integration axis, `x` the matching point in
/// the original coordinate (`e^t` on the log axis, `sinh t` on the sinh axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPoint {
    pub t: f64,
    pub x: f64,
}

/// Integrand `g` in the original coordinate, evaluated in log-scaled form.
/// `decay_scale` is the Gaussian coefficient of the governing weight in the
/// transformed coordinate; the transformed integrand is assumed to decay at
/// least like `exp(-decay_scale/2 * t^2)` away from its bulk.
pub struct IntegrandSpec<F> {
    pub evaluator: F,
    pub decay_scale: f64,
}

impl<F: Fn(AxisPoint) -> LogScaled<f64>> IntegrandSpec<F> {
    pub fn new(evaluator: F, decay_scale: f64) -> Self {
        Self {
            evaluator,
            decay_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
    /// Integration runs over `[-truncation_radius, truncation_radius]` on the
    /// transformed axis.
    pub truncation_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub initial_panels: usize,
    pub max_panels: usize,
    /// Multiplies the chosen truncation radius.
    pub radius_scale: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            initial_panels: 64,
            max_panels: 1 << 20,
            radius_scale: 1.0,
        }
    }
}

#[derive(Clone, Copy)]
enum Axis {
    Line,
    Log,
    Sinh,
}

impl Axis {
    fn point(self, t: f64) -> AxisPoint {
        let x = match self {
            Axis::Line => t,
            Axis::Log => t.exp(),
            Axis::Sinh => t.sinh(),
        };
        AxisPoint { t, x }
    }

    fn ln_jacobian(self, t: f64) -> f64 {
        match self {
            Axis::Line => 0.0,
            Axis::Log => t,
            // ln cosh t without overflow
            Axis::Sinh => t.abs() + (-2.0 * t.abs()).exp().ln_1p() - std::f64::consts::LN_2,
        }
    }
}

/// `int_R f(t) dt`.
pub fn integrate_line<F>(f: &IntegrandSpec<F>, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Line, &QuadratureOptions::default())
}

/// `int_0^inf g(u) du` through `u = e^t`.
pub fn integrate_log_axis<F>(f: &IntegrandSpec<F>, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Log, &QuadratureOptions::default())
}

/// `int_R g(x) dx` through `x = sinh t`.
pub fn integrate_sinh_axis<F>(f: &IntegrandSpec<F>, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Sinh, &QuadratureOptions::default())
}

pub fn integrate_line_with<F>(
    f: &IntegrandSpec<F>,
    tol: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Line, opts)
}

pub fn integrate_log_axis_with<F>(
    f: &IntegrandSpec<F>,
    tol: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Log, opts)
}

pub fn integrate_sinh_axis_with<F>(
    f: &IntegrandSpec<F>,
    tol: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    integrate(f, tol, Axis::Sinh, opts)
}

const SCAN_POINTS: usize = 257;
const WINDOW: usize = 6;
const MAX_MARCH: usize = 200_000;

struct Transformed<'a, F> {
    spec: &'a IntegrandSpec<F>,
    axis: Axis,
}

impl<F: Fn(AxisPoint) -> LogScaled<f64>> Transformed<'_, F> {
    /// Signed value and log-magnitude of the transformed integrand.
    fn eval(&self, t: f64) -> Result<LogScaled<f64>> {
        let v = (self.spec.evaluator)(self.axis.point(t));
        if v.log_mag().is_nan() || v.log_mag() == f64::INFINITY {
            return Err(QError::NonConvergent(format!(
                "integrand is not finite at t = {t}"
            )));
        }
        Ok(v.shift_log(self.axis.ln_jacobian(t)))
    }

    fn value(&self, t: f64) -> Result<f64> {
        let v = self.eval(t)?.to_value();
        if !v.is_finite() {
            return Err(QError::NonConvergent(format!(
                "integrand overflows at t = {t}"
            )));
        }
        Ok(v)
    }
}

/// Walk from `peak` in direction `dir` until the tail beyond the current
/// point is estimated below `target`. Returns the stopping point and the
/// tail estimate there.
fn march<F: Fn(AxisPoint) -> LogScaled<f64>>(
    g: &Transformed<'_, F>,
    peak: f64,
    dir: f64,
    step: f64,
    c: f64,
    ln_target: f64,
) -> Result<(f64, f64)> {
    let mut history: Vec<f64> = Vec::with_capacity(64);
    for i in 1..=MAX_MARCH {
        let t = peak + dir * step * i as f64;
        history.push(g.eval(t)?.log_mag());
        if history.len() < 2 * WINDOW {
            continue;
        }
        let n = history.len();
        let env = history[n - WINDOW..]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if env == f64::NEG_INFINITY {
            return Ok((t, 0.0));
        }
        let env_prev = history[n - 2 * WINDOW..n - WINDOW]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let observed = (env_prev - env) / (WINDOW as f64 * step);
        if !(observed > 0.0) {
            continue;
        }
        let rate = observed.min(2.0 * c * (t - peak).abs());
        let ln_tail = env - rate.ln();
        if ln_tail < ln_target {
            return Ok((t, ln_tail.exp()));
        }
    }
    Err(QError::NonConvergent(
        "integrand does not decay within the marching budget".into(),
    ))
}

fn integrate<F>(
    spec: &IntegrandSpec<F>,
    tol: f64,
    axis: Axis,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    F: Fn(AxisPoint) -> LogScaled<f64>,
{
    check_tol(tol)?;
    if !(spec.decay_scale > 0.0 && spec.decay_scale.is_finite()) {
        return Err(QError::DomainError(format!(
            "decay scale must be positive, got {}",
            spec.decay_scale
        )));
    }
    if opts.initial_panels < 2 || opts.max_panels < opts.initial_panels {
        return Err(QError::DomainError("invalid panel limits".into()));
    }
    let g = Transformed { spec, axis };
    let c = spec.decay_scale / 2.0;

    // locate the bulk
    let s = 4.0 + (((1.0 / tol).ln().max(0.0) + 60.0) / c).sqrt();
    let mut peak = 0.0;
    let mut peak_log = f64::NEG_INFINITY;
    for i in 0..SCAN_POINTS {
        let t = -s + 2.0 * s * i as f64 / (SCAN_POINTS - 1) as f64;
        let l = g.eval(t)?.log_mag();
        if l > peak_log {
            peak_log = l;
            peak = t;
        }
    }
    if peak_log == f64::NEG_INFINITY {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            panels: opts.initial_panels,
            truncation_radius: s,
        });
    }

    // Gaussian-model radius, then the marched window
    let ln_arg = (4.0f64).ln() + peak_log - tol.ln() - 0.5 * (std::f64::consts::PI * c).ln();
    let v_model = (ln_arg.max(0.0) / c).sqrt();
    let ln_target = (tol / 8.0).ln();
    let step = 0.5 / c.sqrt();
    let (right, tail_r) = march(&g, peak, 1.0, step, c, ln_target)?;
    let (left, tail_l) = march(&g, peak, -1.0, step, c, ln_target)?;
    let radius = v_model.max(right.abs()).max(left.abs()) * opts.radius_scale;
    let tail = tail_r + tail_l;

    let mut n = opts.initial_panels;
    let mut h = 2.0 * radius / n as f64;
    let mut acc = NeumaierSum::new();
    acc.add(0.5 * g.value(-radius)?);
    acc.add(0.5 * g.value(radius)?);
    for j in 1..n {
        acc.add(g.value(-radius + h * j as f64)?);
    }
    let mut estimate = h * acc.sum();
    loop {
        // add midpoints of the current panels
        for j in 0..n {
            acc.add(g.value(-radius + h * (j as f64 + 0.5))?);
        }
        n *= 2;
        h = 2.0 * radius / n as f64;
        let next = h * acc.sum();
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol / 2.0 {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: diff + tail,
                panels: n,
                truncation_radius: radius,
            });
        }
        if n >= opts.max_panels {
            return Err(QError::NonConvergent(format!(
                "trapezoid rule did not settle within {} panels (last change {diff:e})",
                opts.max_panels
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(p: AxisPoint) -> LogScaled<f64> {
        LogScaled::from_parts(1.0, -p.t * p.t)
    }

    #[test]
    fn gaussian_integral() {
        let spec = IntegrandSpec::new(gaussian, 2.0);
        let r = integrate_line(&spec, 1e-10).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!(r.error_estimate >= 0.0);
        assert!(r.panels >= 128);
    }

    #[test]
    fn shifted_peak_is_found() {
        let spec = IntegrandSpec::new(
            |p: AxisPoint| LogScaled::from_parts(1.0, -(p.t - 7.0) * (p.t - 7.0)),
            2.0,
        );
        let r = integrate_line(&spec, 1e-10).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn exponential_tails_are_followed() {
        // 1 / cosh t integrates to pi and only decays exponentially
        let spec = IntegrandSpec::new(
            |p: AxisPoint| {
                let a = p.t.abs();
                LogScaled::from_parts(1.0, -a + std::f64::consts::LN_2 - (-2.0 * a).exp().ln_1p())
            },
            2.0,
        );
        let r = integrate_line(&spec, 1e-9).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn log_axis_lognormal() {
        // int_0^inf exp(-ln^2 u) du = sqrt(pi) e^{1/4}
        let spec = IntegrandSpec::new(|p: AxisPoint| LogScaled::from_parts(1.0, -p.t * p.t), 2.0);
        let r = integrate_log_axis(&spec, 1e-10).unwrap();
        let exact = std::f64::consts::PI.sqrt() * 0.25f64.exp();
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn sinh_axis_jacobian() {
        // int_R exp(-asinh^2 x) dx = sqrt(pi) e^{1/4}
        let spec = IntegrandSpec::new(|p: AxisPoint| LogScaled::from_parts(1.0, -p.t * p.t), 2.0);
        let r = integrate_sinh_axis(&spec, 1e-10).unwrap();
        let exact = std::f64::consts::PI.sqrt() * 0.25f64.exp();
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn zero_integrand() {
        let spec = IntegrandSpec::new(|_: AxisPoint| LogScaled::zero(), 1.0);
        let r = integrate_line(&spec, 1e-8).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn panel_cap_reports_non_convergence() {
        let spec = IntegrandSpec::new(gaussian, 2.0);
        let opts = QuadratureOptions {
            initial_panels: 2,
            max_panels: 4,
            radius_scale: 1.0,
        };
        assert!(matches!(
            integrate_line_with(&spec, 1e-14, &opts),
            Err(QError::NonConvergent(_))
        ));
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let spec = IntegrandSpec::new(|_: AxisPoint| LogScaled::from_parts(1.0, f64::NAN), 1.0);
        assert!(integrate_line(&spec, 1e-8).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let spec = IntegrandSpec::new(gaussian, 0.0);
        assert!(integrate_line(&spec, 1e-8).is_err());
        let spec = IntegrandSpec::new(gaussian, 2.0);
        assert!(integrate_line(&spec, 0.0).is_err());
    }
}
