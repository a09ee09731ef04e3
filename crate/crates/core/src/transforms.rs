//! Truncated moments, tail integrals and the Williamson transform.
//!
//! For a model with tail `T = 1 - F` and `alpha > 0`:
//!
//! * `W(x)    = int_0^x y^(alpha-1) T(y) dy`
//! * `H(x)    = alpha W(x) - x^alpha T(x)`, the truncated moment `int_[0,x] y^alpha dF`
//! * `Wbar(x) = int_x^inf y^(alpha-1) T(y) dy`
//! * `G(x)    = alpha x^-alpha int_0^x t^(alpha-1) F(t) dt`, the Williamson transform
//! * `Gbar(x) = alpha x^-alpha W(x)`
//! * `G'(x)   = alpha x^(-alpha-1) H(x)`
//! * `G''(x)  = (alpha f(x) - (alpha+1) G'(x)) / x`
//!
//! `H` always goes through the tail-integral form so atoms, steps and
//! densities share one code path. Empirical models bypass quadrature and use
//! exact finite sums.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{DistributionModel, TailDecay};
use crate::quadrature::{integrate_finite, integrate_tail, DecayHint, QuadratureConfig, QuadratureResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    H,
    W,
    Wbar,
    G,
    Gbar,
    Gprime,
    Gsecond,
}

impl TransformKind {
    pub const ALL: [TransformKind; 7] = [
        TransformKind::H,
        TransformKind::W,
        TransformKind::Wbar,
        TransformKind::G,
        TransformKind::Gbar,
        TransformKind::Gprime,
        TransformKind::Gsecond,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::H => "H",
            TransformKind::W => "W",
            TransformKind::Wbar => "Wbar",
            TransformKind::G => "G",
            TransformKind::Gbar => "Gbar",
            TransformKind::Gprime => "Gprime",
            TransformKind::Gsecond => "Gsecond",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TransformKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown transform kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams {
    pub alpha: f64,
    pub quad: QuadratureConfig,
}

impl TransformParams {
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_quad(alpha, QuadratureConfig::default())
    }

    pub fn with_quad(alpha: f64, quad: QuadratureConfig) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain("alpha", alpha, "must be finite and strictly positive"));
        }
        quad.validate()?;
        Ok(Self { alpha, quad })
    }
}

/// A nonnegative quantity that may be `+inf`, such as the moment `m(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

fn check_x(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("x", x, "must be finite and nonnegative"))
    }
}

/// Integrates `y^(alpha-1) g(y)` over `[a, b]`.
///
/// Panels are pre-split at the model breakpoints and at decades so power-law
/// integrands resolve without deep bisection. For `alpha < 1` the head
/// `[0, c]` is integrated in `v = y^alpha`, which removes the endpoint
/// singularity.
fn power_weighted<F: Fn(f64) -> f64>(
    g: F,
    alpha: f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let mut acc = QuadratureResult {
        value: 0.0,
        abs_error_estimate: 0.0,
        subdivisions: 0,
        converged: true,
    };
    if b <= a {
        return Ok(acc);
    }
    let add = |acc: &mut QuadratureResult, r: QuadratureResult| {
        acc.value += r.value;
        acc.abs_error_estimate += r.abs_error_estimate;
        acc.subdivisions += r.subdivisions;
        acc.converged &= r.converged;
    };

    let first_bp = breakpoints.iter().copied().find(|&p| p > 0.0).unwrap_or(1.0);
    let head_end = b.min(first_bp.min(1.0));

    let mut lo = a;
    if a == 0.0 && alpha < 1.0 {
        let inv = 1.0 / alpha;
        let head = integrate_finite(|v: f64| g(v.powf(inv)), 0.0, head_end.powf(alpha), &[], cfg)?;
        add(
            &mut acc,
            QuadratureResult {
                value: head.value / alpha,
                abs_error_estimate: head.abs_error_estimate / alpha,
                ..head
            },
        );
        lo = head_end;
    }
    if b <= lo {
        return Ok(acc);
    }

    let mut cuts: Vec<f64> = breakpoints.to_vec();
    let mut decade = if lo > 0.0 { lo * 10.0 } else { head_end };
    while decade < b {
        cuts.push(decade);
        decade *= 10.0;
    }
    let body = integrate_finite(
        |y: f64| {
            let gy = g(y);
            if gy == 0.0 {
                0.0
            } else {
                y.powf(alpha - 1.0) * gy
            }
        },
        lo,
        b,
        &cuts,
        cfg,
    )?;
    add(&mut acc, body);
    Ok(acc)
}

/// `W(x) = int_0^x y^(alpha-1) T(y) dy`.
pub fn tail_integral(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if let Some(d) = model.empirical() {
        return Ok(d.tail_integral(p.alpha, x));
    }
    power_weighted(|y| model.tail(y), p.alpha, 0.0, x, model.breakpoints(), &p.quad)?
        .require_converged(format!("W at x={x} for {}", model.name()))
}

/// Decay exponent slack for slowly varying factors that grow.
fn log_slack(p: f64, log_power: f64) -> f64 {
    if log_power > 0.0 {
        p - ((p - 1.0) / 2.0).min(0.1)
    } else {
        p
    }
}

/// `int_x^inf y^(alpha-1) T(y) dy` for `x > 0`, or a divergence error.
fn tail_integral_complement_from(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    let alpha = p.alpha;
    if let Some(d) = model.empirical() {
        return Ok(d.tail_integral_complement(alpha, x));
    }
    let integrand = |y: f64| {
        let t = model.tail(y);
        if t == 0.0 {
            0.0
        } else {
            y.powf(alpha - 1.0) * t
        }
    };
    let context = || format!("Wbar at x={x} for {}", model.name());
    let hint = match model.tail_decay() {
        TailDecay::BoundedSupport { sup } => {
            if x >= sup {
                return Ok(0.0);
            }
            return power_weighted(|y| model.tail(y), alpha, x, sup, model.breakpoints(), &p.quad)?
                .require_converged(context());
        }
        TailDecay::RegularlyVarying { index, log_power } => {
            if alpha > index || (alpha == index && log_power >= -1.0) {
                return Err(Error::Divergence(format!(
                    "W_alpha(inf) is infinite for alpha={alpha} and tail index {index}"
                )));
            }
            (alpha < index).then(|| DecayHint::new(log_slack(index - alpha + 1.0, log_power)))
        }
        TailDecay::Exponential => Some(DecayHint::new(2.0)),
        TailDecay::Unknown => None,
    };
    integrate_tail(integrand, x, hint, model.breakpoints(), &p.quad)?.require_converged(context())
}

/// `Wbar(x) = W(inf) - W(x)`; `x = 0` gives `W(inf)`.
pub fn tail_integral_complement(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x > 0.0 {
        return tail_integral_complement_from(model, p, x);
    }
    match moment(model, p)? {
        ExtendedReal::Finite(m) => Ok(m / p.alpha),
        ExtendedReal::Infinite => Err(Error::Divergence(format!(
            "W_alpha(inf) is infinite for alpha={} on {}",
            p.alpha,
            model.name()
        ))),
    }
}

/// `H(x) = alpha W(x) - x^alpha T(x)`.
pub fn truncated_moment(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let w = tail_integral(model, p, x)?;
    let t = model.tail(x);
    let edge = if t == 0.0 { 0.0 } else { x.powf(p.alpha) * t };
    Ok(p.alpha * w - edge)
}

/// `G(x) = alpha x^-alpha int_0^x t^(alpha-1) F(t) dt`, computed from the d.f.
/// and independent of the tail route.
pub fn williamson(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let alpha = p.alpha;
    if let Some(d) = model.empirical() {
        // int_0^x t^(alpha-1) F = x^alpha / alpha - W(x)
        return Ok(1.0 - alpha * d.tail_integral(alpha, x) / x.powf(alpha));
    }
    let integral = power_weighted(|t| model.cdf(t), alpha, 0.0, x, model.breakpoints(), &p.quad)?
        .require_converged(format!("G at x={x} for {}", model.name()))?;
    Ok(alpha * integral / x.powf(alpha))
}

/// `Gbar(x) = alpha x^-alpha W(x)`.
pub fn williamson_tail(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(p.alpha * tail_integral(model, p, x)? / x.powf(p.alpha))
}

fn require_positive_x(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} needs x > 0, got {x}")))
    }
}

/// `G'(x) = alpha x^(-alpha-1) H(x)`.
pub fn williamson_derivative(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    require_positive_x(x, "G'")?;
    Ok(p.alpha * truncated_moment(model, p, x)? / x.powf(p.alpha + 1.0))
}

/// `G''(x) = (alpha f(x) - (alpha+1) G'(x)) / x`; needs a density.
pub fn williamson_second_derivative(
    model: &DistributionModel,
    p: &TransformParams,
    x: f64,
) -> Result<f64> {
    require_positive_x(x, "G''")?;
    let f = model.density(x).ok_or_else(|| {
        Error::Capability(format!("G'' needs a density; {} has none", model.name()))
    })?;
    let gp = williamson_derivative(model, p, x)?;
    Ok((p.alpha * f - (p.alpha + 1.0) * gp) / x)
}

/// Evaluates one transform at `x >= 0`.
pub fn evaluate_transform(
    model: &DistributionModel,
    kind: TransformKind,
    p: &TransformParams,
    x: f64,
) -> Result<f64> {
    match kind {
        TransformKind::H => truncated_moment(model, p, x),
        TransformKind::W => tail_integral(model, p, x),
        TransformKind::Wbar => tail_integral_complement(model, p, x),
        TransformKind::G => williamson(model, p, x),
        TransformKind::Gbar => williamson_tail(model, p, x),
        TransformKind::Gprime => williamson_derivative(model, p, x),
        TransformKind::Gsecond => williamson_second_derivative(model, p, x),
    }
}

/// `m(alpha) = alpha W(inf)`; `+inf` when the tail integral diverges.
pub fn moment(model: &DistributionModel, p: &TransformParams) -> Result<ExtendedReal> {
    let alpha = p.alpha;
    if let Some(d) = model.empirical() {
        return Ok(ExtendedReal::Finite(d.moment(alpha)));
    }
    if let Some(threshold) = model.moment_divergence_threshold() {
        if alpha >= threshold {
            return Ok(ExtendedReal::Infinite);
        }
    }
    let split = match model.tail_decay() {
        TailDecay::BoundedSupport { sup } => sup,
        _ => model.breakpoints().last().copied().unwrap_or(1.0).max(1.0),
    };
    let head = tail_integral(model, p, split)?;
    match tail_integral_complement_from(model, p, split) {
        Ok(rest) => Ok(ExtendedReal::Finite(alpha * (head + rest))),
        Err(Error::Divergence(_)) => Ok(ExtendedReal::Infinite),
        Err(e) => Err(e),
    }
}

/// Decay exponent of `z^(-alpha-1) H(z)`.
fn inversion_hint(model: &DistributionModel, alpha: f64) -> Option<DecayHint> {
    match model.tail_decay() {
        TailDecay::BoundedSupport { .. } | TailDecay::Exponential => Some(DecayHint::new(alpha + 1.0)),
        TailDecay::RegularlyVarying { index, log_power } => {
            let p = 1.0 + alpha.min(index);
            // H grows like a power of log when alpha >= index.
            let grows = alpha > index && log_power > 0.0 || alpha == index && log_power > -1.0;
            Some(DecayHint::new(if grows { log_slack(p, 1.0) } else { p }))
        }
        TailDecay::Unknown => None,
    }
}

/// Recovers the tail from `H`: `T(x) = alpha int_x^inf z^(-alpha-1) H(z) dz - x^-alpha H(x)`.
/// Returns the value and the quadrature error estimate.
pub fn invert_tail_from_h_estimate(
    model: &DistributionModel,
    p: &TransformParams,
    x: f64,
) -> Result<(f64, f64)> {
    require_positive_x(x, "tail inversion")?;
    let alpha = p.alpha;
    // Inner evaluations run tighter so their noise stays below the outer tolerance.
    let inner = TransformParams {
        alpha,
        quad: QuadratureConfig {
            rel_tol: (p.quad.rel_tol * 1e-2).max(1e-13),
            abs_tol: p.quad.abs_tol * 1e-2,
            ..p.quad
        },
    };
    let h_at = |z: f64| truncated_moment(model, &inner, z);

    // The integrand closure cannot return errors, so the first one is kept
    // aside and surfaced after integration.
    let failure = std::sync::Mutex::new(None::<Error>);
    let integrand = |z: f64| match h_at(z) {
        Ok(h) if h == 0.0 => 0.0,
        Ok(h) => h * z.powf(-alpha - 1.0),
        Err(e) => {
            failure.lock().expect("poisoned").get_or_insert(e);
            0.0
        }
    };
    let tail = integrate_tail(integrand, x, inversion_hint(model, alpha), model.breakpoints(), &p.quad);
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    let tail = tail?;
    let value = tail
        .require_converged(format!("tail inversion at x={x} for {}", model.name()))?;
    let h = h_at(x)?;
    Ok((alpha * value - h / x.powf(alpha), alpha * tail.abs_error_estimate))
}

pub fn invert_tail_from_h(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    invert_tail_from_h_estimate(model, p, x).map(|(v, _)| v)
}

/// Central-difference step `x * cbrt(eps)`.
pub fn difference_step(x: f64) -> f64 {
    x * f64::EPSILON.cbrt()
}

/// `G'(x)` by central difference of the d.f. route for `G`.
pub fn williamson_derivative_fd(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    require_positive_x(x, "finite-difference G'")?;
    let h = difference_step(x);
    if let Some(bp) = model.breakpoints().iter().find(|&&b| (b - x).abs() <= h) {
        return Err(Error::Precondition(format!(
            "x={x} lies within {h:e} of breakpoint {bp}; use the exact identity G' = alpha x^(-alpha-1) H instead"
        )));
    }
    let up = williamson(model, p, x + h)?;
    let down = williamson(model, p, x - h)?;
    Ok((up - down) / (2.0 * h))
}

/// Recovers the d.f. from the Williamson transform: `F(x) = G(x) + (x / alpha) G'(x)`,
/// with `G'` by central difference.
pub fn invert_f_from_g(model: &DistributionModel, p: &TransformParams, x: f64) -> Result<f64> {
    let gp = williamson_derivative_fd(model, p, x)?;
    let g = williamson(model, p, x)?;
    Ok(g + x / p.alpha * gp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{make_model, FamilySpec};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn model(spec: FamilySpec) -> DistributionModel {
        make_model(&spec).unwrap()
    }

    fn params(alpha: f64) -> TransformParams {
        TransformParams::new(alpha).unwrap()
    }

    fn degenerate() -> DistributionModel {
        model(FamilySpec::Degenerate { atom: 2.0 })
    }

    fn pareto(beta: f64) -> DistributionModel {
        model(FamilySpec::Pareto { beta, scale: 1.0 })
    }

    #[test]
    fn kind_round_trips_through_text() {
        for k in TransformKind::ALL {
            assert_eq!(k.as_str().parse::<TransformKind>().unwrap(), k);
        }
        assert!("Q".parse::<TransformKind>().is_err());
    }

    #[test]
    fn alpha_must_be_positive() {
        assert!(matches!(TransformParams::new(0.0), Err(Error::Domain { .. })));
        assert!(matches!(TransformParams::new(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn single_atom_values() {
        let m = degenerate();
        let p = params(1.0);
        assert_abs_diff_eq!(evaluate_transform(&m, TransformKind::H, &p, 3.0).unwrap(), 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            evaluate_transform(&m, TransformKind::G, &p, 3.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn pareto_truncated_moment() {
        // H_2(x) = x - 1 for the unit Pareto with beta = 1.
        let v = evaluate_transform(&pareto(1.0), TransformKind::H, &params(2.0), 10.0).unwrap();
        assert_relative_eq!(v, 9.0, max_relative = 1e-12);
    }

    #[test]
    fn boundary_tail_integral() {
        // W_2(x) = 1/2 + log x
        let m = model(FamilySpec::BoundaryRv { alpha0: 2.0 });
        let v = evaluate_transform(&m, TransformKind::W, &params(2.0), std::f64::consts::E).unwrap();
        assert_relative_eq!(v, 1.5, max_relative = 1e-12);
    }

    #[test]
    fn williamson_derivative_exact_and_fd() {
        let m = pareto(1.0);
        let p = params(2.0);
        let exact = evaluate_transform(&m, TransformKind::Gprime, &p, 10.0).unwrap();
        assert_relative_eq!(exact, 0.018, max_relative = 1e-12);
        let fd = williamson_derivative_fd(&m, &p, 10.0).unwrap();
        assert_relative_eq!(fd, 0.018, max_relative = 1e-7);
    }

    #[test]
    fn zero_conventions() {
        let m = model(FamilySpec::Exponential { rate: 1.0 });
        let p = params(2.0);
        for k in [TransformKind::H, TransformKind::W, TransformKind::G] {
            assert_eq!(evaluate_transform(&m, k, &p, 0.0).unwrap(), 0.0);
        }
        assert_eq!(evaluate_transform(&m, TransformKind::Gbar, &p, 0.0).unwrap(), 1.0);
        // W_2(inf) = Gamma(2) = 1
        assert_relative_eq!(
            evaluate_transform(&m, TransformKind::Wbar, &p, 0.0).unwrap(),
            1.0,
            max_relative = 1e-10
        );
        assert!(matches!(
            evaluate_transform(&m, TransformKind::Gprime, &p, 0.0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            evaluate_transform(&m, TransformKind::W, &p, -1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn wbar_on_infinite_moment_is_divergence() {
        let err = evaluate_transform(&pareto(1.0), TransformKind::Wbar, &params(2.0), 5.0).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)));
        let err = evaluate_transform(&pareto(1.0), TransformKind::Wbar, &params(2.0), 0.0).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)));
    }

    #[test]
    fn wbar_unknown_decay_detects_divergence() {
        let heavy = DistributionModel::from_fns(
            "heavy",
            |x: f64| 1.0 - 1f64.min(1.0 / x),
            |x: f64| 1f64.min(1.0 / x),
            vec![1.0],
        );
        let err = evaluate_transform(&heavy, TransformKind::Wbar, &params(1.5), 2.0).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)));
        assert_eq!(moment(&heavy, &params(1.5)).unwrap(), ExtendedReal::Infinite);
        // alpha = 0.5: Wbar(x) = 2 x^-1/2
        let v = evaluate_transform(&heavy, TransformKind::Wbar, &params(0.5), 4.0).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn gsecond_needs_density() {
        let err = evaluate_transform(&degenerate(), TransformKind::Gsecond, &params(1.0), 3.0).unwrap_err();
        assert!(matches!(err, Error::Capability(_)));
    }

    #[test]
    fn moments() {
        assert_eq!(moment(&degenerate(), &params(3.0)).unwrap(), ExtendedReal::Finite(8.0));
        let exp = model(FamilySpec::Exponential { rate: 1.0 });
        // Gamma(3) = 2; oracle: 2 int_0^inf y e^-y dy
        assert_relative_eq!(moment(&exp, &params(2.0)).unwrap().to_f64(), 2.0, max_relative = 1e-10);
        // 2 (1/2 + 1)
        assert_relative_eq!(moment(&pareto(3.0), &params(2.0)).unwrap().to_f64(), 3.0, max_relative = 1e-10);
        assert_eq!(moment(&pareto(1.0), &params(2.0)).unwrap(), ExtendedReal::Infinite);
        let emp = model(FamilySpec::EmpiricalSamples(vec![1.0, 2.0, 2.0, 4.0]));
        assert_eq!(moment(&emp, &params(1.0)).unwrap(), ExtendedReal::Finite(2.25));
    }

    #[test]
    fn moment_of_exponential_by_independent_quadrature() {
        for alpha in [0.5, 1.0, 2.0, 3.5] {
            let exp = model(FamilySpec::Exponential { rate: 1.0 });
            let m = moment(&exp, &params(alpha)).unwrap().to_f64();
            // E X^alpha = int_0^inf y^alpha e^-y dy, brute force on [0, 60].
            let oracle = integrate_finite(
                |y: f64| y.powf(alpha) * (-y).exp(),
                0.0,
                60.0,
                &[1.0, 5.0, 10.0, 20.0, 40.0],
                &QuadratureConfig::default(),
            )
            .unwrap()
            .value;
            assert_relative_eq!(m, oracle, max_relative = 1e-9);
        }
    }

    #[test]
    fn tail_inversion_single_atom() {
        let m = degenerate();
        let p = params(1.0);
        assert_abs_diff_eq!(invert_tail_from_h(&m, &p, 3.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(invert_tail_from_h(&m, &p, 1.0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tail_inversion_pareto() {
        // 2 (0.1 - 0.005) - 0.09
        let v = invert_tail_from_h(&pareto(1.0), &params(2.0), 10.0).unwrap();
        assert_abs_diff_eq!(v, 0.1, epsilon = 1e-10);
    }

    #[test]
    fn cdf_inversion() {
        let p1 = params(1.0);
        assert_abs_diff_eq!(invert_f_from_g(&degenerate(), &p1, 3.0).unwrap(), 1.0, epsilon = 1e-8);
        let v = invert_f_from_g(&pareto(1.0), &params(2.0), 10.0).unwrap();
        assert_relative_eq!(v, 0.9, max_relative = 1e-6);
        let exp = model(FamilySpec::Exponential { rate: 1.0 });
        let v = invert_f_from_g(&exp, &p1, 1.0).unwrap();
        assert_relative_eq!(v, 1.0 - (-1f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn cdf_inversion_refuses_atoms() {
        let err = invert_f_from_g(&degenerate(), &params(1.0), 2.0).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(err.to_string().contains("exact identity"));
    }

    #[test]
    fn numeric_matches_closed_forms() {
        let models = [
            pareto(1.0),
            pareto(3.0),
            model(FamilySpec::Pareto { beta: 1.5, scale: 2.0 }),
            model(FamilySpec::BoundaryRv { alpha0: 2.0 }),
            degenerate(),
        ];
        for m in &models {
            for alpha in [0.5, 1.0, 1.5, 2.0, 3.5] {
                let p = params(alpha);
                for x in [0.3, 1.7, 2.5, 10.0, 1e3, 1e6] {
                    for kind in TransformKind::ALL {
                        let Some(exact) = m.closed_form(kind, alpha, x) else {
                            continue;
                        };
                        if m.breakpoints().contains(&x) {
                            continue;
                        }
                        let v = evaluate_transform(m, kind, &p, x).unwrap();
                        // H = alpha W - x^alpha T cancels down to x^alpha T.
                        let scale = exact.abs() + x.powf(alpha) * m.tail(x);
                        let tol = 1e-9 * scale + 1e-13;
                        assert!(
                            (v - exact).abs() <= tol,
                            "{} {kind} alpha={alpha} x={x}: {v} vs {exact}",
                            m.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn williamson_pair_sums_to_one() {
        let models = [
            pareto(1.0),
            model(FamilySpec::ParetoLog { beta: 2.5, log_power: 1.0 }),
            model(FamilySpec::Exponential { rate: 1.0 }),
            degenerate(),
        ];
        for m in &models {
            for alpha in [0.5, 1.0, 2.0, 3.5] {
                let p = params(alpha);
                for k in 0..21 {
                    let x = 0.1 * 2.5f64.powi(k);
                    let g = williamson(m, &p, x).unwrap();
                    let gb = williamson_tail(m, &p, x).unwrap();
                    assert!((g + gb - 1.0).abs() <= 1e-9, "{} alpha={alpha} x={x}", m.name());
                }
            }
        }
    }

    #[test]
    fn williamson_is_a_distribution_function() {
        let m = model(FamilySpec::ParetoLog { beta: 1.5, log_power: -2.0 });
        for alpha in [0.5, 2.0] {
            let p = params(alpha);
            let grid: Vec<f64> = (0..40).map(|k| 1e-3 * 1.6f64.powi(k)).collect();
            let g: Vec<f64> = grid.iter().map(|&x| williamson(&m, &p, x).unwrap()).collect();
            assert!(g.windows(2).all(|w| w[0] <= w[1] + 1e-15));
            assert!(g[0] < 1e-6);
        }
    }
}
