//! Numerical checks of the asymptotic equivalences between the tail, the
//! truncated moment `H`, the tail integral `W` and the Williamson transform.
//!
//! Every check evaluates a ratio on an ascending grid of `x` and compares it
//! with its theoretical limit. A check converges only if the final error is
//! below tolerance *and* the errors over the last few grid points do not
//! increase, so a single lucky grid point cannot pass.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::DistributionModel;
use crate::quadrature::{integrate_finite, integrate_tail, QuadratureConfig};
use crate::transforms::{
    moment, tail_integral, tail_integral_complement, truncated_moment, williamson_derivative,
    williamson_second_derivative, williamson_tail, TransformParams,
};

/// Denominators below this are treated as underflow.
pub const UNDERFLOW: f64 = 1e-300;


#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticItem {
    T1d,
    T1f,
    T1g,
    T1h,
    T2d,
    T2e,
    T2g,
    C1,
    C2,
    C3,
}

impl DiagnosticItem {
    pub const ALL: [DiagnosticItem; 10] = [
        DiagnosticItem::T1d,
        DiagnosticItem::T1f,
        DiagnosticItem::T1g,
        DiagnosticItem::T1h,
        DiagnosticItem::T2d,
        DiagnosticItem::T2e,
        DiagnosticItem::T2g,
        DiagnosticItem::C1,
        DiagnosticItem::C2,
        DiagnosticItem::C3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            DiagnosticItem::T1d => "T1d",
            DiagnosticItem::T1f => "T1f",
            DiagnosticItem::T1g => "T1g",
            DiagnosticItem::T1h => "T1h",
            DiagnosticItem::T2d => "T2d",
            DiagnosticItem::T2e => "T2e",
            DiagnosticItem::T2g => "T2g",
            DiagnosticItem::C1 => "C1",
            DiagnosticItem::C2 => "C2",
            DiagnosticItem::C3 => "C3",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DiagnosticItem::T1d => "T(x) / Gbar(x) -> theta / alpha",
            DiagnosticItem::T1f => "x^alpha T(x) / H(x) -> theta / (alpha - theta)",
            DiagnosticItem::T1g => "x^alpha Gbar(x) / H(x) -> alpha / (alpha - theta)",
            DiagnosticItem::T1h => "x^alpha T(x) / W(x) -> theta",
            DiagnosticItem::T2d => "Wbar(x) / (x^alpha T(x)) -> 1 / (theta - alpha)",
            DiagnosticItem::T2e => "(x^-alpha m - Gbar(x)) / T(x) -> alpha / (theta - alpha)",
            DiagnosticItem::T2g => "(m - H(x)) / (x^alpha T(x)) -> theta / (theta - alpha)",
            DiagnosticItem::C1 => "x^alpha Gbar(x) -> m",
            DiagnosticItem::C2 => "x^(1+alpha) G'(x) -> alpha m",
            DiagnosticItem::C3 => "x^(2+alpha) G''(x) -> -alpha (alpha + 1) m",
        }
    }

    /// Ratios whose limits are stated for `0 <= theta <= alpha`.
    pub fn is_regular_regime(self) -> bool {
        matches!(
            self,
            DiagnosticItem::T1d | DiagnosticItem::T1f | DiagnosticItem::T1g | DiagnosticItem::T1h
        )
    }

    /// Ratios whose limits are stated for `theta > alpha` with a finite moment.
    pub fn is_finite_moment_regime(self) -> bool {
        matches!(self, DiagnosticItem::T2d | DiagnosticItem::T2e | DiagnosticItem::T2g)
    }

    pub fn is_corollary(self) -> bool {
        matches!(self, DiagnosticItem::C1 | DiagnosticItem::C2 | DiagnosticItem::C3)
    }

    /// Theoretical limit; `m` is the moment `m(alpha)`, only used by the corollary items.
    pub fn limit_formula(self, alpha: f64, theta: f64, m: f64) -> f64 {
        match self {
            DiagnosticItem::T1d => theta / alpha,
            DiagnosticItem::T1f => theta / (alpha - theta),
            DiagnosticItem::T1g => alpha / (alpha - theta),
            DiagnosticItem::T1h => theta,
            DiagnosticItem::T2d => 1.0 / (theta - alpha),
            DiagnosticItem::T2e => alpha / (theta - alpha),
            DiagnosticItem::T2g => theta / (theta - alpha),
            DiagnosticItem::C1 => m,
            DiagnosticItem::C2 => alpha * m,
            DiagnosticItem::C3 => -alpha * (alpha + 1.0) * m,
        }
    }
}

impl fmt::Display for DiagnosticItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for DiagnosticItem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiagnosticItem::ALL
            .into_iter()
            .find(|d| d.id() == s)
            .ok_or_else(|| Error::Input(format!("unknown diagnostic item `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticOptions {
    /// Relative tolerance on the final ratio.
    pub ratio_rel: f64,
    /// Absolute tolerance used when the limit is zero.
    pub zero_abs: f64,
    /// Number of trailing grid errors that must be nonincreasing.
    pub tail_k: usize,
    /// Bound on `x f(x) / T(x)` over the grid for the `G''` check.
    pub density_ratio_bound: f64,
    /// Errors below this are treated as rounding noise by the monotonicity check.
    pub noise_floor: f64,
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        Self {
            ratio_rel: 0.01,
            zero_abs: 1e-3,
            tail_k: 3,
            density_ratio_bound: 1e3,
            noise_floor: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportKind {
    Item(DiagnosticItem),
    Karamata { rho: f64 },
}

impl ReportKind {
    pub fn label(&self) -> String {
        match self {
            ReportKind::Item(item) => item.id().to_string(),
            ReportKind::Karamata { rho } => format!("karamata(rho={rho})"),
        }
    }
}

/// An auxiliary limit folded into a report, e.g. `x^alpha T(x) -> 0` for C1.
#[derive(Debug, Clone, PartialEq)]
pub struct SideCheck {
    pub name: String,
    pub final_value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticReport {
    pub kind: ReportKind,
    pub alpha: f64,
    pub theta: f64,
    pub grid: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Relative error per grid point (absolute when the limit is zero).
    pub errors: Vec<f64>,
    pub theoretical_limit: f64,
    pub final_rel_error: f64,
    pub converged: bool,
    pub monotone_tail_of_errors: bool,
    pub side_checks: Vec<SideCheck>,
    pub notes: Vec<String>,
}

impl DiagnosticReport {
    fn assemble(
        kind: ReportKind,
        alpha: f64,
        theta: f64,
        grid: Vec<f64>,
        ratios: Vec<f64>,
        limit: f64,
        opts: &DiagnosticOptions,
    ) -> Self {
        let errors: Vec<f64> = ratios.iter().map(|&r| limit_error(r, limit)).collect();
        let final_rel_error = errors.last().copied().unwrap_or(f64::INFINITY);
        let monotone = trailing_nonincreasing(&errors, opts.tail_k, opts.noise_floor);
        let tol = if limit == 0.0 { opts.zero_abs } else { opts.ratio_rel };
        Self {
            kind,
            alpha,
            theta,
            grid,
            ratios,
            errors,
            theoretical_limit: limit,
            final_rel_error,
            converged: final_rel_error < tol && monotone,
            monotone_tail_of_errors: monotone,
            side_checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn push_side_check(&mut self, check: SideCheck) {
        self.converged &= check.passed;
        self.side_checks.push(check);
    }

    /// Error at the grid point closest to `x`.
    pub fn error_near(&self, x: f64) -> Option<f64> {
        self.grid
            .iter()
            .zip(&self.errors)
            .min_by(|a, b| (a.0.ln() - x.ln()).abs().total_cmp(&(b.0.ln() - x.ln()).abs()))
            .map(|(_, &e)| e)
    }
}

/// `|r - L| / |L|`, or `|r|` when `L = 0`.
pub fn limit_error(ratio: f64, limit: f64) -> f64 {
    if limit == 0.0 {
        ratio.abs()
    } else {
        (ratio - limit).abs() / limit.abs()
    }
}

/// The last `k` errors never increase; values at or below `noise_floor` are
/// accepted regardless of trend.
pub fn trailing_nonincreasing(errors: &[f64], k: usize, noise_floor: f64) -> bool {
    let start = errors.len().saturating_sub(k);
    errors[start..]
        .windows(2)
        .all(|w| w[1] <= w[0] || w[1] <= noise_floor)
}

/// `x_k = x0 * factor^k`, `k = 0..count`.
pub fn geometric_grid(x0: f64, factor: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| x0 * factor.powi(k as i32)).collect()
}

/// `10 * 2^k` for `k = 0..=20`.
pub fn default_grid() -> Vec<f64> {
    geometric_grid(10.0, 2.0, 21)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Precondition("grid is empty".into()));
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::domain("grid", x, "grid points must be finite and positive"));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::domain("grid", w[1], "grid must be strictly ascending"));
    }
    Ok(())
}

fn ratio(num: f64, den: f64, quantity: &str, x: f64) -> Result<f64> {
    if den.abs() < UNDERFLOW {
        return Err(Error::Underflow {
            quantity: quantity.to_string(),
            x,
        });
    }
    Ok(num / den)
}

fn finite_moment(model: &DistributionModel, p: &TransformParams, what: &str) -> Result<f64> {
    moment(model, p)?.finite().ok_or_else(|| {
        Error::Precondition(format!(
            "{what} requires m(alpha) < inf, but m({}) is infinite for {}",
            p.alpha,
            model.name()
        ))
    })
}

fn item_value(
    model: &DistributionModel,
    p: &TransformParams,
    item: DiagnosticItem,
    m: f64,
    x: f64,
) -> Result<f64> {
    let alpha = p.alpha;
    let xa = x.powf(alpha);
    let t = model.tail(x);
    match item {
        DiagnosticItem::T1d => ratio(t, williamson_tail(model, p, x)?, "Gbar", x),
        DiagnosticItem::T1f => ratio(xa * t, truncated_moment(model, p, x)?, "H", x),
        DiagnosticItem::T1g => ratio(xa * williamson_tail(model, p, x)?, truncated_moment(model, p, x)?, "H", x),
        DiagnosticItem::T1h => ratio(xa * t, tail_integral(model, p, x)?, "W", x),
        DiagnosticItem::T2d => ratio(tail_integral_complement(model, p, x)?, xa * t, "x^alpha T", x),
        DiagnosticItem::T2e => ratio(m / xa - williamson_tail(model, p, x)?, t, "T", x),
        DiagnosticItem::T2g => ratio(m - truncated_moment(model, p, x)?, xa * t, "x^alpha T", x),
        DiagnosticItem::C1 => Ok(xa * williamson_tail(model, p, x)?),
        DiagnosticItem::C2 => Ok(xa * x * williamson_derivative(model, p, x)?),
        DiagnosticItem::C3 => Ok(xa * x * x * williamson_second_derivative(model, p, x)?),
    }
}

/// Evaluates one ratio item on `grid` and compares it with its limit.
pub fn ratio_diagnostic(
    model: &DistributionModel,
    p: &TransformParams,
    theta: f64,
    item: DiagnosticItem,
    grid: &[f64],
    opts: &DiagnosticOptions,
) -> Result<DiagnosticReport> {
    check_grid(grid)?;
    let alpha = p.alpha;
    if item.is_regular_regime() && !(0.0..=alpha).contains(&theta) {
        return Err(Error::Precondition(format!(
            "{item} needs 0 <= theta <= alpha, got theta={theta}, alpha={alpha}"
        )));
    }
    if item.is_finite_moment_regime() && !(theta > alpha) {
        return Err(Error::Precondition(format!(
            "{item} needs theta > alpha, got theta={theta}, alpha={alpha}"
        )));
    }
    if item == DiagnosticItem::C3 && !model.has_density() {
        return Err(Error::Capability(format!("C3 needs a density; {} has none", model.name())));
    }
    let m = if item.is_finite_moment_regime() || item.is_corollary() {
        finite_moment(model, p, item.id())?
    } else {
        f64::NAN
    };

    let ratios = grid
        .par_iter()
        .map(|&x| item_value(model, p, item, m, x))
        .collect::<Result<Vec<f64>>>()?;
    let limit = item.limit_formula(alpha, theta, m);
    let mut report = DiagnosticReport::assemble(ReportKind::Item(item), alpha, theta, grid.to_vec(), ratios, limit, opts);
    if item == DiagnosticItem::C3 {
        report.notes.push(format!(
            "G'' is scaled by x^(2+delta) with delta fixed to alpha = {alpha}"
        ));
    }
    Ok(report)
}

/// Log-ratio slopes `log(f(tx) / f(x)) / log t` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RVEstimate {
    pub index_hat: f64,
    pub per_scale_slopes: Vec<(f64, f64)>,
    pub t: f64,
}

/// Estimates the regular-variation index of `evaluator`; `index_hat` is the
/// slope at the largest grid point.
pub fn rv_index_estimate<F>(evaluator: F, grid: &[f64], t: f64) -> Result<RVEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_grid(grid)?;
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::domain("t", t, "scale factor must exceed 1"));
    }
    let positive = |x: f64| -> Result<f64> {
        let v = evaluator(x)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain {
                name: format!("f({x})"),
                value: v,
                reason: "evaluator must be strictly positive and finite".into(),
            })
        }
    };
    let per_scale_slopes = grid
        .par_iter()
        .map(|&x| Ok((x, (positive(t * x)? / positive(x)?).ln() / t.ln())))
        .collect::<Result<Vec<_>>>()?;
    Ok(RVEstimate {
        index_hat: per_scale_slopes.last().expect("grid non-empty").1,
        per_scale_slopes,
        t,
    })
}

/// `int_0^x0 U` via `y = x0 e^-u`, which handles integrable singularities at 0.
fn integral_from_zero<F: Fn(f64) -> f64>(u: &F, x0: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mapped = |s: f64| {
        let y = x0 * (-s).exp();
        if y == 0.0 {
            0.0
        } else {
            u(y) * y
        }
    };
    let near = integrate_finite(mapped, 0.0, 1.0, &[], cfg)?.require_converged("karamata head")?;
    let far = integrate_tail(mapped, 1.0, None, &[], cfg)?.require_converged("karamata head tail")?;
    Ok(near + far)
}

/// Karamata ratio `x U(x) / int U` against `|rho + 1|`: the integral is over
/// `[0, x]` for `rho > -1` and over `[x, inf)` for `rho < -1`.
pub fn karamata_check<F>(
    evaluator: F,
    rho: f64,
    grid: &[f64],
    cfg: &QuadratureConfig,
    opts: &DiagnosticOptions,
) -> Result<DiagnosticReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    check_grid(grid)?;
    if rho == -1.0 || !rho.is_finite() {
        return Err(Error::Precondition(format!(
            "karamata check needs a finite rho != -1, got {rho}"
        )));
    }
    let integrals: Vec<f64> = if rho > -1.0 {
        let head = integral_from_zero(&evaluator, grid[0], cfg)?;
        let pieces = grid
            .par_windows(2)
            .map(|w| {
                let cuts = geometric_grid(w[0], 10.0, 1 + (w[1] / w[0]).log10().ceil() as usize);
                integrate_finite(&evaluator, w[0], w[1], &cuts, cfg)?
                    .require_converged(format!("karamata increment on [{}, {}]", w[0], w[1]))
            })
            .collect::<Result<Vec<f64>>>()?;
        std::iter::once(head)
            .chain(pieces)
            .scan(0.0, |acc, piece| {
                *acc += piece;
                Some(*acc)
            })
            .collect()
    } else {
        grid.par_iter()
            .map(|&x| {
                // The integral is of order x U(x); keep abs_tol below that scale.
                let scale = (x * evaluator(x)).abs() * cfg.rel_tol;
                let local = QuadratureConfig {
                    abs_tol: if scale > 0.0 { cfg.abs_tol.min(scale) } else { cfg.abs_tol },
                    ..*cfg
                };
                integrate_tail(&evaluator, x, None, &[], &local)
            })
            .map(|res| match res {
                Ok(r) => r.require_converged("karamata tail"),
                Err(Error::Divergence(msg)) => Err(Error::Divergence(format!(
                    "{msg}; U is not integrable at infinity, so rho={rho} looks mis-declared"
                ))),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<f64>>>()?
    };
    let ratios = grid
        .iter()
        .zip(&integrals)
        .map(|(&x, &int)| ratio(x * evaluator(x), int, "karamata integral", x))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DiagnosticReport::assemble(
        ReportKind::Karamata { rho },
        f64::NAN,
        f64::NAN,
        grid.to_vec(),
        ratios,
        (rho + 1.0).abs(),
        opts,
    ))
}

/// Function whose de Haan increments are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeHaanTarget {
    /// `x^alpha Gbar(x)`
    GbarScaled,
    H,
}

/// Normalizer `L` for the increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxiliarySpec {
    /// `L(x) = x^alpha T(x)`
    Auto,
    ConstantOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeHaanCheck {
    pub grid: Vec<f64>,
    pub t_values: Vec<f64>,
    /// `(f(t x) - f(x)) / L(x)`, one row per grid point, one column per `t`.
    pub normalized_increments: Vec<Vec<f64>>,
    /// Least-squares slope of the increments against `log t`, per grid point.
    pub beta_by_x: Vec<f64>,
    pub beta_hat: f64,
    pub lambda_hat: f64,
    pub relation_residual: f64,
}

fn slope_through_origin(increments: &[f64], t_values: &[f64]) -> f64 {
    let (num, den) = increments
        .iter()
        .zip(t_values)
        .fold((0.0, 0.0), |(n, d), (&inc, &t)| (n + inc * t.ln(), d + t.ln() * t.ln()));
    num / den
}

/// De Haan class check of `x^alpha Gbar` or `H` with normalizer `L`, together
/// with `lambda = x^alpha T(x) / L(x)` and the residual of `beta = alpha * lambda`.
pub fn de_haan_check(
    model: &DistributionModel,
    p: &TransformParams,
    target: DeHaanTarget,
    l_spec: AuxiliarySpec,
    grid: &[f64],
    t_values: &[f64],
) -> Result<DeHaanCheck> {
    check_grid(grid)?;
    if t_values.is_empty() {
        return Err(Error::Precondition("t_values is empty".into()));
    }
    if let Some(&t) = t_values.iter().find(|&&t| !(t > 1.0 && t.is_finite())) {
        return Err(Error::domain("t", t, "every t must exceed 1"));
    }
    let alpha = p.alpha;
    let scaled_tail = |x: f64| x.powf(alpha) * model.tail(x);
    let f = |x: f64| -> Result<f64> {
        match target {
            DeHaanTarget::GbarScaled => Ok(x.powf(alpha) * williamson_tail(model, p, x)?),
            DeHaanTarget::H => truncated_moment(model, p, x),
        }
    };
    let aux = |x: f64| -> Result<f64> {
        let l = match l_spec {
            AuxiliarySpec::Auto => scaled_tail(x),
            AuxiliarySpec::ConstantOne => 1.0,
        };
        if l.abs() < UNDERFLOW {
            return Err(Error::domain("L(x)", l, &format!("normalizer underflows at x = {x}")));
        }
        Ok(l)
    };

    let rows = grid
        .par_iter()
        .map(|&x| {
            let base = f(x)?;
            let l = aux(x)?;
            t_values
                .iter()
                .map(|&t| Ok((f(t * x)? - base) / l))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let beta_by_x: Vec<f64> = rows.iter().map(|r| slope_through_origin(r, t_values)).collect();
    let x_max = *grid.last().expect("grid non-empty");
    let beta_hat = *beta_by_x.last().expect("grid non-empty");
    let lambda_hat = scaled_tail(x_max) / aux(x_max)?;
    Ok(DeHaanCheck {
        grid: grid.to_vec(),
        t_values: t_values.to_vec(),
        normalized_increments: rows,
        beta_by_x,
        beta_hat,
        lambda_hat,
        relation_residual: (beta_hat - alpha * lambda_hat).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReports {
    pub c1: DiagnosticReport,
    pub c2: DiagnosticReport,
    pub c3: Option<DiagnosticReport>,
    /// Why C3 was not run, when it was not.
    pub c3_skipped: Option<String>,
}

impl CorollaryReports {
    pub fn reports(&self) -> impl Iterator<Item = &DiagnosticReport> {
        [Some(&self.c1), Some(&self.c2), self.c3.as_ref()].into_iter().flatten()
    }
}

/// Which of the two density conditions admits the `G''` limit, if any.
fn density_condition(
    model: &DistributionModel,
    alpha: f64,
    grid: &[f64],
    opts: &DiagnosticOptions,
) -> std::result::Result<&'static str, String> {
    let f = |x: f64| model.density(x).unwrap_or(f64::NAN);
    let hazard_bounded = grid
        .iter()
        .map(|&x| {
            let t = model.tail(x);
            if t > 0.0 {
                x * f(x) / t
            } else {
                f64::INFINITY
            }
        })
        .all(|r| r.is_finite() && r <= opts.density_ratio_bound);
    if hazard_bounded {
        return Ok("x f(x) / T(x) bounded on the grid");
    }
    let scaled: Vec<f64> = grid.iter().map(|&x| x.powf(1.0 + alpha) * f(x)).collect();
    let vanishing = scaled.last().is_some_and(|&v| v.abs() < opts.zero_abs)
        && trailing_nonincreasing(&scaled.iter().map(|v| v.abs()).collect::<Vec<_>>(), opts.tail_k, 0.0);
    if vanishing {
        return Ok("x^(1+alpha) f(x) vanishes on the grid");
    }
    Err("neither density condition holds on the grid".into())
}

/// The finite-moment limits of `x^alpha Gbar`, `x^(1+alpha) G'` and, when a
/// density satisfies one of the growth conditions, `x^(2+alpha) G''`.
pub fn corollary_limits(
    model: &DistributionModel,
    p: &TransformParams,
    grid: &[f64],
    opts: &DiagnosticOptions,
) -> Result<CorollaryReports> {
    check_grid(grid)?;
    finite_moment(model, p, "corollary")?;
    let mut c1 = ratio_diagnostic(model, p, f64::NAN, DiagnosticItem::C1, grid, opts)?;
    let scaled_tail = grid.iter().map(|&x| x.powf(p.alpha) * model.tail(x)).collect::<Vec<_>>();
    let final_scaled = *scaled_tail.last().expect("grid non-empty");
    c1.push_side_check(SideCheck {
        name: "x^alpha T(x) -> 0".into(),
        final_value: final_scaled,
        limit: 0.0,
        passed: final_scaled.abs() < opts.zero_abs,
    });
    let c2 = ratio_diagnostic(model, p, f64::NAN, DiagnosticItem::C2, grid, opts)?;

    let (c3, c3_skipped) = if !model.has_density() {
        (None, Some(format!("{} has no density", model.name())))
    } else {
        match density_condition(model, p.alpha, grid, opts) {
            Ok(which) => {
                let mut r = ratio_diagnostic(model, p, f64::NAN, DiagnosticItem::C3, grid, opts)?;
                r.notes.push(format!("density condition: {which}"));
                (Some(r), None)
            }
            Err(why) => (None, Some(why)),
        }
    };
    Ok(CorollaryReports { c1, c2, c3, c3_skipped })
}
