//! Distribution models on `[0, inf)` with `F(0) = 0`.
//!
//! The tail `1 - F` is evaluated by its own formula for every family: at
//! large `x` the difference `1 - F(x)` has no significant digits left, and
//! every limit checked downstream is a statement about the tail.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::transforms::TransformKind;

/// Which parametric (or data-driven) law a model follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Pareto,
    ParetoLog,
    BoundaryRv,
    Exponential,
    Degenerate,
    Empirical,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Pareto => "pareto",
            Family::ParetoLog => "pareto_log",
            Family::BoundaryRv => "boundary_rv",
            Family::Exponential => "exponential",
            Family::Degenerate => "degenerate",
            Family::Empirical => "empirical",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pareto" => Ok(Family::Pareto),
            "pareto_log" => Ok(Family::ParetoLog),
            "boundary_rv" => Ok(Family::BoundaryRv),
            "exponential" => Ok(Family::Exponential),
            "degenerate" => Ok(Family::Degenerate),
            "empirical" => Ok(Family::Empirical),
            other => Err(Error::Input(format!("unknown family `{other}`"))),
        }
    }
}

/// Family plus parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// Tail `min(1, (x/scale)^-beta)`.
    Pareto { beta: f64, scale: f64 },
    /// Tail `min(1, x^-beta * log(e + x)^log_power)`; requires `log_power <= beta`.
    ParetoLog { beta: f64, log_power: f64 },
    /// Tail `min(1, x^-alpha0)`: the boundary case where `x^alpha0 * tail` is slowly varying.
    BoundaryRv { alpha0: f64 },
    /// Tail `exp(-rate * x)`.
    Exponential { rate: f64 },
    /// Point mass at `atom`.
    Degenerate { atom: f64 },
    EmpiricalSamples(Vec<f64>),
    EmpiricalFile(PathBuf),
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::Pareto { .. } => Family::Pareto,
            FamilySpec::ParetoLog { .. } => Family::ParetoLog,
            FamilySpec::BoundaryRv { .. } => Family::BoundaryRv,
            FamilySpec::Exponential { .. } => Family::Exponential,
            FamilySpec::Degenerate { .. } => Family::Degenerate,
            FamilySpec::EmpiricalSamples(_) | FamilySpec::EmpiricalFile(_) => Family::Empirical,
        }
    }
}

/// How fast the tail vanishes; drives the choice of tail quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailDecay {
    /// Tail is exactly zero from `sup` on.
    BoundedSupport { sup: f64 },
    /// Tail behaves like `x^-index * (log x)^log_power`.
    RegularlyVarying { index: f64, log_power: f64 },
    /// Faster than any power.
    Exponential,
    Unknown,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Sorted sample with the step d.f. `F(x) = #{s_i <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalData {
    sorted: Vec<f64>,
}

impl EmpiricalData {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("empirical model needs at least one sample".into()));
        }
        if let Some((i, &s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.is_finite() && **s > 0.0))
        {
            return Err(Error::Domain {
                name: format!("samples[{i}]"),
                value: s,
                reason: "samples must be finite and strictly positive".into(),
            });
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().expect("non-empty")
    }

    /// Number of samples `<= x`.
    pub fn count_at_most(&self, x: f64) -> usize {
        self.sorted.partition_point(|&s| s <= x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.count_at_most(x) as f64 / self.len() as f64
    }

    pub fn tail(&self, x: f64) -> f64 {
        (self.len() - self.count_at_most(x)) as f64 / self.len() as f64
    }

    /// `H_alpha(x) = sum_{s_i <= x} s_i^alpha / n`.
    pub fn truncated_moment(&self, alpha: f64, x: f64) -> f64 {
        let k = self.count_at_most(x);
        self.sorted[..k].iter().map(|s| s.powf(alpha)).sum::<f64>() / self.len() as f64
    }

    /// `W_alpha(x) = sum_i min(x, s_i)^alpha / (n alpha)`.
    pub fn tail_integral(&self, alpha: f64, x: f64) -> f64 {
        let k = self.count_at_most(x);
        let below: f64 = self.sorted[..k].iter().map(|s| s.powf(alpha)).sum();
        let above = (self.len() - k) as f64 * x.powf(alpha);
        (below + above) / (self.len() as f64 * alpha)
    }

    /// `int_x^inf y^(alpha-1) tail(y) dy = sum_{s_i > x} (s_i^alpha - x^alpha) / (n alpha)`.
    pub fn tail_integral_complement(&self, alpha: f64, x: f64) -> f64 {
        let k = self.count_at_most(x);
        let xa = x.max(0.0).powf(alpha);
        self.sorted[k..].iter().map(|s| s.powf(alpha) - xa).sum::<f64>()
            / (self.len() as f64 * alpha)
    }

    pub fn moment(&self, alpha: f64) -> f64 {
        self.sorted.iter().map(|s| s.powf(alpha)).sum::<f64>() / self.len() as f64
    }
}

#[derive(Clone)]
struct CustomLaw {
    cdf: Evaluator,
    tail: Evaluator,
    density: Option<Evaluator>,
    decay: TailDecay,
}

#[derive(Clone)]
enum Law {
    Pareto { beta: f64, scale: f64 },
    ParetoLog { beta: f64, log_power: f64, knee: f64 },
    Exponential { rate: f64 },
    Degenerate { atom: f64 },
    Empirical(Arc<EmpiricalData>),
    Custom(CustomLaw),
}

/// An immutable distribution on `[0, inf)`.
#[derive(Clone)]
pub struct DistributionModel {
    name: String,
    family: Option<Family>,
    law: Law,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for DistributionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionModel")
            .field("name", &self.name)
            .field("family", &self.family)
            .field("breakpoints", &self.breakpoints.len())
            .finish()
    }
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(name, value, "must be finite and strictly positive"))
    }
}

/// Reads a samples file: one strictly positive number per line, `#` comments.
pub fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text)
}

pub fn parse_samples(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Input(format!("line {lineno}: `{line}` is not a number")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Input(format!(
                "line {lineno}: sample {line} is not strictly positive"
            )));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Input("samples file holds no samples".into()));
    }
    Ok(out)
}

/// Point where `x^-beta * log(e + x)^p` crosses 1; the tail is capped at 1 below it.
fn pareto_log_knee(beta: f64, log_power: f64) -> f64 {
    let excess = |x: f64| beta * x.ln() - log_power * (std::f64::consts::E + x).ln().ln();
    let (mut lo, mut hi) = (1.0, 1.0);
    if excess(1.0) < 0.0 {
        while excess(hi) < 0.0 {
            hi *= 2.0;
        }
    } else {
        while excess(lo) > 0.0 {
            lo *= 0.5;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Builds a model for `spec`, validating its parameters.
pub fn make_model(spec: &FamilySpec) -> Result<DistributionModel> {
    let family = spec.family();
    let (name, law, breakpoints) = match spec {
        FamilySpec::Pareto { beta, scale } => {
            let beta = positive("beta", *beta)?;
            let scale = positive("scale", *scale)?;
            (
                format!("pareto(beta={beta}, scale={scale})"),
                Law::Pareto { beta, scale },
                vec![scale],
            )
        }
        FamilySpec::BoundaryRv { alpha0 } => {
            let beta = positive("alpha0", *alpha0)?;
            (
                format!("boundary_rv(alpha0={beta})"),
                Law::Pareto { beta, scale: 1.0 },
                vec![1.0],
            )
        }
        FamilySpec::ParetoLog { beta, log_power } => {
            let beta = positive("beta", *beta)?;
            if !log_power.is_finite() || *log_power > beta {
                return Err(Error::domain(
                    "log_power",
                    *log_power,
                    "must be finite and not exceed beta (tail must be nonincreasing)",
                ));
            }
            let knee = pareto_log_knee(beta, *log_power);
            (
                format!("pareto_log(beta={beta}, log_power={log_power})"),
                Law::ParetoLog {
                    beta,
                    log_power: *log_power,
                    knee,
                },
                vec![knee],
            )
        }
        FamilySpec::Exponential { rate } => {
            let rate = positive("rate", *rate)?;
            (format!("exponential(rate={rate})"), Law::Exponential { rate }, vec![])
        }
        FamilySpec::Degenerate { atom } => {
            let atom = positive("atom", *atom)?;
            (format!("degenerate(atom={atom})"), Law::Degenerate { atom }, vec![atom])
        }
        FamilySpec::EmpiricalSamples(samples) => empirical_parts(samples.clone())?,
        FamilySpec::EmpiricalFile(path) => empirical_parts(read_samples(path)?)?,
    };
    Ok(DistributionModel {
        name,
        family: Some(family),
        law,
        breakpoints,
    })
}

fn empirical_parts(samples: Vec<f64>) -> Result<(String, Law, Vec<f64>)> {
    let data = EmpiricalData::new(samples)?;
    let mut bps = data.samples().to_vec();
    bps.dedup();
    Ok((
        format!("empirical(n={})", data.len()),
        Law::Empirical(Arc::new(data)),
        bps,
    ))
}

impl DistributionModel {
    /// A model from user-supplied evaluators. No invariants are enforced here;
    /// run [`validate_model`] to check them.
    pub fn from_fns<C, T>(name: impl Into<String>, cdf: C, tail: T, breakpoints: Vec<f64>) -> Self
    where
        C: Fn(f64) -> f64 + Send + Sync + 'static,
        T: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            family: None,
            law: Law::Custom(CustomLaw {
                cdf: Arc::new(cdf),
                tail: Arc::new(tail),
                density: None,
                decay: TailDecay::Unknown,
            }),
            breakpoints,
        }
    }

    /// Attaches a density to a model built with [`DistributionModel::from_fns`].
    pub fn with_density<D>(mut self, density: D) -> Self
    where
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Law::Custom(c) = &mut self.law {
            c.density = Some(Arc::new(density));
        }
        self
    }

    pub fn with_tail_decay(mut self, decay: TailDecay) -> Self {
        if let Law::Custom(c) = &mut self.law {
            c.decay = decay;
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Sorted atoms and kinks.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn empirical(&self) -> Option<&EmpiricalData> {
        match &self.law {
            Law::Empirical(d) => Some(d),
            _ => None,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match &self.law {
            Law::Pareto { .. } | Law::ParetoLog { .. } => 1.0 - self.tail(x),
            Law::Exponential { rate } => -(-rate * x).exp_m1(),
            Law::Degenerate { atom } => {
                if x >= *atom {
                    1.0
                } else {
                    0.0
                }
            }
            Law::Empirical(d) => d.cdf(x),
            Law::Custom(c) => (c.cdf)(x),
        }
    }

    pub fn tail(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        match &self.law {
            Law::Pareto { beta, scale } => {
                if x <= *scale {
                    1.0
                } else {
                    (x / scale).powf(-beta)
                }
            }
            Law::ParetoLog {
                beta,
                log_power,
                knee,
            } => {
                if x <= *knee {
                    1.0
                } else {
                    (x.powf(-beta) * (std::f64::consts::E + x).ln().powf(*log_power)).min(1.0)
                }
            }
            Law::Exponential { rate } => (-rate * x).exp(),
            Law::Degenerate { atom } => {
                if x >= *atom {
                    0.0
                } else {
                    1.0
                }
            }
            Law::Empirical(d) => d.tail(x),
            Law::Custom(c) => (c.tail)(x),
        }
    }

    /// Density, when the law is absolutely continuous.
    pub fn density(&self, x: f64) -> Option<f64> {
        if x < 0.0 {
            return self.has_density().then_some(0.0);
        }
        match &self.law {
            Law::Pareto { beta, scale } => Some(if x < *scale {
                0.0
            } else {
                beta / scale * (x / scale).powf(-beta - 1.0)
            }),
            Law::ParetoLog {
                beta,
                log_power,
                knee,
            } => Some(if x < *knee {
                0.0
            } else {
                let ep = std::f64::consts::E + x;
                self.tail(x) * (beta / x - log_power / (ep * ep.ln()))
            }),
            Law::Exponential { rate } => Some(rate * (-rate * x).exp()),
            Law::Degenerate { .. } | Law::Empirical(_) => None,
            Law::Custom(c) => c.density.as_ref().map(|d| d(x)),
        }
    }

    pub fn has_density(&self) -> bool {
        match &self.law {
            Law::Pareto { .. } | Law::ParetoLog { .. } | Law::Exponential { .. } => true,
            Law::Degenerate { .. } | Law::Empirical(_) => false,
            Law::Custom(c) => c.density.is_some(),
        }
    }

    pub fn tail_decay(&self) -> TailDecay {
        match &self.law {
            Law::Pareto { beta, .. } => TailDecay::RegularlyVarying {
                index: *beta,
                log_power: 0.0,
            },
            Law::ParetoLog {
                beta, log_power, ..
            } => TailDecay::RegularlyVarying {
                index: *beta,
                log_power: *log_power,
            },
            Law::Exponential { .. } => TailDecay::Exponential,
            Law::Degenerate { atom } => TailDecay::BoundedSupport { sup: *atom },
            Law::Empirical(d) => TailDecay::BoundedSupport { sup: d.max() },
            Law::Custom(c) => c.decay,
        }
    }

    /// `beta*` with `m(alpha) = inf` iff `alpha >= beta*`, when known.
    pub fn moment_divergence_threshold(&self) -> Option<f64> {
        match self.tail_decay() {
            TailDecay::RegularlyVarying { index, .. } => Some(index),
            _ => None,
        }
    }

    /// Smallest `x` with `tail(x) <= v`, for `v` in `(0, 1]`.
    pub fn tail_quantile(&self, v: f64) -> f64 {
        let v = v.clamp(f64::MIN_POSITIVE, 1.0);
        match &self.law {
            Law::Pareto { beta, scale } => scale * v.powf(-1.0 / beta),
            Law::Exponential { rate } => -v.ln() / rate,
            Law::Degenerate { atom } => *atom,
            Law::Empirical(d) => {
                // tail(s_(k)) = (n - k) / n for the k-th order statistic.
                let n = d.len();
                let k = ((1.0 - v) * n as f64).floor() as usize;
                d.samples()[k.min(n - 1)]
            }
            Law::ParetoLog { .. } | Law::Custom(_) => self.tail_quantile_by_bisection(v),
        }
    }

    fn tail_quantile_by_bisection(&self, v: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.tail(hi) > v {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::MAX;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.tail(mid) > v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// One draw from the law by tail inversion (resampling for empirical data).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // 1 - U lies in (0, 1].
        let v = 1.0 - rng.random::<f64>();
        self.tail_quantile(v)
    }

    /// Exact value of a transform for families with closed forms
    /// (pareto, boundary_rv, degenerate). Used as a test oracle.
    pub fn closed_form(&self, kind: TransformKind, alpha: f64, x: f64) -> Option<f64> {
        let exact = match &self.law {
            Law::Pareto { beta, scale } => ExactPower {
                beta: *beta,
                scale: *scale,
            }
            .into_forms(),
            Law::Degenerate { atom } => ExactAtom { atom: *atom }.into_forms(),
            _ => return None,
        };
        exact.eval(self, kind, alpha, x)
    }
}

/// Closed forms of `W`, its complement and `H` for a family.
trait ExactForms {
    fn w(&self, alpha: f64, x: f64) -> f64;
    fn w_bar(&self, alpha: f64, x: f64) -> Option<f64>;
    /// Stieltjes form of `H`, independent of the tail-integral route.
    fn h(&self, alpha: f64, x: f64) -> f64;

    fn into_forms(self) -> Box<dyn ExactForms>
    where
        Self: Sized + 'static,
    {
        Box::new(self)
    }
}

impl dyn ExactForms {
    fn eval(&self, model: &DistributionModel, kind: TransformKind, alpha: f64, x: f64) -> Option<f64> {
        if x <= 0.0 {
            return None;
        }
        let h = self.h(alpha, x);
        let g_prime = alpha * x.powf(-alpha - 1.0) * h;
        Some(match kind {
            TransformKind::H => h,
            TransformKind::W => self.w(alpha, x),
            TransformKind::Wbar => self.w_bar(alpha, x)?,
            TransformKind::G => model.cdf(x) - x.powf(-alpha) * h,
            TransformKind::Gbar => model.tail(x) + x.powf(-alpha) * h,
            TransformKind::Gprime => g_prime,
            TransformKind::Gsecond => {
                let f = model.density(x)?;
                (alpha * f - (alpha + 1.0) * g_prime) / x
            }
        })
    }
}

struct ExactPower {
    beta: f64,
    scale: f64,
}

impl ExactForms for ExactPower {
    fn w(&self, alpha: f64, x: f64) -> f64 {
        let (b, s) = (self.beta, self.scale);
        if x <= s {
            return x.powf(alpha) / alpha;
        }
        let head = s.powf(alpha) / alpha;
        if alpha == b {
            head + s.powf(b) * (x / s).ln()
        } else {
            head + s.powf(b) * (x.powf(alpha - b) - s.powf(alpha - b)) / (alpha - b)
        }
    }

    fn w_bar(&self, alpha: f64, x: f64) -> Option<f64> {
        let (b, s) = (self.beta, self.scale);
        if alpha >= b {
            return None;
        }
        let from_scale = s.powf(b) * x.max(s).powf(alpha - b) / (b - alpha);
        Some(if x <= s {
            (s.powf(alpha) - x.powf(alpha)) / alpha + from_scale
        } else {
            from_scale
        })
    }

    fn h(&self, alpha: f64, x: f64) -> f64 {
        let (b, s) = (self.beta, self.scale);
        if x < s {
            0.0
        } else if alpha == b {
            b * s.powf(b) * (x / s).ln()
        } else {
            b * s.powf(b) * (x.powf(alpha - b) - s.powf(alpha - b)) / (alpha - b)
        }
    }
}

struct ExactAtom {
    atom: f64,
}

impl ExactForms for ExactAtom {
    fn w(&self, alpha: f64, x: f64) -> f64 {
        x.min(self.atom).powf(alpha) / alpha
    }

    fn w_bar(&self, alpha: f64, x: f64) -> Option<f64> {
        Some((self.atom.powf(alpha) - x.min(self.atom).powf(alpha)) / alpha)
    }

    fn h(&self, alpha: f64, x: f64) -> f64 {
        if x >= self.atom {
            self.atom.powf(alpha)
        } else {
            0.0
        }
    }
}

/// Outcome of one invariant on a probe grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    pub worst_x: Option<f64>,
    pub worst_violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<InvariantCheck>,
    pub breakpoints: Vec<f64>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&InvariantCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const COMPLEMENT_TOL: f64 = 1e-12;

/// Checks the model invariants on `probe_grid`. Violations are report
/// entries, never errors.
pub fn validate_model(model: &DistributionModel, probe_grid: &[f64]) -> ValidationReport {
    fn worst<I: Iterator<Item = (f64, f64)>>(name: &'static str, it: I, tol: f64) -> InvariantCheck {
        let (mut worst_x, mut worst_violation) = (None, 0.0);
        for (x, v) in it {
            if v > worst_violation || v.is_nan() {
                worst_violation = if v.is_nan() { f64::INFINITY } else { v };
                worst_x = Some(x);
            }
        }
        InvariantCheck {
            name,
            passed: worst_violation <= tol,
            worst_x,
            worst_violation,
        }
    }

    let cdf: Vec<f64> = probe_grid.iter().map(|&x| model.cdf(x)).collect();
    let tail: Vec<f64> = probe_grid.iter().map(|&x| model.tail(x)).collect();
    let pairs = || probe_grid.windows(2).zip(0..);

    let mut checks = vec![
        worst("cdf_at_zero", std::iter::once((0.0, model.cdf(0.0).abs())), 0.0),
        worst(
            "cdf_in_unit_interval",
            probe_grid
                .iter()
                .zip(&cdf)
                .map(|(&x, &c)| (x, (-c).max(c - 1.0).max(0.0))),
            0.0,
        ),
        worst(
            "cdf_nondecreasing",
            pairs().map(|(w, i)| (w[1], (cdf[i] - cdf[i + 1]).max(0.0))),
            0.0,
        ),
        worst(
            "tail_nonincreasing",
            pairs().map(|(w, i)| (w[1], (tail[i + 1] - tail[i]).max(0.0))),
            0.0,
        ),
        worst(
            "complement",
            probe_grid
                .iter()
                .zip(cdf.iter().zip(&tail))
                .map(|(&x, (&c, &t))| (x, (c + t - 1.0).abs())),
            COMPLEMENT_TOL,
        ),
    ];

    let decays = match (tail.first(), tail.last()) {
        (Some(&first), Some(&last)) => {
            let degenerate = (first == last) && (first == 0.0 || first == 1.0);
            last < first || degenerate || probe_grid.len() == 1
        }
        _ => true,
    };
    checks.push(InvariantCheck {
        name: "tail_decays",
        passed: decays,
        worst_x: probe_grid.last().copied().filter(|_| !decays),
        worst_violation: if decays { 0.0 } else { 1.0 },
    });

    let bps = model.breakpoints();
    let sorted_bad = bps.windows(2).find(|w| !(w[0] < w[1])).map(|w| w[1]);
    let negative_bp = bps.iter().copied().find(|&b| b < 0.0);
    let bad = sorted_bad.or(negative_bp);
    checks.push(InvariantCheck {
        name: "breakpoints_sorted",
        passed: bad.is_none(),
        worst_x: bad,
        worst_violation: if bad.is_some() { 1.0 } else { 0.0 },
    });

    let passed = checks.iter().all(|c| c.passed);
    ValidationReport {
        checks,
        breakpoints: bps.to_vec(),
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_finite, QuadratureConfig};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_analytic() -> Vec<DistributionModel> {
        [
            FamilySpec::Pareto { beta: 1.5, scale: 2.0 },
            FamilySpec::ParetoLog { beta: 2.5, log_power: 1.0 },
            FamilySpec::ParetoLog { beta: 1.5, log_power: -2.0 },
            FamilySpec::BoundaryRv { alpha0: 2.0 },
            FamilySpec::Exponential { rate: 1.0 },
            FamilySpec::Degenerate { atom: 2.0 },
            FamilySpec::EmpiricalSamples(vec![1.0, 2.0, 2.0, 4.0]),
        ]
        .iter()
        .map(|s| make_model(s).unwrap())
        .collect()
    }

    fn probe() -> Vec<f64> {
        let mut g = vec![0.0];
        g.extend((0..60).map(|k| 1e-3 * 1.5f64.powi(k)));
        g
    }

    #[test]
    fn pareto_tail_value() {
        let m = make_model(&FamilySpec::Pareto { beta: 1.0, scale: 1.0 }).unwrap();
        assert_abs_diff_eq!(m.tail(10.0), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_is_right_continuous() {
        let m = make_model(&FamilySpec::Degenerate { atom: 2.0 }).unwrap();
        assert_eq!(m.cdf(1.9), 0.0);
        assert_eq!(m.cdf(2.0), 1.0);
        assert_eq!(m.breakpoints(), &[2.0]);
    }

    #[test]
    fn empirical_step_heights() {
        let m = make_model(&FamilySpec::EmpiricalSamples(vec![1.0, 2.0, 2.0, 4.0])).unwrap();
        assert_eq!(m.cdf(2.0), 0.75);
        assert_eq!(m.cdf(1.999), 0.25);
        assert_eq!(m.breakpoints(), &[1.0, 2.0, 4.0]);
        // Right-continuity at every sample point.
        for &s in m.empirical().unwrap().samples() {
            assert_eq!(m.cdf(s), m.cdf(s + 1e-12));
        }
    }

    #[test]
    fn parameter_domains() {
        let cases = [
            (FamilySpec::Pareto { beta: 0.0, scale: 1.0 }, "beta"),
            (FamilySpec::Pareto { beta: 1.0, scale: -1.0 }, "scale"),
            (FamilySpec::Exponential { rate: f64::NAN }, "rate"),
            (FamilySpec::Degenerate { atom: 0.0 }, "atom"),
            (FamilySpec::ParetoLog { beta: 1.0, log_power: 2.0 }, "log_power"),
            (FamilySpec::BoundaryRv { alpha0: -2.0 }, "alpha0"),
        ];
        for (spec, param) in cases {
            match make_model(&spec) {
                Err(Error::Domain { name, .. }) => assert_eq!(name, param),
                other => panic!("{spec:?}: {other:?}"),
            }
        }
        assert!(matches!(
            make_model(&FamilySpec::EmpiricalSamples(vec![])),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            make_model(&FamilySpec::EmpiricalSamples(vec![1.0, -3.0])),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            make_model(&FamilySpec::EmpiricalFile("/nonexistent/samples.txt".into())),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn samples_file_parsing() {
        let parsed = parse_samples("# header\n1.5\n\n  2\n# more\n3e1\n").unwrap();
        assert_eq!(parsed, vec![1.5, 2.0, 30.0]);
        let err = parse_samples("1\n2\n-4\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_samples("1\nabc\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_samples("# only comments\n").is_err());
    }

    #[test]
    fn builtin_models_validate() {
        for m in all_analytic() {
            let report = validate_model(&m, &probe());
            assert!(report.passed, "{}: {:?}", m.name(), report.checks);
        }
    }

    #[test]
    fn pareto_probe_from_examples() {
        let m = make_model(&FamilySpec::Pareto { beta: 1.0, scale: 1.0 }).unwrap();
        assert!(validate_model(&m, &[0.0, 1.0, 10.0, 100.0]).passed);
    }

    #[test]
    fn degenerate_probe_straddles_atom() {
        let m = make_model(&FamilySpec::Degenerate { atom: 2.0 }).unwrap();
        let r = validate_model(&m, &[0.5, 1.0, 1.99, 2.0, 3.0]);
        assert!(r.passed);
        assert_eq!(r.breakpoints, vec![2.0]);
    }

    #[test]
    fn corrupted_model_is_flagged() {
        let bad = DistributionModel::from_fns(
            "corrupt",
            |x: f64| 1.0 - (-x).exp(),
            |x: f64| 1.0 - (-x).exp(),
            vec![],
        );
        let r = validate_model(&bad, &[0.0, 0.5, 1.0, 2.0, 5.0]);
        assert!(!r.passed);
        assert!(!r.check("tail_nonincreasing").unwrap().passed);
        assert!(!r.check("complement").unwrap().passed);
        assert!(r.check("cdf_nondecreasing").unwrap().passed);
        assert!(r.check("complement").unwrap().worst_x.is_some());
    }

    #[test]
    fn unsorted_breakpoints_flagged() {
        let m = DistributionModel::from_fns("bp", |_| 0.5, |_| 0.5, vec![2.0, 1.0]);
        let r = validate_model(&m, &[1.0]);
        assert!(!r.check("breakpoints_sorted").unwrap().passed);
    }

    #[test]
    fn complement_holds_far_out() {
        for m in all_analytic() {
            for k in 0..40 {
                let x = 1e-3 * 2f64.powi(k);
                assert!((m.cdf(x) + m.tail(x) - 1.0).abs() <= COMPLEMENT_TOL, "{} at {x}", m.name());
            }
        }
    }

    #[test]
    fn density_integrates_to_cdf_increments() {
        let cfg = QuadratureConfig::default();
        let intervals = [(0.0, 1.0), (0.5, 3.0), (1.0, 10.0), (2.5, 40.0), (10.0, 1000.0)];
        for m in all_analytic().into_iter().filter(|m| m.has_density()) {
            for &(a, b) in &intervals {
                let r = integrate_finite(|x| m.density(x).unwrap(), a, b, m.breakpoints(), &cfg)
                    .unwrap();
                let expected = m.cdf(b) - m.cdf(a);
                assert!(
                    (r.value - expected).abs() <= 1e-8,
                    "{} on [{a}, {b}]: {} vs {expected}",
                    m.name(),
                    r.value
                );
            }
        }
    }

    #[test]
    fn pareto_log_knee_is_continuous() {
        let m = make_model(&FamilySpec::ParetoLog { beta: 2.5, log_power: 1.0 }).unwrap();
        let knee = m.breakpoints()[0];
        assert!(knee > 1.0);
        assert!((m.tail(knee * (1.0 + 1e-12)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tail_quantile_inverts_tail() {
        for m in all_analytic() {
            for v in [0.9, 0.5, 0.1, 1e-3] {
                let x = m.tail_quantile(v);
                assert!(m.tail(x) <= v + 1e-12, "{} v={v}", m.name());
                if m.has_density() {
                    assert!((m.tail(x) - v).abs() < 1e-9, "{} v={v}", m.name());
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_positive() {
        let m = make_model(&FamilySpec::Pareto { beta: 3.0, scale: 1.0 }).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..100).map(|_| m.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert!(draw(7).iter().all(|&x| x >= 1.0));
    }

    #[test]
    fn empirical_exact_sums() {
        let d = EmpiricalData::new(vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_abs_diff_eq!(d.truncated_moment(1.0, 3.0), 1.25, epsilon = 1e-15);
        // W_1(3) = (1 + 2 + 2 + 3) / 4
        assert_abs_diff_eq!(d.tail_integral(1.0, 3.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.tail_integral_complement(1.0, 3.0), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.moment(1.0), 2.25, epsilon = 1e-15);
    }
}
