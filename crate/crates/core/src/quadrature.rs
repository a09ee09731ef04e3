//! Adaptive Gauss–Kronrod integration on finite and semi-infinite intervals.
//!
//! Finite intervals are handled by global adaptive bisection with the embedded
//! 7-point Gauss / 15-point Kronrod pair. The panel with the largest error
//! estimate is bisected until the summed estimate meets the tolerance or the
//! subdivision budget is spent. Running out of budget is reported through
//! [`QuadratureResult::converged`], not as an error.
//!
//! Semi-infinite intervals `[a, inf)` are mapped onto a finite interval. When
//! the caller knows the integrand decays like `z^-p` with `p > 1`, the map
//! `z = a * s^(-1/(p-1))` turns a pure power tail into a constant and the
//! truncated remainder is bounded analytically. Without a hint the interval is
//! doubled until successive truncations agree.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Doublings allowed before an un-hinted tail integral is declared divergent.
pub const MAX_DOUBLINGS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("rel_tol", self.rel_tol, "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol", self.abs_tol, "must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions", 0.0, "must be positive"));
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Number of panel bisections performed.
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadratureResult {
    fn zero() -> Self {
        Self {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 0,
            converged: true,
        }
    }

    /// Turns a non-converged result into an error carrying `context`.
    pub fn require_converged(self, context: impl Into<String>) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                context: context.into(),
                value: self.value,
                error_estimate: self.abs_error_estimate,
            })
        }
    }
}

/// Integrand decays like `z^-exponent` as `z -> inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayHint {
    pub exponent: f64,
}

impl DecayHint {
    pub fn new(exponent: f64) -> Self {
        Self { exponent }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Evaluation { x })
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = eval_checked(f, centre)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();

    for (j, (&node, &weight)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * node;
        let lo = eval_checked(f, centre - dx)?;
        let hi = eval_checked(f, centre + dx)?;
        kronrod += weight * (lo + hi);
        resabs += weight * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }

    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let discrepancy = ((kronrod - gauss) * half).abs();
    // Floor the estimate at the rounding level of the panel sum.
    let error = discrepancy.max(50.0 * f64::EPSILON * resabs);
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]`, pre-splitting at every breakpoint in `(a, b)`.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::domain("a", a, "lower limit must be finite"));
    }
    if !b.is_finite() {
        return Err(Error::domain("b", b, "upper limit must be finite"));
    }
    if b < a {
        return Err(Error::domain("b", b, "upper limit below lower limit"));
    }
    if a == b {
        return Ok(QuadratureResult::zero());
    }

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::with_capacity(cuts.len() + 1 + 2 * cfg.max_subdivisions);
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        heap.push(kronrod_panel(&f, lo, hi)?);
        lo = hi;
    }

    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    let mut subdivisions = 0;

    while error > cfg.tolerance_for(value) && subdivisions < cfg.max_subdivisions {
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel is at floating-point resolution; nothing left to split.
            heap.push(worst);
            break;
        }
        let left = kronrod_panel(&f, worst.a, mid)?;
        let right = kronrod_panel(&f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Re-sum to shed the drift of the running updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        subdivisions,
        converged: error <= cfg.tolerance_for(value),
    })
}

/// Integrates `f` over `[a, inf)`.
///
/// `breakpoints` beyond `a` are honoured in either mapping. Without a usable
/// hint, failure of the doubled truncations to settle within
/// [`MAX_DOUBLINGS`] steps is reported as [`Error::Divergence`].
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    hint: Option<DecayHint>,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    cfg.validate()?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("a", a, "tail integral needs a finite a > 0"));
    }
    match hint {
        Some(h) if h.exponent > 1.0 && h.exponent.is_finite() => {
            tail_by_power_map(&f, a, h.exponent, breakpoints, cfg)
        }
        _ => tail_by_doubling(&f, a, breakpoints, cfg),
    }
}

fn tail_by_power_map<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    p: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let k = 1.0 / (p - 1.0);

    // Envelope constant: |f(z)| <= c * z^-p, probed over nine decades.
    let envelope = (0..9)
        .map(|j| a * 10f64.powi(j))
        .filter(|z| z.is_finite())
        .map(|z| (f(z).abs() * z.powf(p), z))
        .filter(|(c, _)| c.is_finite())
        .map(|(c, _)| c)
        .fold(0.0, f64::max);

    // In s, the remainder beyond z(s_min) is c * a^(1-p) * s_min / (p-1);
    // relative to the pure-power integral it is just s_min.
    let overflow_guard = (a / 1e300).powf(p - 1.0);
    let remainder_at = |s_min: f64| envelope * a.powf(1.0 - p) * s_min / (p - 1.0);
    let mapped = |s: f64| {
        let z = a * s.powf(-k);
        let fz = f(z);
        if fz == 0.0 {
            0.0
        } else {
            fz * k * z / s
        }
    };
    let segment = |lo: f64, hi: f64| {
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .filter(|&&b| b > a)
            .map(|&b| (a / b).powf(p - 1.0))
            .filter(|&s| s > lo && s < hi)
            .collect();
        let mut decade = 10f64.powf(hi.log10().ceil() - 1.0);
        while decade > lo {
            if decade < hi {
                cuts.push(decade);
            }
            decade *= 0.1;
        }
        integrate_finite(mapped, lo, hi, &cuts, cfg)
    };

    let mut s_min = (1e-3 * cfg.rel_tol).max(overflow_guard).min(0.5);
    let first = segment(s_min, 1.0)?;
    let (mut value, mut error, mut subdivisions, mut converged) =
        (first.value, first.abs_error_estimate, first.subdivisions, first.converged);

    // When the mass sits far beyond `a` the envelope-based remainder can
    // still dominate; push the cut further out until it is negligible.
    for _ in 0..8 {
        let need = 1e-2 * cfg.tolerance_for(value);
        let remainder = remainder_at(s_min);
        if remainder <= need || s_min <= overflow_guard {
            break;
        }
        let lower = (s_min * need / remainder).max(overflow_guard);
        let extra = segment(lower, s_min)?;
        value += extra.value;
        error += extra.abs_error_estimate;
        subdivisions += extra.subdivisions;
        converged &= extra.converged;
        s_min = lower;
    }

    let remainder = remainder_at(s_min);
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error + remainder,
        subdivisions,
        converged: converged && remainder <= cfg.tolerance_for(value),
    })
}

fn tail_by_doubling<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let mut total = 0.0;
    let mut error = 0.0;
    let mut subdivisions = 0;
    let mut converged = true;
    let mut quiet_steps = 0;
    let mut lo = a;

    for _ in 0..MAX_DOUBLINGS {
        let hi = 2.0 * lo;
        if !hi.is_finite() {
            break;
        }
        let piece = integrate_finite(f, lo, hi, breakpoints, cfg)?;
        total += piece.value;
        error += piece.abs_error_estimate;
        subdivisions += piece.subdivisions;
        converged &= piece.converged;

        if piece.value.abs() <= cfg.tolerance_for(total) {
            quiet_steps += 1;
            if quiet_steps == 2 {
                return Ok(QuadratureResult {
                    value: total,
                    abs_error_estimate: error + piece.value.abs(),
                    subdivisions,
                    converged,
                });
            }
        } else {
            quiet_steps = 0;
        }
        lo = hi;
    }

    Err(Error::Divergence(format!(
        "truncations of the integral from {a} did not settle after {MAX_DOUBLINGS} doublings (partial value {total:e})"
    )))
}
