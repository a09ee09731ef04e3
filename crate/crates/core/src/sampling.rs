//! Monte Carlo check that `G_alpha` is the distribution function of `X / Z`,
//! with `Z` independent of `X` and `P(Z <= z) = z^alpha` on `[0, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::DistributionModel;
use crate::transforms::TransformParams;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    /// `X_i / Z_i`
    pub values: Vec<f64>,
    /// The underlying `X_i`, kept so `values[i] >= x_draws[i]` can be checked.
    pub x_draws: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    pub alpha: f64,
}

/// Draws `n` ratios `X / Z`. `sampler` receives the batch's generator; `Z`
/// is drawn as `U^(1/alpha)` with `U` uniform on `(0, 1]` from the same stream.
pub fn sample_williamson_ratio<S>(mut sampler: S, p: &TransformParams, n: usize, seed: u64) -> Result<SampleBatch>
where
    S: FnMut(&mut ChaCha8Rng) -> f64,
{
    if n == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_alpha = 1.0 / p.alpha;
    let mut values = Vec::with_capacity(n);
    let mut x_draws = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sampler(&mut rng);
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain("sampler draw", x, "draws must be positive and finite"));
        }
        let u = 1.0 - rng.random::<f64>();
        values.push(x / u.powf(inv_alpha));
        x_draws.push(x);
    }
    Ok(SampleBatch {
        values,
        x_draws,
        n,
        seed,
        alpha: p.alpha,
    })
}

/// [`sample_williamson_ratio`] with `X` drawn from `model`.
pub fn sample_model_ratio(model: &DistributionModel, p: &TransformParams, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_williamson_ratio(|rng| model.sample(rng), p, n, seed)
}

/// Kolmogorov-Smirnov distance between the batch's empirical d.f. and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(batch: &SampleBatch, cdf: F) -> Result<f64> {
    if batch.values.is_empty() {
        return Err(Error::Precondition("empty batch".into()));
    }
    let mut sorted = batch.values.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x);
        if !(0.0..=1.0).contains(&fx) {
            return Err(Error::domain("cdf value", fx, &format!("must lie in [0, 1] (at x = {x})")));
        }
        let hi = (i + 1) as f64 / n;
        let lo = i as f64 / n;
        sup = sup.max((hi - fx).abs()).max((lo - fx).abs());
    }
    Ok(sup)
}

/// 99% critical value `1.628 / sqrt(n)` of the one-sample KS statistic.
pub fn ks_critical_99(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{make_model, FamilySpec};
    use crate::transforms::williamson;

    fn batch(values: Vec<f64>) -> SampleBatch {
        SampleBatch {
            n: values.len(),
            x_draws: values.clone(),
            values,
            seed: 0,
            alpha: 1.0,
        }
    }

    #[test]
    fn ks_hand_example() {
        let b = batch(vec![1.0, 2.0, 3.0, 4.0]);
        let ks = ks_statistic(&b, |x| (x / 4.0).clamp(0.0, 1.0)).unwrap();
        assert!((ks - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_constant_cdf() {
        let ks = ks_statistic(&batch(vec![1.0, 5.0]), |_| 0.5).unwrap();
        assert_eq!(ks, 0.5);
    }

    #[test]
    fn ks_at_quantiles() {
        let n = 50;
        let b = batch((1..=n).map(|i| i as f64 / (n + 1) as f64).collect());
        let ks = ks_statistic(&b, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(ks <= 2.0 / (n + 1) as f64);
    }

    #[test]
    fn ks_rejects_invalid_cdf() {
        assert!(matches!(ks_statistic(&batch(vec![1.0]), |_| 1.5), Err(Error::Domain { .. })));
        assert!(ks_statistic(&batch(vec![]), |_| 0.5).is_err());
    }

    #[test]
    fn atom_ratios_dominate_atom() {
        let m = make_model(&FamilySpec::Degenerate { atom: 2.0 }).unwrap();
        let p = TransformParams::new(1.0).unwrap();
        let b = sample_model_ratio(&m, &p, 1000, 7).unwrap();
        assert!(b.values.iter().all(|&v| v >= 2.0));
        assert!(b.values.iter().zip(&b.x_draws).all(|(v, x)| v >= x));
    }

    #[test]
    fn deterministic_per_seed() {
        let m = make_model(&FamilySpec::Pareto { beta: 3.0, scale: 1.0 }).unwrap();
        let p = TransformParams::new(2.0).unwrap();
        let a = sample_model_ratio(&m, &p, 500, 42).unwrap();
        let b = sample_model_ratio(&m, &p, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_model_ratio(&m, &p, 500, 43).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn sampler_errors() {
        let p = TransformParams::new(1.0).unwrap();
        assert!(matches!(sample_williamson_ratio(|_| 0.0, &p, 3, 1), Err(Error::Domain { .. })));
        assert!(matches!(sample_williamson_ratio(|_| 1.0, &p, 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn atom_batch_matches_g1() {
        let m = make_model(&FamilySpec::Degenerate { atom: 2.0 }).unwrap();
        let p = TransformParams::new(1.0).unwrap();
        let n = 10_000;
        let b = sample_model_ratio(&m, &p, n, 2024).unwrap();
        let ks = ks_statistic(&b, |x| williamson(&m, &p, x).unwrap()).unwrap();
        assert!(ks < 0.0163, "ks = {ks}");
        // Oracle: G_1(x) = 1 - 2/x for x >= 2.
        let ks_closed = ks_statistic(&b, |x| if x < 2.0 { 0.0 } else { 1.0 - 2.0 / x }).unwrap();
        assert!((ks - ks_closed).abs() < 1e-9);
    }
}
