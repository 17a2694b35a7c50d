//! Inverse-transform samplers for power-law distances.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DistanceSample;
use crate::error::{Error, Result};

/// Inverse CDF of the truncated Zipf (`1/r`) density on `[r_min, r_max]`.
#[inline]
pub fn truncated_zipf_quantile(u: f64, r_min: f64, r_max: f64) -> f64 {
    r_min * (r_max / r_min).powf(u)
}

/// CDF of the truncated Zipf density: `ln(r / r_min) / ln(r_max / r_min)`.
pub fn truncated_zipf_cdf(r: f64, r_min: f64, r_max: f64) -> f64 {
    if r <= r_min {
        0.0
    } else if r >= r_max {
        1.0
    } else {
        (r / r_min).ln() / (r_max / r_min).ln()
    }
}

/// Inverse CDF of a continuous power law with density `∝ r^-alpha` above
/// `r_min`, optionally truncated at `r_max`.
pub fn power_law_quantile(u: f64, alpha: f64, r_min: f64, r_max: Option<f64>) -> f64 {
    match r_max {
        Some(r_max) if (alpha - 1.0).abs() < 1e-12 => truncated_zipf_quantile(u, r_min, r_max),
        Some(r_max) => {
            let e = 1.0 - alpha;
            let lo = r_min.powf(e);
            let hi = r_max.powf(e);
            (lo + u * (hi - lo)).powf(1.0 / e)
        }
        None => r_min * (1.0 - u).powf(-1.0 / (alpha - 1.0)),
    }
}

fn check_bounds(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "truncation bounds must satisfy 0 < r_min < r_max (got {r_min}, {r_max})"
        )));
    }
    Ok(())
}

/// `n` i.i.d. draws from the truncated Zipf distribution on `[r_min, r_max]`.
pub fn sample_truncated_zipf(n: usize, r_min: f64, r_max: f64, seed: u64) -> Result<DistanceSample> {
    check_bounds(r_min, r_max)?;
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| truncated_zipf_quantile(rng.random::<f64>(), r_min, r_max))
        .collect();
    DistanceSample::new(
        values,
        format!("truncated zipf n={n} r_min={r_min} r_max={r_max} seed={seed}"),
    )
}

/// `n` draws from a power law with exponent `alpha` above `r_min`. Without an
/// upper cutoff `alpha` must exceed 1.
pub fn sample_power_law(
    n: usize,
    alpha: f64,
    r_min: f64,
    r_max: Option<f64>,
    seed: u64,
) -> Result<DistanceSample> {
    match r_max {
        Some(r_max) => check_bounds(r_min, r_max)?,
        None if !(r_min > 0.0) => {
            return Err(Error::InvalidParameter(format!("r_min must be positive (got {r_min})")))
        }
        None if !(alpha > 1.0) => {
            return Err(Error::InvalidParameter(format!(
                "an untruncated power law needs alpha > 1 (got {alpha})"
            )))
        }
        None => {}
    }
    if n == 0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter("need n >= 1 and a finite exponent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| power_law_quantile(rng.random::<f64>(), alpha, r_min, r_max))
        .collect();
    DistanceSample::new(
        values,
        format!("power law alpha={alpha} n={n} r_min={r_min} r_max={r_max:?} seed={seed}"),
    )
}

/// Truncated Zipf draws with `round(zero_fraction * n)` of them replaced by
/// zero at random positions, mimicking same-city links that resolve to a
/// distance of zero.
pub fn sample_zero_inflated_zipf(
    n: usize,
    zero_fraction: f64,
    r_min: f64,
    r_max: f64,
    seed: u64,
) -> Result<DistanceSample> {
    if !(0.0..1.0).contains(&zero_fraction) {
        return Err(Error::InvalidParameter(format!(
            "zero fraction must be in [0, 1) (got {zero_fraction})"
        )));
    }
    let base = sample_truncated_zipf(n, r_min, r_max, seed)?;
    let mut values = base.values().to_vec();
    let zeros = (zero_fraction * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_5a5a_5a5a_5a5a);
    for i in index::sample(&mut rng, n, zeros) {
        values[i] = 0.0;
    }
    DistanceSample::new(
        values,
        format!("{} zero_fraction={zero_fraction}", base.label()),
    )
}
