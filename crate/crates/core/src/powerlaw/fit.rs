use serde::Serialize;

use super::linearize::{jackknife_stderr, linearizing_exponent};
use super::{DistanceSample, FitFlag, FitMethod, FitScale, PowerLawFit};
use crate::error::{Error, Result};
use crate::stats::{linear_fit, LinearFit};

/// Log-spaced binning for the density estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogBinning {
    /// Bins per factor-of-ten of the data range (rounded up to whole bins).
    PerDecade(f64),
    /// A fixed number of bins spanning the data range.
    Count(usize),
}

impl Default for LogBinning {
    fn default() -> Self {
        LogBinning::PerDecade(20.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    /// Geometric centre of the bin.
    pub center: f64,
    pub count: usize,
    /// Count normalized by bin width and the number of binned values.
    pub density: f64,
}

/// Log-binned histogram of the strictly positive values, empty bins included.
pub fn log_histogram(sample: &DistanceSample, binning: LogBinning) -> Result<Vec<HistogramBin>> {
    let values = sample.nonzero();
    if values.is_empty() {
        return Err(Error::InsufficientData("all values are zero".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Err(Error::InsufficientData(
            "fewer than 3 nonempty bins (all nonzero values are equal)".into(),
        ));
    }
    let span = (hi / lo).ln();
    let nbins = match binning {
        LogBinning::PerDecade(per) if per > 0.0 => ((hi / lo).log10() * per).ceil().max(1.0) as usize,
        LogBinning::Count(k) if k > 0 => k,
        other => {
            return Err(Error::InvalidParameter(format!("invalid binning {other:?}")));
        }
    };

    let mut counts = vec![0usize; nbins];
    for &v in &values {
        let idx = ((v / lo).ln() / span * nbins as f64).floor() as usize;
        counts[idx.min(nbins - 1)] += 1;
    }
    let total = values.len() as f64;
    let edge = |k: usize| {
        if k == nbins {
            hi
        } else {
            lo * (span * k as f64 / nbins as f64).exp()
        }
    };
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &count)| {
            let (a, b) = (edge(k), edge(k + 1));
            HistogramBin {
                lo: a,
                hi: b,
                center: (a * b).sqrt(),
                count,
                density: count as f64 / (total * (b - a)),
            }
        })
        .collect())
}

/// Least-squares power law through `(center, density)` points on log-log axes.
pub fn fit_density_points(centers: &[f64], densities: &[f64]) -> Result<PowerLawFit> {
    if centers.len() != densities.len() {
        return Err(Error::InvalidParameter("centers and densities differ in length".into()));
    }
    let points: Vec<(f64, f64)> = centers
        .iter()
        .zip(densities)
        .filter(|(&c, &d)| c > 0.0 && d > 0.0)
        .map(|(&c, &d)| (c, d))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "fewer than 3 nonempty bins ({} available)",
            points.len()
        )));
    }
    let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let LinearFit {
        slope,
        intercept,
        slope_stderr,
        correlation,
        ..
    } = linear_fit(&x, &y)?;
    let r_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let r_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit {
        method: FitMethod::Density,
        exponent: -slope,
        stderr: slope_stderr,
        correlation,
        scale: FitScale::Density {
            intercept,
            slope,
            bins_used: points.len(),
        },
        r_min,
        r_max,
        n_used: points.len(),
        n_zero: 0,
        flag: None,
    })
}

/// Density estimator: regression of log bin density on log bin centre.
pub fn fit_density(sample: &DistanceSample, binning: LogBinning) -> Result<PowerLawFit> {
    let bins = log_histogram(sample, binning)?;
    let (centers, densities): (Vec<f64>, Vec<f64>) = bins
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| (b.center, b.density))
        .unzip();
    let mut fit = fit_density_points(&centers, &densities)?;
    let nonzero = sample.len() - sample.zero_count();
    fit.n_used = nonzero;
    fit.n_zero = sample.zero_count();
    fit.r_min = bins[0].lo;
    fit.r_max = bins[bins.len() - 1].hi;
    Ok(fit)
}

/// Empirical CDF over the strictly positive values: one `(r, F(r))` point per
/// distinct value, `F` counting values `<= r`.
pub fn cumulative_points(sample: &DistanceSample) -> Vec<(f64, f64)> {
    let mut values = sample.nonzero();
    values.sort_by(f64::total_cmp);
    ecdf_sorted(&values)
}

fn ecdf_sorted(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let f = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = f,
            _ => out.push((v, f)),
        }
    }
    out
}

fn cumulative_exponent(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pts = ecdf_sorted(&sorted);
    let (r, f): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    linearizing_exponent(&r, &f)
}

/// Cumulative estimator: least squares of the empirical CDF on `ln r`.
pub fn fit_cumulative(sample: &DistanceSample) -> Result<PowerLawFit> {
    let values = sample.nonzero();
    let pts = cumulative_points(sample);
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "cumulative fit needs at least 3 distinct nonzero values (got {})",
            pts.len()
        )));
    }
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let lf = linear_fit(&x, &y)?;
    let exponent = cumulative_exponent(&values).unwrap_or(f64::NAN);
    let stderr = jackknife_stderr(&values, cumulative_exponent);
    Ok(PowerLawFit {
        method: FitMethod::Cumulative,
        exponent,
        stderr,
        correlation: lf.correlation,
        scale: FitScale::Cumulative {
            intercept: lf.intercept,
            slope: lf.slope,
        },
        r_min: pts[0].0,
        r_max: pts[pts.len() - 1].0,
        n_used: values.len(),
        n_zero: sample.zero_count(),
        flag: None,
    })
}

/// Rank-distance points `(n, r(n))`, rank 1 being the largest distance. Ties
/// keep their input order.
pub fn rank_points(sample: &DistanceSample) -> Vec<(usize, f64)> {
    let mut values = sample.nonzero();
    // Stable sort keeps input order among equal values.
    values.sort_by(|a, b| b.total_cmp(a));
    values.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect()
}

fn rank_exponent(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let ranks: Vec<f64> = (1..=sorted.len()).map(|n| n as f64).collect();
    linearizing_exponent(&sorted, &ranks)
}

/// Rank-distance estimator: least squares of `ln r(n)` on the rank `n`.
pub fn fit_rank(sample: &DistanceSample) -> Result<PowerLawFit> {
    let values = sample.nonzero();
    if values.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "rank fit needs at least 3 nonzero values (got {})",
            values.len()
        )));
    }
    let pts = rank_points(sample);
    let x: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let lf = linear_fit(&x, &y)?;
    let (a, b) = (lf.intercept, -lf.slope);

    let (exponent, stderr, flag) = if b > 0.0 {
        (
            rank_exponent(&values).unwrap_or(f64::NAN),
            jackknife_stderr(&values, rank_exponent),
            None,
        )
    } else {
        (f64::NAN, f64::NAN, Some(FitFlag::NonPositiveSlope))
    };
    Ok(PowerLawFit {
        method: FitMethod::Rank,
        exponent,
        stderr,
        correlation: lf.correlation,
        scale: FitScale::Rank { a, b },
        r_min: pts[pts.len() - 1].1,
        r_max: pts[0].1,
        n_used: values.len(),
        n_zero: sample.zero_count(),
        flag,
    })
}

/// The Zipf density implied by a rank fit: `f(r) = 1 / (B N r)` and
/// `F(r) = 1 - A / (B N) + ln r / (B N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpliedZipf {
    pub a: f64,
    pub b: f64,
    pub n_total: usize,
}

impl ImpliedZipf {
    fn bn(&self) -> f64 {
        self.b * self.n_total as f64
    }

    pub fn pdf(&self, r: f64) -> f64 {
        1.0 / (self.bn() * r)
    }

    pub fn cdf(&self, r: f64) -> f64 {
        1.0 - self.a / self.bn() + r.ln() / self.bn()
    }

    /// The interval on which `F` rises from 0 to 1: `[e^(A - BN), e^A]`.
    pub fn window(&self) -> (f64, f64) {
        ((self.a - self.bn()).exp(), self.a.exp())
    }
}

pub fn density_from_rank(fit: &PowerLawFit, n_total: usize) -> Result<ImpliedZipf> {
    let FitScale::Rank { a, b } = fit.scale else {
        return Err(Error::InvalidParameter(format!(
            "expected a rank fit, got {}",
            fit.method
        )));
    };
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rank slope B = {b} is not positive; no Zipf density is implied"
        )));
    }
    if n_total == 0 {
        return Err(Error::InvalidParameter("total link count must be positive".into()));
    }
    Ok(ImpliedZipf { a, b, n_total })
}

fn default_r_min(sample: &DistanceSample) -> Result<f64> {
    sample
        .values()
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
        .ok_or_else(|| Error::InsufficientData("no values above r_min (all values are zero)".into()))
}

fn check_cutoff(r_min: f64) -> Result<()> {
    if !(r_min > 0.0 && r_min.is_finite()) {
        return Err(Error::InvalidParameter(format!("r_min must be positive (got {r_min})")));
    }
    Ok(())
}

/// Maximum-likelihood exponent of an untruncated continuous power law,
/// `alpha = 1 + n / Σ ln(x_i / r_min)` over the values strictly above `r_min`,
/// with standard error `(alpha - 1) / sqrt(n)`. `r_min` defaults to the
/// smallest positive value.
pub fn fit_mle(sample: &DistanceSample, r_min: Option<f64>) -> Result<PowerLawFit> {
    let r_min = match r_min {
        Some(r) => r,
        None => default_r_min(sample)?,
    };
    check_cutoff(r_min)?;
    let kept: Vec<f64> = sample.values().iter().copied().filter(|&v| v > r_min).collect();
    if kept.is_empty() {
        return Err(Error::InsufficientData(format!("no values above r_min = {r_min}")));
    }
    if kept.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 values above r_min = {r_min}"
        )));
    }
    let n = kept.len() as f64;
    let log_sum: f64 = kept.iter().map(|&x| (x / r_min).ln()).sum();
    let alpha = 1.0 + n / log_sum;
    let r_max = kept.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit {
        method: FitMethod::Mle,
        exponent: alpha,
        stderr: (alpha - 1.0) / n.sqrt(),
        correlation: None,
        scale: FitScale::Mle { r_min, r_max: None },
        r_min,
        r_max,
        n_used: kept.len(),
        n_zero: sample.zero_count(),
        flag: None,
    })
}

// With t = ln(x / r_min) and L = ln(r_max / r_min), a power law truncated to
// [r_min, r_max] makes t a truncated exponential with rate λ = alpha - 1 on
// [0, L]. For z = λL, E[t] = L·h(z) and Var[t] = L²·k(z).
fn trunc_mean_scaled(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        let z2 = z * z;
        0.5 - z / 12.0 + z * z2 / 720.0 - z * z2 * z2 / 30240.0
    } else {
        1.0 / z - 1.0 / z.exp_m1()
    }
}

fn trunc_var_scaled(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        let z2 = z * z;
        1.0 / 12.0 - z2 / 240.0 + z2 * z2 / 6048.0
    } else {
        let s = (0.5 * z).sinh();
        1.0 / (z * z) - 1.0 / (4.0 * s * s)
    }
}

/// Maximum-likelihood exponent of a power law truncated to `(r_min, r_max]`.
/// Unlike [`fit_mle`], this is consistent for exponents at or below 1, where
/// an untruncated power law does not normalize. The standard error comes from
/// the Fisher information, `1 / sqrt(n Var[ln x])`.
pub fn fit_mle_truncated(sample: &DistanceSample, r_min: Option<f64>, r_max: f64) -> Result<PowerLawFit> {
    let r_min = match r_min {
        Some(r) => r,
        None => default_r_min(sample)?,
    };
    check_cutoff(r_min)?;
    if !(r_max > r_min && r_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "r_max must exceed r_min (got {r_min}, {r_max})"
        )));
    }
    let kept: Vec<f64> = sample
        .values()
        .iter()
        .copied()
        .filter(|&v| v > r_min && v <= r_max)
        .collect();
    if kept.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no values in the window ({r_min}, {r_max}]"
        )));
    }
    if kept.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 values in the window ({r_min}, {r_max}]"
        )));
    }
    let n = kept.len() as f64;
    let span = (r_max / r_min).ln();
    let target = kept.iter().map(|&x| (x / r_min).ln()).sum::<f64>() / n / span;

    // h is strictly decreasing from 1 to 0; bisect on z.
    let (mut lo, mut hi) = (-1e4_f64, 1e4_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if trunc_mean_scaled(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * (1.0 + mid.abs()) {
            break;
        }
    }
    let z = 0.5 * (lo + hi);
    let alpha = 1.0 + z / span;
    let var = span * span * trunc_var_scaled(z);
    Ok(PowerLawFit {
        method: FitMethod::Mle,
        exponent: alpha,
        stderr: 1.0 / (n * var).sqrt(),
        correlation: None,
        scale: FitScale::Mle {
            r_min,
            r_max: Some(r_max),
        },
        r_min,
        r_max,
        n_used: kept.len(),
        n_zero: sample.zero_count(),
        flag: None,
    })
}
