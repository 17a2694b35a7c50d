//! Power-law and truncated-Zipf estimation for link-distance samples.
//!
//! Four estimators are provided: a log-binned density regression, a fit of
//! the empirical CDF against `ln r`, the rank-distance regression
//! `ln r(n) = A - B n`, and the maximum-likelihood exponent. Every method
//! reports the exponent as a positive magnitude, so Zipf's law gives 1.0.
//! Zero distances cannot enter a log-scale fit; they are excluded and their
//! count is reported alongside each fit.

mod fit;
mod linearize;
mod sample;
mod sampling;

use serde::Serialize;

pub use fit::{
    cumulative_points, density_from_rank, fit_cumulative, fit_density, fit_density_points,
    fit_mle, fit_mle_truncated, fit_rank, log_histogram, rank_points, HistogramBin, ImpliedZipf,
    LogBinning,
};
pub use sample::DistanceSample;
pub use sampling::{
    power_law_quantile, sample_power_law, sample_truncated_zipf, sample_zero_inflated_zipf,
    truncated_zipf_cdf, truncated_zipf_quantile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    Density,
    Cumulative,
    Rank,
    Mle,
}

impl FitMethod {
    pub const ALL: [FitMethod; 4] = [
        FitMethod::Density,
        FitMethod::Cumulative,
        FitMethod::Rank,
        FitMethod::Mle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FitMethod::Density => "density",
            FitMethod::Cumulative => "cumulative",
            FitMethod::Rank => "rank",
            FitMethod::Mle => "mle",
        }
    }
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FitMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "density" => Ok(FitMethod::Density),
            "cumulative" => Ok(FitMethod::Cumulative),
            "rank" => Ok(FitMethod::Rank),
            "mle" => Ok(FitMethod::Mle),
            other => Err(format!("unknown fit method '{other}'")),
        }
    }
}

/// Method-specific scale parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FitScale {
    /// `ln f = intercept + slope ln r` over the non-empty log bins.
    Density {
        intercept: f64,
        slope: f64,
        bins_used: usize,
    },
    /// `F(r) = intercept + slope ln r`.
    Cumulative { intercept: f64, slope: f64 },
    /// `ln r(n) = a - b n`.
    Rank { a: f64, b: f64 },
    /// Lower and optional upper cutoff used by the likelihood.
    Mle { r_min: f64, r_max: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitFlag {
    /// The rank regression slope `B` is not positive, so the data are not
    /// Zipf-like and no exponent is reported.
    NonPositiveSlope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub method: FitMethod,
    /// Positive magnitude of the fitted exponent (NaN when flagged).
    pub exponent: f64,
    pub stderr: f64,
    /// Pearson R of the method's linear relation; `None` for the MLE and for
    /// degenerate inputs.
    pub correlation: Option<f64>,
    pub scale: FitScale,
    pub r_min: f64,
    pub r_max: f64,
    /// Number of values that entered the fit.
    pub n_used: usize,
    /// Zero distances excluded from the fit.
    pub n_zero: usize,
    pub flag: Option<FitFlag>,
}
