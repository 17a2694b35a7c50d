//! Exponent estimation for the graphical (cumulative and rank) methods.
//!
//! For a power-law density `∝ r^-alpha` truncated to a finite window, both the
//! CDF and the rank `n(r)` are affine in `r^(1 - alpha)` (in `ln r` when
//! `alpha = 1`). The exponent is therefore the value of `alpha` whose
//! power transform `g(r) = (r^λ - 1) / λ`, with `λ = 1 - alpha`, makes the
//! plotted relation most linear, i.e. maximizes `|R|`. At `alpha = 1` this is
//! exactly the semi-log fit.

use crate::stats::pearson;

const LAMBDA_LO: f64 = -2.0;
const LAMBDA_HI: f64 = 2.0;
const GRID_STEPS: usize = 20;
const TOL: f64 = 1e-7;
const JACKKNIFE_GROUPS: usize = 10;

/// Power transform of `r / scale`; `scale` keeps powers well conditioned.
fn transform(values: &[f64], lambda: f64, scale: f64, out: &mut Vec<f64>) {
    out.clear();
    if lambda.abs() < 1e-12 {
        out.extend(values.iter().map(|&v| (v / scale).ln()));
    } else {
        out.extend(values.iter().map(|&v| ((v / scale).powf(lambda) - 1.0) / lambda));
    }
}

fn geometric_mean(values: &[f64]) -> f64 {
    (values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64).exp()
}

/// The exponent `alpha = 1 - λ` that maximizes `|corr(g_λ(r), y)|`.
/// Returns `None` when the correlation is undefined everywhere.
pub(crate) fn linearizing_exponent(r: &[f64], y: &[f64]) -> Option<f64> {
    if r.len() < 3 || r.iter().all(|&v| v == r[0]) {
        return None;
    }
    let scale = geometric_mean(r);
    let mut buf = Vec::with_capacity(r.len());
    let mut score = |lambda: f64| -> f64 {
        transform(r, lambda, scale, &mut buf);
        pearson(&buf, y).map_or(f64::NEG_INFINITY, |c| c.abs())
    };

    let step = (LAMBDA_HI - LAMBDA_LO) / GRID_STEPS as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..=GRID_STEPS {
        let lambda = LAMBDA_LO + step * k as f64;
        let s = score(lambda);
        if s > best.0 {
            best = (s, lambda);
        }
    }
    if !best.0.is_finite() {
        return None;
    }

    // Golden-section refinement inside the bracketing grid cell pair.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = (best.1 - step).max(LAMBDA_LO);
    let mut b = (best.1 + step).min(LAMBDA_HI);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    while b - a > TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
    }
    let lambda = 0.5 * (a + b);
    Some(1.0 - lambda)
}

/// Delete-a-group jackknife standard error of an estimator over `values`.
/// Groups are formed by input position modulo the group count.
pub(crate) fn jackknife_stderr<F>(values: &[f64], estimator: F) -> f64
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let g = JACKKNIFE_GROUPS.min(values.len() / 3);
    if g < 2 {
        return f64::NAN;
    }
    let mut kept = Vec::with_capacity(values.len());
    let mut estimates = Vec::with_capacity(g);
    for group in 0..g {
        kept.clear();
        kept.extend(
            values
                .iter()
                .enumerate()
                .filter(|(i, _)| i % g != group)
                .map(|(_, &v)| v),
        );
        match estimator(&kept) {
            Some(e) if e.is_finite() => estimates.push(e),
            _ => return f64::NAN,
        }
    }
    let gf = g as f64;
    let mean = estimates.iter().sum::<f64>() / gf;
    let ss: f64 = estimates.iter().map(|e| (e - mean) * (e - mean)).sum();
    ((gf - 1.0) / gf * ss).sqrt()
}
