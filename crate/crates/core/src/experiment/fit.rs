//! Growth-exponent estimation from the running maximum.
//!
//! The fit is ordinary least squares on (log x, log running_max) over the
//! top fraction of checkpoints by index. The running maximum, not |S(x)|,
//! is fitted, because the growth statements bound the supremum. Zero
//! running maxima are excluded (their logarithm is not usable).

use super::checkpoint::CheckpointSeries;
use crate::error::{Error, Result};

/// Minimum usable points for a fit.
pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// [x_lo, x_hi] of the checkpoints actually used.
    pub window: (u64, u64),
    pub points_used: usize,
}

/// Least squares on the top `window_fraction` of checkpoints by index.
pub fn fit_exponent(series: &CheckpointSeries, window_fraction: f64) -> Result<ExponentFit> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window_fraction must be in (0, 1], got {window_fraction}"
        )));
    }
    let len = series.len();
    let take = ((len as f64 * window_fraction).ceil() as usize).clamp(1, len);
    let start = len - take;
    let mut xs = Vec::with_capacity(take);
    let mut ys = Vec::with_capacity(take);
    let mut window = (u64::MAX, 0u64);
    for (x, _, rmax) in series.rows().skip(start) {
        if rmax == 0 {
            continue;
        }
        window.0 = window.0.min(x);
        window.1 = window.1.max(x);
        xs.push((x as f64).ln());
        ys.push((rmax as f64).ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: xs.len(),
        });
    }
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        window,
        points_used: xs.len(),
    })
}

/// Ordinary least squares y = slope·x + intercept, plus r².
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, intercept, r_squared)
}

/// running_max(x)/x^exponent at each checkpoint.
pub fn envelope_ratios(series: &CheckpointSeries, exponent: f64) -> Vec<f64> {
    series
        .rows()
        .map(|(x, _, rmax)| rmax as f64 / (x as f64).powf(exponent))
        .collect()
}

/// True when running_max(x)/x^exponent is non-increasing across the final
/// decade of checkpoints (x ≥ x_max/10).
pub fn envelope_non_increasing_final_decade(
    series: &CheckpointSeries,
    exponent: f64,
) -> Result<bool> {
    let x_max = *series
        .checkpoints()
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty series".into()))?;
    let cutoff = x_max / 10;
    let mut prev: Option<f64> = None;
    for (x, _, rmax) in series.rows() {
        if x < cutoff {
            continue;
        }
        let ratio = rmax as f64 / (x as f64).powf(exponent);
        if let Some(p) = prev {
            if ratio > p {
                return Ok(false);
            }
        }
        prev = Some(ratio);
    }
    Ok(true)
}
