use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;

use super::scatter::ScatterRecord;

pub const DEFAULT_BIN_WIDTH_DEG: f64 = 1.0;

/// Azimuthal distribution of detected electrons. Bin `i` is centred on
/// α = −π + i·width.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularDistribution {
    pub bin_width: f64,
    pub window: f64,
    pub centers: Vec<f64>,
    pub counts: Vec<u64>,
    /// Moving average over `window`, scaled so that its maximum is 1.
    pub smoothed: Vec<f64>,
}

impl AngularDistribution {
    pub fn bin_of(&self, alpha: f64) -> usize {
        bin_index(alpha, self.bin_width, self.centers.len())
    }

    /// Smoothed value in the bin containing `alpha`.
    pub fn value_at(&self, alpha: f64) -> f64 {
        self.smoothed[self.bin_of(alpha)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn bin_index(alpha: f64, width: f64, n: usize) -> usize {
    let k = ((alpha + PI) / width + 0.5).floor() as i64;
    k.rem_euclid(n as i64) as usize
}

/// Histogram of α over detected records, smoothed with a wrap-around moving
/// average of width `window` (bins partially covered are weighted by overlap).
pub fn angular_histogram(
    records: &[ScatterRecord],
    bin_width: f64,
    window: f64,
) -> Result<AngularDistribution, ExperimentError> {
    let n_bins = (TAU / bin_width).round();
    if bin_width.is_nan()
        || bin_width <= 0.0
        || n_bins < 1.0
        || (n_bins * bin_width - TAU).abs() > 1e-9
    {
        return Err(ExperimentError::Histogram(format!(
            "bin width {bin_width} does not divide 2π"
        )));
    }
    if window.is_nan() || window < bin_width {
        return Err(ExperimentError::Histogram(format!(
            "window {window} narrower than bin width {bin_width}"
        )));
    }
    let n = n_bins as usize;
    let mut counts = vec![0u64; n];
    for r in records.iter().filter(|r| r.detected) {
        counts[bin_index(r.alpha, bin_width, n)] += 1;
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(ExperimentError::Empty);
    }

    // overlap of bin ±j with [−window/2, window/2], in units of a bin
    let half = 0.5 * window / bin_width;
    let reach = (half - 0.5).ceil().max(0.0) as usize;
    let weights: Vec<f64> = (0..=reach)
        .map(|j| {
            if j == 0 {
                1.0
            } else {
                (half - (j as f64 - 0.5)).clamp(0.0, 1.0)
            }
        })
        .collect();
    let at = |i: isize| counts[i.rem_euclid(n as isize) as usize] as f64;
    let raw: Vec<f64> = (0..n as isize)
        .map(|i| {
            let mut s = weights[0] * at(i);
            for (j, w) in weights.iter().enumerate().skip(1) {
                let j = j as isize;
                s += w * (at(i + j) + at(i - j));
            }
            s
        })
        .collect();
    let max = raw.iter().cloned().fold(0.0, f64::max);
    Ok(AngularDistribution {
        bin_width,
        window,
        centers: (0..n).map(|i| -PI + i as f64 * bin_width).collect(),
        counts,
        smoothed: raw.iter().map(|v| v / max).collect(),
    })
}
