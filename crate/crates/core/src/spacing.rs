//! Deviation of quasienergy spacings from `π/T`.
//!
//! Every level `ε_n` is paired with the level closest to `ε_n + π/T` on the
//! quasienergy circle; the deviation is the circular distance between the two.

use std::f64::consts::PI;

use serde::Serialize;

use crate::eigen::QuasienergySpectrum;
use crate::error::{Error, Result};
use crate::floquet::fold_quasienergy;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingStats {
    pub min_dev: f64,
    pub max_dev: f64,
    pub deviations: Vec<f64>,
}

pub fn spacing_stats(spec: &QuasienergySpectrum) -> Result<SpacingStats> {
    spacing_stats_of(spec.quasienergies(), spec.period())
}

/// Same as [`spacing_stats`] for a bare list of quasienergies.
pub fn spacing_stats_of(quasienergies: &[f64], period: f64) -> Result<SpacingStats> {
    if quasienergies.is_empty() {
        return Err(Error::InvalidArgument("spacing statistics of an empty spectrum".into()));
    }
    let mut sorted: Vec<f64> = quasienergies.iter().map(|&e| fold_quasienergy(e, period)).collect();
    sorted.sort_by(f64::total_cmp);
    let deviations: Vec<f64> = quasienergies
        .iter()
        .map(|&e| nearest_distance(&sorted, fold_quasienergy(e + PI / period, period), period))
        .collect();
    let min_dev = deviations.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_dev = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(SpacingStats { min_dev, max_dev, deviations })
}

/// Circular distance from `target` to the closest entry of the ascending `sorted`.
fn nearest_distance(sorted: &[f64], target: f64, period: f64) -> f64 {
    let n = sorted.len();
    let k = sorted.partition_point(|&e| e < target);
    // neighbours on either side, wrapping around the zone edge
    let candidates = [(k + n - 1) % n, k % n];
    candidates
        .iter()
        .map(|&i| fold_quasienergy(sorted[i] - target, period).abs())
        .fold(f64::INFINITY, f64::min)
        .min(PI / period)
}
