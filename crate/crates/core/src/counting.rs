//! Compact-operator path: counting function of squared singular values,
//! interval estimators, and the step-multiplier bridge to the measure path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    assess_window, DistributionFunction, GridSpec, IllPosednessInterval, MeasureSpace,
    Multiplier, Shape, SigmaSequence, Source, Thresholds,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Count {
    /// #{n : sigma_n^2 > eps}; may exceed 2^53 when extrapolated, so kept as f64.
    pub count: f64,
    /// All stored values exceed eps and no tail law was available.
    pub exhausted: bool,
}

/// #{n : sigma_n^2 > eps} with strict inequality.
pub fn counting_phi(sigma: &SigmaSequence, eps: f64) -> Count {
    let v = sigma.values();
    let stored = v.partition_point(|s| s * s > eps);
    if stored < v.len() {
        return Count { count: stored as f64, exhausted: false };
    }
    match sigma.tail_law() {
        Some(law) => Count { count: law.count_above(eps, v.len() + 1), exhausted: false },
        None => Count { count: v.len() as f64, exhausted: true },
    }
}

/// Default eps-grid for a singular value list: halving from sigma_1^2 when a
/// tail law allows extrapolation, otherwise geometric down to sigma_N^2.
pub fn default_grid(sigma: &SigmaSequence) -> GridSpec {
    let v = sigma.values();
    let top = v[0] * v[0];
    if sigma.tail_law().is_some() || v.len() < 2 {
        GridSpec::Halving { eps_max: top, points: GridSpec::DEFAULT_POINTS }
    } else {
        let bottom = v[v.len() - 1] * v[v.len() - 1];
        if bottom < top {
            GridSpec::Geometric { eps_max: top, eps_min: bottom, points: GridSpec::DEFAULT_POINTS }
        } else {
            GridSpec::Halving { eps_max: top, points: GridSpec::DEFAULT_POINTS }
        }
    }
}

/// Counting function sampled on a grid.
pub fn counting_curve(sigma: &SigmaSequence, grid: &[f64]) -> Result<DistributionFunction> {
    let mut exhausted_at = None;
    let log_phi: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let c = counting_phi(sigma, eps);
            if c.exhausted && exhausted_at.is_none() {
                exhausted_at = Some(i);
            }
            if c.count > 0.0 {
                c.count.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let v0 = sigma.values()[0];
    let phi = DistributionFunction::new(grid.to_vec(), log_phi, Source::Counting)?.with_sup_bound(v0 * v0);
    Ok(match exhausted_at {
        Some(i) => phi.mark_exhausted(i),
        None => phi,
    })
}

/// Window policy for [`interval_from_sigma`]: indices [start_fraction * N, N].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaWindow {
    pub start_fraction: f64,
}

impl Default for SigmaWindow {
    fn default() -> Self {
        SigmaWindow { start_fraction: 0.5 }
    }
}

pub const MIN_SIGMA_VALUES: usize = 32;

/// Window min/max of -ln(sigma_n)/ln(n) over the stored tail.
pub fn interval_from_sigma(
    sigma: &SigmaSequence,
    window: SigmaWindow,
    t: &Thresholds,
) -> Result<IllPosednessInterval> {
    let n = sigma.len();
    if n < MIN_SIGMA_VALUES {
        return Err(Error::InsufficientData { needed: MIN_SIGMA_VALUES, got: n });
    }
    if !(window.start_fraction > 0.0 && window.start_fraction < 1.0) {
        return Err(Error::InvalidInput(format!("window start fraction {} not in (0, 1)", window.start_fraction)));
    }
    let start = ((n as f64 * window.start_fraction) as usize).max(2);
    let v = sigma.values();
    let idx: Vec<f64> = (start..=n).map(|k| k as f64).collect();
    let scale: Vec<f64> = idx.iter().map(|k| k.ln()).collect();
    let values: Vec<f64> = (start..=n).map(|k| -v[k - 1].ln() / (k as f64).ln()).collect();
    Ok(assess_window("sigma_exponent", (start, n + 1), &idx, &scale, &values, t))
}

/// Window min/max of the raw ratios ln eps / (-2 ln Phi) over the tail of the grid.
pub fn interval_from_counting(phi: &DistributionFunction, t: &Thresholds) -> IllPosednessInterval {
    if phi.finiteness == crate::Finiteness::NonInformative {
        return IllPosednessInterval::indeterminate("distribution function is non-informative");
    }
    let samples: Vec<(usize, f64, f64)> = phi
        .usable()
        .filter_map(|(i, eps, lp)| crate::ratio(eps, lp).map(|r| (i, eps, r)))
        .collect();
    if samples.len() < 3 {
        return IllPosednessInterval::indeterminate("fewer than 3 samples with Phi > 1");
    }
    let w = t.window_len(samples.len()).max(3.min(samples.len()));
    let tail = &samples[samples.len() - w..];
    let locations: Vec<f64> = tail.iter().map(|s| s.1).collect();
    let scale: Vec<f64> = tail.iter().map(|s| -s.1.ln()).collect();
    let values: Vec<f64> = tail.iter().map(|s| s.2).collect();
    assess_window("raw_ratio", (tail[0].0, tail[w - 1].0 + 1), &locations, &scale, &values, t)
}

/// lambda = sigma_n^2 on [n-1, n) with Lebesgue measure on [0, inf).
pub fn step_multiplier_from_sigma(sigma: &SigmaSequence) -> (Multiplier, MeasureSpace) {
    let s = sigma.clone();
    let cells = s.len();
    let monotone_tail = s.tail_law().is_some();
    let sup = s.values()[0] * s.values()[0];
    let eval = move |w: f64| {
        if !(w >= 0.0) {
            return 0.0;
        }
        let n = w.floor() + 1.0;
        if n > u64::MAX as f64 {
            return 0.0;
        }
        match s.get(n as usize) {
            Some(v) => v * v,
            None => 0.0,
        }
    };
    (
        Multiplier::new(eval, Shape::Steps { cells, monotone_tail }, sup),
        MeasureSpace::LebesgueHalfLine,
    )
}
