//! Interval estimates and a regression cross-check from Phi samples.

use serde::{Deserialize, Serialize};

use crate::numeric::lsq_fit;
use crate::spectral::{assess_window, ratio, DistributionFunction, Finiteness, IllPosednessInterval, Thresholds};

pub const MIN_TAIL_SAMPLES: usize = 10;

/// Normalised residual (RMS / range of ln Phi) below which a power law is accepted.
pub const POWER_FIT_RESIDUAL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub eps: f64,
    pub ratio: f64,
}

/// r(eps) = ln eps / (-2 ln Phi) at every usable sample with Phi > 1.
pub fn ratio_samples(phi: &DistributionFunction) -> Vec<RatioSample> {
    phi.usable()
        .filter_map(|(_, eps, lp)| ratio(eps, lp).map(|r| RatioSample { eps, ratio: r }))
        .collect()
}

/// Per-grid-point ratios, `None` where undefined.
pub fn ratio_column(phi: &DistributionFunction) -> Vec<Option<f64>> {
    let end = phi.exhausted_at.unwrap_or(phi.len());
    (0..phi.len())
        .map(|i| if i < end { ratio(phi.eps_grid[i], phi.log_phi[i]) } else { None })
        .collect()
}

/// Local degrees 1/(2m), m the least-squares slope of ln Phi against
/// ln(1/eps) over the `w` samples ending at each tail point.
///
/// Returns (grid index, eps, ln(1/eps), degree) for the last `w` points.
pub fn local_degrees(phi: &DistributionFunction, w: usize) -> Vec<(usize, f64, f64, f64)> {
    let pts: Vec<(usize, f64, f64)> = phi.usable().collect();
    let n = pts.len();
    if w < 2 || n < w {
        return Vec::new();
    }
    let first_end = if n >= 2 * w - 1 { n - w } else { w - 1 };
    (first_end..n)
        .map(|j| {
            let seg = &pts[j + 1 - w..=j];
            let x: Vec<f64> = seg.iter().map(|p| -p.1.ln()).collect();
            let y: Vec<f64> = seg.iter().map(|p| p.2).collect();
            let deg = match lsq_fit(&x, &y) {
                Some(f) if f.slope > 0.0 => 1.0 / (2.0 * f.slope),
                _ => f64::INFINITY,
            };
            (pts[j].0, pts[j].1, -pts[j].1.ln(), deg)
        })
        .collect()
}

/// Interval of ill-posedness from the tail of a curve.
pub fn interval_estimate(phi: &DistributionFunction, t: &Thresholds) -> IllPosednessInterval {
    if phi.finiteness == Finiteness::NonInformative {
        return IllPosednessInterval::indeterminate("distribution function is non-informative");
    }
    // Samples with Phi > 0 carry slope information.
    let usable = phi.usable().count();
    let w = t.window_len(usable);
    if w < MIN_TAIL_SAMPLES {
        return IllPosednessInterval::indeterminate(format!(
            "tail window holds {w} samples, need at least {MIN_TAIL_SAMPLES}"
        ));
    }
    let local = local_degrees(phi, w);
    if local.len() < MIN_TAIL_SAMPLES {
        return IllPosednessInterval::indeterminate("not enough samples for local slopes");
    }
    let locations: Vec<f64> = local.iter().map(|p| p.1).collect();
    let scale: Vec<f64> = local.iter().map(|p| p.2).collect();
    let values: Vec<f64> = local.iter().map(|p| p.3).collect();
    let window = (local[0].0, local[local.len() - 1].0 + 1);
    assess_window("local_slope", window, &locations, &scale, &values, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    /// RMS residual divided by the range of ln Phi over the window.
    pub normalized_residual: f64,
    pub degree: Option<f64>,
}

/// Least-squares power-law fit of ln Phi against ln(1/eps) over the tail.
pub fn regression_estimate(phi: &DistributionFunction, t: &Thresholds) -> Option<RegressionFit> {
    if phi.finiteness == Finiteness::NonInformative {
        return None;
    }
    let pts: Vec<(f64, f64)> = phi.usable().map(|(_, e, lp)| (-e.ln(), lp)).collect();
    let w = t.window_len(pts.len());
    if w < 3 {
        return None;
    }
    let tail = &pts[pts.len() - w..];
    let x: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let y: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let fit = lsq_fit(&x, &y)?;
    let (ymin, ymax) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let range = ymax - ymin;
    let normalized_residual = if range > 0.0 { fit.rms / range } else { f64::INFINITY };
    let degree = if fit.slope > 0.0 && normalized_residual < POWER_FIT_RESIDUAL {
        Some(1.0 / (2.0 * fit.slope))
    } else {
        None
    };
    Some(RegressionFit { slope: fit.slope, normalized_residual, degree })
}
