//! Shared domain types plus the ratio and classification primitives.

mod distribution_fn;
mod interval;
mod measure;
mod multiplier;
mod sigma;

pub use distribution_fn::{DistributionFunction, Finiteness, Source};
pub use interval::{
    assess_window, Classification, IllPosednessInterval, Trend, WindowDiagnostics,
};
pub use measure::{Density, MeasureSpace, Support, TotalMass};
pub use multiplier::{ClosedForm, Cutoff, Multiplier, Shape, TailDecay};
pub use sigma::{SigmaSequence, TailLaw};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural log of a nonnegative extended real.
///
/// `-inf` encodes a zero measure and `+inf` the divergent sentinel. Sums and
/// products saturate through ordinary IEEE arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogMass(pub f64);

impl LogMass {
    pub const ZERO: LogMass = LogMass(f64::NEG_INFINITY);
    pub const INFINITE: LogMass = LogMass(f64::INFINITY);

    pub fn from_value(v: f64) -> Self {
        if v <= 0.0 {
            Self::ZERO
        } else {
            LogMass(v.ln())
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }
}

/// Classification thresholds and window policy for finite data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub tau_mild: f64,
    pub tau_severe: f64,
    pub tau_collapse: f64,
    /// Fraction of the grid (from the small-eps end) used as the tail window.
    #[serde(alias = "window_fraction")]
    pub tail_fraction: f64,
    /// Minimum elasticity of the local degree against ln ln(1/eps) for a trend.
    pub tau_trend: f64,
    /// Largest relative drawdown (or rise) still counted as a monotone trend.
    pub monotone_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tau_mild: 0.05,
            tau_severe: 50.0,
            tau_collapse: 0.1,
            tail_fraction: 1.0 / 3.0,
            tau_trend: 0.3,
            monotone_tol: 0.05,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tau_mild > 0.0
            && self.tau_severe > self.tau_mild
            && self.tau_collapse > 0.0
            && self.tail_fraction > 0.0
            && self.tail_fraction <= 1.0
            && self.tau_trend > 0.0
            && self.monotone_tol >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("inconsistent thresholds {self:?}")))
        }
    }

    /// Number of tail samples for a series of `n` usable samples.
    pub fn window_len(&self, n: usize) -> usize {
        ((n as f64 * self.tail_fraction).round() as usize).clamp(1, n.max(1))
    }
}

/// ln(eps) / (-2 ln Phi). `None` when the sample carries no information
/// (Phi <= 1, eps >= 1, or a non-finite log).
pub fn ratio(eps: f64, log_phi: f64) -> Option<f64> {
    if !(eps > 0.0 && eps < 1.0) || !(log_phi > 0.0) || !log_phi.is_finite() {
        return None;
    }
    Some(eps.ln() / (-2.0 * log_phi))
}

/// Interval classification by thresholds. Never returns `WellPosed`.
pub fn classify(lower: f64, upper: f64, t: &Thresholds) -> Classification {
    if upper < t.tau_mild {
        Classification::Mild
    } else if lower > t.tau_severe {
        Classification::Severe
    } else if t.tau_mild <= lower && upper <= t.tau_severe {
        let degree = if upper - lower < t.tau_collapse {
            Some(0.5 * (lower + upper))
        } else {
            None
        };
        Classification::Moderate { degree }
    } else {
        Classification::Indeterminate
    }
}

/// How the eps-grid for a curve is built. All grids are descending and
/// include both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridSpec {
    /// eps_j = eps_max * 2^{-j}, j = 0..points.
    Halving { eps_max: f64, points: usize },
    /// Geometric between eps_max and eps_min.
    Geometric { eps_max: f64, eps_min: f64, points: usize },
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 60;

    /// Halving grid from the essential sup (1 when unbounded).
    pub fn default_for(sup_bound: f64) -> Self {
        let eps_max = if sup_bound.is_finite() && sup_bound > 0.0 {
            sup_bound
        } else {
            1.0
        };
        GridSpec::Halving { eps_max, points: Self::DEFAULT_POINTS }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            GridSpec::Halving { eps_max, points } => {
                if !(eps_max > 0.0 && eps_max.is_finite()) || points < 2 {
                    return Err(Error::InvalidInput(format!(
                        "halving grid needs eps_max > 0 and at least 2 points, got {eps_max}, {points}"
                    )));
                }
                Ok((0..points).map(|j| eps_max * 0.5f64.powi(j as i32)).collect())
            }
            GridSpec::Geometric { eps_max, eps_min, points } => {
                if !(eps_min > 0.0 && eps_max > eps_min && eps_max.is_finite()) || points < 2 {
                    return Err(Error::InvalidInput(format!(
                        "geometric grid needs 0 < eps_min < eps_max and at least 2 points, got {eps_min}, {eps_max}, {points}"
                    )));
                }
                let (hi, lo) = (eps_max.ln(), eps_min.ln());
                let last = (points - 1) as f64;
                let mut g: Vec<f64> = (0..points)
                    .map(|j| (hi + (lo - hi) * j as f64 / last).exp())
                    .collect();
                g[0] = eps_max;
                g[points - 1] = eps_min;
                Ok(g)
            }
        }
    }
}

/// Volume of the Euclidean ball of radius `r` in R^d.
pub fn ball_volume(d: u32, r: f64) -> f64 {
    if r == f64::INFINITY {
        return f64::INFINITY;
    }
    let d = d as f64;
    std::f64::consts::PI.powf(0.5 * d) * r.powf(d) / statrs::function::gamma::gamma(0.5 * d + 1.0)
}
