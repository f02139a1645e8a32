use serde::{Deserialize, Serialize};

use super::{classify, Thresholds};
use crate::numeric::lsq_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    WellPosed,
    Mild,
    Moderate { degree: Option<f64> },
    Severe,
    Indeterminate,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::WellPosed => "well_posed",
            Classification::Mild => "mild",
            Classification::Moderate { .. } => "moderate",
            Classification::Severe => "severe",
            Classification::Indeterminate => "indeterminate",
        }
    }

    pub fn degree(&self) -> Option<f64> {
        match self {
            Classification::Moderate { degree } => *degree,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    None,
}

/// What the estimator looked at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDiagnostics {
    pub method: String,
    /// Index range [start, end) of the window in the source series.
    pub window: (usize, usize),
    /// (location, value) pairs; the location is eps or n.
    pub samples: Vec<(f64, f64)>,
    pub window_min: f64,
    pub window_max: f64,
    /// Slope of ln(value) against ln(scale) across the window.
    pub elasticity: Option<f64>,
    pub max_drawdown: f64,
    pub max_rise: f64,
    pub trend: Trend,
    pub note: Option<String>,
}

/// [A, B] with its classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IllPosednessInterval {
    pub lower: f64,
    pub upper: f64,
    pub classification: Classification,
    pub diagnostics: Option<WindowDiagnostics>,
}

impl IllPosednessInterval {
    pub fn indeterminate(note: impl Into<String>) -> Self {
        IllPosednessInterval {
            lower: 0.0,
            upper: f64::INFINITY,
            classification: Classification::Indeterminate,
            diagnostics: Some(WindowDiagnostics {
                method: "none".into(),
                window: (0, 0),
                samples: Vec::new(),
                window_min: f64::NAN,
                window_max: f64::NAN,
                elasticity: None,
                max_drawdown: f64::NAN,
                max_rise: f64::NAN,
                trend: Trend::None,
                note: Some(note.into()),
            }),
        }
    }

    pub fn degree(&self) -> Option<f64> {
        self.classification.degree()
    }
}

/// Turns a window of asymptotic estimates into an interval.
///
/// `scale` is the growing variable (ln(1/eps) or ln n) and `values` the local
/// degree estimates, both ordered toward the asymptotic end. A sustained
/// power-type growth of the values in `scale` means the limit is infinite;
/// a sustained decay means it is zero. Otherwise the window min/max stand in
/// for liminf/limsup.
pub fn assess_window(
    method: &str,
    window: (usize, usize),
    locations: &[f64],
    scale: &[f64],
    values: &[f64],
    t: &Thresholds,
) -> IllPosednessInterval {
    debug_assert_eq!(scale.len(), values.len());
    let samples: Vec<(f64, f64)> = locations.iter().copied().zip(values.iter().copied()).collect();
    let window_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let window_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let positive = values.iter().all(|v| v.is_finite() && *v > 0.0) && scale.iter().all(|s| *s > 0.0);
    let elasticity = if positive && values.len() >= 3 {
        let lx: Vec<f64> = scale.iter().map(|s| s.ln()).collect();
        let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        lsq_slope(&lx, &ly)
    } else {
        None
    };

    let (mut max_drawdown, mut max_rise) = (0.0f64, 0.0f64);
    let (mut run_max, mut run_min) = (f64::NEG_INFINITY, f64::INFINITY);
    for &v in values {
        run_max = run_max.max(v);
        run_min = run_min.min(v);
        if run_max > 0.0 && run_max.is_finite() {
            max_drawdown = max_drawdown.max((run_max - v) / run_max);
        }
        if run_min > 0.0 && v.is_finite() {
            max_rise = max_rise.max((v - run_min) / run_min);
        }
    }

    let (lower, upper, classification, trend) = match elasticity {
        Some(g) if g >= t.tau_trend && max_drawdown <= t.monotone_tol => {
            (f64::INFINITY, f64::INFINITY, Classification::Severe, Trend::Increasing)
        }
        Some(g) if g <= -t.tau_trend && max_rise <= t.monotone_tol => {
            (0.0, 0.0, Classification::Mild, Trend::Decreasing)
        }
        _ => {
            let lo = window_min.max(0.0);
            let hi = window_max.max(lo);
            (lo, hi, classify(lo, hi, t), Trend::None)
        }
    };

    IllPosednessInterval {
        lower,
        upper,
        classification,
        diagnostics: Some(WindowDiagnostics {
            method: method.into(),
            window,
            samples,
            window_min,
            window_max,
            elasticity,
            max_drawdown,
            max_rise,
            trend,
            note: None,
        }),
    }
}
