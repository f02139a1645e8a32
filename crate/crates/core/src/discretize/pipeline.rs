use serde::{Deserialize, Serialize};

use super::fft::{fft_multiplier, KernelSampler};
use super::matrix::{hilbert_matrix, riemann_liouville_matrix};
use super::svd::singular_values;
use crate::counting::counting_curve;
use crate::distribution::phi_curve;
use crate::error::Result;
use crate::estimate::{interval_estimate, regression_estimate, RegressionFit};
use crate::spectral::{
    Classification, DistributionFunction, GridSpec, IllPosednessInterval, MeasureSpace, SigmaSequence, Thresholds,
};

/// Leading fraction of the matrix singular values trusted to approximate the operator's.
pub const TRUSTED_FRACTION: f64 = 0.125;

/// Lowest eps of a sampled-kernel curve, relative to the largest sample.
const KERNEL_EPS_RANGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MatrixOperator {
    /// Finite section of the Hilbert matrix, read as T*T of the Hausdorff moment operator.
    Hilbert,
    RiemannLiouville { alpha: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub operator: String,
    pub n: usize,
    /// Singular values of the assembled matrix (after the drop tolerance).
    pub matrix_singular_values: Vec<f64>,
    /// Singular values of the operator fed to the counting function.
    pub sigma_used: Vec<f64>,
    pub phi: DistributionFunction,
    pub interval: IllPosednessInterval,
    pub regression: Option<RegressionFit>,
    pub discretization_artifact: bool,
    pub notes: Vec<String>,
}

fn counting_report(
    operator: String,
    n: usize,
    matrix_sv: Vec<f64>,
    sigma: SigmaSequence,
    trusted: usize,
    t: &Thresholds,
) -> Result<PipelineReport> {
    let v = sigma.values();
    let k = trusted.clamp(2, v.len());
    let (top, bottom) = (v[0] * v[0], v[k - 1] * v[k - 1]);
    let grid = GridSpec::Geometric { eps_max: top, eps_min: bottom, points: GridSpec::DEFAULT_POINTS }.points()?;
    let phi = counting_curve(&sigma, &grid)?;
    let interval = interval_estimate(&phi, t);
    let regression = regression_estimate(&phi, t);
    Ok(PipelineReport {
        operator,
        n,
        matrix_singular_values: matrix_sv,
        sigma_used: v[..k].to_vec(),
        phi,
        interval,
        regression,
        discretization_artifact: false,
        notes: Vec::new(),
    })
}

/// matrix -> singular values -> counting function -> interval.
pub fn matrix_pipeline(op: MatrixOperator, n: usize, t: &Thresholds) -> Result<PipelineReport> {
    t.validate()?;
    match op {
        MatrixOperator::RiemannLiouville { alpha } => {
            let sv = singular_values(&riemann_liouville_matrix(alpha, n)?)?;
            let trusted = ((n as f64 * TRUSTED_FRACTION) as usize).max(32);
            let mut r = counting_report(format!("j_alpha(alpha={alpha})"), n, sv.values().to_vec(), sv.clone(), trusted, t)?;
            r.notes.push(format!(
                "counting uses the leading {} of {} singular values; quadrature error grows with the index",
                r.sigma_used.len(),
                sv.len()
            ));
            Ok(r)
        }
        MatrixOperator::Hilbert => {
            let sv = singular_values(&hilbert_matrix(n)?)?;
            // The matrix is T*T, so the operator's singular values are square roots.
            let sigma = SigmaSequence::new(sv.values().iter().map(|s| s.sqrt()).collect())?;
            let all = sigma.len();
            let mut r = counting_report("hilbert".into(), n, sv.values().to_vec(), sigma, all, t)?;
            r.discretization_artifact = true;
            let class = r.interval.classification;
            r.notes.push(format!(
                "finite sections of the bounded non-compact Hilbert matrix have exponentially decaying singular values; \
                 the {} verdict describes the N = {n} section, not the infinite operator, whose norm is pi",
                class.label()
            ));
            if class != Classification::Severe {
                r.notes.push("finite-section spectrum did not resolve to a severe trend on this grid".into());
            }
            Ok(r)
        }
    }
}

/// sampled kernel -> FFT multiplier -> distribution function -> interval.
pub fn kernel_pipeline(h: &KernelSampler, t: &Thresholds) -> Result<PipelineReport> {
    t.validate()?;
    let m = fft_multiplier(h)?;
    let lambda = m.to_multiplier();
    let top = lambda.sup_bound;
    let grid = GridSpec::Geometric { eps_max: top, eps_min: top * KERNEL_EPS_RANGE, points: GridSpec::DEFAULT_POINTS }
        .points()?;
    let phi = phi_curve(&lambda, &MeasureSpace::LebesgueLine, &grid)?;
    let interval = interval_estimate(&phi, t);
    let regression = regression_estimate(&phi, t);
    let mut notes = m.warnings.clone();
    notes.push(format!("aliasing estimate {:.3e}", m.aliasing_estimate));
    let (_, l) = m.nonnegative();
    Ok(PipelineReport {
        operator: format!("fft:{}", h.name),
        n: h.n,
        matrix_singular_values: Vec::new(),
        sigma_used: l,
        phi,
        interval,
        regression,
        discretization_artifact: false,
        notes,
    })
}
