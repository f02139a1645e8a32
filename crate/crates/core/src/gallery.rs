//! Named operator models with their spectral data and expected behaviour.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::counting::{counting_curve, default_grid as counting_grid};
use crate::distribution::{essinf_estimate, phi_curve, EssinfReport, EssinfVerdict};
use crate::error::{Error, Result};
use crate::estimate::{interval_estimate, ratio_column, regression_estimate, RegressionFit};
use crate::spectral::{
    Classification, Density, DistributionFunction, Finiteness, GridSpec, IllPosednessInterval, MeasureSpace,
    Multiplier, Shape, SigmaSequence, Source, TailDecay, TailLaw, Thresholds,
};

/// Where a model's Phi comes from.
#[derive(Clone)]
pub enum SpectralData {
    Sigma(SigmaSequence),
    Measure { lambda: Multiplier, mu: MeasureSpace },
    /// Phi given directly in log domain by a counting law.
    Weyl { log_phi: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum Expected {
    Mild,
    Moderate { degree: f64 },
    Severe,
    /// Phi = +inf on an interval; the essinf verdict separates the cases.
    NonInformative { verdict: EssinfVerdict },
    /// Unit-interval examples for rearrangements; no asymptotic class.
    NotApplicable,
}

impl Expected {
    pub fn label(&self) -> String {
        match self {
            Expected::Mild => "mild".into(),
            Expected::Moderate { degree } => format!("moderate({degree})"),
            Expected::Severe => "severe".into(),
            Expected::NonInformative { verdict } => match verdict {
                EssinfVerdict::IllPosed => "non_informative+ill_posed".into(),
                EssinfVerdict::WellPosedCandidate => "non_informative+well_posed_candidate".into(),
                EssinfVerdict::Indeterminate => "non_informative".into(),
            },
            Expected::NotApplicable => "n/a".into(),
        }
    }
}

#[derive(Clone)]
pub struct OperatorModel {
    pub id: String,
    pub params: BTreeMap<String, f64>,
    pub data: SpectralData,
    pub expected: Expected,
    pub notes: String,
    grid: Option<GridSpec>,
}

impl OperatorModel {
    pub fn sup_bound(&self) -> f64 {
        match &self.data {
            SpectralData::Sigma(s) => s.values()[0] * s.values()[0],
            SpectralData::Measure { lambda, .. } => lambda.sup_bound,
            SpectralData::Weyl { .. } => f64::INFINITY,
        }
    }

    pub fn default_grid(&self) -> GridSpec {
        if let Some(g) = self.grid {
            return g;
        }
        match &self.data {
            SpectralData::Sigma(s) => counting_grid(s),
            _ => GridSpec::default_for(self.sup_bound()),
        }
    }

    pub fn multiplier(&self) -> Option<(&Multiplier, &MeasureSpace)> {
        match &self.data {
            SpectralData::Measure { lambda, mu } => Some((lambda, mu)),
            _ => None,
        }
    }

    pub fn param(&self, key: &str) -> f64 {
        self.params[key]
    }

    /// Phi on a grid, dispatching on the kind of spectral data.
    pub fn phi_curve(&self, grid: &[f64]) -> Result<DistributionFunction> {
        match &self.data {
            SpectralData::Sigma(s) => counting_curve(s, grid),
            SpectralData::Measure { lambda, mu } => phi_curve(lambda, mu, grid),
            SpectralData::Weyl { log_phi } => {
                DistributionFunction::new(grid.to_vec(), grid.iter().map(|e| log_phi(*e)).collect(), Source::Weyl)
            }
        }
    }
}

/// Catalogue entry for listings.
#[derive(Debug, Clone, Serialize)]
pub struct ModelInfo {
    pub id: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub measure: &'static str,
    pub expected: String,
}

const CATALOG: &[(&str, &[(&str, f64)], &str)] = &[
    ("riemann_liouville", &[("alpha", 1.0), ("n", 4096.0)], "counting"),
    ("multivariate_integration", &[("d", 3.0), ("n", 65536.0)], "counting"),
    ("sobolev_embedding", &[("p", 2.0), ("d", 4.0), ("n", 4096.0)], "counting"),
    ("weyl", &[("q", 2.0), ("d", 2.0), ("c", 1.0)], "weyl"),
    ("inverse_laplacian", &[("d", 2.0)], "weyl"),
    ("backward_heat", &[("tbar", 1.0)], "counting_integers"),
    ("multiplier_a1", &[("s", 1.0)], "lebesgue_line"),
    ("multiplier_a2", &[], "lebesgue_line"),
    ("multiplier_b", &[("s", 1.0)], "lebesgue_line"),
    ("multiplier_c", &[("s", 1.0)], "lebesgue_line"),
    ("hausdorff", &[], "lebesgue_halfline"),
    ("gaussian_kernel", &[("d", 1.0)], "lebesgue_radial"),
    ("laplace_kernel", &[("a", 1.0), ("b", 1.0), ("d", 1.0)], "lebesgue_radial"),
    ("fractional_line", &[("s", 0.5)], "lebesgue_line"),
    ("parabolic_source", &[("diffusivity", 1.0), ("t0", 1.0), ("d", 2.0)], "lebesgue_radial"),
    ("counterexample_sin2", &[], "lebesgue_halfline"),
    ("counterexample_const", &[("c", 0.5)], "lebesgue_halfline"),
    ("unit_power", &[("p", 2.0)], "lebesgue_unit_interval"),
    ("unit_tent", &[], "lebesgue_unit_interval"),
];

pub fn model_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.0).collect()
}

/// Every model with default parameters.
pub fn list() -> Vec<ModelInfo> {
    CATALOG
        .iter()
        .map(|(id, params, measure)| ModelInfo {
            id,
            params: params.to_vec(),
            measure,
            expected: make(id, &BTreeMap::new()).map(|m| m.expected.label()).unwrap_or_default(),
        })
        .collect()
}

fn resolve(id: &str, given: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let (_, defaults, _) = CATALOG
        .iter()
        .find(|e| e.0 == id)
        .ok_or_else(|| Error::UnknownModel(id.to_string()))?;
    let mut params: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in given {
        if !params.contains_key(k) {
            return Err(Error::UnknownParameter { model: id.to_string(), param: k.clone() });
        }
        if !(*v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("parameter {k} of {id} must be positive, got {v}")));
        }
        params.insert(k.clone(), *v);
    }
    for key in ["n", "d"] {
        if let Some(v) = params.get(key) {
            if v.fract() != 0.0 || *v < 1.0 {
                return Err(Error::InvalidInput(format!("parameter {key} of {id} must be a positive integer, got {v}")));
            }
        }
    }
    Ok(params)
}

fn sigma_model(law: TailLaw, n: f64) -> Result<SpectralData> {
    if n < 32.0 || n > 1e7 {
        return Err(Error::InvalidInput(format!("n must lie in [32, 1e7], got {n}")));
    }
    Ok(SpectralData::Sigma(SigmaSequence::from_law(law, n as usize)?))
}

fn measure(lambda: Multiplier, mu: MeasureSpace) -> SpectralData {
    SpectralData::Measure { lambda, mu }
}

/// Builds a model from its id and (partial) parameters.
pub fn make(id: &str, given: &BTreeMap<String, f64>) -> Result<OperatorModel> {
    let p = resolve(id, given)?;
    let g = |k: &str| p[k];
    let mut grid = None;
    let (data, expected, notes) = match id {
        "riemann_liouville" => {
            let alpha = g("alpha");
            (
                sigma_model(TailLaw::Power { alpha, scale: 1.0 }, g("n"))?,
                Expected::Moderate { degree: alpha },
                "fractional integration: sigma_n = n^-alpha",
            )
        }
        "multivariate_integration" => (
            sigma_model(TailLaw::PowerLog { d: g("d"), scale: 1.0 }, g("n"))?,
            Expected::Moderate { degree: 1.0 },
            "integration on the d-cube: sigma_n = ln(n+1)^(d-1)/n",
        ),
        "sobolev_embedding" => {
            let s = g("p") / g("d");
            (
                sigma_model(TailLaw::Power { alpha: s, scale: 1.0 }, g("n"))?,
                Expected::Moderate { degree: s },
                "Sobolev embedding H^p -> L^2 on a d-dimensional domain: sigma_n = n^(-p/d)",
            )
        }
        "weyl" | "inverse_laplacian" => {
            let (q, d, c) = if id == "weyl" { (g("q"), g("d"), g("c")) } else { (2.0, g("d"), 1.0) };
            let e = d / (2.0 * q);
            let lc = c.ln();
            (
                SpectralData::Weyl { log_phi: Arc::new(move |eps: f64| lc - e * eps.ln()) },
                Expected::Moderate { degree: q / d },
                "Weyl counting law Phi = c (Theta^-1(eps))^(d/2) with Theta(t) = t^-q",
            )
        }
        "backward_heat" => {
            let tbar = g("tbar");
            let lambda = Multiplier::new(
                move |k| (-k * k * tbar).exp(),
                Shape::Discrete {
                    cutoff: Arc::new(move |eps: f64| {
                        let l = (1.0 / eps).ln().max(0.0);
                        (l / tbar).sqrt().ceil() as u64 + 2
                    }),
                },
                1.0,
            )
            .with_decay(TailDecay::Exponential);
            grid = Some(GridSpec::Geometric { eps_max: 1.0, eps_min: 1e-300, points: GridSpec::DEFAULT_POINTS });
            (
                measure(lambda, MeasureSpace::CountingIntegers),
                Expected::Severe,
                "periodic backward heat equation: lambda(k) = exp(-k^2 tbar) on Z",
            )
        }
        "multiplier_a1" => {
            let s = g("s");
            let lambda = Multiplier::new(move |w| (1.0 + w * w).powf(-s), Shape::MonotoneTail { breakpoint: 0.0 }, 1.0)
                .with_decay(TailDecay::Power { exponent: 2.0 * s });
            (measure(lambda, MeasureSpace::LebesgueLine), Expected::Moderate { degree: s }, "lambda = (1+w^2)^-s")
        }
        "multiplier_a2" => {
            let lambda = Multiplier::new(
                |w| w * w / (1.0 + w.powi(4)),
                Shape::PiecewiseMonotone { breakpoints: vec![0.0, 1.0] },
                0.5,
            )
            .with_decay(TailDecay::Power { exponent: 2.0 });
            (
                measure(lambda, MeasureSpace::LebesgueLine),
                Expected::Moderate { degree: 1.0 },
                "lambda = w^2/(1+w^4): inner zero at the origin",
            )
        }
        "multiplier_b" => {
            let s = g("s");
            let lambda = Multiplier::new(move |w: f64| (-w.abs().powf(s)).exp(), Shape::MonotoneTail { breakpoint: 0.0 }, 1.0)
                .with_decay(TailDecay::Exponential);
            (measure(lambda, MeasureSpace::LebesgueLine), Expected::Severe, "lambda = exp(-|w|^s)")
        }
        "multiplier_c" => {
            let s = g("s");
            let lambda = Multiplier::new(
                move |w: f64| {
                    let a = w.abs();
                    if a >= std::f64::consts::E {
                        a.ln().powf(-2.0 * s)
                    } else {
                        1.0
                    }
                },
                Shape::MonotoneTail { breakpoint: 0.0 },
                1.0,
            )
            .with_decay(TailDecay::Logarithmic { power: 2.0 * s })
            // {lambda > eps} = {|w| < exp(eps^(-1/(2s)))} for eps < 1.
            .with_closed_form(move |eps: f64| {
                if eps >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    2f64.ln() + eps.powf(-1.0 / (2.0 * s))
                }
            });
            (measure(lambda, MeasureSpace::LebesgueLine), Expected::Mild, "lambda = ln(|w|)^(-2s) for |w| >= e, else 1")
        }
        "hausdorff" => {
            let lambda = Multiplier::new(|w: f64| PI / (PI * w).cosh(), Shape::MonotoneTail { breakpoint: 0.0 }, PI)
                .with_decay(TailDecay::Exponential);
            (
                measure(lambda, MeasureSpace::LebesgueHalfLine),
                Expected::Severe,
                "Hausdorff moment operator: T*T is the Hilbert matrix, lambda = pi/cosh(pi w)",
            )
        }
        "gaussian_kernel" => {
            let d = g("d") as u32;
            let c = PI.powi(d as i32);
            let lambda = Multiplier::new(move |r| c * (-0.5 * r * r).exp(), Shape::RadialMonotoneTail { breakpoint: 0.0 }, c)
                .with_decay(TailDecay::Exponential);
            (
                measure(lambda, MeasureSpace::LebesgueRadial { dim: d }),
                Expected::Severe,
                "Gaussian convolution kernel exp(-|t|^2): lambda = pi^d exp(-|w|^2/2)",
            )
        }
        "laplace_kernel" => {
            let (a, b, d) = (g("a"), g("b"), g("d") as u32);
            let lambda = Multiplier::new(move |r| (1.0 + b * r * r).powf(-2.0 * a), Shape::RadialMonotoneTail { breakpoint: 0.0 }, 1.0)
                .with_decay(TailDecay::Power { exponent: 4.0 * a });
            (
                measure(lambda, MeasureSpace::LebesgueRadial { dim: d }),
                Expected::Moderate { degree: 2.0 * a / d as f64 },
                "Laplace-type kernel: lambda = (1+b|w|^2)^(-2a)",
            )
        }
        "fractional_line" => {
            let s = g("s");
            let lambda = Multiplier::new(move |w: f64| w.abs().powf(-2.0 * s), Shape::MonotoneTail { breakpoint: 0.0 }, f64::INFINITY)
                .with_decay(TailDecay::Power { exponent: 2.0 * s });
            (
                measure(lambda, MeasureSpace::LebesgueLine),
                Expected::Moderate { degree: s },
                "fractional integration on the line: lambda = |w|^(-2s), unbounded",
            )
        }
        "parabolic_source" => {
            let (a, t0, d) = (g("diffusivity"), g("t0"), g("d") as u32);
            let lambda = Multiplier::new(
                move |r| {
                    let x = t0 * a * a * r * r;
                    let q = if x == 0.0 { 1.0 } else { -(-x).exp_m1() / x };
                    t0 * t0 * q * q
                },
                Shape::RadialMonotoneTail { breakpoint: 0.0 },
                t0 * t0,
            )
            .with_decay(TailDecay::Power { exponent: 4.0 });
            (
                measure(lambda, MeasureSpace::LebesgueRadial { dim: d }),
                Expected::Moderate { degree: 2.0 / d as f64 },
                "source identification for the heat equation: lambda = [1-exp(-t0 a^2 |w|^2)]^2/(a^4 |w|^4)",
            )
        }
        "counterexample_sin2" => {
            let lambda = Multiplier::new(|w: f64| w.sin().powi(2), Shape::GenericSampled { resolution: 1e-2, extent: 1.0 }, 1.0)
                .with_decay(TailDecay::NonDecaying);
            (
                measure(lambda, MeasureSpace::LebesgueHalfLine),
                Expected::NonInformative { verdict: EssinfVerdict::IllPosed },
                "lambda = sin^2(w): Phi = inf for eps < 1",
            )
        }
        "counterexample_const" => {
            let c = g("c");
            let lambda = Multiplier::new(move |_| c, Shape::GenericSampled { resolution: 1e-2, extent: 1.0 }, c)
                .with_decay(TailDecay::NonDecaying);
            (
                measure(lambda, MeasureSpace::LebesgueHalfLine),
                Expected::NonInformative { verdict: EssinfVerdict::WellPosedCandidate },
                "constant multiplier: Phi = inf below c, yet bounded inverse",
            )
        }
        "unit_power" => {
            let q = g("p");
            let lambda = Multiplier::new(move |w: f64| w.max(0.0).powf(q), Shape::PiecewiseMonotone { breakpoints: vec![0.0] }, 1.0);
            (measure(lambda, MeasureSpace::LebesgueUnitInterval), Expected::NotApplicable, "lambda = w^p on [0, 1]")
        }
        "unit_tent" => {
            let lambda = Multiplier::new(|w: f64| w.min(1.0 - w).max(0.0), Shape::PiecewiseMonotone { breakpoints: vec![0.0, 0.5] }, 0.5);
            (measure(lambda, MeasureSpace::LebesgueUnitInterval), Expected::NotApplicable, "lambda = min(w, 1-w) on [0, 1]")
        }
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    Ok(OperatorModel { id: id.to_string(), params: p, data, expected, notes: notes.to_string(), grid })
}

/// Builds a model with default parameters.
pub fn make_default(id: &str) -> Result<OperatorModel> {
    make(id, &BTreeMap::new())
}

/// Builds a model from `(name, value)` pairs.
pub fn make_with(id: &str, params: &[(&str, f64)]) -> Result<OperatorModel> {
    make(id, &params.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

/// Named reweighting densities.
///
/// `exp-pi`: kappa(w) = e^{pi w}/2 on the half-line. `exp-t-k2`: kappa(k) =
/// e^{tbar k^2} on the integers. `uniform`: kappa = 1.
pub fn density(name: &str, model: &OperatorModel) -> Result<Density> {
    match name {
        "uniform" => Ok(Density::uniform()),
        "exp-pi" => Ok(Density::new("exp-pi", |w: f64| 0.5 * (PI * w).exp()).with_antiderivative(|w: f64| (PI * w).exp() / (2.0 * PI))),
        "exp-t-k2" => {
            let tbar = model.params.get("tbar").copied().unwrap_or(1.0);
            Ok(Density::new("exp-t-k2", move |k: f64| (tbar * k * k).exp()))
        }
        other => Err(Error::InvalidInput(format!("unknown density `{other}` (expected uniform, exp-pi, exp-t-k2)"))),
    }
}

/// lambda with the ball of radius `r` around the origin removed (set to 0).
pub fn remove_ball(lambda: &Multiplier, r: f64) -> Multiplier {
    let f = lambda.eval_fn();
    let shape = match lambda.shape {
        Shape::RadialMonotoneTail { .. } => Shape::RadialMonotoneTail { breakpoint: r },
        _ => Shape::MonotoneTail { breakpoint: r },
    };
    Multiplier::new(move |w: f64| if w.abs() < r { 0.0 } else { f(w) }, shape, lambda.sup_bound).with_decay(lambda.decay)
}

/// Full end-to-end report for a model.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub phi: DistributionFunction,
    pub ratios: Vec<Option<f64>>,
    pub interval: IllPosednessInterval,
    pub regression: Option<RegressionFit>,
    pub essinf: Option<EssinfReport>,
    pub expected: Expected,
    pub agrees: bool,
}

/// Whether an interval and essinf verdict match an expectation.
pub fn agrees(expected: &Expected, phi: &DistributionFunction, interval: &IllPosednessInterval, essinf: Option<&EssinfReport>, t: &Thresholds) -> bool {
    match expected {
        Expected::Mild => interval.classification == Classification::Mild,
        Expected::Severe => interval.classification == Classification::Severe,
        Expected::Moderate { degree } => interval
            .degree()
            .map(|d| (d - degree).abs() <= 0.5 * t.tau_collapse)
            .unwrap_or(false),
        Expected::NonInformative { verdict } => {
            phi.finiteness == Finiteness::NonInformative && essinf.map(|e| e.verdict == *verdict).unwrap_or(false)
        }
        Expected::NotApplicable => true,
    }
}

pub fn analyze(model: &OperatorModel, grid: Option<GridSpec>, t: &Thresholds) -> Result<Analysis> {
    t.validate()?;
    let grid = grid.unwrap_or_else(|| model.default_grid()).points()?;
    let phi = model.phi_curve(&grid)?;
    let interval = interval_estimate(&phi, t);
    let regression = regression_estimate(&phi, t);
    let essinf = model.multiplier().map(|(l, mu)| essinf_estimate(l, mu, Default::default()));
    let ok = agrees(&model.expected, &phi, &interval, essinf.as_ref(), t);
    Ok(Analysis {
        model: model.id.clone(),
        params: model.params.clone(),
        ratios: ratio_column(&phi),
        phi,
        interval,
        regression,
        essinf,
        expected: model.expected,
        agrees: ok,
    })
}
