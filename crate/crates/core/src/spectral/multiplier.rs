use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Enumeration cutoff for discrete multipliers: all `k` with `|k| > cutoff(eps)`
/// satisfy `lambda(k) <= eps`.
pub type Cutoff = Arc<dyn Fn(f64) -> u64 + Send + Sync>;

/// ln of the superlevel measure under the model's benchmark measure.
pub type ClosedForm = RealFn;

/// Monotonicity metadata that selects the superlevel algorithm.
#[derive(Clone)]
pub enum Shape {
    /// Nonincreasing on [breakpoint, inf); sampled below it.
    MonotoneTail { breakpoint: f64 },
    /// Radial profile nonincreasing in the radius beyond `breakpoint`.
    RadialMonotoneTail { breakpoint: f64 },
    /// Monotone on each [b_i, b_{i+1}]; the last branch runs to the end of
    /// the domain and must be nonincreasing when that end is infinite.
    PiecewiseMonotone { breakpoints: Vec<f64> },
    /// Constant on unit cells [n-1, n), n = 1..=cells; with `monotone_tail`
    /// the cell heights keep decreasing past `cells`.
    Steps { cells: usize, monotone_tail: bool },
    /// Function on the integers with an explicit enumeration cutoff.
    Discrete { cutoff: Cutoff },
    /// No structure: indicator sums on a grid of the given resolution over
    /// doubling truncations starting at `extent`.
    GenericSampled { resolution: f64, extent: f64 },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::MonotoneTail { .. } => "monotone_tail",
            Shape::RadialMonotoneTail { .. } => "radial_monotone_tail",
            Shape::PiecewiseMonotone { .. } => "piecewise_monotone",
            Shape::Steps { .. } => "steps",
            Shape::Discrete { .. } => "discrete",
            Shape::GenericSampled { .. } => "generic_sampled",
        }
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::MonotoneTail { breakpoint } => write!(f, "MonotoneTail({breakpoint})"),
            Shape::RadialMonotoneTail { breakpoint } => write!(f, "RadialMonotoneTail({breakpoint})"),
            Shape::PiecewiseMonotone { breakpoints } => write!(f, "PiecewiseMonotone({breakpoints:?})"),
            Shape::Steps { cells, monotone_tail } => write!(f, "Steps({cells}, {monotone_tail})"),
            Shape::Discrete { .. } => write!(f, "Discrete"),
            Shape::GenericSampled { resolution, extent } => {
                write!(f, "GenericSampled({resolution}, {extent})")
            }
        }
    }
}

/// Declared behaviour of lambda(omega) as |omega| -> inf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailDecay {
    /// lambda ~ |omega|^{-exponent}
    Power { exponent: f64 },
    /// Faster than any power.
    Exponential,
    /// lambda ~ ln(|omega|)^{-power}: not in any L^p.
    Logarithmic { power: f64 },
    /// Does not decay (constants, oscillations).
    NonDecaying,
    Unknown,
}

impl TailDecay {
    /// Whether lambda^p is integrable at infinity in dimension `dim`, when
    /// the declaration decides it.
    pub fn lp_integrable(&self, p: f64, dim: f64) -> Option<bool> {
        match *self {
            TailDecay::Power { exponent } => Some(exponent * p > dim),
            TailDecay::Exponential => Some(true),
            TailDecay::Logarithmic { .. } | TailDecay::NonDecaying => Some(false),
            TailDecay::Unknown => None,
        }
    }
}

/// Nonnegative multiplier function lambda with shape metadata.
///
/// `eval` takes a scalar: the coordinate on the (half-)line or unit interval,
/// the radius for radial measures, or the integer for counting measures.
#[derive(Clone)]
pub struct Multiplier {
    eval: RealFn,
    pub shape: Shape,
    closed_form: Option<ClosedForm>,
    pub sup_bound: f64,
    pub decay: TailDecay,
}

impl Multiplier {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, shape: Shape, sup_bound: f64) -> Self {
        Multiplier {
            eval: Arc::new(eval),
            shape,
            closed_form: None,
            sup_bound,
            decay: TailDecay::Unknown,
        }
    }

    pub fn with_decay(mut self, decay: TailDecay) -> Self {
        self.decay = decay;
        self
    }

    /// Closed-form ln mu({lambda > eps}) under the benchmark measure.
    pub fn with_closed_form(mut self, log_superlevel: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_form = Some(Arc::new(log_superlevel));
        self
    }

    pub fn without_closed_form(mut self) -> Self {
        self.closed_form = None;
        self
    }

    /// lambda(x); negative results from the rule are clamped to 0.
    pub fn eval(&self, x: f64) -> f64 {
        let v = (self.eval)(x);
        if v > 0.0 {
            v
        } else if v.is_nan() {
            f64::NAN
        } else {
            0.0
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn eval_fn(&self) -> RealFn {
        self.eval.clone()
    }
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("shape", &self.shape)
            .field("closed_form", &self.closed_form.is_some())
            .field("sup_bound", &self.sup_bound)
            .field("decay", &self.decay)
            .finish()
    }
}
