use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Positive reweighting density κ. Densities on the line are assumed even.
#[derive(Clone)]
pub struct Density {
    pub name: String,
    eval: RealFn,
    antiderivative: Option<RealFn>,
}

impl Density {
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Density { name: name.into(), eval: Arc::new(eval), antiderivative: None }
    }

    /// Attaches an exact antiderivative, used for interval masses instead of quadrature.
    pub fn with_antiderivative(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.antiderivative = Some(Arc::new(f));
        self
    }

    /// κ ≡ 1.
    pub fn uniform() -> Self {
        Density::new("uniform", |_| 1.0).with_antiderivative(|x| x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn antiderivative(&self) -> Option<&RealFn> {
        self.antiderivative.as_ref()
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("name", &self.name)
            .field("exact_antiderivative", &self.antiderivative.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    HalfLine,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TotalMass {
    Finite,
    Infinite,
}

/// Benchmark measures and their density-weighted variants.
#[derive(Debug, Clone)]
pub enum MeasureSpace {
    LebesgueHalfLine,
    LebesgueLine,
    LebesgueRadial { dim: u32 },
    CountingIntegers,
    WeightedCountingIntegers(Density),
    WeightedLebesgue { support: Support, density: Density },
    LebesgueUnitInterval,
}

impl MeasureSpace {
    pub fn total_mass(&self) -> TotalMass {
        match self {
            MeasureSpace::LebesgueUnitInterval => TotalMass::Finite,
            _ => TotalMass::Infinite,
        }
    }

    pub fn name(&self) -> String {
        match self {
            MeasureSpace::LebesgueHalfLine => "lebesgue_halfline".into(),
            MeasureSpace::LebesgueLine => "lebesgue_line".into(),
            MeasureSpace::LebesgueRadial { dim } => format!("lebesgue_radial({dim})"),
            MeasureSpace::CountingIntegers => "counting_integers".into(),
            MeasureSpace::WeightedCountingIntegers(d) => format!("weighted_counting_integers({})", d.name),
            MeasureSpace::WeightedLebesgue { support, density } => {
                let s = match support {
                    Support::HalfLine => "halfline",
                    Support::Line => "line",
                };
                format!("weighted_lebesgue_{s}({})", density.name)
            }
            MeasureSpace::LebesgueUnitInterval => "lebesgue_unit_interval".into(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, MeasureSpace::CountingIntegers | MeasureSpace::WeightedCountingIntegers(_))
    }

    pub fn density(&self) -> Option<&Density> {
        match self {
            MeasureSpace::WeightedCountingIntegers(d) => Some(d),
            MeasureSpace::WeightedLebesgue { density, .. } => Some(density),
            _ => None,
        }
    }

    /// The same measure space reweighted by `density`.
    pub fn weighted(&self, density: Density) -> crate::Result<MeasureSpace> {
        match self {
            MeasureSpace::LebesgueHalfLine => {
                Ok(MeasureSpace::WeightedLebesgue { support: Support::HalfLine, density })
            }
            MeasureSpace::LebesgueLine => {
                Ok(MeasureSpace::WeightedLebesgue { support: Support::Line, density })
            }
            MeasureSpace::CountingIntegers => Ok(MeasureSpace::WeightedCountingIntegers(density)),
            other => Err(crate::Error::UnsupportedMeasure {
                required: "lebesgue_halfline, lebesgue_line or counting_integers".into(),
                got: other.name(),
            }),
        }
    }
}
