//! Degree of ill-posedness of linear operator equations from spectral data.
//!
//! Compact operators enter through their singular values ([`counting`]),
//! non-compact ones through a multiplier function on a measure space
//! ([`distribution`]). Both paths produce a [`DistributionFunction`] that
//! [`estimate`] turns into an interval of ill-posedness.

pub mod acceptance;
pub mod counting;
pub mod discretize;
pub mod distribution;
pub mod error;
pub mod estimate;
pub mod gallery;
pub mod numeric;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{
    classify, ratio, Classification, Density, DistributionFunction, Finiteness, GridSpec,
    IllPosednessInterval, LogMass, MeasureSpace, Multiplier, Shape, SigmaSequence, Source,
    TailDecay, TailLaw, Thresholds,
};
