use super::superlevel::phi_curve;
use crate::error::Result;
use crate::spectral::{Density, DistributionFunction, MeasureSpace, Multiplier};

/// Phi~(eps) = integral (or sum) of the density over {lambda > eps}.
pub fn reweight(
    lambda: &Multiplier,
    mu: &MeasureSpace,
    density: Density,
    grid: &[f64],
) -> Result<DistributionFunction> {
    let weighted = mu.weighted(density)?;
    phi_curve(lambda, &weighted, grid)
}
