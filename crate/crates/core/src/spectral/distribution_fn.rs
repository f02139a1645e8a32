use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Finite,
    /// Some sample is the +inf sentinel.
    NonInformative,
    /// Finite data ran out before the end of the grid.
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Counting,
    Superlevel,
    Reweighted,
    Weyl,
}

/// Log-domain samples of Phi on a descending eps-grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFunction {
    pub eps_grid: Vec<f64>,
    pub log_phi: Vec<f64>,
    pub finiteness: Finiteness,
    pub source: Source,
    /// First grid index at which finite data was exhausted.
    pub exhausted_at: Option<usize>,
    /// Essential sup of the underlying multiplier, `inf` when unknown.
    pub sup_bound: f64,
}

impl DistributionFunction {
    /// Relative tolerance on Phi for the monotonicity check.
    pub const MONOTONE_TOL: f64 = 1e-9;

    pub fn new(eps_grid: Vec<f64>, log_phi: Vec<f64>, source: Source) -> Result<Self> {
        if eps_grid.len() != log_phi.len() {
            return Err(Error::InvalidInput(format!(
                "grid has {} points but {} samples",
                eps_grid.len(),
                log_phi.len()
            )));
        }
        if eps_grid.is_empty() {
            return Err(Error::InvalidInput("empty grid".into()));
        }
        if let Some(i) = eps_grid.windows(2).position(|w| !(w[0] > w[1] && w[1] > 0.0)) {
            return Err(Error::InvalidInput(format!("grid not strictly descending and positive at index {i}")));
        }
        // Phi nonincreasing in eps: ln Phi nondecreasing along the descending grid.
        for (i, w) in log_phi.windows(2).enumerate() {
            if w[0].is_nan() || w[1].is_nan() {
                return Err(Error::Numerical(format!("NaN in log Phi near index {i}")));
            }
            if w[0].is_finite() && w[1] < w[0] + (-Self::MONOTONE_TOL).ln_1p() {
                return Err(Error::Numerical(format!(
                    "Phi increases with eps between eps = {} (ln Phi = {}) and eps = {} (ln Phi = {})",
                    eps_grid[i + 1],
                    w[1],
                    eps_grid[i],
                    w[0]
                )));
            }
            if w[0] == f64::INFINITY && w[1] != f64::INFINITY {
                return Err(Error::Numerical(format!("Phi drops from the +inf sentinel at index {}", i + 1)));
            }
        }
        let finiteness = if log_phi.iter().any(|v| *v == f64::INFINITY) {
            Finiteness::NonInformative
        } else {
            Finiteness::Finite
        };
        Ok(DistributionFunction {
            eps_grid,
            log_phi,
            finiteness,
            source,
            exhausted_at: None,
            sup_bound: f64::INFINITY,
        })
    }

    /// Marks the curve exhausted from grid index `at` on.
    pub fn mark_exhausted(mut self, at: usize) -> Self {
        self.exhausted_at = Some(at);
        if self.finiteness == Finiteness::Finite {
            self.finiteness = Finiteness::Exhausted;
        }
        self
    }

    pub fn with_sup_bound(mut self, sup: f64) -> Self {
        self.sup_bound = sup;
        self
    }

    pub fn len(&self) -> usize {
        self.eps_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_grid.is_empty()
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.log_phi[i].exp()
    }

    /// Samples usable by estimators: before exhaustion and finite.
    pub fn usable(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let end = self.exhausted_at.unwrap_or(self.len());
        (0..end)
            .filter(move |&i| self.log_phi[i].is_finite())
            .map(move |i| (i, self.eps_grid[i], self.log_phi[i]))
    }
}
