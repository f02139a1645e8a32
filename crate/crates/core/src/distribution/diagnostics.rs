use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::superlevel::{DIVERGENCE_DOUBLINGS, DIVERGENCE_FACTOR};
use crate::error::{Error, Result};
use crate::numeric::{golden_min, integrate};
use crate::spectral::{ball_volume, MeasureSpace, Multiplier, Support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EssinfVerdict {
    WellPosedCandidate,
    IllPosed,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssinfReport {
    pub estimate: f64,
    pub verdict: EssinfVerdict,
    /// Truncation radius reached when the verdict was made.
    pub truncation: f64,
    pub floor: f64,
}

/// Truncations [0, R_k], R_k = 2^k * r0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSchedule {
    pub r0: f64,
    pub max_doublings: usize,
    pub samples_per_shell: usize,
    /// Shells without change that count as stabilised.
    pub stable_shells: usize,
}

impl Default for TruncationSchedule {
    fn default() -> Self {
        TruncationSchedule { r0: 1.0, max_doublings: 1000, samples_per_shell: 512, stable_shells: 8 }
    }
}

fn shell_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, samples: usize, integers: bool) -> f64 {
    if integers {
        let (lo, hi) = (a.ceil(), b.floor());
        if hi - lo + 1.0 <= samples as f64 {
            let mut m = f64::INFINITY;
            let mut k = lo;
            while k <= hi {
                m = m.min(f(k));
                k += 1.0;
            }
            return m;
        }
        let step = (hi - lo) / (samples - 1) as f64;
        return (0..samples).map(|i| f((lo + i as f64 * step).round())).fold(f64::INFINITY, f64::min);
    }
    let h = (b - a) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples).map(|i| a + i as f64 * h).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (i, &best) = vals
        .iter()
        .enumerate()
        .min_by(|p, q| p.1.total_cmp(q.1))
        .expect("nonempty shell");
    let lo = xs[i.saturating_sub(1)];
    let hi = xs[(i + 1).min(samples - 1)];
    let (_, refined) = golden_min(f, lo, hi, 80);
    best.min(refined)
}

/// Sampled infimum over expanding truncations.
pub fn essinf_estimate(lambda: &Multiplier, mu: &MeasureSpace, schedule: TruncationSchedule) -> EssinfReport {
    let f = |x: f64| lambda.eval(x);
    let floor = 1e-5 * lambda.sup_bound.min(1.0);
    let integers = mu.is_discrete();
    let n = schedule.samples_per_shell.max(3);

    if matches!(mu, MeasureSpace::LebesgueUnitInterval) {
        let m = shell_min(&f, 0.0, 1.0, n * 8, false);
        let verdict = if m <= floor { EssinfVerdict::IllPosed } else { EssinfVerdict::WellPosedCandidate };
        return EssinfReport { estimate: m, verdict, truncation: 1.0, floor };
    }

    let mut running = shell_min(&f, 0.0, schedule.r0, n, integers);
    let mut r = schedule.r0;
    let mut unchanged = 0usize;
    for _ in 0..schedule.max_doublings {
        if running <= floor {
            return EssinfReport { estimate: running, verdict: EssinfVerdict::IllPosed, truncation: r, floor };
        }
        let next = r * 2.0;
        if !next.is_finite() {
            break;
        }
        let m = running.min(shell_min(&f, r, next, n, integers));
        r = next;
        if (running - m).abs() <= 1e-9 * running {
            unchanged += 1;
        } else {
            unchanged = 0;
        }
        running = m;
        if unchanged >= schedule.stable_shells && running > floor {
            return EssinfReport {
                estimate: running,
                verdict: EssinfVerdict::WellPosedCandidate,
                truncation: r,
                floor,
            };
        }
    }
    let verdict = if running <= floor { EssinfVerdict::IllPosed } else { EssinfVerdict::Indeterminate };
    EssinfReport { estimate: running, verdict, truncation: r, floor }
}

/// What is integrated against mu.
#[derive(Clone)]
pub enum LpIntegrand {
    /// lambda^p, p >= 1.
    Power(f64),
    /// f(lambda) for a nonnegative nondecreasing f with f(z) > 0 for z > 0.
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum LpVerdict {
    Finite { value: f64 },
    Infinite { reason: String },
    Indeterminate { reason: String },
}

/// Relative increment below which partial integrals count as converged.
pub const LP_REL_TOL: f64 = 1e-6;
const LP_MAX_SHELLS: usize = 400;
const LP_INTEGER_CAP: f64 = 1.6e7;

/// Integrability of lambda^p (or f o lambda) over expanding truncations.
pub fn lp_check(lambda: &Multiplier, mu: &MeasureSpace, integrand: &LpIntegrand) -> Result<LpVerdict> {
    if let LpIntegrand::Power(p) = integrand {
        if !(*p >= 1.0) {
            return Err(Error::InvalidInput(format!("p must be at least 1, got {p}")));
        }
    }
    let g = |x: f64| -> f64 {
        let l = lambda.eval(x);
        match integrand {
            LpIntegrand::Power(p) => l.powf(*p),
            LpIntegrand::Function(f) => f(l),
        }
    };
    // Coordinate weight and the dimension used by the decay argument.
    let (weight, dim): (Box<dyn Fn(f64) -> f64>, f64) = match mu {
        MeasureSpace::LebesgueHalfLine | MeasureSpace::LebesgueUnitInterval => (Box::new(|_| 1.0), 1.0),
        MeasureSpace::LebesgueLine => (Box::new(|_| 2.0), 1.0),
        MeasureSpace::LebesgueRadial { dim } => {
            let d = *dim;
            let c = d as f64 * ball_volume(d, 1.0);
            (Box::new(move |r: f64| c * r.powi(d as i32 - 1)), d as f64)
        }
        MeasureSpace::WeightedLebesgue { support, density } => {
            let k = density.clone();
            let s = if *support == Support::Line { 2.0 } else { 1.0 };
            (Box::new(move |x| s * k.eval(x)), 1.0)
        }
        MeasureSpace::CountingIntegers | MeasureSpace::WeightedCountingIntegers(_) => (Box::new(|_| 1.0), 1.0),
    };
    let integers = mu.is_discrete();
    let point_weight = |k: f64| match mu {
        MeasureSpace::WeightedCountingIntegers(d) => d.eval(k),
        _ => 1.0,
    };
    // Integrals and sums over [a, b) in the coordinate.
    let shell = |a: f64, b: f64| -> f64 {
        if integers {
            let mut s = 0.0;
            let mut k = a.ceil();
            while k < b {
                let both_sides = if k == 0.0 { 1.0 } else { 2.0 };
                s += both_sides * g(k) * point_weight(k);
                k += 1.0;
            }
            s
        } else {
            integrate(|x| g(x) * weight(x), a, b, 1e-10)
        }
    };

    if matches!(mu, MeasureSpace::LebesgueUnitInterval) {
        let v = shell(0.0, 1.0);
        return Ok(if v.is_finite() {
            LpVerdict::Finite { value: v }
        } else {
            LpVerdict::Infinite { reason: "integral over the unit interval is not finite".into() }
        });
    }

    let declared = match integrand {
        LpIntegrand::Power(p) => lambda.decay.lp_integrable(*p, dim),
        LpIntegrand::Function(_) => None,
    };

    let mut total = shell(0.0, 1.0);
    let mut prev_inc = f64::INFINITY;
    let (mut growth_run, mut shrink_run) = (0usize, 0usize);
    let mut r = 1.0;
    for _ in 0..LP_MAX_SHELLS {
        if integers && r > LP_INTEGER_CAP {
            break;
        }
        let inc = shell(r, 2.0 * r);
        r *= 2.0;
        if !inc.is_finite() {
            return Ok(LpVerdict::Infinite { reason: format!("non-finite contribution on shell ending at {r}") });
        }
        let prev_total = total;
        total += inc;
        growth_run = if prev_total > 0.0 && total >= DIVERGENCE_FACTOR * prev_total { growth_run + 1 } else { 0 };
        if growth_run >= DIVERGENCE_DOUBLINGS {
            return Ok(LpVerdict::Infinite {
                reason: format!("partial integrals grew by {DIVERGENCE_FACTOR}x over {DIVERGENCE_DOUBLINGS} doublings"),
            });
        }
        let geometric = inc == 0.0 || inc <= 0.9 * prev_inc;
        shrink_run = if geometric { shrink_run + 1 } else { 0 };
        prev_inc = inc;
        if shrink_run >= 3 && inc <= LP_REL_TOL * total && declared != Some(false) {
            return Ok(LpVerdict::Finite { value: total });
        }
    }
    Ok(match declared {
        Some(false) => LpVerdict::Infinite {
            reason: "declared tail decay is not integrable and partial integrals did not converge".into(),
        },
        _ => LpVerdict::Indeterminate { reason: format!("no convergence up to truncation {r}") },
    })
}
