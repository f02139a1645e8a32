use super::superlevel::{measure_of, superlevel_measure, superlevel_set};
use crate::error::{Error, Result};
use crate::spectral::{DistributionFunction, Finiteness, MeasureSpace, Multiplier, Shape};

/// lambda*(t) = inf{tau : Phi(tau) <= t} from a stored curve.
///
/// Between grid points ln(lambda*) is interpolated linearly in ln Phi (in Phi
/// itself next to a zero sample). Past the small-eps end the last segment is
/// extrapolated. `t` below the curve's range gives the sup bound.
pub fn decreasing_rearrangement(phi: &DistributionFunction, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be nonnegative, got {t}")));
    }
    if phi.finiteness == Finiteness::NonInformative {
        return Err(Error::InvalidInput("rearrangement needs a finite distribution function".into()));
    }
    if t == 0.0 {
        return Ok(phi.sup_bound);
    }
    // Phi is nondecreasing along the grid, so zero samples lead; keep the
    // last one as the anchor of the top segment.
    let end = phi.exhausted_at.unwrap_or(phi.len());
    let first_pos = (0..end).find(|&i| phi.log_phi[i] > f64::NEG_INFINITY).unwrap_or(end);
    let begin = first_pos.saturating_sub(1);
    let pts: Vec<(f64, f64)> = (begin..end).map(|i| (phi.eps_grid[i], phi.log_phi[i])).collect();
    if pts.len() < 2 || pts[pts.len() - 1].1 == f64::NEG_INFINITY {
        return Err(Error::InsufficientData { needed: 2, got: pts.len() });
    }
    let ln_t = t.ln();
    if ln_t < pts[0].1 {
        return Ok(phi.sup_bound);
    }
    let interp = |(e0, l0): (f64, f64), (e1, l1): (f64, f64)| -> f64 {
        if l0 == f64::NEG_INFINITY {
            // linear in Phi from 0
            let p1 = l1.exp();
            let s = t / p1;
            (e0.ln() + s * (e1.ln() - e0.ln())).exp()
        } else if l1 == l0 {
            e0
        } else {
            let s = (ln_t - l0) / (l1 - l0);
            (e0.ln() + s * (e1.ln() - e0.ln())).exp()
        }
    };
    for w in pts.windows(2) {
        if ln_t >= w[0].1 && ln_t < w[1].1 {
            return Ok(interp(w[0], w[1]));
        }
    }
    let n = pts.len();
    Ok(interp(pts[n - 2], pts[n - 1]))
}

fn log_phi_at(lambda: &Multiplier, mu: &MeasureSpace, tau: f64) -> f64 {
    superlevel_measure(lambda, mu, tau).map(|m| m.ln()).unwrap_or(f64::NAN)
}

/// lambda*(t) computed on demand by geometric bisection in tau.
pub fn decreasing_rearrangement_exact(lambda: &Multiplier, mu: &MeasureSpace, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(lambda.sup_bound);
    }
    let ln_t = t.ln();
    let too_big = |tau: f64| {
        let lp = log_phi_at(lambda, mu, tau);
        if lp.is_nan() {
            Err(Error::Numerical(format!("superlevel measure failed at {tau}")))
        } else {
            Ok(lp > ln_t)
        }
    };
    let mut hi = if lambda.sup_bound.is_finite() { lambda.sup_bound } else { 1.0 };
    while too_big(hi)? {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numerical("distribution function never drops below t".into()));
        }
    }
    let mut lo = hi * 0.5;
    while !too_big(lo)? {
        hi = lo;
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 < 1e-14 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if too_big(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// The decreasing rearrangement as a nonincreasing multiplier on [0, inf).
pub fn rearranged_multiplier(lambda: &Multiplier, mu: &MeasureSpace) -> Multiplier {
    let (l, m) = (lambda.clone(), mu.clone());
    Multiplier::new(
        move |t| decreasing_rearrangement_exact(&l, &m, t).unwrap_or(f64::NAN),
        Shape::MonotoneTail { breakpoint: 0.0 },
        lambda.sup_bound,
    )
}

fn require_unit_interval(mu: &MeasureSpace) -> Result<()> {
    if matches!(mu, MeasureSpace::LebesgueUnitInterval) {
        Ok(())
    } else {
        Err(Error::UnsupportedMeasure { required: "lebesgue_unit_interval".into(), got: mu.name() })
    }
}

/// d_lambda(eps) = mu({omega in [0,1] : lambda(omega) <= eps}).
pub fn d_lambda(lambda: &Multiplier, mu: &MeasureSpace, eps: f64) -> Result<f64> {
    require_unit_interval(mu)?;
    if eps <= 0.0 {
        // lambda >= 0, so only the zero set of lambda counts; it is null for index functions.
        let above = measure_of(&superlevel_set(lambda, mu, f64::MIN_POSITIVE)?, mu)?;
        return Ok((1.0 - above).clamp(0.0, 1.0));
    }
    let above = measure_of(&superlevel_set(lambda, mu, eps)?, mu)?;
    Ok((1.0 - above).clamp(0.0, 1.0))
}

/// lambda_*(t) = sup{eps : d_lambda(eps) <= t} on the unit interval.
pub fn increasing_rearrangement(lambda: &Multiplier, mu: &MeasureSpace, t: f64) -> Result<f64> {
    require_unit_interval(mu)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("t must lie in [0, 1], got {t}")));
    }
    let sup = lambda.sup_bound;
    if !sup.is_finite() {
        return Err(Error::InvalidInput("increasing rearrangement needs a bounded multiplier".into()));
    }
    if t >= 1.0 {
        return Ok(sup);
    }
    if d_lambda(lambda, mu, 0.0)? > t {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, sup);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * sup {
            break;
        }
        if d_lambda(lambda, mu, mid)? <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
