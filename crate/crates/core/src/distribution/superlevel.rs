use crate::error::{Error, Result};
use crate::numeric::{bisect, integrate, BRACKET_LIMIT};
use crate::spectral::{
    ball_volume, DistributionFunction, LogMass, MeasureSpace, Multiplier, Shape, Source, Support,
};

/// Relative accuracy of quadrature for density-weighted interval masses.
pub const WEIGHTED_REL_TOL: f64 = 1e-8;

/// Cells sampled below the breakpoint of a monotone tail.
const BREAKPOINT_CELLS: usize = 4096;

/// Samples per truncation before a generic multiplier is declared non-convergent.
const GENERIC_SAMPLE_CAP: f64 = 3.0e7;

/// Consecutive doublings with growth >= [`DIVERGENCE_FACTOR`] that mean +inf.
pub const DIVERGENCE_DOUBLINGS: usize = 5;
pub const DIVERGENCE_FACTOR: f64 = 1.5;

/// {lambda > eps} in the scalar coordinate of the measure space.
#[derive(Debug, Clone, PartialEq)]
pub enum SuperlevelSet {
    /// Disjoint intervals of the coordinate (|omega| on the line, the radius
    /// for radial measures).
    Intervals(Vec<(f64, f64)>),
    Points(Vec<i64>),
    Unbounded,
}

/// Where the coordinate lives.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Domain {
    /// [0, inf): half-line, even functions on the line, radii.
    HalfLine,
    UnitInterval,
    Integers,
}

impl Domain {
    fn of(mu: &MeasureSpace) -> Domain {
        match mu {
            MeasureSpace::LebesgueUnitInterval => Domain::UnitInterval,
            MeasureSpace::CountingIntegers | MeasureSpace::WeightedCountingIntegers(_) => Domain::Integers,
            _ => Domain::HalfLine,
        }
    }

    fn end(self) -> f64 {
        match self {
            Domain::UnitInterval => 1.0,
            _ => f64::INFINITY,
        }
    }
}

fn unsupported(lambda: &Multiplier, mu: &MeasureSpace) -> Error {
    Error::UnsupportedShape { shape: lambda.shape.name().into(), measure: mu.name() }
}

/// The part of [a, b] where a monotone `f` exceeds eps. `b` may be infinite,
/// in which case `f` must be nonincreasing. `Err(())` means the set is unbounded.
fn monotone_branch(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> std::result::Result<Option<(f64, f64)>, ()> {
    let above = |x: f64| f(x) > eps;
    if b.is_finite() {
        match (above(a), above(b)) {
            (true, true) => Ok(Some((a, b))),
            (false, false) => Ok(None),
            (true, false) => Ok(Some((a, bisect(a, b, above)))),
            (false, true) => Ok(Some((bisect(a, b, |x| !above(x)), b))),
        }
    } else {
        if !above(a) {
            return Ok(None);
        }
        let mut lo = a;
        let mut width = a.abs().max(1.0);
        loop {
            let hi = a + width;
            if hi > BRACKET_LIMIT {
                return Err(());
            }
            if !above(hi) {
                return Ok(Some((a, bisect(lo, hi, above))));
            }
            lo = hi;
            width *= 2.0;
        }
    }
}

fn push_branch(
    out: &mut Vec<(f64, f64)>,
    r: std::result::Result<Option<(f64, f64)>, ()>,
) -> std::result::Result<(), ()> {
    if let Some((a, b)) = r? {
        if b > a {
            out.push((a, b));
        }
    }
    Ok(())
}

/// Cells of width `h` on [a, b) whose centre exceeds eps, merged into runs.
fn sampled_cells(f: &dyn Fn(f64) -> f64, a: f64, b: f64, h: f64, eps: f64, out: &mut Vec<(f64, f64)>) {
    let n = ((b - a) / h).round() as usize;
    for i in 0..n {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == n { b } else { a + (i + 1) as f64 * h };
        if f(0.5 * (lo + hi)) > eps {
            match out.last_mut() {
                Some(last) if last.1 == lo => last.1 = hi,
                _ => out.push((lo, hi)),
            }
        }
    }
}

fn length(set: &[(f64, f64)]) -> f64 {
    set.iter().map(|(a, b)| b - a).sum()
}

/// Superlevel set of lambda at eps, as a subset of the coordinate domain.
pub fn superlevel_set(lambda: &Multiplier, mu: &MeasureSpace, eps: f64) -> Result<SuperlevelSet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let domain = Domain::of(mu);
    let end = domain.end();
    let f = |x: f64| lambda.eval(x);
    let mut out = Vec::new();
    let unbounded = |_: ()| SuperlevelSet::Unbounded;

    match (&lambda.shape, domain) {
        (Shape::Discrete { cutoff }, Domain::Integers) => {
            let k_max = cutoff(eps);
            if k_max > 100_000_000 {
                return Err(Error::Numerical(format!("enumeration cutoff {k_max} too large at eps = {eps}")));
            }
            let k_max = k_max as i64;
            let points: Vec<i64> = (-k_max..=k_max).filter(|&k| f(k as f64) > eps).collect();
            return Ok(SuperlevelSet::Points(points));
        }
        (_, Domain::Integers) | (Shape::Discrete { .. }, _) => return Err(unsupported(lambda, mu)),

        (Shape::MonotoneTail { breakpoint }, _) | (Shape::RadialMonotoneTail { breakpoint }, _) => {
            let is_radial = matches!(lambda.shape, Shape::RadialMonotoneTail { .. });
            if is_radial != matches!(mu, MeasureSpace::LebesgueRadial { .. }) {
                return Err(unsupported(lambda, mu));
            }
            let bp = breakpoint.clamp(0.0, end);
            if bp > 0.0 {
                sampled_cells(&f, 0.0, bp, bp / BREAKPOINT_CELLS as f64, eps, &mut out);
            }
            if let Err(e) = push_branch(&mut out, monotone_branch(&f, bp, end, eps)) {
                return Ok(unbounded(e));
            }
        }
        (_, _) if matches!(mu, MeasureSpace::LebesgueRadial { .. }) => return Err(unsupported(lambda, mu)),

        (Shape::PiecewiseMonotone { breakpoints }, _) => {
            let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|b| *b >= 0.0 && *b < end).collect();
            if pts.first() != Some(&0.0) {
                pts.insert(0, 0.0);
            }
            pts.push(end);
            for w in pts.windows(2) {
                if let Err(e) = push_branch(&mut out, monotone_branch(&f, w[0], w[1], eps)) {
                    return Ok(unbounded(e));
                }
            }
            // Adjacent branches meeting at a breakpoint form one interval.
            let mut merged: Vec<(f64, f64)> = Vec::with_capacity(out.len());
            for iv in out.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.1 >= iv.0 => last.1 = last.1.max(iv.1),
                    _ => merged.push(iv),
                }
            }
            out = merged;
        }

        (Shape::Steps { cells, monotone_tail }, Domain::HalfLine) => {
            let cells = *cells;
            for n in 1..=cells {
                let x = n as f64 - 0.5;
                if f(x) > eps {
                    match out.last_mut() {
                        Some(last) if last.1 == x - 0.5 => last.1 = x + 0.5,
                        _ => out.push((x - 0.5, x + 0.5)),
                    }
                }
            }
            if *monotone_tail && f(cells as f64 + 0.5) > eps {
                // Last cell index above eps on the decreasing tail.
                let above = |n: f64| f(n - 0.5) > eps;
                let mut lo = cells as f64 + 1.0;
                let mut hi = 2.0 * lo;
                while above(hi) {
                    lo = hi;
                    hi *= 2.0;
                    if hi > BRACKET_LIMIT {
                        return Ok(SuperlevelSet::Unbounded);
                    }
                }
                while hi - lo > 1.0 {
                    let mid = (0.5 * (lo + hi)).floor();
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if above(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                match out.last_mut() {
                    Some(last) if last.1 == cells as f64 => last.1 = lo,
                    _ => out.push((cells as f64, lo)),
                }
            }
        }
        (Shape::Steps { .. }, _) => return Err(unsupported(lambda, mu)),

        (Shape::GenericSampled { resolution, extent }, _) => {
            let h = *resolution;
            if !(h > 0.0) || !(*extent > 0.0) {
                return Err(Error::InvalidInput("generic sampling needs positive resolution and extent".into()));
            }
            if domain == Domain::UnitInterval {
                sampled_cells(&f, 0.0, 1.0, h, eps, &mut out);
            } else {
                let mut r = *extent;
                sampled_cells(&f, 0.0, r, h, eps, &mut out);
                let mut prev = length(&out);
                let (mut growth_run, mut quiet_run) = (0usize, 0usize);
                loop {
                    if 2.0 * r / h > GENERIC_SAMPLE_CAP {
                        return Err(Error::Numerical(format!(
                            "superlevel measure at eps = {eps} did not stabilise up to truncation {r}"
                        )));
                    }
                    let before = out.len();
                    sampled_cells(&f, r, 2.0 * r, h, eps, &mut out);
                    r *= 2.0;
                    let m = length(&out);
                    growth_run = if prev > 0.0 && m >= DIVERGENCE_FACTOR * prev { growth_run + 1 } else { 0 };
                    quiet_run = if out.len() == before && m == prev { quiet_run + 1 } else { 0 };
                    if growth_run >= DIVERGENCE_DOUBLINGS {
                        return Ok(SuperlevelSet::Unbounded);
                    }
                    if quiet_run >= 3 {
                        break;
                    }
                    prev = m;
                }
            }
        }
    }
    Ok(SuperlevelSet::Intervals(out))
}

fn interval_mass(density: &crate::spectral::Density, a: f64, b: f64) -> Result<f64> {
    for x in [a, 0.5 * (a + b), b] {
        let k = density.eval(x);
        if !(k > 0.0) {
            return Err(Error::InvalidInput(format!("density {} is not positive at {x}", density.name)));
        }
    }
    Ok(match density.antiderivative() {
        Some(big_k) => big_k(b) - big_k(a),
        None => integrate(|x| density.eval(x), a, b, WEIGHTED_REL_TOL),
    })
}

/// Measure of a superlevel set under `mu`.
pub fn measure_of(set: &SuperlevelSet, mu: &MeasureSpace) -> Result<f64> {
    let m = match (set, mu) {
        (SuperlevelSet::Unbounded, _) => f64::INFINITY,
        (SuperlevelSet::Intervals(iv), MeasureSpace::LebesgueHalfLine | MeasureSpace::LebesgueUnitInterval) => {
            length(iv)
        }
        (SuperlevelSet::Intervals(iv), MeasureSpace::LebesgueLine) => 2.0 * length(iv),
        (SuperlevelSet::Intervals(iv), MeasureSpace::LebesgueRadial { dim }) => iv
            .iter()
            .map(|(a, b)| ball_volume(*dim, *b) - ball_volume(*dim, *a))
            .sum(),
        (SuperlevelSet::Intervals(iv), MeasureSpace::WeightedLebesgue { support, density }) => {
            let mut total = 0.0;
            for (a, b) in iv {
                total += interval_mass(density, *a, *b)?;
            }
            match support {
                Support::HalfLine => total,
                Support::Line => 2.0 * total,
            }
        }
        (SuperlevelSet::Points(p), MeasureSpace::CountingIntegers) => p.len() as f64,
        (SuperlevelSet::Points(p), MeasureSpace::WeightedCountingIntegers(density)) => {
            let mut total = 0.0;
            for &k in p {
                let w = density.eval(k as f64);
                if !(w > 0.0) {
                    return Err(Error::InvalidInput(format!("density {} is not positive at {k}", density.name)));
                }
                total += w;
            }
            total
        }
        (s, mu) => {
            return Err(Error::InvalidInput(format!(
                "superlevel set {} does not live on measure {}",
                match s {
                    SuperlevelSet::Points(_) => "of integer points",
                    _ => "of intervals",
                },
                mu.name()
            )))
        }
    };
    Ok(m)
}

/// mu({lambda > eps}) in log domain; +inf is the divergence sentinel.
pub fn superlevel_measure(lambda: &Multiplier, mu: &MeasureSpace, eps: f64) -> Result<LogMass> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if mu.density().is_none() {
        if let Some(cf) = lambda.closed_form() {
            return Ok(LogMass(cf(eps)));
        }
    }
    let set = superlevel_set(lambda, mu, eps)?;
    Ok(LogMass::from_value(measure_of(&set, mu)?))
}

/// Phi sampled over a grid. Curves with a +inf sample come back
/// non-informative rather than as an error.
pub fn phi_curve(lambda: &Multiplier, mu: &MeasureSpace, grid: &[f64]) -> Result<DistributionFunction> {
    let log_phi = grid
        .iter()
        .map(|&eps| superlevel_measure(lambda, mu, eps).map(LogMass::ln))
        .collect::<Result<Vec<f64>>>()?;
    let source = if mu.density().is_some() { Source::Reweighted } else { Source::Superlevel };
    Ok(DistributionFunction::new(grid.to_vec(), log_phi, source)?.with_sup_bound(lambda.sup_bound))
}
