//! Small numerical kernels: least squares, bracketing, quadrature wrappers.

/// Straight-line least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

pub fn lsq_fit(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    Some(LineFit { slope, intercept, rms: (ss / nf).sqrt() })
}

pub fn lsq_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    lsq_fit(x, y).map(|f| f.slope)
}

/// Relative width at which bracketing stops.
pub const BISECT_REL_TOL: f64 = 1e-12;

/// Largest value past which doubling gives up and reports an unbounded set.
pub const BRACKET_LIMIT: f64 = 8.98846567431158e307; // 2^1023

/// Bisection on [lo, hi] for the switch point of a predicate that holds at
/// `lo` and fails at `hi`. Returns the midpoint of the final bracket.
pub fn bisect(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (hi - lo) <= BISECT_REL_TOL * hi.abs().max(lo.abs()) {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Integral over [a, b] to relative accuracy `rel_tol` (double-exponential rule).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rough = quadrature::integrate(&f, a, b, 1e-6).integral;
    let target = (rel_tol * rough.abs()).max(1e-300);
    quadrature::integrate(&f, a, b, target).integral
}

/// Integral over [a, inf) by summing doubling panels until they stop contributing.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, rel_tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = a.abs().max(1.0);
    for _ in 0..1100 {
        let hi = lo + width;
        let piece = integrate(&f, lo, hi, rel_tol);
        total += piece;
        if piece.abs() <= 1e-17 * total.abs() || (piece == 0.0 && total != 0.0) {
            break;
        }
        lo = hi;
        width *= 2.0;
        if !lo.is_finite() {
            return f64::INFINITY;
        }
    }
    total
}

/// Golden-section minimisation on [a, b].
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
