use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbolic decay law for singular values beyond the stored list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailLaw {
    /// scale * n^{-alpha}
    Power { alpha: f64, scale: f64 },
    /// scale * ln(n+1)^{d-1} / n
    PowerLog { d: f64, scale: f64 },
    /// scale * exp(-c n^q)
    Exponential { c: f64, q: f64, scale: f64 },
}

impl TailLaw {
    pub fn value(&self, n: f64) -> f64 {
        match *self {
            TailLaw::Power { alpha, scale } => scale * n.powf(-alpha),
            TailLaw::PowerLog { d, scale } => scale * (n + 1.0).ln().powf(d - 1.0) / n,
            TailLaw::Exponential { c, q, scale } => scale * (-c * n.powf(q)).exp(),
        }
    }

    /// Number of indices n >= 1 with law(n)^2 > eps, assuming the law is
    /// decreasing from index `from` on and counting every index below it.
    pub(crate) fn count_above(&self, eps: f64, from: usize) -> f64 {
        let exceeds = |n: f64| {
            let v = self.value(n);
            v * v > eps
        };
        // Closed-form threshold x with law(x)^2 = eps where available.
        let threshold = match *self {
            TailLaw::Power { alpha, scale } => Some((scale * scale / eps).powf(0.5 / alpha)),
            TailLaw::Exponential { c, q, scale } => {
                let t = (scale * scale / eps).ln() / (2.0 * c);
                Some(if t > 0.0 { t.powf(1.0 / q) } else { 0.0 })
            }
            TailLaw::PowerLog { .. } => None,
        };
        let from = from.max(1) as f64;
        if let Some(x) = threshold {
            if !x.is_finite() {
                return f64::INFINITY;
            }
            // Largest integer strictly below x, then fix float rounding at the boundary.
            let mut n = x.ceil() - 1.0;
            if n < 2f64.powi(52) {
                while n >= 1.0 && !exceeds(n) {
                    n -= 1.0;
                }
                while exceeds(n + 1.0) {
                    n += 1.0;
                }
            }
            return n.max(0.0).max(from - 1.0);
        }
        // Integer bisection on the decreasing tail.
        if !exceeds(from) {
            return from - 1.0;
        }
        let mut lo = from;
        let mut hi = from * 2.0;
        while exceeds(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > f64::MAX / 4.0 {
                return f64::INFINITY;
            }
        }
        while hi - lo > 1.0 && hi - lo > lo * f64::EPSILON * 4.0 {
            let mid = (0.5 * (lo + hi)).floor();
            if exceeds(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Finite nonincreasing positive singular values with an optional tail law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSequence {
    values: Vec<f64>,
    tail_law: Option<TailLaw>,
}

impl SigmaSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty singular value list".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("sigma[{i}] = {v} is not a positive finite number")));
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "singular values must be nonincreasing: sigma[{i}] = {} < sigma[{}] = {}",
                values[i],
                i + 1,
                values[i + 1]
            )));
        }
        Ok(SigmaSequence { values, tail_law: None })
    }

    /// Attaches a tail law; the last 10% of the stored values must match it
    /// within `rel_tol`.
    pub fn with_tail_law(mut self, law: TailLaw, rel_tol: f64) -> Result<Self> {
        let n = self.values.len();
        let start = n - (n / 10).max(1);
        for i in start..n {
            let expected = law.value((i + 1) as f64);
            let got = self.values[i];
            if ((got - expected) / expected).abs() > rel_tol {
                return Err(Error::InvalidInput(format!(
                    "sigma[{}] = {got} does not match tail law value {expected}",
                    i + 1
                )));
            }
        }
        self.tail_law = Some(law);
        Ok(self)
    }

    /// sigma_n = law(n) for n = 1..=n, sorted descending, with the law attached.
    pub fn from_law(law: TailLaw, n: usize) -> Result<Self> {
        let mut values: Vec<f64> = (1..=n).map(|k| law.value(k as f64)).collect();
        values.sort_by(|a, b| b.total_cmp(a));
        SigmaSequence::new(values)?.with_tail_law(law, 1e-12)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tail_law(&self) -> Option<&TailLaw> {
        self.tail_law.as_ref()
    }

    /// sigma_n for 1-based n, using the tail law beyond the stored list.
    /// `None` past the end when no law is attached.
    pub fn get(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        match self.values.get(n - 1) {
            Some(v) => Some(*v),
            None => self.tail_law.map(|l| l.value(n as f64)),
        }
    }
}
