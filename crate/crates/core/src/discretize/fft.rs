use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_to_infinity};
use crate::spectral::{Multiplier, Shape, TailDecay};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Kernel values below this fraction of the peak count as negligible at the boundary.
const BOUNDARY_TOL: f64 = 1e-10;

/// Samples of a real convolution kernel h on [-L, L) with spacing 2L/N.
#[derive(Clone)]
pub struct KernelSampler {
    pub name: String,
    eval: RealFn,
    envelope: RealFn,
    pub l: f64,
    pub n: usize,
}

impl KernelSampler {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        envelope: impl Fn(f64) -> f64 + Send + Sync + 'static,
        l: f64,
        n: usize,
    ) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidInput(format!("truncation L must be positive, got {l}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("sample count N must be a power of two, got {n}")));
        }
        Ok(KernelSampler { name: name.into(), eval: Arc::new(eval), envelope: Arc::new(envelope), l, n })
    }

    /// h(x) = exp(-x^2), with transform sqrt(pi) exp(-w^2/4).
    pub fn gaussian(l: f64, n: usize) -> Result<Self> {
        KernelSampler::new("gaussian", |x: f64| (-x * x).exp(), |x: f64| (-x * x).exp(), l, n)
    }

    /// The kernel whose transform is (1 + b w^2)^(-a), a > 1/2:
    /// h(x) = (pi b)^(-1/2) / Gamma(a) (y/2)^(a-1/2) K_(a-1/2)(y), y = |x|/sqrt(b).
    pub fn laplace(a: f64, b: f64, l: f64, n: usize) -> Result<Self> {
        if !(a > 0.5) || !(b > 0.0) {
            return Err(Error::InvalidInput(format!("Laplace kernel needs a > 1/2 and b > 0, got a = {a}, b = {b}")));
        }
        let nu = a - 0.5;
        let sb = b.sqrt();
        let pref = 1.0 / ((PI * b).sqrt() * gamma(a));
        let h0 = pref * 0.5 * gamma(nu);
        let eval = move |x: f64| {
            let y = x.abs() / sb;
            if y == 0.0 {
                h0
            } else {
                pref * (0.5 * y).powf(nu) * bessel_k(nu, y)
            }
        };
        let expo = (a - 1.0).abs() + 1.0;
        let envelope = move |x: f64| {
            let y = x.abs() / sb;
            h0 * (1.0 + y).powf(expo) * (-y).exp()
        };
        KernelSampler::new(format!("laplace(a={a},b={b})"), eval, envelope, l, n)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.dx()
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn envelope(&self, x: f64) -> f64 {
        (self.envelope)(x)
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.eval(self.x(i))).collect()
    }
}

/// Modified Bessel function K_nu(y) for y > 0 from its integral representation.
fn bessel_k(nu: f64, y: f64) -> f64 {
    // e^{-y cosh t} underflows once y cosh t exceeds ~750 + nu t.
    let t_max = (((750.0 + 40.0 * nu) / y).max(1.0)).acosh() + 1.0;
    integrate(|t| (-y * t.cosh() + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp()), 0.0, t_max, 1e-13)
}

/// Discrete approximation of lambda = |h^|^2 on w_k = pi k / L, k = -N/2..N/2-1.
#[derive(Debug, Clone)]
pub struct SampledMultiplier {
    pub omegas: Vec<f64>,
    pub transform: Vec<Complex64>,
    pub lambda: Vec<f64>,
    pub d_omega: f64,
    pub dx: f64,
    /// Envelope mass outside [-L, L) plus the transform magnitude at Nyquist.
    pub aliasing_estimate: f64,
    pub warnings: Vec<String>,
}

impl SampledMultiplier {
    /// lambda at integer frequency index k (-N/2 <= k < N/2).
    pub fn at(&self, k: i64) -> f64 {
        let half = (self.omegas.len() / 2) as i64;
        self.lambda[(k + half) as usize]
    }

    /// max over |w_k| <= w_max of |lambda_k - exact(w_k)| / exact(w_k).
    pub fn max_rel_error(&self, exact: impl Fn(f64) -> f64, w_max: f64) -> f64 {
        self.omegas
            .iter()
            .zip(&self.lambda)
            .filter(|(w, _)| w.abs() <= w_max)
            .map(|(w, l)| {
                let e = exact(*w);
                ((l - e) / e).abs()
            })
            .fold(0.0, f64::max)
    }

    /// max_k |lambda_k - lambda_{-k}| / max lambda.
    pub fn symmetry_defect(&self) -> f64 {
        let half = (self.omegas.len() / 2) as i64;
        let top = self.lambda.iter().copied().fold(0.0, f64::max);
        (1..half).map(|k| (self.at(k) - self.at(-k)).abs()).fold(0.0, f64::max) / top
    }

    /// Samples for w >= 0 (k = 0..N/2; the Nyquist value is taken from -N/2).
    pub fn nonnegative(&self) -> (Vec<f64>, Vec<f64>) {
        let half = self.omegas.len() / 2;
        let mut w: Vec<f64> = self.omegas[half..].to_vec();
        let mut l: Vec<f64> = self.lambda[half..].to_vec();
        w.push(-self.omegas[0]);
        l.push(self.lambda[0]);
        (w, l)
    }

    /// Even multiplier on the line interpolating the samples (log-linear
    /// between positive neighbours), zero past the Nyquist frequency.
    pub fn to_multiplier(&self) -> Multiplier {
        let (w, l) = self.nonnegative();
        let step = self.d_omega;
        let top = l.iter().copied().fold(0.0, f64::max);
        // Monotone where the samples rise above roundoff.
        let floor = 1e-13 * top;
        let monotone = l.windows(2).all(|p| p[1] <= p[0] || p[0] < floor);
        let shape = if monotone {
            Shape::MonotoneTail { breakpoint: 0.0 }
        } else {
            Shape::GenericSampled { resolution: step / 8.0, extent: *w.last().unwrap() }
        };
        let (w, l) = (Arc::new(w), Arc::new(l));
        Multiplier::new(
            move |x: f64| {
                let a = x.abs();
                let pos = a / step;
                let i = pos.floor() as usize;
                if i + 1 >= w.len() {
                    return if i + 1 == w.len() && pos == i as f64 { l[i] } else { 0.0 };
                }
                let s = pos - i as f64;
                let (l0, l1) = (l[i], l[i + 1]);
                if l0 > 0.0 && l1 > 0.0 {
                    (l0.ln() * (1.0 - s) + l1.ln() * s).exp()
                } else {
                    l0 * (1.0 - s) + l1 * s
                }
            },
            shape,
            top,
        )
        .with_decay(TailDecay::Unknown)
    }
}

/// h^(w) = dx sum_n h(x_n) e^{-i w x_n} on the FFT frequency grid.
pub fn fft_multiplier(h: &KernelSampler) -> Result<SampledMultiplier> {
    let n = h.n;
    let dx = h.dx();
    let samples = h.samples();
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("kernel not finite at x = {}", h.x(i))));
    }
    let mut warnings = Vec::new();
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = h.eval(-h.l).abs().max(h.eval(h.l).abs());
    if edge > BOUNDARY_TOL * peak {
        warnings.push(format!(
            "kernel is not negligible at the truncation boundary: |h(L)| / max|h| = {:.3e}; the transform carries truncation error",
            edge / peak
        ));
    }
    if let Some(i) = (0..n).find(|&i| samples[i].abs() > h.envelope(h.x(i)) * (1.0 + 1e-9) + 1e-300) {
        warnings.push(format!("declared envelope violated at x = {}", h.x(i)));
    }

    let mut buf: Vec<Complex64> = samples.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n as i64 / 2;
    let d_omega = PI / h.l;
    let mut omegas = Vec::with_capacity(n);
    let mut transform = Vec::with_capacity(n);
    for k in -half..half {
        let idx = k.rem_euclid(n as i64) as usize;
        // e^{-i w_k x_0} = e^{i pi k} = (-1)^k
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        omegas.push(k as f64 * d_omega);
        transform.push(buf[idx] * (dx * sign));
    }
    let lambda: Vec<f64> = transform.iter().map(|c| c.norm_sqr()).collect();

    let env = |x: f64| h.envelope(x);
    let tail_mass = 2.0 * integrate_to_infinity(env, h.l, 1e-8);
    let aliasing_estimate = tail_mass + transform[0].norm();

    Ok(SampledMultiplier { omegas, transform, lambda, d_omega, dx, aliasing_estimate, warnings })
}

/// h^(w) at an arbitrary frequency by direct summation over the samples.
pub fn direct_transform(h: &KernelSampler, w: f64) -> Complex64 {
    let dx = h.dx();
    (0..h.n)
        .map(|i| {
            let x = h.x(i);
            Complex64::from_polar(h.eval(x), -w * x)
        })
        .sum::<Complex64>()
        * dx
}

/// (sum |h|^2 dx, (1/2pi) sum |h^|^2 dw).
pub fn plancherel(h: &KernelSampler, m: &SampledMultiplier) -> (f64, f64) {
    let lhs: f64 = h.samples().iter().map(|v| v * v).sum::<f64>() * h.dx();
    let rhs: f64 = m.lambda.iter().sum::<f64>() * m.d_omega / (2.0 * PI);
    (lhs, rhs)
}
