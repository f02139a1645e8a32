//! The acceptance suite, shared by the test target and `illposed check`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::counting::{counting_curve, counting_phi, interval_from_counting, interval_from_sigma, step_multiplier_from_sigma, SigmaWindow};
use crate::discretize::{
    direct_transform, fft_multiplier, hilbert_matrix, matrix_pipeline, plancherel, riemann_liouville_matrix,
    singular_values, KernelSampler, MatrixOperator,
};
use crate::distribution::{
    decreasing_rearrangement, essinf_estimate, phi_curve, rearranged_multiplier, reweight, superlevel_measure,
    EssinfVerdict,
};
use crate::error::Result;
use crate::estimate::interval_estimate;
use crate::gallery::{self, analyze, make_default, make_with, remove_ball, SpectralData};
use crate::spectral::{Classification, Finiteness, GridSpec, MeasureSpace, SigmaSequence, Thresholds};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub number: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line per check followed by the verdict line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {}: {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s.push_str(&format!(
            "criterion {:2} {}: {} ({:.2?})\n",
            self.number,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed
        ));
        s
    }
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn new() -> Self {
        Runner { checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records an error from a step as a failed check.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("error: {e}"));
                None
            }
        }
    }
}

fn run(number: usize, title: &'static str, body: impl FnOnce(&mut Runner)) -> CriterionResult {
    let start = Instant::now();
    let mut r = Runner::new();
    body(&mut r);
    CriterionResult { number, title, checks: r.checks, elapsed: start.elapsed() }
}

fn degree_of(c: Classification) -> Option<f64> {
    c.degree()
}

fn fmt_deg(d: Option<f64>) -> String {
    d.map(|v| format!("{v:.6}")).unwrap_or_else(|| "none".into())
}

fn grid(eps_max: f64, eps_min: f64) -> Vec<f64> {
    GridSpec::Geometric { eps_max, eps_min, points: GridSpec::DEFAULT_POINTS }.points().expect("valid grid")
}

pub fn criterion_1() -> CriterionResult {
    run(1, "Hausdorff moment operator", |r| {
        let start = Instant::now();
        let t = Thresholds::default();
        let Some(m) = r.attempt("build", make_default("hausdorff")) else { return };
        let (lambda, mu) = m.multiplier().expect("multiplier model");
        let g = grid(1e-3, 1e-12);
        let Some(phi) = r.attempt("phi curve", phi_curve(lambda, mu, &g)) else { return };
        let worst = g
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let approx = (2.0 * PI / e).ln() / PI;
                ((phi.phi(i) - approx) / approx).abs()
            })
            .fold(0.0, f64::max);
        r.check(
            "Phi vs (1/pi) ln(2pi/eps) on [1e-12, 1e-3]",
            worst <= 5e-3,
            format!("max relative deviation {worst:.3e} (limit 5e-3)"),
        );
        if let Some(a) = r.attempt("analyze", analyze(&m, None, &t)) {
            r.check(
                "classification",
                a.interval.classification == Classification::Severe,
                format!("{} (expected severe)", a.interval.classification.label()),
            );
            if let Some(top) = r.attempt("lambda*(0)", decreasing_rearrangement(&a.phi, 0.0)) {
                r.check("lambda*(0) = pi", (top - PI).abs() <= 1e-9, format!("{top:.15} (|err| {:.1e})", (top - PI).abs()));
            }
        }
        let el = start.elapsed();
        r.check("runtime < 1 s", el < Duration::from_secs(1), format!("{el:.2?}"));
    })
}

pub fn criterion_2() -> CriterionResult {
    run(2, "closed-form multiplier family", |r| {
        let t = Thresholds::default();
        let g10 = grid(1.0, 1e-10);
        for s in [0.5, 1.0, 2.0] {
            let start = Instant::now();
            let Some(m) = r.attempt("build a1", make_with("multiplier_a1", &[("s", s)])) else { continue };
            let (l, mu) = m.multiplier().unwrap();
            if let Some(phi) = r.attempt("a1 curve", phi_curve(l, mu, &g10)) {
                let d = degree_of(interval_estimate(&phi, &t).classification);
                r.check(
                    format!("a1 s={s}: degree within 0.05"),
                    d.map(|d| (d - s).abs() <= 0.05).unwrap_or(false),
                    format!("degree {} ({:.2?})", fmt_deg(d), start.elapsed()),
                );
            }
        }
        let start = Instant::now();
        if let Some(m) = r.attempt("build a2", make_default("multiplier_a2")) {
            let (l, mu) = m.multiplier().unwrap();
            if let Some(phi) = r.attempt("a2 curve", phi_curve(l, mu, &g10)) {
                let d = degree_of(interval_estimate(&phi, &t).classification);
                r.check(
                    "a2: degree 1 within 0.05",
                    d.map(|d| (d - 1.0).abs() <= 0.05).unwrap_or(false),
                    format!("degree {}", fmt_deg(d)),
                );
            }
            if let Some(v) = r.attempt("a2 at 1e-6", superlevel_measure(l, mu, 1e-6)) {
                let x = v.value() * 1e-3;
                r.check("a2: Phi sqrt(eps) at 1e-6 in [1.99, 2.01]", (1.99..=2.01).contains(&x), format!("{x:.9} ({:.2?})", start.elapsed()));
            }
        }
        let start = Instant::now();
        if let Some(m) = r.attempt("build b", make_with("multiplier_b", &[("s", 1.0)])) {
            if let Some(a) = r.attempt("analyze b", analyze(&m, None, &t)) {
                r.check(
                    "b s=1: severe",
                    a.interval.classification == Classification::Severe,
                    a.interval.classification.label().to_string(),
                );
                let (lo, hi) = a
                    .phi
                    .eps_grid
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e <= 0.5)
                    .map(|(i, e)| a.phi.phi(i) / (1.0 / e).ln())
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
                r.check(
                    "b s=1: Phi / ln(1/eps) in [1.9, 2.1]",
                    lo >= 1.9 && hi <= 2.1,
                    format!("range [{lo:.9}, {hi:.9}] ({:.2?})", start.elapsed()),
                );
            }
        }
        let start = Instant::now();
        if let Some(m) = r.attempt("build c", make_with("multiplier_c", &[("s", 1.0)])) {
            if let Some(a) = r.attempt("analyze c", analyze(&m, None, &t)) {
                r.check("c s=1: mild", a.interval.classification == Classification::Mild, a.interval.classification.label().to_string());
            }
            let (l, mu) = m.multiplier().unwrap();
            if let Some(v) = r.attempt("c at 1e-3", superlevel_measure(l, mu, 1e-3)) {
                let ratio = crate::ratio(1e-3, v.ln()).unwrap_or(f64::NAN);
                r.check("c s=1: r(1e-3) < 0.05", ratio < 0.05, format!("r(1e-3) = {ratio:.6} ({:.2?})", start.elapsed()));
            }
        }
    })
}

pub fn criterion_3() -> CriterionResult {
    run(3, "compact/non-compact equivalence on power laws", |r| {
        let t = Thresholds::default();
        for s in [0.25, 0.5, 1.0, 2.0] {
            let values: Vec<f64> = (1..=4096).map(|n| (n as f64).powf(-s)).collect();
            let Some(sigma) = r.attempt("sigma", SigmaSequence::new(values)) else { continue };
            let g = grid(1.0, sigma.values()[4095].powi(2));
            let Some(ds) = r.attempt("interval_from_sigma", interval_from_sigma(&sigma, SigmaWindow::default(), &t)) else { continue };
            let Some(counting) = r.attempt("counting curve", counting_curve(&sigma, &g)) else { continue };
            let dc = interval_from_counting(&counting, &t);
            let (step, mu) = step_multiplier_from_sigma(&sigma);
            let Some(step_phi) = r.attempt("step curve", phi_curve(&step, &mu, &g)) else { continue };
            let dm = interval_estimate(&step_phi, &t);
            let degs = [ds.degree(), dc.degree(), dm.degree()];
            let ok = match degs {
                [Some(a), Some(b), Some(c)] => {
                    let hi = a.max(b).max(c);
                    let lo = a.min(b).min(c);
                    hi - lo <= 0.05 && (a - s).abs() <= 0.05
                }
                _ => false,
            };
            r.check(
                format!("s={s}: sigma / counting / step-multiplier degrees agree within 0.05"),
                ok,
                format!("{} / {} / {}", fmt_deg(degs[0]), fmt_deg(degs[1]), fmt_deg(degs[2])),
            );
            let mismatches = g
                .iter()
                .filter(|&&e| {
                    let c = counting_phi(&sigma, e).count;
                    let m = superlevel_measure(&step, &mu, e).map(|v| v.value()).unwrap_or(f64::NAN);
                    // exp(ln n) is exact to rounding; compare as integers.
                    m.round() != c || (m - c).abs() > 1e-9 * c.max(1.0)
                })
                .count();
            r.check(
                format!("s={s}: step Phi equals counting Phi at 60 grid points"),
                mismatches == 0,
                format!("{mismatches} mismatches"),
            );
        }
    })
}

pub fn criterion_4() -> CriterionResult {
    run(4, "discretized Riemann-Liouville integration", |r| {
        let start = Instant::now();
        let t = Thresholds::default();
        if let Some(m) = r.attempt("matrix", riemann_liouville_matrix(1.0, 1024)) {
            if let Some(sv) = r.attempt("svd", singular_values(&m)) {
                let worst = (1..=128)
                    .map(|n| {
                        let oracle = 2.0 / ((2 * n - 1) as f64 * PI);
                        ((sv.values()[n - 1] - oracle) / oracle).abs()
                    })
                    .fold(0.0, f64::max);
                r.check(
                    "alpha=1, N=1024: sigma_n within 1% of 2/((2n-1)pi) for n <= 128",
                    worst < 0.01,
                    format!("max relative error {worst:.4e}"),
                );
            }
        }
        if let Some(rep) = r.attempt("pipeline alpha=1", matrix_pipeline(MatrixOperator::RiemannLiouville { alpha: 1.0 }, 1024, &t)) {
            let d = rep.interval.degree();
            r.check(
                "alpha=1, N=1024: degree 1 +- 0.05",
                d.map(|d| (d - 1.0).abs() <= 0.05).unwrap_or(false),
                format!("degree {} interval [{:.4}, {:.4}]", fmt_deg(d), rep.interval.lower, rep.interval.upper),
            );
        }
        if let Some(rep) = r.attempt("pipeline alpha=0.5", matrix_pipeline(MatrixOperator::RiemannLiouville { alpha: 0.5 }, 1024, &t)) {
            let d = rep.interval.degree();
            r.check(
                "alpha=0.5, N=1024: degree 0.5 +- 0.1",
                d.map(|d| (d - 0.5).abs() <= 0.1).unwrap_or(false),
                format!("degree {} interval [{:.4}, {:.4}]", fmt_deg(d), rep.interval.lower, rep.interval.upper),
            );
        }
        let el = start.elapsed();
        r.check("runtime < 2 min", el < Duration::from_secs(120), format!("{el:.2?}"));
    })
}

pub fn criterion_5() -> CriterionResult {
    run(5, "Hilbert matrix finite sections", |r| {
        let t = Thresholds::default();
        let mut tops = Vec::new();
        for n in [64, 256, 1024] {
            if let Some(sv) = r.attempt("svd", hilbert_matrix(n).and_then(|m| singular_values(&m))) {
                tops.push((n, sv.values()[0]));
            }
        }
        if let Some(&(_, top)) = tops.iter().find(|(n, _)| *n == 1024) {
            r.check("sigma_max(N=1024) in [2.9, pi]", (2.9..=PI).contains(&top), format!("{top:.9}"));
        }
        let increasing = tops.len() == 3 && tops.windows(2).all(|w| w[1].1 > w[0].1);
        r.check(
            "sigma_max increasing over N = 64, 256, 1024",
            increasing,
            tops.iter().map(|(n, s)| format!("N={n}: {s:.6}")).collect::<Vec<_>>().join(", "),
        );
        if let Some(rep) = r.attempt("pipeline", matrix_pipeline(MatrixOperator::Hilbert, 512, &t)) {
            r.check(
                "pipeline flags finite-section severity as a discretization artifact",
                rep.discretization_artifact && rep.interval.classification == Classification::Severe && !rep.notes.is_empty(),
                format!("classification {}, artifact flag {}", rep.interval.classification.label(), rep.discretization_artifact),
            );
        }
    })
}

pub fn criterion_6() -> CriterionResult {
    run(6, "FFT multiplier of the Gaussian kernel", |r| {
        let exact = |w: f64| PI * (-0.5 * w * w).exp();
        let mut errs = Vec::new();
        for n in [2048, 4096] {
            let Some(h) = r.attempt("sampler", KernelSampler::gaussian(12.0, n)) else { return };
            let Some(m) = r.attempt("fft", fft_multiplier(&h)) else { return };
            errs.push(m.max_rel_error(exact, 5.0));
            if n == 4096 {
                let e = errs[1];
                r.check("N=4096: max relative error on |w| <= 5 below 1e-6", e < 1e-6, format!("{e:.3e}"));
                let (a, b) = plancherel(&h, &m);
                let rel = ((a - b) / a).abs();
                r.check("Plancherel identity within 1e-8", rel <= 1e-8, format!("{a:.15} vs {b:.15} (rel {rel:.1e})"));
                let l0 = m.at(0);
                r.check("lambda(0) = pi within 1e-8", (l0 - PI).abs() <= 1e-8, format!("{l0:.15}"));
                let l1 = direct_transform(&h, 1.0).norm_sqr();
                r.check("lambda(1) = pi e^(-1/2) within 1e-6", (l1 - exact(1.0)).abs() <= 1e-6, format!("{l1:.12}"));
            }
        }
        if errs.len() == 2 {
            r.check(
                "error halves from N=2048 to N=4096",
                errs[1] <= 0.5 * errs[0],
                format!("{:.3e} -> {:.3e}", errs[0], errs[1]),
            );
        }
    })
}

pub fn criterion_7() -> CriterionResult {
    run(7, "measure reweighting", |r| {
        if let Some(m) = r.attempt("hausdorff", make_default("hausdorff")) {
            let (l, mu) = m.multiplier().unwrap();
            let eps = [1e-2, 1e-4, 1e-6];
            let dens = gallery::density("exp-pi", &m);
            if let Some(phi) = r.attempt("reweight", dens.and_then(|d| reweight(l, mu, d, &eps))) {
                for (i, e) in eps.iter().enumerate() {
                    let want = 1.0 / e - 1.0 / (2.0 * PI);
                    let got = phi.phi(i);
                    let rel = ((got - want) / want).abs();
                    r.check(
                        format!("Hausdorff kappa = e^(pi w)/2 at eps = {e:e}: 1/eps - 1/(2pi) within 1e-6"),
                        rel <= 1e-6,
                        format!("{got:.12} vs {want:.12} (rel {rel:.2e})"),
                    );
                }
            }
        }
        if let Some(m) = r.attempt("backward heat", make_default("backward_heat")) {
            let (l, mu) = m.multiplier().unwrap();
            let eps: Vec<f64> = (3..=8).map(|k: i32| 0.5 * (-(k * k) as f64).exp()).collect();
            let dens = gallery::density("exp-t-k2", &m);
            if let Some(phi) = r.attempt("reweight", dens.and_then(|d| reweight(l, mu, d, &eps))) {
                let q: Vec<f64> = eps.iter().enumerate().map(|(i, e)| phi.log_phi[i] / (1.0 / e).ln()).collect();
                r.check(
                    "backward heat kappa = e^(k^2): log Phi~(eps_m) / ln(1/eps_m) in [0.85, 1.05], m = 3..8",
                    q.iter().all(|v| (0.85..=1.05).contains(v)),
                    q.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", "),
                );
            }
        }
    })
}

pub fn criterion_8() -> CriterionResult {
    run(8, "ill-posedness diagnostics", |r| {
        let t = Thresholds::default();
        for (id, verdict) in [
            ("counterexample_sin2", EssinfVerdict::IllPosed),
            ("counterexample_const", EssinfVerdict::WellPosedCandidate),
        ] {
            if let Some(a) = r.attempt(id, make_default(id).and_then(|m| analyze(&m, None, &t))) {
                let v = a.essinf.as_ref().map(|e| e.verdict);
                r.check(
                    format!("{id}: non_informative + {verdict:?}"),
                    a.phi.finiteness == Finiteness::NonInformative && v == Some(verdict),
                    format!("{:?}, {:?}", a.phi.finiteness, v),
                );
            }
        }
        let mut bad = Vec::new();
        let mut seen = 0;
        for id in gallery::model_ids() {
            let Ok(m) = make_default(id) else {
                bad.push(format!("{id}: build failed"));
                continue;
            };
            let (lambda, mu) = match &m.data {
                SpectralData::Measure { lambda, mu } => (lambda.clone(), mu.clone()),
                SpectralData::Sigma(s) => step_multiplier_from_sigma(s),
                SpectralData::Weyl { .. } => continue,
            };
            if matches!(mu, MeasureSpace::LebesgueUnitInterval) {
                continue;
            }
            let Ok(phi) = m.phi_curve(&m.default_grid().points().unwrap()) else {
                bad.push(format!("{id}: curve failed"));
                continue;
            };
            let diverging = phi.finiteness != Finiteness::NonInformative && phi.log_phi.last().map(|v| *v > phi.log_phi[phi.len() / 2]).unwrap_or(false);
            if !diverging {
                continue;
            }
            seen += 1;
            let e = essinf_estimate(&lambda, &mu, Default::default());
            if e.verdict != EssinfVerdict::IllPosed {
                bad.push(format!("{id}: {:?}", e.verdict));
            }
        }
        r.check(
            "every finite diverging-Phi gallery model has essinf verdict ill_posed",
            bad.is_empty() && seen > 0,
            if bad.is_empty() { format!("{seen} models checked") } else { bad.join("; ") },
        );
    })
}

pub fn criterion_9() -> CriterionResult {
    run(9, "unbounded multipliers", |r| {
        let t = Thresholds::default();
        let case = |r: &mut Runner, id: &str, params: &[(&str, f64)], want: f64| {
            let Some(m) = r.attempt(id, make_with(id, params)) else { return };
            let g = m.default_grid().points().unwrap();
            let (l, mu) = m.multiplier().unwrap();
            let Some(phi) = r.attempt("curve", phi_curve(l, mu, &g)) else { return };
            let d = interval_estimate(&phi, &t).degree();
            r.check(
                format!("{id} {params:?}: degree {want} within 0.05"),
                d.map(|d| (d - want).abs() <= 0.05).unwrap_or(false),
                format!("degree {}", fmt_deg(d)),
            );
            let cut = remove_ball(l, 1.0);
            let Some(phi_cut) = r.attempt("curve without unit ball", phi_curve(&cut, mu, &g)) else { return };
            let dc = interval_estimate(&phi_cut, &t).degree();
            r.check(
                format!("{id} {params:?}: removing the unit ball keeps the degree within 0.05"),
                matches!((d, dc), (Some(a), Some(b)) if (a - b).abs() <= 0.05),
                format!("{} -> {}", fmt_deg(d), fmt_deg(dc)),
            );
        };
        for s in [0.5, 0.75, 2.0] {
            case(r, "fractional_line", &[("s", s)], s);
        }
        for d in [1.0, 2.0, 4.0] {
            case(r, "parabolic_source", &[("diffusivity", 1.0), ("t0", 1.0), ("d", d)], 2.0 / d);
        }
    })
}

pub fn criterion_10() -> CriterionResult {
    run(10, "rearrangement duality", |r| {
        for (id, params) in [("hausdorff", vec![]), ("multiplier_a1", vec![("s", 1.0)]), ("multiplier_b", vec![("s", 1.0)])] {
            let Some(m) = r.attempt(id, make_with(id, &params)) else { continue };
            let (l, mu) = m.multiplier().unwrap();
            let g = m.default_grid().points().unwrap();
            let Some(phi) = r.attempt("curve", phi_curve(l, mu, &g)) else { continue };
            let star = rearranged_multiplier(l, mu);
            let Some(phi_star) = r.attempt("rearranged curve", phi_curve(&star, &MeasureSpace::LebesgueHalfLine, &g)) else { continue };
            let worst = (0..g.len())
                .map(|i| {
                    let (a, b) = (phi.phi(i), phi_star.phi(i));
                    if a == 0.0 && b == 0.0 {
                        0.0
                    } else {
                        ((a - b) / a.abs().max(b.abs())).abs()
                    }
                })
                .fold(0.0, f64::max);
            r.check(
                format!("{id}: Phi of lambda* on [0, inf) equals Phi_lambda within 1e-6"),
                worst <= 1e-6,
                format!("max relative difference {worst:.2e} over {} points", g.len()),
            );
        }
    })
}

pub fn all() -> Vec<fn() -> CriterionResult> {
    vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ]
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    all().into_iter().map(|c| c()).collect()
}
