use illposed::counting::{
    counting_curve, counting_phi, default_grid, interval_from_counting, interval_from_sigma, step_multiplier_from_sigma,
    SigmaWindow,
};
use illposed::distribution::superlevel_measure;
use illposed::{Finiteness, GridSpec, SigmaSequence, TailLaw, Thresholds};
use proptest::prelude::*;

fn harmonic(n: usize) -> SigmaSequence {
    SigmaSequence::new((1..=n).map(|k| 1.0 / k as f64).collect()).unwrap()
}

#[test]
fn counts_are_strict() {
    let s = harmonic(10);
    // sigma^2 = 1, 1/4, 1/9, ...
    assert_eq!(counting_phi(&s, 0.2).count, 2.0);
    assert_eq!(counting_phi(&s, 0.25).count, 1.0);
    assert_eq!(counting_phi(&s, 1.0).count, 0.0);
    let c = counting_phi(&s, 1e-9);
    assert_eq!(c.count, 10.0);
    assert!(c.exhausted);
}

#[test]
fn tail_law_extends_the_count() {
    let s = SigmaSequence::from_law(TailLaw::Power { alpha: 1.0, scale: 1.0 }, 10).unwrap();
    let c = counting_phi(&s, 1e-6);
    assert!(!c.exhausted);
    assert_eq!(c.count, 999.0);
    let s = SigmaSequence::from_law(TailLaw::Exponential { c: 1.0, q: 1.0, scale: 1.0 }, 10).unwrap();
    // e^{-2n} > e^{-40.5} for n <= 20.
    assert_eq!(counting_phi(&s, (-40.5f64).exp()).count, 20.0);
}

#[test]
fn curve_marks_exhaustion() {
    let s = harmonic(10);
    let g = GridSpec::Geometric { eps_max: 1.0, eps_min: 1e-6, points: 30 }.points().unwrap();
    let phi = counting_curve(&s, &g).unwrap();
    assert_eq!(phi.finiteness, Finiteness::Exhausted);
    assert!(phi.exhausted_at.is_some());
    assert_eq!(phi.log_phi[0], f64::NEG_INFINITY);
}

#[test]
fn default_grid_spans_the_stored_values() {
    let s = harmonic(100);
    match default_grid(&s) {
        GridSpec::Geometric { eps_max, eps_min, .. } => {
            assert_eq!(eps_max, 1.0);
            assert!((eps_min - 1e-4).abs() < 1e-18);
        }
        other => panic!("unexpected grid {other:?}"),
    }
}

#[test]
fn sigma_exponent_on_exact_power_law() {
    let t = Thresholds::default();
    for s in [0.25, 1.0, 3.0] {
        let seq = SigmaSequence::new((1..=512).map(|n| (n as f64).powf(-s)).collect()).unwrap();
        let iv = interval_from_sigma(&seq, SigmaWindow::default(), &t).unwrap();
        assert!((iv.degree().unwrap() - s).abs() < 1e-10, "s = {s}: {iv:?}");
    }
}

#[test]
fn sigma_exponent_needs_enough_values() {
    let t = Thresholds::default();
    assert!(interval_from_sigma(&harmonic(8), SigmaWindow::default(), &t).is_err());
}

#[test]
fn raw_ratio_interval_on_power_law() {
    let t = Thresholds::default();
    let seq = SigmaSequence::new((1..=4096).map(|n| (n as f64).powf(-0.5)).collect()).unwrap();
    let g = GridSpec::Geometric { eps_max: 1.0, eps_min: 1.0 / 4096.0, points: 60 }.points().unwrap();
    let iv = interval_from_counting(&counting_curve(&seq, &g).unwrap(), &t);
    assert!((iv.degree().unwrap() - 0.5).abs() < 0.01, "{iv:?}");
}

#[test]
fn step_multiplier_oracles() {
    let s = SigmaSequence::new(vec![1.0, 0.5]).unwrap();
    let (m, mu) = step_multiplier_from_sigma(&s);
    assert_eq!(m.eval(0.5), 1.0);
    assert_eq!(m.eval(1.7), 0.25);
    assert_eq!(superlevel_measure(&m, &mu, 0.2).unwrap().value(), 2.0);
}

fn sorted_sigma() -> impl Strategy<Value = SigmaSequence> {
    prop::collection::vec(1e-6f64..1.0, 1..80).prop_map(|mut v| {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        SigmaSequence::new(v).unwrap()
    })
}

proptest! {
    #[test]
    fn counting_phi_is_nonincreasing(sigma in sorted_sigma(), a in 1e-13f64..1.0, b in 1e-13f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(counting_phi(&sigma, lo).count >= counting_phi(&sigma, hi).count);
    }

    #[test]
    fn step_multiplier_bridge_identity(sigma in sorted_sigma(), e in 1e-13f64..1.0) {
        let (m, mu) = step_multiplier_from_sigma(&sigma);
        let want = counting_phi(&sigma, e).count;
        let got = superlevel_measure(&m, &mu, e).unwrap().value();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0), "{} vs {}", got, want);
    }
}
