use std::f64::consts::PI;
use std::sync::Arc;

use illposed::distribution::{
    d_lambda, decreasing_rearrangement, decreasing_rearrangement_exact, essinf_estimate, increasing_rearrangement, lp_check,
    measure_of, phi_curve, reweight, superlevel_measure, superlevel_set, EssinfVerdict, LpIntegrand, LpVerdict,
    SuperlevelSet,
};
use illposed::gallery::{self, make_default, make_with};
use illposed::{Density, GridSpec, MeasureSpace, Multiplier, Shape, TailDecay};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn model(id: &str, params: &[(&str, f64)]) -> (Multiplier, MeasureSpace) {
    let m = make_with(id, params).unwrap();
    let (l, mu) = m.multiplier().unwrap();
    (l.clone(), mu.clone())
}

#[test]
fn frozen_superlevel_measures() {
    let cases: &[(&str, &[(&str, f64)], f64, f64)] = &[
        ("hausdorff", &[], 0.1, 1.3178693792192462),
        ("gaussian_kernel", &[("d", 1.0)], 0.1, 5.251525476539895),
        ("multiplier_a1", &[("s", 1.0)], 0.01, 19.899748742132399),
        ("multiplier_b", &[("s", 1.0)], 1e-4, 18.420680743952365),
    ];
    for (id, p, eps, want) in cases {
        let (l, mu) = model(id, p);
        let got = superlevel_measure(&l, &mu, *eps).unwrap().value();
        assert!(close(got, *want, 1e-10), "{id}: {got} vs {want}");
    }
}

#[test]
fn inner_zero_multiplier() {
    let (l, mu) = model("multiplier_a2", &[]);
    let v = superlevel_measure(&l, &mu, 1e-6).unwrap().value();
    assert!(close(v * 1e-3, 1.999997999999, 1e-9), "{v}");
    match superlevel_set(&l, &mu, 0.4).unwrap() {
        SuperlevelSet::Intervals(iv) => {
            assert_eq!(iv.len(), 1);
            assert!(iv[0].0 > 0.0 && iv[0].1 > 1.0);
        }
        other => panic!("{other:?}"),
    }
    // Above the supremum the set is empty.
    assert_eq!(superlevel_measure(&l, &mu, 0.5).unwrap().value(), 0.0);
}

#[test]
fn radial_measure_uses_ball_volume() {
    // lambda = pi^2 e^{-r^2/2} on R^2: {lambda > eps} is the disc of radius sqrt(2 ln(pi^2/eps)).
    let (l, mu) = model("gaussian_kernel", &[("d", 2.0)]);
    let eps = 1e-3;
    let r2 = 2.0 * (PI * PI / eps).ln();
    let got = superlevel_measure(&l, &mu, eps).unwrap().value();
    assert!(close(got, PI * r2, 1e-10));
}

#[test]
fn counting_measure_on_integers() {
    let m = make_default("backward_heat").unwrap();
    let (l, mu) = m.multiplier().unwrap();
    // e^{-k^2} > e^{-9} for |k| <= 2.
    assert!(close(superlevel_measure(l, mu, (-9.0f64).exp()).unwrap().value(), 5.0, 1e-14));
    assert_eq!(measure_of(&SuperlevelSet::Points(vec![-1, 0, 1]), mu).unwrap(), 3.0);
}

#[test]
fn non_informative_curve() {
    let (l, mu) = model("counterexample_sin2", &[]);
    assert!(superlevel_measure(&l, &mu, 0.5).unwrap().is_infinite());
    assert_eq!(superlevel_measure(&l, &mu, 1.0).unwrap().value(), 0.0);
    let (l, mu) = model("counterexample_const", &[("c", 0.5)]);
    assert!(superlevel_measure(&l, &mu, 0.25).unwrap().is_infinite());
    assert_eq!(superlevel_measure(&l, &mu, 0.5).unwrap().value(), 0.0);
}

#[test]
fn hausdorff_rearrangement() {
    let (l, mu) = model("hausdorff", &[]);
    let exact = decreasing_rearrangement_exact(&l, &mu, 1.0).unwrap();
    assert!(close(exact, 0.2710149513994199, 1e-10), "{exact}");
    assert_eq!(decreasing_rearrangement_exact(&l, &mu, 0.0).unwrap(), PI);
    let g = GridSpec::default_for(PI).points().unwrap();
    let phi = phi_curve(&l, &mu, &g).unwrap();
    assert!((decreasing_rearrangement(&phi, 0.0).unwrap() - PI).abs() < 1e-9);
    // Interpolated from the stored curve.
    let approx = decreasing_rearrangement(&phi, 1.0).unwrap();
    assert!(close(approx, exact, 0.05), "{approx}");
}

#[test]
fn unit_interval_rearrangements() {
    let m = make_default("unit_tent").unwrap();
    let (l, mu) = m.multiplier().unwrap();
    assert!((d_lambda(l, mu, 0.25).unwrap() - 0.5).abs() < 1e-9);
    let m = make_with("unit_power", &[("p", 2.0)]).unwrap();
    let (l, mu) = m.multiplier().unwrap();
    assert!((d_lambda(l, mu, 0.25).unwrap() - 0.5).abs() < 1e-9);
    assert!((increasing_rearrangement(l, mu, 0.5).unwrap() - 0.25).abs() < 1e-9);
    let (h, hmu) = model("hausdorff", &[]);
    assert!(d_lambda(&h, &hmu, 0.1).is_err());
}

#[test]
fn frozen_reweighted_hausdorff() {
    let m = make_default("hausdorff").unwrap();
    let (l, mu) = m.multiplier().unwrap();
    let d = gallery::density("exp-pi", &m).unwrap();
    let eps = [0.1, 1e-2, 1e-4, 1e-6];
    let want = [9.838311385367899, 99.84059175330737, 9999.840842523879, 999999.8408450316];
    let phi = reweight(l, mu, d, &eps).unwrap();
    for (i, w) in want.iter().enumerate() {
        assert!(close(phi.phi(i), *w, 1e-8), "{} vs {w}", phi.phi(i));
    }
}

#[test]
fn frozen_backward_heat_reweight() {
    let m = make_default("backward_heat").unwrap();
    let (l, mu) = m.multiplier().unwrap();
    let d = gallery::density("exp-t-k2", &m).unwrap();
    let phi = reweight(l, mu, d, &[(-9.0f64).exp()]).unwrap();
    assert!(close(phi.phi(0), 115.63286372320657, 1e-12));
    let eps: Vec<f64> = (3..=8).map(|k: i32| 0.5 * (-(k * k) as f64).exp()).collect();
    let want = [1.000733, 1.000055, 1.0000048, 1.00000046, 1.000000045, 1.0000000047];
    let phi = reweight(l, mu, gallery::density("exp-t-k2", &m).unwrap(), &eps).unwrap();
    for (i, w) in want.iter().enumerate() {
        let q = phi.log_phi[i] / (1.0 / eps[i]).ln();
        assert!((q - w).abs() < 1e-6, "m = {}: {q}", i + 3);
    }
}

#[test]
fn weighted_measure_rejects_unit_interval() {
    assert!(MeasureSpace::LebesgueUnitInterval.weighted(Density::uniform()).is_err());
}

#[test]
fn lp_oracles() {
    let (l, mu) = model("hausdorff", &[]);
    match lp_check(&l, &mu, &LpIntegrand::Power(1.0)).unwrap() {
        LpVerdict::Finite { value } => assert!(close(value, PI / 2.0, 1e-5), "{value}"),
        other => panic!("{other:?}"),
    }
    let (l, mu) = model("multiplier_a1", &[("s", 1.0)]);
    match lp_check(&l, &mu, &LpIntegrand::Power(1.0)).unwrap() {
        LpVerdict::Finite { value } => assert!(close(value, PI, 1e-5), "{value}"),
        other => panic!("{other:?}"),
    }
    let (l, mu) = model("multiplier_c", &[("s", 1.0)]);
    assert!(matches!(lp_check(&l, &mu, &LpIntegrand::Power(1.0)).unwrap(), LpVerdict::Infinite { .. }));
    let f = LpIntegrand::Function(Arc::new(|z: f64| if z > 0.0 { (-2.0 / z.sqrt()).exp() } else { 0.0 }));
    match lp_check(&l, &mu, &f).unwrap() {
        LpVerdict::Finite { value } => assert!(close(value, 1.4715177646857693, 1e-5), "{value}"),
        other => panic!("{other:?}"),
    }
    assert!(lp_check(&l, &mu, &LpIntegrand::Power(0.5)).is_err());
}

#[test]
fn essinf_verdicts() {
    let (l, mu) = model("hausdorff", &[]);
    assert_eq!(essinf_estimate(&l, &mu, Default::default()).verdict, EssinfVerdict::IllPosed);
    let (l, mu) = model("counterexample_const", &[("c", 0.5)]);
    let e = essinf_estimate(&l, &mu, Default::default());
    assert_eq!(e.verdict, EssinfVerdict::WellPosedCandidate);
    assert!((e.estimate - 0.5).abs() < 1e-12);
}

fn exp_decay(c: f64) -> Multiplier {
    Multiplier::new(move |w: f64| c * (-w).exp(), Shape::MonotoneTail { breakpoint: 0.0 }, c).with_decay(TailDecay::Exponential)
}

proptest! {
    #[test]
    fn phi_is_nonincreasing(id in prop::sample::select(vec!["hausdorff", "multiplier_a1", "multiplier_a2", "multiplier_b", "laplace_kernel"]),
                            a in 1e-12f64..0.4, b in 1e-12f64..0.4) {
        let (l, mu) = model(id, &[]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let ml = superlevel_measure(&l, &mu, lo).unwrap().value();
        let mh = superlevel_measure(&l, &mu, hi).unwrap().value();
        prop_assert!(ml >= mh * (1.0 - 1e-10), "{} < {}", ml, mh);
    }

    #[test]
    fn uniform_reweight_is_the_plain_curve(e in 1e-10f64..0.9) {
        let m = make_default("hausdorff").unwrap();
        let (l, mu) = m.multiplier().unwrap();
        let plain = phi_curve(l, mu, &[e]).unwrap();
        let w = reweight(l, mu, Density::uniform(), &[e]).unwrap();
        prop_assert!(close(w.phi(0), plain.phi(0), 1e-8));
    }

    #[test]
    fn scaling_invariance(c in 0.1f64..50.0, e in 1e-9f64..0.5) {
        // Phi_{c lambda}(c eps) = Phi_lambda(eps).
        let mu = MeasureSpace::LebesgueHalfLine;
        let a = superlevel_measure(&exp_decay(1.0), &mu, e).unwrap().value();
        let b = superlevel_measure(&exp_decay(c), &mu, c * e).unwrap().value();
        prop_assert!(close(b, a, 1e-9), "{} vs {}", b, a);
    }

    #[test]
    fn closed_form_agrees_with_bisection(s in 0.3f64..3.0, e in 1e-8f64..0.9) {
        let (l, mu) = model("multiplier_a1", &[("s", s)]);
        let bis = superlevel_measure(&l.clone().without_closed_form(), &mu, e).unwrap().value();
        // {(1+w^2)^-s > e} = {|w| < sqrt(e^{-1/s} - 1)}.
        let exact = 2.0 * (e.powf(-1.0 / s) - 1.0).sqrt();
        prop_assert!(close(bis, exact, 1e-9), "{} vs {}", bis, exact);
    }
}
