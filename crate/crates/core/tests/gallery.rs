use std::collections::BTreeMap;

use illposed::distribution::{phi_curve, superlevel_measure};
use illposed::estimate::interval_estimate;
use illposed::gallery::{self, analyze, make, make_default, make_with, remove_ball, Expected, SpectralData};
use illposed::{Classification, Error, GridSpec, Source, Thresholds};

#[test]
fn every_model_builds_with_defaults() {
    for id in gallery::model_ids() {
        let m = make_default(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(m.id, id);
        assert!(!m.notes.is_empty());
    }
    assert_eq!(gallery::list().len(), gallery::model_ids().len());
}

#[test]
fn default_analyses_agree_with_expectations() {
    let t = Thresholds::default();
    for id in gallery::model_ids() {
        // Converges like 1/ln ln(1/eps); see the slow-convergence test below.
        if id == "multivariate_integration" {
            continue;
        }
        let a = analyze(&make_default(id).unwrap(), None, &t).unwrap();
        assert!(a.agrees, "{id}: {:?} vs {:?}", a.interval, a.expected);
    }
}

#[test]
fn frozen_default_classifications() {
    let t = Thresholds::default();
    let cases: &[(&str, &str, Option<f64>)] = &[
        ("riemann_liouville", "moderate", Some(1.0)),
        ("sobolev_embedding", "moderate", Some(0.5)),
        ("weyl", "moderate", Some(1.0)),
        ("inverse_laplacian", "moderate", Some(1.0)),
        ("backward_heat", "severe", None),
        ("multiplier_a1", "moderate", Some(1.0)),
        ("multiplier_a2", "moderate", Some(1.0)),
        ("multiplier_b", "severe", None),
        ("multiplier_c", "mild", None),
        ("hausdorff", "severe", None),
        ("gaussian_kernel", "severe", None),
        ("laplace_kernel", "moderate", Some(2.0)),
        ("fractional_line", "moderate", Some(0.5)),
        ("parabolic_source", "moderate", Some(1.0)),
        ("counterexample_sin2", "indeterminate", None),
        ("counterexample_const", "indeterminate", None),
    ];
    for (id, label, deg) in cases {
        let a = analyze(&make_default(id).unwrap(), None, &t).unwrap();
        assert_eq!(a.interval.classification.label(), *label, "{id}");
        if let Some(d) = deg {
            assert!((a.interval.degree().unwrap() - d).abs() < 0.01, "{id}: {:?}", a.interval);
        }
    }
}

#[test]
fn weyl_law_is_consistent() {
    // Phi = c eps^{-d/(2q)} exactly, so every ratio equals q/d once c = 1.
    let t = Thresholds::default();
    for (q, d) in [(2.0, 2.0), (1.0, 3.0), (4.0, 1.0)] {
        let m = make_with("weyl", &[("q", q), ("d", d), ("c", 1.0)]).unwrap();
        let a = analyze(&m, None, &t).unwrap();
        assert_eq!(a.phi.source, Source::Weyl);
        for r in a.ratios.iter().flatten() {
            assert!((r - q / d).abs() < 1e-12);
        }
        assert!((a.interval.degree().unwrap() - q / d).abs() < 1e-9);
    }
    let m = make_with("inverse_laplacian", &[("d", 4.0)]).unwrap();
    assert!((analyze(&m, None, &t).unwrap().interval.degree().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn inner_zero_does_not_change_the_degree() {
    let t = Thresholds::default();
    let g = GridSpec::Geometric { eps_max: 0.5, eps_min: 1e-10, points: 60 }.points().unwrap();
    let a1 = make_with("multiplier_a1", &[("s", 1.0)]).unwrap();
    let a2 = make_default("multiplier_a2").unwrap();
    let d1 = interval_estimate(&a1.phi_curve(&g).unwrap(), &t).degree().unwrap();
    let d2 = interval_estimate(&a2.phi_curve(&g).unwrap(), &t).degree().unwrap();
    assert!((d1 - d2).abs() < 0.05, "{d1} vs {d2}");
}

#[test]
fn laplace_kernel_degree_scales_with_dimension() {
    let t = Thresholds::default();
    for (a, d) in [(1.0, 2.0), (1.5, 1.0), (1.0, 4.0)] {
        let m = make_with("laplace_kernel", &[("a", a), ("b", 2.0), ("d", d)]).unwrap();
        let deg = analyze(&m, None, &t).unwrap().interval.degree().unwrap();
        assert!((deg - 2.0 * a / d).abs() < 0.02, "a = {a}, d = {d}: {deg}");
    }
}

#[test]
fn removing_a_ball_only_changes_small_scales() {
    let m = make_with("fractional_line", &[("s", 0.5)]).unwrap();
    let (l, mu) = m.multiplier().unwrap();
    let cut = remove_ball(l, 1.0);
    assert_eq!(cut.eval(0.5), 0.0);
    assert_eq!(cut.eval(2.0), l.eval(2.0));
    // Below lambda(1) = 1 the superlevel set loses exactly the removed ball.
    let full = superlevel_measure(l, mu, 0.1).unwrap().value();
    let part = superlevel_measure(&cut, mu, 0.1).unwrap().value();
    assert!((full - part - 2.0).abs() < 1e-9, "{full} {part}");
}

#[test]
fn parameter_validation() {
    let mut p = BTreeMap::new();
    p.insert("bogus".to_string(), 1.0);
    assert!(matches!(make("hausdorff", &p), Err(Error::UnknownParameter { .. })));
    assert!(matches!(make_default("nope"), Err(Error::UnknownModel(_))));
    assert!(make_with("multiplier_a1", &[("s", -1.0)]).is_err());
    assert!(make_with("riemann_liouville", &[("n", 10.5)]).is_err());
    assert!(make_with("gaussian_kernel", &[("d", 1.5)]).is_err());
    assert!(gallery::density("nope", &make_default("hausdorff").unwrap()).is_err());
}

#[test]
fn expectations_and_data_kinds() {
    let rl = make_with("riemann_liouville", &[("alpha", 0.5)]).unwrap();
    assert!(matches!(rl.data, SpectralData::Sigma(_)));
    assert_eq!(rl.expected, Expected::Moderate { degree: 0.5 });
    assert!(rl.multiplier().is_none());
    assert!(matches!(make_default("weyl").unwrap().data, SpectralData::Weyl { .. }));
    assert_eq!(make_default("hausdorff").unwrap().expected.label(), "severe");
}

#[test]
fn unit_interval_models_are_bounded() {
    let m = make_with("unit_power", &[("p", 2.0)]).unwrap();
    let (l, mu) = m.multiplier().unwrap();
    let phi = phi_curve(l, mu, &[0.25, 1e-6]).unwrap();
    assert!((phi.phi(0) - 0.5).abs() < 1e-9);
    assert!(phi.phi(1) <= 1.0);
}

#[test]
fn frozen_multivariate_integration() {
    // sigma_n = ln(n+1)^2/n: the local degree creeps toward 1 from below.
    let t = Thresholds::default();
    let a = analyze(&make_default("multivariate_integration").unwrap(), None, &t).unwrap();
    let d = a.interval.degree();
    assert!(matches!(a.interval.classification, Classification::Moderate { .. }));
    assert!(d.is_none() || d.unwrap() < 1.0);
    assert!((a.interval.lower - 0.878).abs() < 2e-3, "{:?}", a.interval);
    assert!((a.interval.upper - 0.916).abs() < 2e-3, "{:?}", a.interval);
}

#[test]
fn multivariate_sigma_exponent_converges_slowly() {
    use illposed::counting::{interval_from_sigma, SigmaWindow};
    let t = Thresholds::default();
    let fit = |n: f64| {
        let m = make_with("multivariate_integration", &[("d", 3.0), ("n", n)]).unwrap();
        match &m.data {
            SpectralData::Sigma(s) => interval_from_sigma(s, SigmaWindow::default(), &t).unwrap(),
            _ => unreachable!(),
        }
    };
    let big = fit(65536.0);
    let d = big.diagnostics.as_ref().unwrap();
    assert!((d.window_min - 0.5496).abs() < 1e-3 && (d.window_max - 0.5661).abs() < 1e-3, "{d:?}");
    // The exponent still rises across a window spanning a factor 2 in n,
    // which the trend rule reads as divergence.
    assert_eq!(big.classification, Classification::Severe);
    let small = fit(4096.0);
    let ds = small.diagnostics.as_ref().unwrap();
    assert!(ds.window_min < d.window_min && ds.window_max < d.window_max);
}
