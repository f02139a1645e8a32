use illposed::estimate::{interval_estimate, local_degrees, ratio_column, ratio_samples, regression_estimate};
use illposed::gallery::{make_with, OperatorModel};
use illposed::{Classification, DistributionFunction, Finiteness, GridSpec, Source, Thresholds};
use proptest::prelude::*;

fn power_curve(c: f64, s: f64, eps_min: f64) -> DistributionFunction {
    let g = GridSpec::Geometric { eps_max: 1.0, eps_min, points: 60 }.points().unwrap();
    let lp = g.iter().map(|e| c.ln() - e.ln() / (2.0 * s)).collect();
    DistributionFunction::new(g, lp, Source::Weyl).unwrap()
}

fn degree_with(m: &OperatorModel, fraction: f64) -> Option<f64> {
    let t = Thresholds { tail_fraction: fraction, ..Thresholds::default() };
    let phi = m.phi_curve(&m.default_grid().points().unwrap()).unwrap();
    interval_estimate(&phi, &t).degree()
}

#[test]
fn exact_power_law_ratio_is_s() {
    let phi = power_curve(1.0, 0.7, 1e-12);
    for r in ratio_samples(&phi) {
        assert!((r.ratio - 0.7).abs() < 1e-12);
    }
    // eps = 1 has ln Phi = 0 and no ratio.
    assert_eq!(ratio_column(&phi)[0], None);
}

#[test]
fn local_degrees_cover_the_window() {
    let phi = power_curve(3.0, 1.5, 1e-12);
    let l = local_degrees(&phi, 20);
    assert_eq!(l.len(), 20);
    assert_eq!(l.last().unwrap().0, 59);
    assert!(l.iter().all(|p| (p.3 - 1.5).abs() < 1e-9));
    assert!(local_degrees(&phi, 100).is_empty());
}

#[test]
fn regression_on_power_law() {
    let t = Thresholds::default();
    let r = regression_estimate(&power_curve(2.0, 0.25, 1e-12), &t).unwrap();
    assert!((r.slope - 2.0).abs() < 1e-10);
    assert!(r.normalized_residual < 1e-12);
    assert!((r.degree.unwrap() - 0.25).abs() < 1e-10);
}

#[test]
fn too_few_samples_is_indeterminate() {
    let t = Thresholds::default();
    let g = GridSpec::Geometric { eps_max: 1.0, eps_min: 1e-3, points: 12 }.points().unwrap();
    let lp = g.iter().map(|e| -e.ln()).collect();
    let phi = DistributionFunction::new(g, lp, Source::Weyl).unwrap();
    let iv = interval_estimate(&phi, &t);
    assert_eq!(iv.classification, Classification::Indeterminate);
    assert_eq!((iv.lower, iv.upper), (0.0, f64::INFINITY));
}

#[test]
fn non_informative_is_indeterminate() {
    let g = vec![1.0, 0.5, 0.25];
    let phi = DistributionFunction::new(g, vec![f64::INFINITY; 3], Source::Superlevel).unwrap();
    assert_eq!(phi.finiteness, Finiteness::NonInformative);
    assert_eq!(interval_estimate(&phi, &Thresholds::default()).classification, Classification::Indeterminate);
}

#[test]
fn severe_trend_reports_infinity() {
    // Phi = ln(1/eps): local degrees grow without bound.
    let g = GridSpec::Halving { eps_max: 0.5, points: 60 }.points().unwrap();
    let lp = g.iter().map(|e| (-e.ln()).ln()).collect();
    let phi = DistributionFunction::new(g, lp, Source::Superlevel).unwrap();
    let iv = interval_estimate(&phi, &Thresholds::default());
    assert_eq!(iv.classification, Classification::Severe);
    assert_eq!(iv.lower, f64::INFINITY);
}

#[test]
fn mild_trend_reports_zero() {
    // Phi = exp(eps^{-1/2}): degrees collapse to 0.
    let g = GridSpec::Geometric { eps_max: 1.0, eps_min: 1e-4, points: 60 }.points().unwrap();
    let lp = g.iter().map(|e| e.powf(-0.5)).collect();
    let phi = DistributionFunction::new(g, lp, Source::Superlevel).unwrap();
    let iv = interval_estimate(&phi, &Thresholds::default());
    assert_eq!(iv.classification, Classification::Mild);
    assert_eq!((iv.lower, iv.upper), (0.0, 0.0));
}

proptest! {
    #[test]
    fn prefactor_does_not_change_the_degree(c in 1e-3f64..1e3, s in 0.1f64..5.0) {
        let t = Thresholds::default();
        let a = interval_estimate(&power_curve(1.0, s, 1e-12), &t).degree().unwrap();
        let b = interval_estimate(&power_curve(c, s, 1e-12), &t).degree().unwrap();
        prop_assert!((a - s).abs() < 1e-9 && (b - s).abs() < 1e-9);
    }

    #[test]
    fn window_choice_is_robust(s in 0.3f64..3.0, fraction in 0.25f64..0.34) {
        let m = make_with("multiplier_a1", &[("s", s)]).unwrap();
        let a = degree_with(&m, 1.0 / 3.0).unwrap();
        let b = degree_with(&m, fraction).unwrap();
        prop_assert!((a - b).abs() < 0.01, "{} vs {}", a, b);
    }
}
