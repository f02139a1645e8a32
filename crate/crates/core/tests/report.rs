use illposed::discretize::{fft_multiplier, matrix_pipeline, KernelSampler, MatrixOperator};
use illposed::gallery::{analyze, make_default, make_with};
use illposed::report::{analysis_json, curve_csv, fmt17, num, pipeline_json, sampled_csv, singular_values_csv, to_text};
use illposed::Thresholds;
use serde_json::Value;

#[test]
fn seventeen_digits() {
    assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
    assert_eq!(fmt17(f64::INFINITY), "inf");
    assert_eq!(fmt17(f64::NEG_INFINITY), "-inf");
    assert_eq!(fmt17(f64::NAN), "nan");
    assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
    assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
}

#[test]
fn analysis_json_keys() {
    let a = analyze(&make_default("hausdorff").unwrap(), None, &Thresholds::default()).unwrap();
    let v = analysis_json(&a);
    for k in ["model", "params", "eps_grid", "log_phi", "ratios", "interval", "classification", "diagnostics"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["classification"], "severe");
    assert_eq!(v["interval"]["A"], "inf");
    let d = &v["diagnostics"];
    for k in ["method", "window", "elasticity", "trend", "finiteness", "source", "essinf", "expected", "agrees_with_expected"] {
        assert!(d.get(k).is_some(), "missing diagnostics.{k}");
    }
    assert_eq!(v["eps_grid"].as_array().unwrap().len(), 60);
}

#[test]
fn renderings_are_deterministic() {
    let t = Thresholds::default();
    let m = make_with("multiplier_a1", &[("s", 2.0)]).unwrap();
    let a = to_text(&analysis_json(&analyze(&m, None, &t).unwrap()));
    let b = to_text(&analysis_json(&analyze(&m, None, &t).unwrap()));
    assert_eq!(a, b);
    let parsed: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(parsed["model"], "multiplier_a1");
}

#[test]
fn csv_layouts() {
    let a = analyze(&make_default("multiplier_a2").unwrap(), None, &Thresholds::default()).unwrap();
    let csv = curve_csv(&a.phi, &a.ratios);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("eps,log_phi,ratio"));
    assert_eq!(lines.count(), 60);
    // lambda <= 1/2 so the first sample has no superlevel set and no ratio.
    assert!(csv.lines().nth(1).unwrap().ends_with(','));

    let r = matrix_pipeline(MatrixOperator::RiemannLiouville { alpha: 1.0 }, 64, &Thresholds::default()).unwrap();
    let sv = singular_values_csv(&r);
    assert!(sv.starts_with("n,sigma\n1,"));
    assert_eq!(sv.lines().count(), 65);
    let j = pipeline_json(&r);
    assert_eq!(j["params"]["n"], 64);
    assert!(j["diagnostics"]["notes"].is_array());

    let f = fft_multiplier(&KernelSampler::gaussian(12.0, 64).unwrap()).unwrap();
    assert!(sampled_csv(&f).starts_with("omega,lambda\n"));
}
