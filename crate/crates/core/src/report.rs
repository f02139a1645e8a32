//! Deterministic JSON and CSV renderings. Every number carries 17
//! significant digits; non-finite values become the strings "inf", "-inf", "nan".

use serde_json::{json, Map, Number, Value};

use crate::discretize::{PipelineReport, SampledMultiplier};
use crate::distribution::EssinfReport;
use crate::estimate::RegressionFit;
use crate::gallery::Analysis;
use crate::spectral::{DistributionFunction, IllPosednessInterval};

/// 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt17(x).parse::<Number>().expect("formatted float is a valid JSON number"))
    } else {
        Value::String(fmt17(x))
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

pub fn interval_json(iv: &IllPosednessInterval) -> Value {
    json!({ "A": num(iv.lower), "B": num(iv.upper) })
}

pub fn diagnostics_json(iv: &IllPosednessInterval) -> Value {
    let mut m = Map::new();
    m.insert("degree".into(), opt(iv.degree()));
    if let Some(d) = &iv.diagnostics {
        m.insert("method".into(), json!(d.method));
        m.insert("window".into(), json!([d.window.0, d.window.1]));
        m.insert("window_min".into(), num(d.window_min));
        m.insert("window_max".into(), num(d.window_max));
        m.insert("elasticity".into(), opt(d.elasticity));
        m.insert("max_drawdown".into(), num(d.max_drawdown));
        m.insert("max_rise".into(), num(d.max_rise));
        m.insert("trend".into(), serde_json::to_value(d.trend).expect("trend serialises"));
        m.insert(
            "samples".into(),
            Value::Array(d.samples.iter().map(|(a, b)| json!([num(*a), num(*b)])).collect()),
        );
        m.insert("note".into(), d.note.clone().map(Value::String).unwrap_or(Value::Null));
    }
    Value::Object(m)
}

fn regression_json(r: Option<&RegressionFit>) -> Value {
    match r {
        Some(r) => json!({
            "slope": num(r.slope),
            "normalized_residual": num(r.normalized_residual),
            "degree": opt(r.degree),
        }),
        None => Value::Null,
    }
}

fn essinf_json(e: Option<&EssinfReport>) -> Value {
    match e {
        Some(e) => json!({
            "estimate": num(e.estimate),
            "verdict": serde_json::to_value(e.verdict).expect("verdict serialises"),
            "truncation": num(e.truncation),
            "floor": num(e.floor),
        }),
        None => Value::Null,
    }
}

fn curve_fields(m: &mut Map<String, Value>, phi: &DistributionFunction, ratios: &[Option<f64>]) {
    m.insert("eps_grid".into(), nums(&phi.eps_grid));
    m.insert("log_phi".into(), nums(&phi.log_phi));
    m.insert("ratios".into(), Value::Array(ratios.iter().map(|r| opt(*r)).collect()));
}

pub fn analysis_json(a: &Analysis) -> Value {
    let mut m = Map::new();
    m.insert("model".into(), json!(a.model));
    m.insert(
        "params".into(),
        Value::Object(a.params.iter().map(|(k, v)| (k.clone(), num(*v))).collect()),
    );
    curve_fields(&mut m, &a.phi, &a.ratios);
    m.insert("interval".into(), interval_json(&a.interval));
    m.insert("classification".into(), json!(a.interval.classification.label()));
    let mut d = match diagnostics_json(&a.interval) {
        Value::Object(d) => d,
        _ => unreachable!(),
    };
    d.insert("finiteness".into(), serde_json::to_value(a.phi.finiteness).expect("serialises"));
    d.insert("source".into(), serde_json::to_value(a.phi.source).expect("serialises"));
    d.insert("regression".into(), regression_json(a.regression.as_ref()));
    d.insert("essinf".into(), essinf_json(a.essinf.as_ref()));
    d.insert("expected".into(), json!(a.expected.label()));
    d.insert("agrees_with_expected".into(), json!(a.agrees));
    m.insert("diagnostics".into(), Value::Object(d));
    Value::Object(m)
}

/// `eps,log_phi,ratio` with ratio left empty where undefined.
pub fn curve_csv(phi: &DistributionFunction, ratios: &[Option<f64>]) -> String {
    let mut out = String::from("eps,log_phi,ratio\n");
    for i in 0..phi.len() {
        out.push_str(&fmt17(phi.eps_grid[i]));
        out.push(',');
        out.push_str(&fmt17(phi.log_phi[i]));
        out.push(',');
        if let Some(r) = ratios.get(i).copied().flatten() {
            out.push_str(&fmt17(r));
        }
        out.push('\n');
    }
    out
}

/// Generic two-column CSV.
pub fn pairs_csv(header: (&str, &str), rows: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        out.push_str(&format!("{},{}\n", fmt17(*a), fmt17(*b)));
    }
    out
}

pub fn pairs_json(kind: &str, model: &str, header: (&str, &str), rows: &[(f64, f64)]) -> Value {
    json!({
        "kind": kind,
        "model": model,
        header.0: nums(&rows.iter().map(|r| r.0).collect::<Vec<_>>()),
        header.1: nums(&rows.iter().map(|r| r.1).collect::<Vec<_>>()),
    })
}

pub fn pipeline_json(r: &PipelineReport) -> Value {
    let ratios = crate::estimate::ratio_column(&r.phi);
    let mut m = Map::new();
    m.insert("model".into(), json!(r.operator));
    m.insert("params".into(), json!({ "n": r.n }));
    m.insert("singular_values".into(), nums(&r.matrix_singular_values));
    m.insert("sigma_used".into(), nums(&r.sigma_used));
    curve_fields(&mut m, &r.phi, &ratios);
    m.insert("interval".into(), interval_json(&r.interval));
    m.insert("classification".into(), json!(r.interval.classification.label()));
    let mut d = match diagnostics_json(&r.interval) {
        Value::Object(d) => d,
        _ => unreachable!(),
    };
    d.insert("regression".into(), regression_json(r.regression.as_ref()));
    d.insert("discretization_artifact".into(), json!(r.discretization_artifact));
    d.insert("notes".into(), json!(r.notes));
    m.insert("diagnostics".into(), Value::Object(d));
    Value::Object(m)
}

/// `n,sigma` rows for the matrix singular values.
pub fn singular_values_csv(r: &PipelineReport) -> String {
    let mut out = String::from("n,sigma\n");
    for (i, s) in r.matrix_singular_values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, fmt17(*s)));
    }
    out
}

pub fn sampled_json(name: &str, m: &SampledMultiplier, lambda_at_one: f64, plancherel: (f64, f64)) -> Value {
    json!({
        "kernel": name,
        "omega": nums(&m.omegas),
        "lambda": nums(&m.lambda),
        "d_omega": num(m.d_omega),
        "dx": num(m.dx),
        "lambda_at_1": num(lambda_at_one),
        "plancherel": { "signal": num(plancherel.0), "spectrum": num(plancherel.1) },
        "aliasing_estimate": num(m.aliasing_estimate),
        "warnings": m.warnings,
    })
}

pub fn sampled_csv(m: &SampledMultiplier) -> String {
    let rows: Vec<(f64, f64)> = m.omegas.iter().copied().zip(m.lambda.iter().copied()).collect();
    pairs_csv(("omega", "lambda"), &rows)
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serialises");
    s.push('\n');
    s
}
