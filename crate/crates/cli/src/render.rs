//! JSON rendering helpers. Exact values carry their rational string next to
//! a fixed-width float form; floats always render with 17 significant
//! digits so output is byte-identical across runs.

use serde_json::{json, Value};

use divsum_core::{L2Norm, Poly, Scalar, SumValue, TrigPoly};

pub fn f64_str(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn scalar_value(s: &Scalar) -> Value {
    let z = s.to_complex64();
    let mut obj = serde_json::Map::new();
    if s.is_exact() {
        obj.insert("exact".into(), Value::String(s.to_string()));
    }
    obj.insert("re".into(), Value::String(f64_str(z.re)));
    obj.insert("im".into(), Value::String(f64_str(z.im)));
    Value::Object(obj)
}

pub fn poly_value(p: &Poly, var: &str) -> Value {
    json!({
        "display": p.display(var),
        "coeffs": p.coeffs().iter().map(scalar_value).collect::<Vec<_>>(),
    })
}

pub fn sum_value(v: &SumValue) -> Value {
    json!({
        "method": v.method.name(),
        "exact": v.exact,
        "value": scalar_value(&v.value),
    })
}

pub fn trig_value(t: &TrigPoly) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .iter()
        .map(|(freq, (a, b))| {
            json!({
                "freq": freq,
                "cos": scalar_value(a),
                "sin": scalar_value(b),
            })
        })
        .collect();
    json!({
        "display": t.to_string(),
        "mean": scalar_value(t.mean()),
        "terms": terms,
    })
}

pub fn norm_row_value(row: &L2Norm) -> Value {
    json!({
        "n": row.n,
        "exact_sqr": scalar_value(&row.exact_sqr),
        "exact_norm": f64_str(row.exact()),
        "numeric_norm": f64_str(row.numeric()),
    })
}
