//! Wire format for series and equation specs. One JSON object per spec,
//! discriminated by "type"; rationals travel as "p/q" strings, floats as
//! JSON numbers, complex values as [re, im] pairs.

use std::collections::BTreeMap;
use std::io::Read;

use serde_json::Value;

use divsum_core::{FiniteDynSys, Mode, Poly, QuasiExpSeries, SampledSeries, Scalar, TrigPoly};

pub enum ParsedSpec {
    Samples(SampledSeries),
    Quasi(QuasiExpSeries),
    Trig { theta: TrigPoly, q: u64 },
    FinDyn(FiniteDynSys),
}

pub enum LoadError {
    Io(String),
    Schema(String),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Schema(msg.into()))
}

/// Reads a spec from a file path, or from stdin when the path is "-".
pub fn load(path: &str) -> Result<ParsedSpec, LoadError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| LoadError::Io(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("reading {path}: {e}")))?
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return schema(format!("invalid JSON: {e}")),
    };
    parse_spec(&value)
}

fn parse_spec(v: &Value) -> Result<ParsedSpec, LoadError> {
    let obj = match v.as_object() {
        Some(o) => o,
        None => return schema("spec must be a JSON object"),
    };
    let ty = match obj.get("type").and_then(Value::as_str) {
        Some(t) => t,
        None => return schema("spec needs a string \"type\" field"),
    };
    match ty {
        "samples" => {
            let values = require_array(obj.get("values"), "values")?;
            let mut out = Vec::with_capacity(values.len());
            for (i, item) in values.iter().enumerate() {
                out.push(scalar_from(item).map_err(|e| field_err("values", i, e))?);
            }
            if out.is_empty() {
                return schema("\"values\" must be nonempty");
            }
            Ok(ParsedSpec::Samples(SampledSeries::new(out)))
        }
        "quasiexp" => {
            let head = match obj.get("head") {
                None => Vec::new(),
                Some(h) => {
                    let arr = require_array(Some(h), "head")?;
                    let mut out = Vec::with_capacity(arr.len());
                    for (i, item) in arr.iter().enumerate() {
                        out.push(scalar_from(item).map_err(|e| field_err("head", i, e))?);
                    }
                    out
                }
            };
            let mut modes = Vec::new();
            if let Some(ms) = obj.get("modes") {
                let arr = require_array(Some(ms), "modes")?;
                for (i, item) in arr.iter().enumerate() {
                    let mo = match item.as_object() {
                        Some(m) => m,
                        None => return schema(format!("modes[{i}] must be an object")),
                    };
                    let lambda = match mo.get("lambda") {
                        Some(l) => scalar_from(l).map_err(|e| field_err("modes", i, e))?,
                        None => return schema(format!("modes[{i}] needs \"lambda\"")),
                    };
                    let pi_arr = require_array(mo.get("pi"), "pi")?;
                    let mut pi = Vec::with_capacity(pi_arr.len());
                    for (j, c) in pi_arr.iter().enumerate() {
                        pi.push(scalar_from(c).map_err(|e| field_err("pi", j, e))?);
                    }
                    modes.push(Mode {
                        lambda,
                        pi: Poly::new(pi),
                    });
                }
            }
            Ok(ParsedSpec::Quasi(QuasiExpSeries::new(head, modes)))
        }
        "trigpoly" => {
            let q = match obj.get("q").and_then(Value::as_u64) {
                Some(q) => q,
                None => return schema("trigpoly needs an integer \"q\""),
            };
            let c0 = match obj.get("c0") {
                Some(c) => scalar_from(c).map_err(LoadError::Schema)?,
                None => Scalar::zero(),
            };
            let mut terms: BTreeMap<u64, (Scalar, Scalar)> = BTreeMap::new();
            for (key, kind) in [("cos", 0usize), ("sin", 1usize)] {
                let Some(map) = obj.get(key) else { continue };
                let mo = match map.as_object() {
                    Some(m) => m,
                    None => return schema(format!("\"{key}\" must be an object")),
                };
                for (freq_s, coeff_v) in mo {
                    let freq: u64 = match freq_s.parse() {
                        Ok(f) => f,
                        Err(_) => {
                            return schema(format!("{key} key {freq_s:?} is not a frequency"))
                        }
                    };
                    let coeff = scalar_from(coeff_v).map_err(LoadError::Schema)?;
                    let e = terms
                        .entry(freq)
                        .or_insert((Scalar::zero(), Scalar::zero()));
                    if kind == 0 {
                        e.0 = &e.0 + &coeff;
                    } else {
                        e.1 = &e.1 + &coeff;
                    }
                }
            }
            Ok(ParsedSpec::Trig {
                theta: TrigPoly::new(c0, terms),
                q,
            })
        }
        "findyn" => {
            let f_arr = require_array(obj.get("f"), "f")?;
            let mut f = Vec::with_capacity(f_arr.len());
            for (i, item) in f_arr.iter().enumerate() {
                match item.as_u64() {
                    Some(v) => f.push(v as usize),
                    None => return schema(format!("f[{i}] must be a nonnegative integer")),
                }
            }
            let xi_arr = require_array(obj.get("xi0"), "xi0")?;
            let mut xi0 = Vec::with_capacity(xi_arr.len());
            for (i, item) in xi_arr.iter().enumerate() {
                xi0.push(scalar_from(item).map_err(|e| field_err("xi0", i, e))?);
            }
            match FiniteDynSys::new(f, xi0) {
                Ok(sys) => Ok(ParsedSpec::FinDyn(sys)),
                Err(e) => schema(e.to_string()),
            }
        }
        other => schema(format!(
            "unknown spec type {other:?}; expected samples, quasiexp, trigpoly or findyn"
        )),
    }
}

fn require_array<'v>(v: Option<&'v Value>, name: &str) -> Result<&'v Vec<Value>, LoadError> {
    match v.and_then(Value::as_array) {
        Some(a) => Ok(a),
        None => Err(LoadError::Schema(format!("\"{name}\" must be an array"))),
    }
}

fn field_err(name: &str, index: usize, detail: String) -> LoadError {
    LoadError::Schema(format!("{name}[{index}]: {detail}"))
}

/// A real scalar: integer (exact), float (inexact), or "p/q" string (exact).
fn real_from(v: &Value) -> Result<Scalar, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_int(i))
            } else if let Some(x) = n.as_f64() {
                Ok(Scalar::from_f64(x))
            } else {
                Err(format!("number {n} out of range"))
            }
        }
        Value::String(s) => Scalar::parse_rational(s).map_err(|e| e.to_string()),
        other => Err(format!("expected number or \"p/q\" string, got {other}")),
    }
}

/// A scalar: real as above, or a complex [re, im] pair.
pub fn scalar_from(v: &Value) -> Result<Scalar, String> {
    if let Value::Array(pair) = v {
        if pair.len() != 2 {
            return Err(format!(
                "complex value needs [re, im], got {} entries",
                pair.len()
            ));
        }
        let re = real_from(&pair[0])?;
        let im = real_from(&pair[1])?;
        return Ok(&re + &(&im * &Scalar::i()));
    }
    real_from(v)
}
