//! The JSON input schema for representation descriptors.
//!
//! A descriptor is one of
//!
//! ```json
//! {"type": "matrices", "cyclotomic_order": 12, "S": [[entry]], "T": [[entry]]}
//! {"type": "character", "a": 5}
//! {"type": "permutation", "degree": 7, "S": [[1,4],[2,7],[3,5]],
//!  "T": [[1,7,2,5,6],[3,4]], "subtract_trivial": true}
//! {"type": "direct_sum", "parts": [descriptor, ...]}
//! {"type": "tensor_character", "a": 3, "of": descriptor}
//! {"type": "dual", "of": descriptor}
//! ```
//!
//! where an entry is a rational string `"p/q"` or `{"coeffs": ["p/q", ...]}`
//! listing coefficients of powers of zeta_N. The top level may also carry a
//! `"T_spectrum"` override (a list of `{"rotation": "m/n", "block": b,
//! "parity": "+"|"-", "mult": m}`) and an `"assert"` block
//! (`{"good": bool, "positive": bool, "unitarizable": bool, "y": n}`).
//!
//! Validation is schema-first: unknown fields are rejected, and every error
//! carries the JSON pointer of the offending value.

use serde_json::Value;
use thiserror::Error;

use crate::exact::{parse_rational, rational_frac, rational_to_i64, CycMatrix, Cyclotomic, Rational};
use crate::exponents::{Parity, SpectrumEntry, TSpectrum};
use crate::forms::Assertions;
use crate::rep::{RepError, Repn};

#[derive(Debug, Clone, Error)]
#[error("at {pointer}: {message}")]
pub struct DescriptorError {
    pub pointer: String,
    pub message: String,
}

fn err<T>(pointer: &str, message: impl Into<String>) -> Result<T, DescriptorError> {
    Err(DescriptorError {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    })
}

/// A fully validated descriptor: the representation, an optional spectrum
/// override, and the recorded assertions.
#[derive(Debug, Clone)]
pub struct ParsedDescriptor {
    pub rep: Repn,
    pub spectrum_override: Option<TSpectrum>,
    pub assertions: Assertions,
    /// True when the top-level descriptor is a permutation action without
    /// virtual subtraction (the shape `subgroup` expects).
    pub is_plain_permutation: bool,
}

pub fn parse_descriptor(input: &str) -> Result<ParsedDescriptor, DescriptorError> {
    let value: Value = serde_json::from_str(input)
        .map_err(|e| DescriptorError {
            pointer: "/".into(),
            message: format!("invalid JSON: {}", e),
        })?;
    let obj = as_object(&value, "")?;
    let mut spectrum_override = None;
    let mut assertions = Assertions::default();
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "type"
                | "cyclotomic_order"
                | "S"
                | "T"
                | "a"
                | "degree"
                | "subtract_trivial"
                | "parts"
                | "of"
                | "T_spectrum"
                | "assert"
        ) {
            return err(&format!("/{}", key), "unknown field");
        }
    }
    if let Some(spec) = obj.get("T_spectrum") {
        spectrum_override = Some(parse_spectrum(spec, "/T_spectrum")?);
    }
    if let Some(a) = obj.get("assert") {
        assertions = parse_assertions(a, "/assert")?;
    }
    let rep = build_rep(&value, "", true)?;
    let is_plain_permutation = obj.get("type").and_then(Value::as_str) == Some("permutation")
        && rep.subtracted().is_empty();
    Ok(ParsedDescriptor {
        rep,
        spectrum_override,
        assertions,
        is_plain_permutation,
    })
}

fn as_object<'v>(
    value: &'v Value,
    pointer: &str,
) -> Result<&'v serde_json::Map<String, Value>, DescriptorError> {
    value
        .as_object()
        .ok_or_else(|| DescriptorError {
            pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
            message: "expected an object".into(),
        })
}

fn check_keys(
    obj: &serde_json::Map<String, Value>,
    pointer: &str,
    allowed: &[&str],
) -> Result<(), DescriptorError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return err(&format!("{}/{}", pointer, key), "unknown field");
        }
    }
    Ok(())
}

fn get<'v>(
    obj: &'v serde_json::Map<String, Value>,
    pointer: &str,
    key: &str,
) -> Result<&'v Value, DescriptorError> {
    obj.get(key)
        .ok_or_else(|| DescriptorError {
            pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
            message: format!("missing required field `{}`", key),
        })
}

fn as_u64(value: &Value, pointer: &str) -> Result<u64, DescriptorError> {
    value
        .as_u64()
        .ok_or_else(|| DescriptorError {
            pointer: pointer.into(),
            message: "expected a nonnegative integer".into(),
        })
}

fn as_i64(value: &Value, pointer: &str) -> Result<i64, DescriptorError> {
    value.as_i64().ok_or_else(|| DescriptorError {
        pointer: pointer.into(),
        message: "expected an integer".into(),
    })
}

fn as_bool(value: &Value, pointer: &str) -> Result<bool, DescriptorError> {
    value.as_bool().ok_or_else(|| DescriptorError {
        pointer: pointer.into(),
        message: "expected a boolean".into(),
    })
}

fn rep_error(pointer: &str, e: RepError) -> DescriptorError {
    DescriptorError {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: e.to_string(),
    }
}

fn build_rep(value: &Value, pointer: &str, top: bool) -> Result<Repn, DescriptorError> {
    let obj = as_object(value, pointer)?;
    let kind = get(obj, pointer, "type")?
        .as_str()
        .ok_or_else(|| DescriptorError {
            pointer: format!("{}/type", pointer),
            message: "expected a string".into(),
        })?;
    let extra: &[&str] = if top { &["T_spectrum", "assert"] } else { &[] };
    let allowed = |base: &'static [&'static str]| -> Vec<&'static str> {
        base.iter().chain(extra.iter()).copied().collect()
    };
    match kind {
        "matrices" => {
            check_keys(obj, pointer, &allowed(&["type", "cyclotomic_order", "S", "T"]))?;
            let order = as_u64(
                get(obj, pointer, "cyclotomic_order")?,
                &format!("{}/cyclotomic_order", pointer),
            )?;
            if order == 0 || order > 10_000 {
                return err(
                    &format!("{}/cyclotomic_order", pointer),
                    "order must be between 1 and 10000",
                );
            }
            let s = parse_matrix(
                get(obj, pointer, "S")?,
                &format!("{}/S", pointer),
                order as u32,
            )?;
            let t = parse_matrix(
                get(obj, pointer, "T")?,
                &format!("{}/T", pointer),
                order as u32,
            )?;
            Repn::from_matrices(s, t).map_err(|e| rep_error(pointer, e))
        }
        "character" => {
            check_keys(obj, pointer, &allowed(&["type", "a"]))?;
            let a = as_i64(get(obj, pointer, "a")?, &format!("{}/a", pointer))?;
            if !(0..=11).contains(&a) {
                return err(&format!("{}/a", pointer), "character exponent must be 0..=11");
            }
            Ok(Repn::character(a))
        }
        "permutation" => {
            check_keys(
                obj,
                pointer,
                &allowed(&["type", "degree", "S", "T", "subtract_trivial"]),
            )?;
            let degree = as_u64(get(obj, pointer, "degree")?, &format!("{}/degree", pointer))?;
            if degree == 0 || degree > 5000 {
                return err(&format!("{}/degree", pointer), "degree must be 1..=5000");
            }
            let s = parse_cycles(get(obj, pointer, "S")?, &format!("{}/S", pointer))?;
            let t = parse_cycles(get(obj, pointer, "T")?, &format!("{}/T", pointer))?;
            let subtract = match obj.get("subtract_trivial") {
                Some(v) => as_bool(v, &format!("{}/subtract_trivial", pointer))?,
                None => false,
            };
            Repn::from_permutations(degree as usize, &s, &t, subtract)
                .map_err(|e| rep_error(pointer, e))
        }
        "direct_sum" => {
            check_keys(obj, pointer, &allowed(&["type", "parts"]))?;
            let parts = get(obj, pointer, "parts")?
                .as_array()
                .ok_or_else(|| DescriptorError {
                    pointer: format!("{}/parts", pointer),
                    message: "expected an array".into(),
                })?;
            if parts.is_empty() {
                return err(&format!("{}/parts", pointer), "direct sum needs at least one part");
            }
            let mut rep: Option<Repn> = None;
            for (i, part) in parts.iter().enumerate() {
                let sub = build_rep(part, &format!("{}/parts/{}", pointer, i), false)?;
                rep = Some(match rep {
                    None => sub,
                    Some(acc) => acc
                        .direct_sum(&sub)
                        .map_err(|e| rep_error(&format!("{}/parts/{}", pointer, i), e))?,
                });
            }
            Ok(rep.expect("nonempty parts"))
        }
        "tensor_character" => {
            check_keys(obj, pointer, &allowed(&["type", "a", "of"]))?;
            let a = as_i64(get(obj, pointer, "a")?, &format!("{}/a", pointer))?;
            let inner = build_rep(get(obj, pointer, "of")?, &format!("{}/of", pointer), false)?;
            inner.tensor_char(a).map_err(|e| rep_error(pointer, e))
        }
        "dual" => {
            check_keys(obj, pointer, &allowed(&["type", "of"]))?;
            let inner = build_rep(get(obj, pointer, "of")?, &format!("{}/of", pointer), false)?;
            inner.dual().map_err(|e| rep_error(pointer, e))
        }
        other => err(
            &format!("{}/type", pointer),
            format!("unknown descriptor type `{}`", other),
        ),
    }
}

fn parse_matrix(value: &Value, pointer: &str, order: u32) -> Result<CycMatrix, DescriptorError> {
    let rows = value.as_array().ok_or_else(|| DescriptorError {
        pointer: pointer.into(),
        message: "expected an array of rows".into(),
    })?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| DescriptorError {
            pointer: format!("{}/{}", pointer, i),
            message: "expected an array of entries".into(),
        })?;
        let mut entries = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            entries.push(parse_entry(entry, &format!("{}/{}/{}", pointer, i, j), order)?);
        }
        out.push(entries);
    }
    CycMatrix::from_rows(out).map_err(|e| DescriptorError {
        pointer: pointer.into(),
        message: e.to_string(),
    })
}

fn parse_entry(value: &Value, pointer: &str, order: u32) -> Result<Cyclotomic, DescriptorError> {
    match value {
        Value::String(s) => {
            let r = parse_rational(s).map_err(|e| DescriptorError {
                pointer: pointer.into(),
                message: e.to_string(),
            })?;
            Ok(Cyclotomic::from_rational(r))
        }
        Value::Object(obj) => {
            check_keys(obj, pointer, &["coeffs"])?;
            let coeffs = get(obj, pointer, "coeffs")?
                .as_array()
                .ok_or_else(|| DescriptorError {
                    pointer: format!("{}/coeffs", pointer),
                    message: "expected an array of rational strings".into(),
                })?;
            let phi = crate::exact::euler_phi(order) as usize;
            if coeffs.len() > phi {
                return err(
                    &format!("{}/coeffs", pointer),
                    format!("at most phi({}) = {} coefficients allowed", order, phi),
                );
            }
            let mut parsed = Vec::with_capacity(coeffs.len());
            for (i, c) in coeffs.iter().enumerate() {
                let s = c.as_str().ok_or_else(|| DescriptorError {
                    pointer: format!("{}/coeffs/{}", pointer, i),
                    message: "expected a rational string".into(),
                })?;
                parsed.push(parse_rational(s).map_err(|e| DescriptorError {
                    pointer: format!("{}/coeffs/{}", pointer, i),
                    message: e.to_string(),
                })?);
            }
            if parsed.is_empty() {
                parsed.push(Rational::from_integer(0.into()));
            }
            Ok(Cyclotomic::from_poly(order, parsed))
        }
        _ => err(pointer, "expected a rational string or {\"coeffs\": [...]}"),
    }
}

fn parse_cycles(value: &Value, pointer: &str) -> Result<Vec<Vec<usize>>, DescriptorError> {
    let cycles = value.as_array().ok_or_else(|| DescriptorError {
        pointer: pointer.into(),
        message: "expected an array of cycles".into(),
    })?;
    let mut out = Vec::with_capacity(cycles.len());
    for (i, cycle) in cycles.iter().enumerate() {
        let cycle = cycle.as_array().ok_or_else(|| DescriptorError {
            pointer: format!("{}/{}", pointer, i),
            message: "expected an array of points".into(),
        })?;
        let mut points = Vec::with_capacity(cycle.len());
        for (j, p) in cycle.iter().enumerate() {
            let p = as_u64(p, &format!("{}/{}/{}", pointer, i, j))?;
            points.push(p as usize);
        }
        out.push(points);
    }
    Ok(out)
}

fn parse_spectrum(value: &Value, pointer: &str) -> Result<TSpectrum, DescriptorError> {
    let entries_json = value.as_array().ok_or_else(|| DescriptorError {
        pointer: pointer.into(),
        message: "expected an array of spectrum entries".into(),
    })?;
    let mut entries = Vec::with_capacity(entries_json.len());
    let mut order = 1u32;
    for (i, e) in entries_json.iter().enumerate() {
        let p = format!("{}/{}", pointer, i);
        let obj = as_object(e, &p)?;
        check_keys(obj, &p, &["rotation", "block", "parity", "mult"])?;
        let rotation_str = get(obj, &p, "rotation")?
            .as_str()
            .ok_or_else(|| DescriptorError {
                pointer: format!("{}/rotation", p),
                message: "expected a rational string".into(),
            })?;
        let rotation = parse_rational(rotation_str).map_err(|e| DescriptorError {
            pointer: format!("{}/rotation", p),
            message: e.to_string(),
        })?;
        if rational_frac(&rotation) != rotation {
            return err(&format!("{}/rotation", p), "rotation must lie in [0, 1)");
        }
        let denom = rational_to_i64(&Rational::from_integer(rotation.denom().clone()))
            .filter(|&d| d > 0 && d <= 100_000)
            .ok_or_else(|| DescriptorError {
                pointer: format!("{}/rotation", p),
                message: "rotation denominator out of range".into(),
            })?;
        order = num_integer::lcm(order, denom as u32);
        let block = as_u64(get(obj, &p, "block")?, &format!("{}/block", p))? as usize;
        let mult = as_u64(get(obj, &p, "mult")?, &format!("{}/mult", p))? as usize;
        if block == 0 || mult == 0 {
            return err(&p, "block and mult must be positive");
        }
        let parity = match get(obj, &p, "parity")?.as_str() {
            Some("+") | Some("even") => Parity::Even,
            Some("-") | Some("\u{2212}") | Some("odd") => Parity::Odd,
            _ => return err(&format!("{}/parity", p), "expected \"+\" or \"-\""),
        };
        entries.push(SpectrumEntry {
            rotation,
            block,
            parity,
            mult,
        });
    }
    Ok(TSpectrum { order, entries })
}

fn parse_assertions(value: &Value, pointer: &str) -> Result<Assertions, DescriptorError> {
    let obj = as_object(value, pointer)?;
    check_keys(obj, pointer, &["good", "positive", "unitarizable", "y"])?;
    let mut out = Assertions::default();
    if let Some(v) = obj.get("good") {
        out.good = as_bool(v, &format!("{}/good", pointer))?;
    }
    if let Some(v) = obj.get("positive") {
        out.positive = as_bool(v, &format!("{}/positive", pointer))?;
    }
    if let Some(v) = obj.get("unitarizable") {
        out.unitarizable = as_bool(v, &format!("{}/unitarizable", pointer))?;
    }
    if let Some(v) = obj.get("y") {
        out.y_override = Some(as_u64(v, &format!("{}/y", pointer))? as usize);
    }
    Ok(out)
}
