//! Exact text/JSON encodings of scalars, towers and matrices.
//!
//! A scalar in `Q(i)` is the string `"a/b+c/d*i"`. Deeper scalars are
//! coordinate lists tagged with the radicands of their tower:
//! `{"radicands":[2],"coords":["1/1+0/1*i","1/2+0/1*i"]}`. A radicand is a
//! JSON integer when integral, a `"p/q"` string when rational, and otherwise
//! the coordinate list over the levels below it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::linalg::{Matrix, Vector};
use crate::scalar::{Gaussian, Scalar, ScalarError, Tower};

fn perr(msg: impl Into<String>) -> ScalarError {
    ScalarError::Parse(msg.into())
}

fn coords_json(t: &Tower, s: &Scalar) -> Vec<Value> {
    let lifted = t.lift(s).expect("scalar outside the serialization tower");
    lifted
        .coords()
        .iter()
        .map(|g| Value::String(g.to_text()))
        .collect()
}

fn radicand_json(below: &Tower, r: &Scalar) -> Value {
    if let Some(q) = r.as_rational() {
        if q.denom().is_one() {
            if let Ok(n) = i64::try_from(q.numer().clone()) {
                return json!(n);
            }
        }
        return Value::String(format!("{}/{}", q.numer(), q.denom()));
    }
    Value::Array(coords_json(below, r))
}

pub fn radicands_to_json(t: &Tower) -> Value {
    Value::Array(
        t.radicands()
            .iter()
            .enumerate()
            .map(|(k, r)| radicand_json(&t.ancestor(k), r))
            .collect(),
    )
}

pub fn radicands_from_json(v: &Value) -> Result<Tower, ScalarError> {
    let arr = v
        .as_array()
        .ok_or_else(|| perr("radicands must be an array"))?;
    let mut t = Tower::base();
    for item in arr {
        let r = match item {
            Value::Number(n) => {
                let n = n
                    .as_i64()
                    .ok_or_else(|| perr("radicand must be an integer"))?;
                Scalar::from_int(n)
            }
            Value::String(s) => {
                let (a, b) = s.split_once('/').ok_or_else(|| perr("radicand p/q"))?;
                let a: BigInt = a.parse().map_err(|_| perr("radicand numerator"))?;
                let b: BigInt = b.parse().map_err(|_| perr("radicand denominator"))?;
                if b.is_zero() {
                    return Err(perr("radicand denominator is zero"));
                }
                Scalar::from_rational(BigRational::new(a, b))
            }
            Value::Array(cs) => scalar_in_tower(&t, &Value::Array(cs.clone()))?,
            _ => return Err(perr("unsupported radicand")),
        };
        t = t.adjoin_sqrt(&r)?;
    }
    Ok(t)
}

/// Entry of `s` relative to tower `t`: a string in `Q(i)`, else a coordinate list.
pub fn scalar_in_tower_json(t: &Tower, s: &Scalar) -> Value {
    let coords = coords_json(t, s);
    if t.depth() == 0 {
        coords.into_iter().next().unwrap()
    } else {
        Value::Array(coords)
    }
}

pub fn scalar_in_tower(t: &Tower, v: &Value) -> Result<Scalar, ScalarError> {
    match v {
        Value::String(s) if t.depth() == 0 => Ok(Scalar::from_gaussian(Gaussian::parse(s)?)),
        Value::Array(cs) => {
            let coords = cs
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| perr("coordinate must be a string"))
                        .and_then(Gaussian::parse)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Scalar::from_coords(t, coords)
        }
        _ => Err(perr("malformed scalar entry")),
    }
}

/// Standalone scalar: string in `Q(i)`, tagged object otherwise.
pub fn scalar_to_json(s: &Scalar) -> Value {
    if s.tower().depth() == 0 {
        return Value::String(s.coords()[0].to_text());
    }
    json!({
        "radicands": radicands_to_json(s.tower()),
        "coords": coords_json(s.tower(), s),
    })
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, ScalarError> {
    match v {
        Value::String(s) => Ok(Scalar::from_gaussian(Gaussian::parse(s)?)),
        Value::Object(o) => {
            let t = radicands_from_json(o.get("radicands").ok_or_else(|| perr("radicands"))?)?;
            scalar_in_tower(&t, o.get("coords").ok_or_else(|| perr("coords"))?)
        }
        _ => Err(perr("malformed scalar")),
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| perr(e.to_string()))?;
        scalar_from_json(&v)
    } else {
        Ok(Scalar::from_gaussian(Gaussian::parse(text)?))
    }
}

pub fn vector_in_tower_json(t: &Tower, v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| scalar_in_tower_json(t, s)).collect())
}

pub fn vector_in_tower(t: &Tower, v: &Value) -> Result<Vector, ScalarError> {
    v.as_array()
        .ok_or_else(|| perr("vector must be an array"))?
        .iter()
        .map(|x| scalar_in_tower(t, x))
        .collect()
}

/// Rows of entries relative to tower `t`.
pub fn matrix_in_tower_json(t: &Tower, m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| vector_in_tower_json(t, &m.row(r)))
            .collect(),
    )
}

pub fn matrix_in_tower(t: &Tower, v: &Value) -> Result<Matrix, ScalarError> {
    let rows = v
        .as_array()
        .ok_or_else(|| perr("matrix must be an array of rows"))?;
    let rows: Vec<Vector> = rows
        .iter()
        .map(|r| vector_in_tower(t, r))
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(perr("ragged matrix"));
    }
    Ok(Matrix::from_rows(rows))
}

/// Self-contained matrix: `{"rows","cols","radicands","entries"}`.
pub fn matrix_to_json(m: &Matrix) -> Value {
    let t = m.tower();
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "radicands": radicands_to_json(&t),
        "entries": matrix_in_tower_json(&t, m),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix, ScalarError> {
    let t = radicands_from_json(v.get("radicands").ok_or_else(|| perr("radicands"))?)?;
    let m = matrix_in_tower(&t, v.get("entries").ok_or_else(|| perr("entries"))?)?;
    let rows = v
        .get("rows")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("rows"))?;
    let cols = v
        .get("cols")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("cols"))?;
    if m.rows() as u64 != rows || (rows > 0 && m.cols() as u64 != cols) {
        return Err(perr("matrix shape does not match its entries"));
    }
    if rows == 0 {
        return Ok(Matrix::zeros(0, cols as usize));
    }
    Ok(m)
}
