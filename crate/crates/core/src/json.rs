//! JSON interchange for weighted complexes. Rationals are written as `"p/q"`
//! strings (`"p"` for integers); weights are JSON numbers when they fit in
//! 53 bits and strings otherwise.

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{QVector, Q, Z};
use crate::polyhedra::{Cell, WeightedComplex};

const SAFE: i64 = 1 << 53;

pub fn rational_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: Z = a.trim().parse().map_err(|_| bad())?;
            let b: Z = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn integer_to_json(z: &Z) -> Value {
    match z.to_i64() {
        Some(v) if v.abs() < SAFE => json!(v),
        _ => json!(z.to_string()),
    }
}

fn integer_from_json(v: &Value) -> Result<Z> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Z::from)
            .ok_or_else(|| Error::Format(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Format(format!("not an integer: {s:?}"))),
        other => Err(Error::Format(format!("not an integer: {other}"))),
    }
}

fn rational_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(Q::from_integer(integer_from_json(v)?)),
        other => Err(Error::Format(format!("not a rational: {other}"))),
    }
}

pub fn vector_to_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| json!(rational_to_string(x))).collect())
}

fn vectors_to_json(vs: &[QVector]) -> Value {
    Value::Array(vs.iter().map(|v| vector_to_json(&v.0)).collect())
}

fn vectors_from_json(v: &Value) -> Result<Vec<QVector>> {
    array(v)?
        .iter()
        .map(|row| Ok(QVector(array(row)?.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?)))
        .collect()
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Format(format!("expected an array, found {v}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Format(format!("missing field {key:?}")))
}

fn index(v: &Value) -> Result<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| Error::Format(format!("not an index: {v}")))
}

pub fn complex_to_json(x: &WeightedComplex) -> Value {
    let cells: Vec<Value> = x
        .cells
        .iter()
        .map(|c| {
            json!({
                "vertices": vectors_to_json(&c.vertices),
                "rays": vectors_to_json(&c.rays),
                "lineality": vectors_to_json(&c.lineality),
            })
        })
        .collect();
    json!({
        "ambient_dim": x.ambient_dim,
        "dim": x.dim,
        "lattice_basis": Value::Array(x.lattice_basis.iter().map(|b| vector_to_json(b)).collect()),
        "cells": cells,
        "maximal": x.maximal,
        "weights": Value::Array(x.weights.iter().map(integer_to_json).collect()),
        "faces": Value::Array(x.faces.iter().map(|(c, p)| json!([c, p])).collect()),
    })
}

/// Deterministic pretty-printed JSON (keys in sorted order).
pub fn complex_to_string(x: &WeightedComplex) -> String {
    let mut s = serde_json::to_string_pretty(&complex_to_json(x)).expect("serializable");
    s.push('\n');
    s
}

pub fn complex_from_json(v: &Value) -> Result<WeightedComplex> {
    let obj = v.as_object().ok_or_else(|| Error::Format("complex must be a JSON object".into()))?;
    let ambient_dim = index(field(obj, "ambient_dim")?)?;
    let cells: Vec<Cell> = array(field(obj, "cells")?)?
        .iter()
        .map(|c| {
            let c = c.as_object().ok_or_else(|| Error::Format("cell must be an object".into()))?;
            Cell::new(
                vectors_from_json(field(c, "vertices")?)?,
                vectors_from_json(field(c, "rays")?)?,
                vectors_from_json(field(c, "lineality")?)?,
            )
        })
        .collect::<Result<_>>()?;
    if cells.iter().any(|c| c.ambient_dim() != ambient_dim) {
        return Err(Error::Format("cell dimension differs from ambient_dim".into()));
    }
    let maximal: Vec<usize> = array(field(obj, "maximal")?)?.iter().map(index).collect::<Result<_>>()?;
    let weights: Vec<Z> = array(field(obj, "weights")?)?.iter().map(integer_from_json).collect::<Result<_>>()?;
    if maximal.len() != weights.len() || maximal.iter().any(|&i| i >= cells.len()) {
        return Err(Error::Format("maximal cells and weights do not match".into()));
    }
    let faces: Vec<(usize, usize)> = array(field(obj, "faces")?)?
        .iter()
        .map(|f| {
            let f = array(f)?;
            if f.len() != 2 {
                return Err(Error::Format("face record must be a pair".into()));
            }
            Ok((index(&f[0])?, index(&f[1])?))
        })
        .collect::<Result<_>>()?;
    if faces.iter().any(|&(c, p)| c >= cells.len() || p >= cells.len()) {
        return Err(Error::Format("face record out of range".into()));
    }
    let dim = match obj.get("dim") {
        Some(d) => index(d)?,
        None => maximal.first().map_or(0, |&i| cells[i].dim()),
    };
    let lattice_basis = match obj.get("lattice_basis") {
        Some(b) => vectors_from_json(b)?.into_iter().map(|v| v.0).collect(),
        None => Vec::new(),
    };
    Ok(WeightedComplex { ambient_dim, dim, lattice_basis, cells, maximal, weights, faces })
}

pub fn complex_from_str(s: &str) -> Result<WeightedComplex> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    complex_from_json(&v)
}
