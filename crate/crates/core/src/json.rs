//! JSON exchange formats for matrices, polynomials, witnesses and tables.
//!
//! Matrix: `{"field":"F2","n":3,"entries":[[..],[..],[..]]}` with integer entries over prime
//! fields and `"a/b"` strings over Q. Polynomial: coefficient list, lowest degree first.

use serde_json::{json, Value};

use crate::algebra::{FactorHint, Field, Poly, Scalar};
use crate::decompose::{DecompKind, DecompWitness};
use crate::error::{Error, Result};
use crate::kaplansky::KaplanskyTable;
use crate::linalg::{elementary_divisors_with_hint, frobenius, Mat};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Mod { v, .. } => json!(v),
        Scalar::Rat(_) => json!(x.to_string()),
    }
}

pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => field.parse_scalar(&n.to_string()),
        Value::String(s) => field.parse_scalar(s),
        _ => Err(perr(format!("expected a scalar, found {v}"))),
    }
}

pub fn matrix_to_json(m: &Mat) -> Value {
    let entries: Vec<Vec<Value>> = m.to_rows().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect();
    json!({"field": m.field().to_string(), "n": m.rows(), "entries": entries})
}

pub fn matrix_from_json(v: &Value) -> Result<Mat> {
    matrix_from_json_in(v, None)
}

/// Like [`matrix_from_json`]; `field` fills in a missing `"field"` and must agree with a present one.
pub fn matrix_from_json_in(v: &Value, field: Option<Field>) -> Result<Mat> {
    let stated: Option<Field> = v.get("field").and_then(Value::as_str).map(str::parse).transpose()?;
    let field = match (stated, field) {
        (Some(a), Some(b)) if a != b => return Err(perr(format!("matrix is over {a}, expected {b}"))),
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(perr("matrix needs \"field\"")),
    };
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| perr("matrix needs \"entries\""))?;
    let n = match v.get("n") {
        Some(x) => x.as_u64().ok_or_else(|| perr("\"n\" must be a non-negative integer"))? as usize,
        None => rows.len(),
    };
    if rows.len() != n {
        return Err(perr(format!("expected {n} rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| perr(format!("row {i} is not an array")))?;
        if r.len() != n {
            return Err(perr(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        out.push(r.iter().map(|x| scalar_from_json(field, x)).collect::<Result<Vec<_>>>()?);
    }
    if n == 0 {
        return Ok(Mat::zeros(field, 0, 0));
    }
    Mat::from_rows(field, out)
}

pub fn matrix_from_str(s: &str) -> Result<Mat> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr(e.to_string()))?;
    matrix_from_json(&v)
}

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn poly_from_json(field: Field, v: &Value) -> Result<Poly> {
    let cs = v.as_array().ok_or_else(|| perr(format!("expected a coefficient list, found {v}")))?;
    let cs = cs.iter().map(|x| scalar_from_json(field, x)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(field, cs))
}

/// Parses `[1, 0, 1]` (= t^2 + 1).
pub fn poly_from_text(field: Field, s: &str) -> Result<Poly> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr(format!("bad polynomial {s:?}: {e}")))?;
    poly_from_json(field, &v)
}

pub fn witness_to_json(w: &DecompWitness) -> Value {
    json!({
        "kind": w.kind.short_name(),
        "first": matrix_to_json(&w.first),
        "second": matrix_to_json(&w.second),
        "verified": w.verified,
    })
}

/// Reads a witness; the stored `verified` flag is kept as given, call `check` to recompute it.
pub fn witness_from_json(v: &Value) -> Result<DecompWitness> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| perr("witness needs \"kind\""))?;
    let kind = DecompKind::from_short(kind).ok_or_else(|| perr(format!("unknown kind {kind:?}")))?;
    let first = matrix_from_json(v.get("first").ok_or_else(|| perr("witness needs \"first\""))?)?;
    let second = matrix_from_json(v.get("second").ok_or_else(|| perr("witness needs \"second\""))?)?;
    let verified = v.get("verified").and_then(Value::as_bool).unwrap_or(false);
    Ok(DecompWitness { kind, first, second, verified })
}

pub fn kaplansky_to_json(t: &KaplanskyTable) -> Value {
    json!({"p": poly_to_json(&t.p), "kappa": t.kappa, "kappa_inf": t.kappa_inf})
}

/// A hint is a list of coefficient lists.
pub fn hint_from_text(field: Field, s: &str) -> Result<FactorHint> {
    let v: Value = serde_json::from_str(s).map_err(|e| perr(format!("bad hint {s:?}: {e}")))?;
    let ps = v.as_array().ok_or_else(|| perr("a hint is a list of polynomials"))?;
    Ok(FactorHint(ps.iter().map(|p| poly_from_json(field, p)).collect::<Result<_>>()?))
}

/// Invariant factors, Frobenius form with its transform, and elementary divisors when the
/// factorization is available.
pub fn canonical_to_json(a: &Mat, hint: &FactorHint) -> Result<Value> {
    let fr = frobenius(a)?;
    let eds = match elementary_divisors_with_hint(a, hint) {
        Ok(e) => Value::Array(e.iter().map(|(p, k)| json!({"p": poly_to_json(p), "exponent": k})).collect()),
        Err(Error::FactorizationUnavailable(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "field": a.field().to_string(),
        "n": a.rows(),
        "invariant_factors": fr.factors.iter().map(poly_to_json).collect::<Vec<_>>(),
        "elementary_divisors": eds,
        "frobenius": matrix_to_json(&fr.canonical(a.field())),
        "transform": matrix_to_json(&fr.transform),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::squarezero_pair;

    #[test]
    fn matrix_round_trip() {
        let q = Field::Q;
        let m = Mat::from_rows(q, vec![vec![q.ratio(1, 2).unwrap(), q.int(-3)], vec![q.zero(), q.one()]]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v["entries"][0][0], json!("1/2"));
        assert_eq!(matrix_from_json(&v).unwrap(), m);
        let f2 = matrix_from_str(r#"{"field":"F2","n":2,"entries":[[1,3],[0,-1]]}"#).unwrap();
        assert_eq!(f2, Mat::from_ints(Field::Prime(2), &[&[1, 1], &[0, 1]]));
        assert!(matrix_from_str(r#"{"field":"F2","n":2,"entries":[[1,0]]}"#).is_err());
        assert!(matrix_from_str(r#"{"field":"F4","n":1,"entries":[[1]]}"#).is_err());
        assert_eq!(matrix_from_str(r#"{"field":"Q","n":0,"entries":[]}"#).unwrap().rows(), 0);
        let bare: Value = serde_json::from_str(r#"{"n":1,"entries":[[4]]}"#).unwrap();
        assert_eq!(matrix_from_json_in(&bare, Some(Field::Prime(3))).unwrap(), Mat::identity(Field::Prime(3), 1));
        assert!(matrix_from_json_in(&v, Some(Field::Prime(3))).is_err());
    }

    #[test]
    fn poly_text() {
        let p = poly_from_text(Field::Q, "[1, 0, 1]").unwrap();
        assert_eq!(p, Poly::from_ints(Field::Q, &[1, 0, 1]));
        assert_eq!(poly_from_text(Field::Q, r#"["-1/2", 1]"#).unwrap().to_string(), Poly::linear(Field::Q.ratio(-1, 2).unwrap()).to_string());
        assert_eq!(poly_to_json(&p), json!(["1", "0", "1"]));
    }

    #[test]
    fn canonical_data() {
        let a = Mat::from_ints(Field::Q, &[&[0, 1], &[1, 0]]);
        let c = canonical_to_json(&a, &FactorHint::none()).unwrap();
        assert_eq!(c["invariant_factors"], json!([["-1", "0", "1"]]));
        assert_eq!(c["elementary_divisors"].as_array().unwrap().len(), 2);
        let h = hint_from_text(Field::Q, "[[1,1,1,1,1,1,1]]").unwrap();
        assert_eq!(h.0.len(), 1);
    }

    #[test]
    fn witness_round_trip() {
        let u = Mat::jordan(&Field::Prime(3).zero(), 3);
        let w = squarezero_pair(&u).unwrap();
        let back = witness_from_json(&witness_to_json(&w)).unwrap();
        assert_eq!(back, w);
        assert!(back.check(&u));
    }
}
