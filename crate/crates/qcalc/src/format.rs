//! JSON interchange for operators and spectra, and the text grammar for the
//! functions accepted by the command-line tools.
//!
//! Matrix files are JSON objects
//!
//! ```text
//! { "kind": "real" | "complex" | "quaternion", "n": 2, "entries": [[...], [...]] }
//! ```
//!
//! where `entries` holds `n` rows of `n` entries each: plain numbers for
//! `real`, `[re, im]` pairs for `complex`, and `[x0, x1, x2, x3]` coordinate
//! arrays for `quaternion`. Serialization uses the shortest round-tripping
//! decimal representation, so a written matrix re-parses to bit-identical
//! values.
//!
//! Scalar functions are written as `+`-separated sums of the atoms `exp`,
//! `sin`, `cos`, `res:a` (the resolvent `ζ ↦ (z − a)⁻¹` with a real pole),
//! and `poly:[c0,c1,...]` whose coefficients are real numbers or quaternion
//! coordinate arrays. Two-variable functions are `+`-separated sums of
//! `*`-separated products of `exp1`, `exp2`, and `poly2:[[...],...]` with a
//! real coefficient grid (row index = power of the first variable).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::Quaternion;
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::linop::{ComplexOperator, QOperator, RealOperator};
use crate::pairs::PairFunction;
use crate::spectra::{ComplexSpectrum, QSpectrumSet};
use crate::stem::{Coefficient, StemFunction};

/// A parsed operator file: the matrix together with its declared kind.
#[derive(Debug, Clone)]
pub enum OperatorPayload {
    /// `"kind": "real"`.
    Real(RealOperator),
    /// `"kind": "complex"`.
    Complex(ComplexOperator),
    /// `"kind": "quaternion"`.
    Quaternion(QOperator),
}

impl OperatorPayload {
    /// The `kind` tag this payload serializes under.
    pub fn kind(&self) -> &'static str {
        match self {
            OperatorPayload::Real(_) => "real",
            OperatorPayload::Complex(_) => "complex",
            OperatorPayload::Quaternion(_) => "quaternion",
        }
    }

    /// Matrix dimension n.
    pub fn dim(&self) -> usize {
        match self {
            OperatorPayload::Real(t) => t.dim(),
            OperatorPayload::Complex(t) => t.dim(),
            OperatorPayload::Quaternion(t) => t.dim(),
        }
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::Parse(format!("operator file is missing the \"{name}\" field")))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number for {what}, got {v}")))
}

fn fixed_array<'a>(v: &'a Value, len: usize, what: &str) -> Result<&'a [Value]> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array for {what}, got {v}")))?;
    if arr.len() != len {
        return Err(Error::Parse(format!(
            "expected {len} components for {what}, got {}",
            arr.len()
        )));
    }
    Ok(arr)
}

/// Parses an operator file from its JSON text.
pub fn parse_operator(text: &str) -> Result<OperatorPayload> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("operator file must be a JSON object".into()))?;
    let kind = field(obj, "kind")?
        .as_str()
        .ok_or_else(|| Error::Parse("\"kind\" must be a string".into()))?;
    let n = field(obj, "n")?
        .as_u64()
        .ok_or_else(|| Error::Parse("\"n\" must be a non-negative integer".into()))?
        as usize;
    if n == 0 {
        return Err(Error::Parse("operator dimension must be at least 1".into()));
    }
    let rows = field(obj, "entries")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"entries\" must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, got {}",
            rows.len()
        )));
    }

    let mut cells = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        cells.extend_from_slice(fixed_array(row, n, &format!("row {i}"))?);
    }

    match kind {
        "real" => {
            let mut data = Vec::with_capacity(n * n);
            for cell in &cells {
                data.push(number(cell, "a real entry")?);
            }
            Ok(OperatorPayload::Real(RealOperator::new(
                DMatrix::from_row_slice(n, n, &data),
            )?))
        }
        "complex" => {
            let mut data = Vec::with_capacity(n * n);
            for cell in &cells {
                let parts = fixed_array(cell, 2, "a complex entry")?;
                data.push(Complex64::new(
                    number(&parts[0], "a real part")?,
                    number(&parts[1], "an imaginary part")?,
                ));
            }
            Ok(OperatorPayload::Complex(ComplexOperator::new(
                DMatrix::from_row_slice(n, n, &data),
            )?))
        }
        "quaternion" => {
            let mut data = Vec::with_capacity(n * n);
            for cell in &cells {
                data.push(parse_quaternion_value(cell)?);
            }
            Ok(OperatorPayload::Quaternion(QOperator::new(n, data)?))
        }
        other => Err(Error::Parse(format!(
            "unknown matrix kind \"{other}\" (expected real, complex, or quaternion)"
        ))),
    }
}

fn parse_quaternion_value(v: &Value) -> Result<Quaternion> {
    let parts = fixed_array(v, 4, "a quaternion entry")?;
    Ok(Quaternion::new(
        number(&parts[0], "the 1 coordinate")?,
        number(&parts[1], "the j coordinate")?,
        number(&parts[2], "the k coordinate")?,
        number(&parts[3], "the l coordinate")?,
    ))
}

/// Serializes an operator payload back to the matrix file format.
pub fn operator_to_json(op: &OperatorPayload) -> Value {
    match op {
        OperatorPayload::Real(t) => real_operator_json(t),
        OperatorPayload::Complex(t) => complex_operator_json(t),
        OperatorPayload::Quaternion(t) => q_operator_json(t),
    }
}

/// `{"kind":"real", ...}` for a real operator.
pub fn real_operator_json(t: &RealOperator) -> Value {
    let n = t.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| json!(t.matrix()[(i, j)])).collect()))
        .collect();
    json!({"kind": "real", "n": n, "entries": rows})
}

/// `{"kind":"complex", ...}` for a complex operator.
pub fn complex_operator_json(t: &ComplexOperator) -> Value {
    let n = t.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                (0..n)
                    .map(|j| {
                        let z = t.matrix()[(i, j)];
                        json!([z.re, z.im])
                    })
                    .collect(),
            )
        })
        .collect();
    json!({"kind": "complex", "n": n, "entries": rows})
}

/// `{"kind":"quaternion", ...}` for a quaternion operator.
pub fn q_operator_json(t: &QOperator) -> Value {
    let n = t.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                (0..n)
                    .map(|j| {
                        let q = t.get(i, j);
                        json!([q.x0, q.x1, q.x2, q.x3])
                    })
                    .collect(),
            )
        })
        .collect();
    json!({"kind": "quaternion", "n": n, "entries": rows})
}

/// `{"complex": [[re, im], ...]}` for a complex spectrum.
pub fn spectrum_json(s: &ComplexSpectrum) -> Value {
    let points: Vec<Value> = s.points().iter().map(|p| json!([p.re, p.im])).collect();
    json!({ "complex": points })
}

/// `{"spheres": [[u, v], ...]}` for a quaternionic spectrum.
pub fn qspectrum_json(s: &QSpectrumSet) -> Value {
    let spheres: Vec<Value> = s.spheres().iter().map(|(u, v)| json!([u, v])).collect();
    json!({ "spheres": spheres })
}

/// `[[re1, im1], [re2, im2]]` pairs for joint eigenvalue lists.
pub fn pair_list_json(pairs: &[(Complex64, Complex64)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|(a, b)| json!([[a.re, a.im], [b.re, b.im]]))
            .collect(),
    )
}

/// `{"circles": [{"center": [re, im], "radius": r}, ...]}` for diagnostics.
pub fn contour_json(contour: &Contour) -> Value {
    let circles: Vec<Value> = contour
        .circles()
        .iter()
        .map(|c| json!({"center": [c.center.re, c.center.im], "radius": c.radius}))
        .collect();
    json!({ "circles": circles })
}

/// Splits `text` at top-level occurrences of `sep`, ignoring separators
/// inside brackets and a `+`/`-` that continues a number exponent.
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    let mut prev = ' ';
    for ch in text.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
        let exponent_sign = (ch == '+' || ch == '-') && (prev == 'e' || prev == 'E');
        if ch == sep && depth == 0 && !exponent_sign {
            parts.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    parts.push(current);
    parts
}

/// Parses the scalar function grammar into a [`StemFunction`].
pub fn parse_function(text: &str) -> Result<StemFunction> {
    let parts = split_top_level(text, '+');
    let mut terms = Vec::with_capacity(parts.len());
    for part in &parts {
        terms.push(parse_function_atom(part)?);
    }
    if terms.len() == 1 {
        Ok(terms.pop().expect("one term"))
    } else {
        Ok(StemFunction::Sum(terms))
    }
}

fn parse_function_atom(text: &str) -> Result<StemFunction> {
    let t = text.trim();
    match t {
        "" => Err(Error::Parse("empty function term".into())),
        "exp" => Ok(StemFunction::Exp),
        "sin" => Ok(StemFunction::Sin),
        "cos" => Ok(StemFunction::Cos),
        _ if t.starts_with("res:") => {
            let pole: f64 = t["res:".len()..]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid resolvent pole in \"{t}\"")))?;
            if !pole.is_finite() {
                return Err(Error::Parse("resolvent pole must be finite".into()));
            }
            Ok(StemFunction::Resolvent(pole))
        }
        _ if t.starts_with("poly:") => {
            let raw: Value = serde_json::from_str(t["poly:".len()..].trim())
                .map_err(|e| Error::Parse(format!("invalid coefficient list in \"{t}\": {e}")))?;
            let items = raw
                .as_array()
                .ok_or_else(|| Error::Parse("poly coefficients must be a JSON array".into()))?;
            if items.is_empty() {
                return Err(Error::Parse("poly needs at least one coefficient".into()));
            }
            let mut coeffs = Vec::with_capacity(items.len());
            for item in items {
                let coeff = match item {
                    Value::Number(_) => Coefficient::Real(number(item, "a coefficient")?),
                    Value::Array(_) => Coefficient::Quat(parse_quaternion_value(item)?),
                    other => {
                        return Err(Error::Parse(format!(
                            "coefficients must be numbers or quaternion arrays, got {other}"
                        )))
                    }
                };
                coeffs.push(coeff);
            }
            Ok(StemFunction::Polynomial(coeffs))
        }
        other => Err(Error::Parse(format!(
            "unknown function atom \"{other}\" (expected exp, sin, cos, res:a, or poly:[...])"
        ))),
    }
}

/// Parses the two-variable function grammar into a [`PairFunction`].
pub fn parse_pair_function(text: &str) -> Result<PairFunction> {
    let sums = split_top_level(text, '+');
    let mut terms = Vec::with_capacity(sums.len());
    for sum in &sums {
        let factors = split_top_level(sum, '*');
        let mut product: Option<PairFunction> = None;
        for factor in &factors {
            let atom = parse_pair_atom(factor)?;
            product = Some(match product {
                None => atom,
                Some(p) => PairFunction::Product(Box::new(p), Box::new(atom)),
            });
        }
        terms.push(product.ok_or_else(|| Error::Parse("empty function term".into()))?);
    }
    if terms.len() == 1 {
        Ok(terms.pop().expect("one term"))
    } else {
        Ok(PairFunction::Sum(terms))
    }
}

fn parse_pair_atom(text: &str) -> Result<PairFunction> {
    let t = text.trim();
    match t {
        "" => Err(Error::Parse("empty function factor".into())),
        "exp1" => Ok(PairFunction::Exp1),
        "exp2" => Ok(PairFunction::Exp2),
        _ if t.starts_with("poly2:") => {
            let raw: Value = serde_json::from_str(t["poly2:".len()..].trim())
                .map_err(|e| Error::Parse(format!("invalid coefficient grid in \"{t}\": {e}")))?;
            let rows = raw
                .as_array()
                .ok_or_else(|| Error::Parse("poly2 coefficients must be a JSON array".into()))?;
            if rows.is_empty() {
                return Err(Error::Parse("poly2 needs at least one row".into()));
            }
            let mut grid = Vec::with_capacity(rows.len());
            for row in rows {
                let cells = row.as_array().ok_or_else(|| {
                    Error::Parse("each poly2 row must be an array of numbers".into())
                })?;
                let mut out = Vec::with_capacity(cells.len());
                for cell in cells {
                    out.push(number(cell, "a poly2 coefficient")?);
                }
                grid.push(out);
            }
            Ok(PairFunction::Poly(grid))
        }
        other => Err(Error::Parse(format!(
            "unknown two-variable atom \"{other}\" (expected exp1, exp2, or poly2:[[...]])"
        ))),
    }
}
