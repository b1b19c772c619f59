//! JSON encoding of matrices, vectors and vector sets.
//!
//! A matrix is `{"field": "real"|"complex", "rows": n, "cols": m, "data": [...]}`
//! with `data` listing the entries in row-major order, each as `[re, im]`.
//! Real matrices may use bare numbers. Vectors are `n x 1` matrices and a
//! set is `{"vectors": [vector, ...]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{CMatrix, CVector, DenseMatrix, Field, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawSet {
    vectors: Vec<Value>,
}

fn parse_entry(v: &Value, field: Field, index: usize) -> Result<C64> {
    let bad = || Error::Parse(format!("entry {index} is not a number or [re, im] pair"));
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().ok_or_else(bad)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            if field == Field::Real && im != 0.0 {
                return Err(Error::FieldMismatch);
            }
            Ok(C64::new(re, im))
        }
        _ => Err(bad()),
    }
}

fn entry_value(z: C64, field: Field) -> Value {
    match field {
        Field::Real => Value::from(z.re),
        Field::Complex => Value::from(vec![z.re, z.im]),
    }
}

pub fn matrix_from_value(v: &Value) -> Result<DenseMatrix> {
    let raw: RawMatrix =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.data.len() != raw.rows * raw.cols {
        return Err(Error::Parse(format!(
            "expected {} entries for a {}x{} matrix, found {}",
            raw.rows * raw.cols,
            raw.rows,
            raw.cols,
            raw.data.len()
        )));
    }
    let entries = raw
        .data
        .iter()
        .enumerate()
        .map(|(i, e)| parse_entry(e, raw.field, i))
        .collect::<Result<Vec<_>>>()?;
    let data = CMatrix::from_row_slice(raw.rows, raw.cols, &entries);
    DenseMatrix::new(raw.field, data)
}

pub fn matrix_to_value(m: &DenseMatrix) -> Value {
    let d = m.data();
    let mut data = Vec::with_capacity(d.len());
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            data.push(entry_value(d[(i, j)], m.field()));
        }
    }
    serde_json::to_value(RawMatrix {
        field: m.field(),
        rows: d.nrows(),
        cols: d.ncols(),
        data,
    })
    .expect("matrix encodes as JSON")
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    matrix_from_value(&v)
}

pub fn matrix_to_json(m: &DenseMatrix) -> String {
    serde_json::to_string_pretty(&matrix_to_value(m)).expect("matrix encodes as JSON")
}

fn column(m: DenseMatrix) -> Result<(Field, CVector)> {
    if m.cols() != 1 {
        return Err(Error::Parse(format!(
            "a vector must be an n x 1 matrix, found {} columns",
            m.cols()
        )));
    }
    let field = m.field();
    Ok((field, m.into_data().column(0).into_owned()))
}

/// Parses an `n x 1` matrix as a vector.
pub fn parse_vector(text: &str) -> Result<(Field, CVector)> {
    column(parse_matrix(text)?)
}

pub fn vector_to_value(v: &CVector, field: Field) -> Value {
    let m = CMatrix::from_column_slice(v.len(), 1, v.as_slice());
    matrix_to_value(&DenseMatrix::new(field, m).expect("vector matches its field"))
}

/// Parses a set of vectors; the returned field is the join of the members'.
pub fn parse_set(text: &str) -> Result<(Field, Vec<CVector>)> {
    let raw: RawSet = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut field = Field::Real;
    let mut out = Vec::with_capacity(raw.vectors.len());
    for v in &raw.vectors {
        let (f, x) = column(matrix_from_value(v)?)?;
        field = field.join(f);
        out.push(x);
    }
    Ok((field, out))
}

pub fn set_to_json(vectors: &[CVector], field: Field) -> String {
    let raw = RawSet {
        vectors: vectors.iter().map(|v| vector_to_value(v, field)).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("set encodes as JSON")
}
