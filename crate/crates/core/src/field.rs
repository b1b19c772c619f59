//! Scalars, tolerances and field-tagged dense matrices.
//!
//! All numerical work happens in `Complex<f64>`. The [`Field`] tag records
//! whether the underlying space is real; real-tagged data is required to
//! have identically zero imaginary parts, and every routine that factorizes
//! real data does so in real arithmetic so that the property is preserved.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Scalar field of the underlying Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    /// Whether every entry of `m` belongs to this field.
    pub fn admits(self, m: &CMatrix) -> bool {
        self == Field::Complex || m.iter().all(|z| z.im == 0.0)
    }

    /// Smallest field holding every entry of `m`.
    pub fn of(m: &CMatrix) -> Field {
        if Field::Real.admits(m) {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

/// Thresholds for every approximate decision in the crate.
///
/// `rank_rel` decides when an eigenvalue or singular value counts as zero
/// (relative to the largest one); `eq_rel` decides equality of scalars,
/// vectors and matrices relative to the natural scale of the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank_rel: f64,
    pub eq_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            eq_rel: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(rank_rel: f64, eq_rel: f64) -> Result<Self> {
        let tol = Tolerances { rank_rel, eq_rel };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v < 1.0;
        if !ok(self.rank_rel) {
            return Err(Error::InvalidTolerance(format!(
                "rank_rel = {} must lie in (0, 1)",
                self.rank_rel
            )));
        }
        if !ok(self.eq_rel) {
            return Err(Error::InvalidTolerance(format!(
                "eq_rel = {} must lie in (0, 1)",
                self.eq_rel
            )));
        }
        Ok(())
    }
}

/// A dense matrix together with the field it lives over.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    field: Field,
    data: CMatrix,
}

impl DenseMatrix {
    /// Wraps `data`; fails with [`Error::FieldMismatch`] if a real-tagged
    /// matrix carries a nonzero imaginary part.
    pub fn new(field: Field, data: CMatrix) -> Result<Self> {
        if !field.admits(&data) {
            return Err(Error::FieldMismatch);
        }
        Ok(DenseMatrix { field, data })
    }

    /// Real matrix from row-major entries.
    pub fn real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        DenseMatrix {
            field: Field::Real,
            data: real_matrix(rows, cols, entries),
        }
    }

    /// Complex matrix from row-major entries.
    pub fn complex(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        DenseMatrix {
            field: Field::Complex,
            data: CMatrix::from_row_slice(rows, cols, entries),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    /// Re-tags the matrix over a field at least as large as its own.
    pub fn promote(mut self, field: Field) -> Self {
        self.field = self.field.join(field);
        self
    }
}

/// Real matrix (as complex storage) from row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&v| C64::new(v, 0.0)))
}

/// Real vector (as complex storage).
pub fn real_vector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&v| C64::new(v, 0.0)))
}

/// Real diagonal matrix.
pub fn real_diag(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&real_vector(entries))
}

/// `i`-th standard basis vector of length `n`.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut e = CVector::zeros(n);
    e[i] = C64::new(1.0, 0.0);
    e
}
