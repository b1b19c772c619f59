//! The positive operator `A` and everything derived from its spectrum.
//!
//! A single Hermitian eigen-decomposition `A = U diag(λ) U*` backs every
//! artifact: the square root, the Moore-Penrose inverse, the projection onto
//! `R(A)` and the null-space basis all come from the same factorization, so
//! they agree on the rank.
//!
//! Most analyses work in *seminorm coordinates*: for `x` in the space,
//! `reduce(x) = diag(λ_r)^{1/2} U_r* x` is an `r`-vector with
//! `<x, y>_A = <reduce(x), reduce(y)>`. `lift` is its inverse on `R(A)`.

use crate::error::{Error, Result};
use crate::field::{CMatrix, CVector, DenseMatrix, Field, Tolerances, C64};
use crate::linalg::{hermitian_eigen, hermitian_part};

#[derive(Debug, Clone)]
pub struct PositiveOperator {
    field: Field,
    tol: Tolerances,
    a: CMatrix,
    eigvals: Vec<f64>,
    eigvecs: CMatrix,
    rank: usize,
    sqrt: CMatrix,
    pinv: CMatrix,
    sqrt_pinv: CMatrix,
    proj: CMatrix,
    null_basis: CMatrix,
}

/// Validates `a` as a positive operator and derives its spectral artifacts.
pub fn analyze_positive(a: &DenseMatrix, tol: Tolerances) -> Result<PositiveOperator> {
    PositiveOperator::new(a.data(), a.field(), tol)
}

/// `||v - P v||`, the Euclidean distance of `v` from `R(A)`.
pub fn projection_residual(pos: &PositiveOperator, v: &CVector) -> Result<f64> {
    pos.projection_residual(v)
}

impl PositiveOperator {
    pub fn new(a: &CMatrix, field: Field, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        let (rows, cols) = a.shape();
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !field.admits(a) {
            return Err(Error::FieldMismatch);
        }
        let asymmetry = (a - a.adjoint()).norm();
        let bound = tol.eq_rel * a.norm();
        if asymmetry > bound {
            return Err(Error::NotHermitian { asymmetry, bound });
        }

        let n = rows;
        let (mut eigvals, eigvecs) = hermitian_eigen(&hermitian_part(a), field);
        let scale = eigvals[0].max(0.0);
        let floor = tol.rank_rel * scale;
        if let Some(&lowest) = eigvals.last() {
            if lowest < -floor {
                return Err(Error::NotPositive {
                    eigenvalue: lowest,
                    bound: -floor,
                });
            }
        }
        for v in eigvals.iter_mut() {
            if *v <= floor {
                *v = 0.0;
            }
        }
        let rank = eigvals.iter().filter(|&&v| v > 0.0).count();

        let range = eigvecs.columns(0, rank).into_owned();
        let spectral = |f: &dyn Fn(f64) -> f64| -> CMatrix {
            let mut scaled = range.clone();
            for (j, mut col) in scaled.column_iter_mut().enumerate() {
                col *= C64::new(f(eigvals[j]), 0.0);
            }
            hermitian_part(&(&scaled * range.adjoint()))
        };
        let a_clean = spectral(&|l| l);
        let sqrt = spectral(&|l| l.sqrt());
        let pinv = spectral(&|l| 1.0 / l);
        let sqrt_pinv = spectral(&|l| 1.0 / l.sqrt());
        let proj = spectral(&|_| 1.0);
        let null_basis = eigvecs.columns(rank, n - rank).into_owned();

        Ok(PositiveOperator {
            field,
            tol,
            a: a_clean,
            eigvals,
            eigvecs,
            rank,
            sqrt,
            pinv,
            sqrt_pinv,
            proj,
            null_basis,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tol(&self) -> Tolerances {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `A` rebuilt from its clamped spectrum.
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    /// Eigenvalues, descending, clamped to zero below the rank threshold.
    pub fn eigvals(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigvecs(&self) -> &CMatrix {
        &self.eigvecs
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigvals[0]
    }

    pub fn sqrt(&self) -> &CMatrix {
        &self.sqrt
    }

    pub fn pinv(&self) -> &CMatrix {
        &self.pinv
    }

    pub fn sqrt_pinv(&self) -> &CMatrix {
        &self.sqrt_pinv
    }

    /// Orthogonal projection onto `R(A)`.
    pub fn proj(&self) -> &CMatrix {
        &self.proj
    }

    /// Orthonormal basis of `N(A)`, as columns.
    pub fn null_basis(&self) -> &CMatrix {
        &self.null_basis
    }

    /// Orthonormal eigenvectors spanning `R(A)`, as columns.
    pub fn range_basis(&self) -> CMatrix {
        self.eigvecs.columns(0, self.rank).into_owned()
    }

    pub fn projection_residual(&self, v: &CVector) -> Result<f64> {
        self.check_vector(v)?;
        Ok((v - &self.proj * v).norm())
    }

    /// `A x`, applied through the factorization.
    pub fn apply(&self, x: &CVector) -> CVector {
        let u = self.eigvecs.columns(0, self.rank);
        let mut coords = u.adjoint() * x;
        for (j, c) in coords.iter_mut().enumerate() {
            *c *= self.eigvals[j];
        }
        u * coords
    }

    /// `A† x`, applied through the factorization.
    pub fn apply_pinv(&self, x: &CVector) -> CVector {
        let u = self.eigvecs.columns(0, self.rank);
        let mut coords = u.adjoint() * x;
        for (j, c) in coords.iter_mut().enumerate() {
            *c /= self.eigvals[j];
        }
        u * coords
    }

    /// Seminorm coordinates `diag(λ_r)^{1/2} U_r* x`.
    pub fn reduce(&self, x: &CVector) -> CVector {
        let u = self.eigvecs.columns(0, self.rank);
        let mut coords = u.adjoint() * x;
        for (j, c) in coords.iter_mut().enumerate() {
            *c *= self.eigvals[j].sqrt();
        }
        coords
    }

    /// Inverse of [`reduce`](Self::reduce) on `R(A)`: the unique `x ∈ R(A)`
    /// with `reduce(x) = z`.
    pub fn lift(&self, z: &CVector) -> CVector {
        assert_eq!(z.len(), self.rank, "lift expects rank-length coordinates");
        let u = self.eigvecs.columns(0, self.rank);
        let scaled = CVector::from_iterator(
            self.rank,
            z.iter().enumerate().map(|(j, c)| c / self.eigvals[j].sqrt()),
        );
        u * scaled
    }

    /// Matrix `diag(λ_r)^{1/2} U_r* T U_r diag(λ_r)^{-1/2}`: the compression
    /// of `T` to `R(A)` written in seminorm coordinates.
    pub(crate) fn compress(&self, t: &CMatrix) -> CMatrix {
        let u = self.eigvecs.columns(0, self.rank);
        let mut c = u.adjoint() * t * u;
        for i in 0..self.rank {
            for j in 0..self.rank {
                c[(i, j)] *= (self.eigvals[i] / self.eigvals[j]).sqrt();
            }
        }
        c
    }

    /// Whether `||x||_A` is negligible against the largest seminorm a vector
    /// of the same Euclidean length can have.
    pub(crate) fn is_degenerate(&self, x: &CVector) -> bool {
        if self.rank == 0 {
            return true;
        }
        let a_norm = self.reduce(x).norm();
        a_norm <= self.tol.eq_rel * self.lambda_max().sqrt() * x.norm()
    }

    pub(crate) fn check_vector(&self, x: &CVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if !self.field.admits(&CMatrix::from_column_slice(x.len(), 1, x.as_slice())) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub(crate) fn check_operator(&self, t: &CMatrix) -> Result<()> {
        let n = self.dim();
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if t.nrows() != n { t.nrows() } else { t.ncols() },
            });
        }
        if !self.field.admits(t) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}
