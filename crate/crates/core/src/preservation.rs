//! Preservation of A-orthogonality at a point, along a direction, and
//! everywhere; classification of A-isometries and their scalar multiples.
//!
//! `T` preserves A-orthogonality at `x` (with `||x||_A > 0`) exactly when
//! `<Ty, Tx>_A = c <y, x>_A` for all `y`, where `c = ||Tx||_A^2 / ||x||_A^2`.
//! By linearity in `y` that is the single vector equation
//! `T*ATx = c Ax`, whose relative residual is what gets thresholded here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CMatrix, CVector, Field, C64};
use crate::linalg::inner;
use crate::operator::{
    admits_a_adjoint, backbone, is_a_bounded, require_adjointable, require_bounded,
};
use crate::psd::PositiveOperator;
use crate::semi_inner::Direction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    #[serde(skip)]
    pub x: CVector,
    pub a_norm_x: f64,
    pub a_norm_tx: f64,
    /// `||Tx||_A^2 / ||x||_A^2`.
    pub factor: f64,
    /// `||T*ATx - c Ax|| / ((||T*AT|| + ||A||) ||x||)`.
    pub residual: f64,
    pub preserves: bool,
    /// A-eigenvalue of `T^♯T` at `x`, when `T` is adjointable and `x ∈ R(A)`.
    pub a_eigen_value: Option<f64>,
}

/// `T*ATx - c Ax` and the scale it is measured against.
struct FactorResidual {
    a_norm_x: f64,
    a_norm_tx: f64,
    factor: f64,
    vector: CVector,
    scale: f64,
}

fn factor_residual(pos: &PositiveOperator, t: &CMatrix, x: &CVector) -> Result<FactorResidual> {
    pos.check_vector(x)?;
    require_bounded(pos, t)?;
    if pos.is_degenerate(x) {
        return Err(Error::DegenerateBase);
    }
    let tx = t * x;
    let a_norm_x = pos.reduce(x).norm();
    let a_norm_tx = pos.reduce(&tx).norm();
    let factor = (a_norm_tx / a_norm_x).powi(2);
    let vector = t.adjoint() * pos.apply(&tx) - pos.apply(x) * C64::new(factor, 0.0);
    let gram = t.adjoint() * pos.a() * t;
    let scale = (gram.norm() + pos.a().norm()) * x.norm();
    Ok(FactorResidual {
        a_norm_x,
        a_norm_tx,
        factor,
        vector,
        scale,
    })
}

pub fn preserves_at(pos: &PositiveOperator, t: &CMatrix, x: &CVector) -> Result<PreservationReport> {
    let fr = factor_residual(pos, t, x)?;
    let residual = fr.vector.norm() / fr.scale;
    let tol = pos.tol();
    let a_eigen_value = if admits_a_adjoint(pos, t)?
        && pos.projection_residual(x)? <= tol.eq_rel * x.norm()
    {
        a_eigen_test(pos, t, x)?
    } else {
        None
    };
    Ok(PreservationReport {
        x: x.clone(),
        a_norm_x: fr.a_norm_x,
        a_norm_tx: fr.a_norm_tx,
        factor: fr.factor,
        residual,
        preserves: residual <= tol.eq_rel,
        a_eigen_value,
    })
}

/// Whether `Re(α <Ty, Tx>_A) = c Re(α <y, x>_A)` for every `y`.
///
/// Both sides are real-linear in `y`, so checking the real basis
/// `{e_k, i e_k}` is exhaustive.
pub fn preserves_directionally_at(
    pos: &PositiveOperator,
    t: &CMatrix,
    x: &CVector,
    dir: Direction,
) -> Result<bool> {
    if pos.field() == Field::Real {
        return Err(Error::RealFieldUnsupported);
    }
    let fr = factor_residual(pos, t, x)?;
    let alpha = dir.alpha();
    let i = C64::new(0.0, 1.0);
    // <Ty, Tx>_A - c <y, x>_A = <y, w> with w = T*ATx - cAx.
    let worst = (0..pos.dim())
        .flat_map(|k| {
            let e = crate::field::basis_vector(pos.dim(), k);
            [e.clone(), e * i]
        })
        .map(|y| (alpha * inner(&y, &fr.vector)).re.abs())
        .fold(0.0, f64::max);
    Ok(worst <= pos.tol().eq_rel * fr.scale)
}

/// How `T` maps the directional cones around `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeMapping {
    /// `T((x)_α^{A±}) ⊆ (Tx)_α^{A±}`.
    Preserving,
    /// `||Tx||_A = 0`: every inclusion holds, including the order-reversing one.
    Degenerate,
    /// Neither pair of inclusions holds.
    #[serde(rename = "None")]
    NoInclusion,
}

pub fn classify_cone_map(
    pos: &PositiveOperator,
    t: &CMatrix,
    x: &CVector,
    dir: Direction,
) -> Result<ConeMapping> {
    if !preserves_directionally_at(pos, t, x, dir)? {
        return Ok(ConeMapping::NoInclusion);
    }
    let a_norm_x = pos.reduce(x).norm();
    let a_norm_tx = pos.reduce(&(t * x)).norm();
    if a_norm_tx <= pos.tol().eq_rel * a_norm_x {
        Ok(ConeMapping::Degenerate)
    } else {
        Ok(ConeMapping::Preserving)
    }
}

/// The A-eigenvalue of `T^♯T` at `x ∈ R(A)`, if `x` is an A-eigenvector.
///
/// `λ` is the least-squares fit of `A T^♯T x ≈ λ Ax`; it is returned when
/// the fit residual is at most `eq_rel ||A|| ||x||`.
pub fn a_eigen_test(pos: &PositiveOperator, t: &CMatrix, x: &CVector) -> Result<Option<f64>> {
    pos.check_vector(x)?;
    require_adjointable(pos, t)?;
    let tol = pos.tol();
    if x.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let residual = pos.projection_residual(x)?;
    if residual > tol.eq_rel * x.norm() {
        return Err(Error::NotInRange { residual });
    }
    let ax = pos.apply(x);
    if ax.norm() == 0.0 {
        return Err(Error::NotInRange { residual });
    }
    // A T^♯T x with T^♯ = A†T*A, keeping A† inside the eigenbasis
    let tx = t * x;
    let image = pos.apply(&pos.apply_pinv(&(t.adjoint() * pos.apply(&tx))));
    let lambda = inner(&image, &ax) / ax.norm_squared();
    let misfit = (&image - &ax * lambda).norm();
    if misfit <= tol.eq_rel * pos.a().norm() * x.norm() {
        Ok(Some(lambda.re.max(0.0)))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IsometryKind {
    AIsometry,
    ScalarMultiple { k: f64 },
    NotIsometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryVerdict {
    pub kind: IsometryKind,
    /// Best-fit scale `k` (`k^2` = mean A-eigenvalue of `T^♯T`).
    pub k: f64,
    /// `||T^♯T - k^2 P|| / max(1, k^2)`, measured on `R(A)` in the A-norm.
    pub defect: f64,
}

impl IsometryVerdict {
    pub fn is_scalar_multiple(&self) -> bool {
        !matches!(self.kind, IsometryKind::NotIsometry)
    }
}

/// Fits `T^♯T ≈ k^2 P` and classifies `T`.
///
/// `T^♯T` is written in A-orthonormal coordinates of `R(A)`, where it is
/// the Gram matrix `C*C` of the compressed operator and `P` is the identity.
pub fn isometry_classify(pos: &PositiveOperator, t: &CMatrix) -> Result<IsometryVerdict> {
    require_adjointable(pos, t)?;
    let r = pos.rank();
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let c = pos.compress(t);
    let gram = c.adjoint() * &c;
    let k2 = gram.trace().re / r as f64;
    let defect = (&gram - CMatrix::identity(r, r) * C64::new(k2, 0.0)).norm() / k2.max(1.0);
    let k = k2.max(0.0).sqrt();
    let eq = pos.tol().eq_rel;
    let kind = if defect > eq {
        IsometryKind::NotIsometry
    } else if (k - 1.0).abs() <= eq {
        IsometryKind::AIsometry
    } else {
        IsometryKind::ScalarMultiple { k }
    };
    Ok(IsometryVerdict { kind, k, defect })
}

/// Whether `T` preserves A-orthogonality at every point of `R(A)`, which
/// holds exactly for scalar multiples of A-isometries.
pub fn preserves_everywhere(pos: &PositiveOperator, t: &CMatrix) -> Result<bool> {
    Ok(isometry_classify(pos, t)?.is_scalar_multiple())
}

/// Singular values of the compressed operator, for diagnostics.
pub fn a_singular_values(pos: &PositiveOperator, t: &CMatrix) -> Result<Vec<f64>> {
    if !is_a_bounded(pos, t)? {
        return Err(Error::NotABounded);
    }
    Ok(backbone(pos, t).values)
}
