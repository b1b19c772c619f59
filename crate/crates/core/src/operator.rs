//! Operators `T` analyzed relative to `A`.
//!
//! Everything quantitative (the A-norm, the minimum A-norm, both attainment
//! subspaces and the A-eigenpairs of `T^♯T`) is read off one singular value
//! decomposition of the compressed operator
//! `C = diag(λ_r)^{1/2} U_r* T U_r diag(λ_r)^{-1/2}`, which represents `T`
//! on `R(A)` in seminorm coordinates. `C` has the same singular values as
//! `A^{1/2} T (A^{1/2})†` restricted to `R(A)`, and for A-bounded `T` we
//! have `reduce(T x) = C reduce(x)` for every `x`.

use crate::error::{Error, Result};
use crate::field::CMatrix;
use crate::linalg::{hstack, svd, Svd};
use crate::psd::PositiveOperator;

/// Whether `T` maps `N(A)` into `N(A)`, i.e. `||Tx||_A <= c ||x||_A` for
/// some `c`.
pub fn is_a_bounded(pos: &PositiveOperator, t: &CMatrix) -> Result<bool> {
    pos.check_operator(t)?;
    let null = pos.null_basis();
    if null.ncols() == 0 {
        return Ok(true);
    }
    let leak = (pos.sqrt() * t * null).norm();
    Ok(leak <= pos.tol().eq_rel * pos.sqrt().norm() * t.norm())
}

/// Whether `R(T*A) ⊆ R(A)`, i.e. `T` has an A-adjoint.
pub fn admits_a_adjoint(pos: &PositiveOperator, t: &CMatrix) -> Result<bool> {
    pos.check_operator(t)?;
    let ta = t.adjoint() * pos.a();
    let outside = &ta - pos.proj() * &ta;
    Ok(outside.norm() <= pos.tol().eq_rel * pos.a().norm() * t.norm())
}

/// The reduced solution `T^♯ = A† T* A`.
pub fn a_adjoint(pos: &PositiveOperator, t: &CMatrix) -> Result<CMatrix> {
    if !admits_a_adjoint(pos, t)? {
        return Err(Error::NotAdjointable);
    }
    Ok(pos.pinv() * t.adjoint() * pos.a())
}

pub(crate) fn require_bounded(pos: &PositiveOperator, t: &CMatrix) -> Result<()> {
    if is_a_bounded(pos, t)? {
        Ok(())
    } else {
        Err(Error::NotABounded)
    }
}

pub(crate) fn require_adjointable(pos: &PositiveOperator, t: &CMatrix) -> Result<()> {
    if admits_a_adjoint(pos, t)? && is_a_bounded(pos, t)? {
        Ok(())
    } else {
        Err(Error::NotAdjointable)
    }
}

/// SVD of the compressed operator. Assumes `T` is A-bounded.
pub(crate) fn backbone(pos: &PositiveOperator, t: &CMatrix) -> Svd {
    svd(&pos.compress(t))
}

/// `||T||_A = sup { ||Tx||_A : ||x||_A = 1 }`; zero when `A = 0`.
pub fn operator_a_norm(pos: &PositiveOperator, t: &CMatrix) -> Result<f64> {
    require_bounded(pos, t)?;
    Ok(backbone(pos, t).values.first().copied().unwrap_or(0.0))
}

/// `m_A(T) = inf { ||Tx||_A : ||x||_A = 1 }`.
pub fn operator_min_a_norm(pos: &PositiveOperator, t: &CMatrix) -> Result<f64> {
    require_bounded(pos, t)?;
    if pos.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(*backbone(pos, t).values.last().expect("rank >= 1"))
}

/// Indices `0..k` of the leading singular values within `eq_rel * s_max`
/// of the largest.
fn top_group(values: &[f64], eq_rel: f64) -> usize {
    let Some(&top) = values.first() else {
        return 0;
    };
    values.iter().take_while(|&&s| top - s <= eq_rel * top).count()
}

/// Indices of the trailing singular values within `eq_rel * s_max` of the
/// smallest.
fn bottom_group(values: &[f64], eq_rel: f64) -> Vec<usize> {
    let (Some(&top), Some(&bottom)) = (values.first(), values.last()) else {
        return Vec::new();
    };
    (0..values.len())
        .filter(|&i| values[i] - bottom <= eq_rel * top)
        .collect()
}

fn lift_columns(pos: &PositiveOperator, v: &CMatrix, idx: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(pos.dim(), idx.len());
    for (k, &i) in idx.iter().enumerate() {
        out.set_column(k, &pos.lift(&v.column(i).into_owned()));
    }
    out
}

/// Solution spaces of `T*ATx = ||T||_A^2 Ax` and `T*ATx = m_A(T)^2 Ax`.
///
/// The range parts are A-orthonormal; every vector of `N(A)` solves both
/// equations and is kept separately in `null`.
#[derive(Debug, Clone)]
pub struct Attainment {
    pub max_range: CMatrix,
    pub min_range: CMatrix,
    pub null: CMatrix,
    pub op_a_norm: f64,
    pub min_a_norm: f64,
}

impl Attainment {
    /// Basis of the full solution space for `||T||_A`.
    pub fn max_basis(&self) -> CMatrix {
        hstack(&self.max_range, &self.null)
    }

    /// Basis of the full solution space for `m_A(T)`.
    pub fn min_basis(&self) -> CMatrix {
        hstack(&self.min_range, &self.null)
    }
}

pub fn attainment_subspaces(pos: &PositiveOperator, t: &CMatrix) -> Result<Attainment> {
    require_bounded(pos, t)?;
    let s = backbone(pos, t);
    let eq = pos.tol().eq_rel;
    let top: Vec<usize> = (0..top_group(&s.values, eq)).collect();
    let bottom = bottom_group(&s.values, eq);
    Ok(Attainment {
        max_range: lift_columns(pos, &s.v, &top),
        min_range: lift_columns(pos, &s.v, &bottom),
        null: pos.null_basis().clone(),
        op_a_norm: s.values.first().copied().unwrap_or(0.0),
        min_a_norm: s.values.last().copied().unwrap_or(0.0),
    })
}

/// Basis of `N_A(T) = { v : ||Tv||_A = 0 }`: range directions annihilated
/// by the compressed operator, followed by `N(A)`.
pub fn a_null_space(pos: &PositiveOperator, t: &CMatrix) -> Result<CMatrix> {
    require_bounded(pos, t)?;
    let s = backbone(pos, t);
    let top = s.values.first().copied().unwrap_or(0.0);
    let idx: Vec<usize> = (0..s.values.len())
        .filter(|&i| s.values[i] <= pos.tol().eq_rel * top)
        .collect();
    Ok(hstack(&lift_columns(pos, &s.v, &idx), pos.null_basis()))
}

/// An A-eigenvalue of `T^♯T` with an A-orthonormal basis of its eigenspace
/// inside `R(A)`.
#[derive(Debug, Clone)]
pub struct AEigenPair {
    pub value: f64,
    pub basis: CMatrix,
}

/// A-eigenpairs of `T^♯T`, largest value first.
///
/// Solves the Hermitian-definite pencil `(U_r* T*AT U_r) c = λ diag(λ_r) c`
/// through the SVD of the compressed operator: the pencil eigenvalues are
/// its squared singular values. Singular values within `eq_rel * s_max` of
/// each other share one eigenspace.
pub fn a_eigenpairs(pos: &PositiveOperator, t: &CMatrix) -> Result<Vec<AEigenPair>> {
    require_adjointable(pos, t)?;
    if pos.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let s = backbone(pos, t);
    let sv = &s.values;
    let threshold = pos.tol().eq_rel * sv[0];
    let mut pairs = Vec::new();
    let mut start = 0;
    while start < sv.len() {
        let mut end = start + 1;
        while end < sv.len() && sv[start] - sv[end] <= threshold {
            end += 1;
        }
        let idx: Vec<usize> = (start..end).collect();
        let value = sv[start..end].iter().map(|v| v * v).sum::<f64>() / idx.len() as f64;
        pairs.push(AEigenPair {
            value,
            basis: lift_columns(pos, &s.v, &idx),
        });
        start = end;
    }
    Ok(pairs)
}

/// Full analysis of `T` relative to `A`. Quantities that are undefined for
/// the given operator (unbounded `T`, `rank A = 0`) are `None`.
#[derive(Debug, Clone)]
pub struct OperatorAnalysis {
    pub t: CMatrix,
    pub a_bounded: bool,
    pub adjointable: bool,
    pub sharp: Option<CMatrix>,
    /// `A^{1/2} T (A^{1/2})†`.
    pub reduced: CMatrix,
    pub op_a_norm: Option<f64>,
    pub min_a_norm: Option<f64>,
    pub attainment: Option<Attainment>,
    pub eigenpairs: Option<Vec<AEigenPair>>,
}

pub fn analyze_operator(pos: &PositiveOperator, t: &CMatrix) -> Result<OperatorAnalysis> {
    let a_bounded = is_a_bounded(pos, t)?;
    let adjointable = a_bounded && admits_a_adjoint(pos, t)?;
    let reduced = pos.sqrt() * t * pos.sqrt_pinv();
    let sharp = adjointable.then(|| pos.pinv() * t.adjoint() * pos.a());
    let (op_a_norm, min_a_norm, attainment) = if a_bounded {
        let att = attainment_subspaces(pos, t)?;
        let min = (pos.rank() > 0).then_some(att.min_a_norm);
        (Some(att.op_a_norm), min, Some(att))
    } else {
        (None, None, None)
    };
    let eigenpairs = if adjointable && pos.rank() > 0 {
        Some(a_eigenpairs(pos, t)?)
    } else {
        None
    };
    Ok(OperatorAnalysis {
        t: t.clone(),
        a_bounded,
        adjointable,
        sharp,
        reduced,
        op_a_norm,
        min_a_norm,
        attainment,
        eigenpairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{basis_vector, real_diag, real_matrix, Field, Tolerances};
    use crate::semi_inner::{a_inner, a_norm};

    fn pos_of(a: CMatrix) -> PositiveOperator {
        PositiveOperator::new(&a, Field::of(&a), Tolerances::default()).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix) -> bool {
        (a - b).norm() < 1e-12
    }

    fn shift() -> CMatrix {
        real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }

    #[test]
    fn boundedness_examples() {
        let id = pos_of(real_diag(&[1.0, 1.0]));
        assert!(is_a_bounded(&id, &shift()).unwrap());
        let p = pos_of(real_diag(&[1.0, 0.0]));
        // Defining inequality fails at x = e2: ||T e2||_A = 1, ||e2||_A = 0.
        let e2 = basis_vector(2, 1);
        assert!(a_norm(&p, &(shift() * &e2)).unwrap() > 0.5);
        assert!(a_norm(&p, &e2).unwrap() < 1e-15);
        assert!(!is_a_bounded(&p, &shift()).unwrap());
        assert!(is_a_bounded(&p, &p.proj().clone()).unwrap());
    }

    #[test]
    fn adjointability_examples() {
        let inv = pos_of(real_diag(&[2.0, 1.0]));
        assert!(admits_a_adjoint(&inv, &shift()).unwrap());
        let p = pos_of(real_diag(&[1.0, 0.0]));
        assert!(!admits_a_adjoint(&p, &shift()).unwrap());
        assert!(admits_a_adjoint(&p, &p.a().clone()).unwrap());
        assert_eq!(a_adjoint(&p, &shift()).unwrap_err(), Error::NotAdjointable);
    }

    #[test]
    fn adjoint_examples() {
        let id = pos_of(real_diag(&[1.0, 1.0]));
        assert!(close(&a_adjoint(&id, &shift()).unwrap(), &shift().adjoint()));
        let p = pos_of(real_diag(&[3.0, 0.0]));
        assert!(close(&a_adjoint(&p, &CMatrix::identity(2, 2)).unwrap(), p.proj()));

        let d = pos_of(real_diag(&[2.0, 1.0]));
        let sharp = a_adjoint(&d, &shift()).unwrap();
        assert!(close(&sharp, &real_matrix(2, 2, &[0.0, 0.0, 2.0, 0.0])));
        for i in 0..2 {
            for j in 0..2 {
                let (ei, ej) = (basis_vector(2, i), basis_vector(2, j));
                let lhs = a_inner(&d, &(shift() * &ei), &ej).unwrap();
                let rhs = a_inner(&d, &ei, &(&sharp * &ej)).unwrap();
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn norm_examples() {
        let id = pos_of(real_diag(&[1.0, 1.0]));
        let t = real_diag(&[1.0, 2.0]);
        assert!((operator_a_norm(&id, &t).unwrap() - 2.0).abs() < 1e-13);
        assert!((operator_min_a_norm(&id, &t).unwrap() - 1.0).abs() < 1e-13);

        let p = pos_of(real_diag(&[1.0, 0.0]));
        let t = real_diag(&[3.0, 5.0]);
        assert!((operator_a_norm(&p, &t).unwrap() - 3.0).abs() < 1e-13);
        assert!((operator_min_a_norm(&p, &t).unwrap() - 3.0).abs() < 1e-13);

        let killer = real_diag(&[0.0, 1.0]);
        assert!(operator_min_a_norm(&id, &killer).unwrap() < 1e-15);
        assert_eq!(operator_a_norm(&p, &shift()).unwrap_err(), Error::NotABounded);
    }

    #[test]
    fn rank_zero_norms() {
        let z = pos_of(CMatrix::zeros(2, 2));
        let t = real_diag(&[1.0, 2.0]);
        assert_eq!(operator_a_norm(&z, &t).unwrap(), 0.0);
        assert_eq!(operator_min_a_norm(&z, &t).unwrap_err(), Error::ZeroRank);
        assert_eq!(a_eigenpairs(&z, &t).unwrap_err(), Error::ZeroRank);
    }

    #[test]
    fn attainment_examples() {
        let id = pos_of(real_diag(&[1.0, 1.0]));
        let att = attainment_subspaces(&id, &real_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(att.max_basis().ncols(), 1);
        assert!((att.max_basis()[(1, 0)].norm() - 1.0).abs() < 1e-13);
        assert!((att.min_basis()[(0, 0)].norm() - 1.0).abs() < 1e-13);

        let p = pos_of(real_diag(&[1.0, 0.0]));
        let att = attainment_subspaces(&p, &real_diag(&[3.0, 5.0])).unwrap();
        assert_eq!(att.max_basis().ncols(), 2);
        assert_eq!(att.min_basis().ncols(), 2);
        // Both columns solve T*ATx = 9 Ax.
        let t = real_diag(&[3.0, 5.0]);
        let lhs = t.adjoint() * p.a() * &t * att.max_basis();
        let rhs = p.a() * att.max_basis() * crate::field::C64::new(9.0, 0.0);
        assert!(close(&lhs, &rhs));

        let iso = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let att = attainment_subspaces(&id, &iso).unwrap();
        assert_eq!(att.max_basis().ncols(), 2);
        assert_eq!(att.min_basis().ncols(), 2);
    }

    #[test]
    fn eigenpair_examples() {
        let id = pos_of(real_diag(&[1.0, 1.0]));
        let pairs = a_eigenpairs(&id, &real_diag(&[1.0, 2.0])).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - 4.0).abs() < 1e-13 && (pairs[1].value - 1.0).abs() < 1e-13);
        assert!((pairs[0].basis[(1, 0)].norm() - 1.0).abs() < 1e-13);

        let p = pos_of(real_diag(&[1.0, 0.0]));
        let t = real_diag(&[3.0, 5.0]);
        let pairs = a_eigenpairs(&p, &t).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!((pairs[0].value - 9.0).abs() < 1e-13);
        let e1 = basis_vector(2, 0);
        let sharp = a_adjoint(&p, &t).unwrap();
        assert!((p.a() * &sharp * &t * &e1 - p.a() * &e1 * crate::field::C64::new(9.0, 0.0)).norm() < 1e-13);

        let iso = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let pairs = a_eigenpairs(&id, &iso).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].basis.ncols(), 2);
        assert!((pairs[0].value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn null_space_of_operator() {
        let id = pos_of(real_diag(&[1.0, 1.0, 0.0]));
        let t = real_diag(&[1.0, 0.0, 0.0]);
        let n = a_null_space(&id, &t).unwrap();
        assert_eq!(n.ncols(), 2);
        for v in n.column_iter() {
            assert!(a_norm(&id, &(&t * v)).unwrap() < 1e-13);
        }
    }

    #[test]
    fn analysis_of_unbounded_operator() {
        let p = pos_of(real_diag(&[1.0, 0.0]));
        let an = analyze_operator(&p, &shift()).unwrap();
        assert!(!an.a_bounded && !an.adjointable);
        assert!(an.op_a_norm.is_none() && an.sharp.is_none() && an.eigenpairs.is_none());
    }
}
