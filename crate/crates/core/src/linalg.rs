//! Dense kernels shared by the analyses. Real-tagged inputs are factorized
//! in real arithmetic so their outputs never pick up imaginary parts.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::field::{CMatrix, CVector, Field, C64};

/// `<x, y>` = sum_i x_i conj(y_i): linear in `x`, conjugate-linear in `y`.
pub(crate) fn inner(x: &CVector, y: &CVector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn to_real(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub(crate) fn hermitian_eigen(m: &CMatrix, field: Field) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let (vals, vecs): (Vec<f64>, CMatrix) = match field {
        Field::Real => {
            let eig = SymmetricEigen::new(to_real(m));
            (eig.eigenvalues.iter().copied().collect(), to_complex(&eig.eigenvectors))
        }
        Field::Complex => {
            let eig = SymmetricEigen::new(m.clone());
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = CMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// Thin singular value decomposition `m = U diag(s) V*`, `s` descending.
pub(crate) struct Svd {
    pub(crate) values: Vec<f64>,
    pub(crate) u: CMatrix,
    pub(crate) v: CMatrix,
}

pub(crate) fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd {
            values: Vec::new(),
            u: CMatrix::zeros(rows, 0),
            v: CMatrix::zeros(cols, 0),
        };
    }
    jacobi_svd(m)
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Used instead of nalgebra's SVD, which returns wrong factors on some
/// rank-deficient inputs.
fn jacobi_svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = CMatrix::identity(cols, cols);
    let tol = f64::EPSILON * rows.max(cols) as f64;
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of gamma, then apply the real
                // rotation that makes the pair orthogonal.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..mat.nrows() {
                        let (xp, xq) = (mat[(i, p)], mat[(i, q)] * phase);
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let k = rows.min(cols);
    let values: Vec<f64> = order[..k].iter().map(|&j| norms[j]).collect();
    let top = values.first().copied().unwrap_or(0.0);
    let mut u = CMatrix::zeros(rows, k);
    let mut filled = 0;
    for (slot, &j) in order[..k].iter().enumerate() {
        if norms[j] > tol * top && norms[j] > 0.0 {
            u.set_column(slot, &w.column(j).unscale(norms[j]));
            filled = slot + 1;
        }
    }
    complete_orthonormal(&mut u, filled);
    let v = CMatrix::from_fn(cols, k, |r, c| v[(r, order[c])]);
    Svd { values, u, v }
}

/// Overwrites columns `from..` of `u` with unit vectors orthogonal to all
/// previous columns, drawn from the standard basis by Gram-Schmidt.
fn complete_orthonormal(u: &mut CMatrix, from: usize) {
    let n = u.nrows();
    let mut next = from;
    let mut e = 0;
    while next < u.ncols() && e < n {
        let mut cand = CVector::zeros(n);
        cand[e] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for j in 0..next {
                let proj = u.column(j).dotc(&cand);
                cand -= u.column(j) * proj;
            }
        }
        let norm = cand.norm();
        if norm > 0.5 {
            u.set_column(next, &cand.unscale(norm));
            next += 1;
        }
        e += 1;
    }
}

/// Orthonormal basis (as columns) of the column space of `m`, with
/// singular values at most `rank_rel * s_max` treated as zero.
pub(crate) fn column_space(m: &CMatrix, rank_rel: f64) -> CMatrix {
    let s = svd(m);
    let rank = numerical_rank(&s.values, rank_rel);
    s.u.columns(0, rank).into_owned()
}

pub(crate) fn numerical_rank(values: &[f64], rank_rel: f64) -> usize {
    let top = values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > rank_rel * top).count()
}

/// Horizontal concatenation.
pub(crate) fn hstack(left: &CMatrix, right: &CMatrix) -> CMatrix {
    debug_assert_eq!(left.nrows(), right.nrows());
    let (n, a, b) = (left.nrows(), left.ncols(), right.ncols());
    CMatrix::from_fn(n, a + b, |r, c| if c < a { left[(r, c)] } else { right[(r, c - a)] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{real_matrix, real_vector};

    #[test]
    fn inner_is_linear_in_first_argument() {
        let i = C64::new(0.0, 1.0);
        let x = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let y = x.clone();
        assert_eq!(inner(&x.scale(2.0).map(|z| z * i), &y), 2.0 * i);
        assert_eq!(inner(&x, &y.map(|z| z * i)), -i);
    }

    #[test]
    fn eigen_sorted_descending() {
        let m = real_matrix(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = hermitian_eigen(&m, Field::Real);
        assert!((vals[0] - 3.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let v0 = vecs.column(0).into_owned();
        assert!((&m * &v0 - v0.scale(3.0)).norm() < 1e-13);
        assert!(vecs.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn svd_handles_empty_and_rank_deficient() {
        let empty = CMatrix::zeros(0, 0);
        assert!(svd(&empty).values.is_empty());
        let m = real_vector(&[1.0, 2.0]) * real_vector(&[3.0, 4.0]).transpose();
        let basis = column_space(&m, 1e-10);
        assert_eq!(basis.ncols(), 1);
    }

    fn cmat(rows: usize, cols: usize, v: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(rows, cols, v.iter().map(|&(re, im)| C64::new(re, im)))
    }

    fn check_svd(m: &CMatrix) {
        let s = svd(m);
        let k = m.nrows().min(m.ncols());
        assert_eq!(s.values.len(), k);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
        let sigma = CMatrix::from_diagonal(&CVector::from_iterator(
            k,
            s.values.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let recon = &s.u * sigma * s.v.adjoint();
        assert!((recon - m).norm() <= 1e-13 * m.norm().max(1.0));
        assert!((s.u.adjoint() * &s.u - CMatrix::identity(k, k)).norm() < 1e-13);
        assert!((s.v.adjoint() * &s.v - CMatrix::identity(k, k)).norm() < 1e-13);
    }

    #[test]
    fn complex_svd_on_rank_one_input() {
        // nalgebra's complex SVD reports 1.7367 for the top singular value.
        let m = cmat(
            3,
            3,
            &[
                (-0.5068650088731611, -0.18335738048519104),
                (0.055278512994300165, 0.5361682125970526),
                (0.47249608255413217, 0.2593829565900148),
                (0.35883877353292554, 0.2443060829791176),
                (0.0639716169629813, -0.4293697238911408),
                (-0.3168372543154549, -0.2967572776682259),
                (0.5231801573265523, 0.49729239810213827),
                (0.22033128231198604, -0.6873655012183585),
                (-0.4401676042467509, -0.5720748957978182),
            ],
        );
        let s = svd(&m);
        assert!((s.values[0] - 3f64.sqrt()).abs() < 1e-13, "{:?}", s.values);
        assert!(s.values[1] < 1e-14);
        check_svd(&m);
        assert_eq!(column_space(&m, 1e-10).ncols(), 1);
    }

    #[test]
    fn complex_svd_shapes() {
        let tall = cmat(3, 2, &[(1.0, 1.0), (0.0, 2.0), (3.0, 0.0), (1.0, -1.0), (0.5, 0.0), (0.0, 0.0)]);
        check_svd(&tall);
        check_svd(&tall.adjoint());
        check_svd(&CMatrix::zeros(2, 3));
        let diag = cmat(2, 2, &[(0.0, 2.0), (0.0, 0.0), (0.0, 0.0), (-3.0, 0.0)]);
        let s = svd(&diag);
        assert_eq!(s.values, vec![3.0, 2.0]);
        check_svd(&diag);
    }
}
