//! Instance generators and brute-force oracles shared by the integration
//! tests. Oracles here evaluate the semi-inner product as `y* A x` on the
//! stored matrix, not through the library's seminorm coordinates.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use semihilbert::field::{CMatrix, CVector, Field, Tolerances, C64};
use semihilbert::oracle::{gen_positive, random_matrix, random_unitary, random_vector, RngSpec};
use semihilbert::{analyze_positive, PositiveOperator};

pub fn rng(seed: u64) -> ChaCha8Rng {
    RngSpec::new(seed).rng()
}

pub fn random_field(rng: &mut ChaCha8Rng) -> Field {
    if rng.random_bool(0.5) {
        Field::Real
    } else {
        Field::Complex
    }
}

/// Random `A` with `n` in `1..=max_n` and rank in `min_rank.min(n)..=n`.
pub fn random_pos(rng: &mut ChaCha8Rng, max_n: usize, min_rank: usize) -> PositiveOperator {
    let n = rng.random_range(1..=max_n);
    let rank = rng.random_range(min_rank.min(n)..=n);
    let field = random_field(rng);
    pos_with(rng, n, rank, field)
}

pub fn pos_with(rng: &mut ChaCha8Rng, n: usize, rank: usize, field: Field) -> PositiveOperator {
    let a = gen_positive(n, rank, field, rng).unwrap();
    let pos = analyze_positive(&a, Tolerances::default()).unwrap();
    assert_eq!(pos.rank(), rank);
    pos
}

/// `<x, y>_A = y* A x` on the stored matrix.
pub fn raw_inner(pos: &PositiveOperator, x: &CVector, y: &CVector) -> C64 {
    y.dotc(&(pos.a() * x))
}

pub fn raw_a_norm(pos: &PositiveOperator, x: &CVector) -> f64 {
    raw_inner(pos, x, x).re.max(0.0).sqrt()
}

/// A-orthonormal basis of `R(A)` (columns), randomly rotated.
pub fn a_orthonormal_basis(pos: &PositiveOperator, rng: &mut ChaCha8Rng) -> CMatrix {
    let r = pos.rank();
    let q = random_unitary(r, pos.field(), rng);
    let mut e = CMatrix::zeros(pos.dim(), r);
    for j in 0..r {
        e.set_column(j, &pos.lift(&q.column(j).into_owned()));
    }
    e
}

/// Normalizes a vector of `R(A)` to A-seminorm one.
pub fn a_normalize(pos: &PositiveOperator, v: &CVector) -> CVector {
    v.unscale(pos.reduce(v).norm())
}

/// Random A-unit combination of the given basis columns.
fn combo(pos: &PositiveOperator, e: &CMatrix, cols: &[usize], rng: &mut ChaCha8Rng) -> CVector {
    let mut v = CVector::zeros(pos.dim());
    for &j in cols {
        let c = random_vector(1, pos.field(), rng)[0];
        v += e.column(j) * c;
    }
    a_normalize(pos, &v)
}

/// Random finite set of A-unit vectors in `R(A)` of size `1..=max_len`,
/// mixing generic sets, A-orthogonal block structures (with an optional
/// bridging vector) and span-deficient sets.
pub fn random_set(pos: &PositiveOperator, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<CVector> {
    let r = pos.rank();
    let e = a_orthonormal_basis(pos, rng);
    let all: Vec<usize> = (0..r).collect();
    let m = rng.random_range(1..=max_len);
    match rng.random_range(0..4) {
        0 => (0..m).map(|_| combo(pos, &e, &all, rng)).collect(),
        1 | 2 if r >= 2 => {
            let groups = rng.random_range(2..=r.min(3));
            let label: Vec<usize> = (0..r).map(|i| i % groups).collect();
            let mut out: Vec<CVector> = (0..m)
                .map(|_| {
                    let g = rng.random_range(0..groups);
                    let cols: Vec<usize> = (0..r).filter(|&i| label[i] == g).collect();
                    if rng.random_bool(0.3) {
                        let j = cols[rng.random_range(0..cols.len())];
                        combo(pos, &e, &[j], rng)
                    } else {
                        combo(pos, &e, &cols, rng)
                    }
                })
                .collect();
            if rng.random_bool(0.3) && out.len() < max_len {
                out.push(combo(pos, &e, &all, rng));
            }
            out
        }
        _ => {
            let k = rng.random_range(1..=r.max(2) - 1).min(r);
            let cols: Vec<usize> = (0..k).collect();
            (0..m).map(|_| combo(pos, &e, &cols, rng)).collect()
        }
    }
}

/// Independent rank of `A [d_1 ... d_m]` compared against `rank A`.
pub fn spans_oracle(pos: &PositiveOperator, d: &[CVector]) -> bool {
    if d.len() < pos.rank() {
        return false;
    }
    let mut m = CMatrix::zeros(pos.dim(), d.len());
    for (j, v) in d.iter().enumerate() {
        m.set_column(j, &(pos.a() * v));
    }
    numerical_rank(&m) == pos.rank()
}

pub fn numerical_rank(m: &CMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let top = s.max();
    s.iter().filter(|&&v| v > 1e-9 * top && v > 0.0).count()
}

/// `orth[i][j]` iff `|<d_i, d_j>_A| <= 1e-8` (inputs are A-unit).
pub fn orth_matrix(pos: &PositiveOperator, d: &[CVector]) -> Vec<Vec<bool>> {
    let m = d.len();
    let mut out = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            out[i][j] = raw_inner(pos, &d[i], &d[j]).norm() <= 1e-8;
        }
    }
    out
}

/// Number of nontrivial bipartitions `D1 ∪ D2` with `D1 ⊥_A D2`, found by
/// enumerating all `2^{m-1} - 1` of them.
pub fn orthogonal_bipartitions(orth: &[Vec<bool>]) -> usize {
    let m = orth.len();
    if m < 2 {
        return 0;
    }
    let last = m - 1;
    let mut found = 0;
    // D1 is a nonempty subset of the first m - 1 elements; D2 holds the rest.
    for mask in 1u32..(1 << last) {
        let side = |i: usize| i < last && mask & (1 << i) != 0;
        let split = (0..m).all(|i| (0..m).all(|j| side(i) == side(j) || orth[i][j]));
        if split {
            found += 1;
        }
    }
    found
}

/// Connectivity of the non-orthogonality graph restricted to `mask`.
pub fn connected_subset(orth: &[Vec<bool>], mask: u32) -> bool {
    let members: Vec<usize> = (0..orth.len()).filter(|&i| mask & (1 << i) != 0).collect();
    let Some(&start) = members.first() else {
        return false;
    };
    let mut seen = 1u32 << start;
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for &j in &members {
            if seen & (1 << j) == 0 && !orth[i][j] {
                seen |= 1 << j;
                stack.push(j);
            }
        }
    }
    seen == mask
}

pub fn kset_oracle(pos: &PositiveOperator, d: &[CVector]) -> bool {
    spans_oracle(pos, d) && orthogonal_bipartitions(&orth_matrix(pos, d)) == 0
}

/// Minimality by checking every proper nonempty subset.
pub fn minimal_oracle(pos: &PositiveOperator, d: &[CVector]) -> bool {
    let m = d.len();
    let orth = orth_matrix(pos, d);
    let full = (1u32 << m) - 1;
    if !(spans_oracle(pos, d) && connected_subset(&orth, full)) {
        return false;
    }
    for mask in 1..full {
        if (mask.count_ones() as usize) < pos.rank() || !connected_subset(&orth, mask) {
            continue;
        }
        let sub: Vec<CVector> = (0..m)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| d[i].clone())
            .collect();
        if spans_oracle(pos, &sub) {
            return false;
        }
    }
    true
}

/// `||T*ATx - cAx|| / ((||T*AT|| + ||A||) ||x||)` on the stored matrix.
pub fn factor_residual(pos: &PositiveOperator, t: &CMatrix, x: &CVector, c: f64) -> f64 {
    let a = pos.a();
    let gram = t.adjoint() * a * t;
    let w = &gram * x - (a * x) * C64::new(c, 0.0);
    w.norm() / ((gram.norm() + a.norm()) * x.norm())
}

/// `||T^♯T - k^2 P|| / max(1, k^2)` with `T^♯ = A†T*A` formed explicitly
/// and `k^2 = tr(T^♯T) / rank A`.
pub fn raw_isometry_defect(pos: &PositiveOperator, t: &CMatrix) -> f64 {
    let g = pos.pinv() * t.adjoint() * pos.a() * t;
    let k2 = g.trace().re / pos.rank() as f64;
    (&g - pos.proj() * C64::new(k2, 0.0)).norm() / k2.max(1.0)
}

/// `U_r diag(λ_r)^{-1/2} C diag(λ_r)^{1/2} U_r* + (I - P) M`: an adjointable
/// operator whose compression to `R(A)` in seminorm coordinates is `C`.
pub fn operator_from_compression(
    pos: &PositiveOperator,
    c: &CMatrix,
    rng: &mut ChaCha8Rng,
) -> CMatrix {
    let n = pos.dim();
    let r = pos.rank();
    let lam = pos.eigvals();
    let mut mid = c.clone();
    for i in 0..r {
        for j in 0..r {
            mid[(i, j)] *= C64::new((lam[j] / lam[i]).sqrt(), 0.0);
        }
    }
    let u = pos.range_basis();
    let z = (CMatrix::identity(n, n) - pos.proj()) * random_matrix(n, n, pos.field(), rng);
    &u * mid * u.adjoint() + z
}
