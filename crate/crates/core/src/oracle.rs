//! Brute-force verifiers and random instance generators.
//!
//! The verifiers check the library's closed-form answers against the
//! defining inequalities or against sampling. The generators build valid
//! instances by construction rather than by rejection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::{CMatrix, CVector, DenseMatrix, Field, C64};
use crate::linalg::hermitian_part;
use crate::operator::require_bounded;
use crate::psd::PositiveOperator;
use crate::semi_inner::a_orthogonal;

/// Seed for a reproducible stream of instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub seed: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Independent sub-stream for the `index`-th instance.
    pub fn derive(&self, index: u64) -> RngSpec {
        // splitmix64 finalizer, so neighbouring indices give unrelated seeds
        let mut z = self.seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        RngSpec { seed: z ^ (z >> 31) }
    }
}

/// Standard Gaussian scalar of the field (unit variance over C as well).
pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    match field {
        Field::Real => C64::new(re, 0.0),
        Field::Complex => {
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> CVector {
    CVector::from_iterator(n, (0..n).map(|_| random_scalar(field, rng)))
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, field: Field, rng: &mut R) -> CMatrix {
    CMatrix::from_iterator(rows, cols, (0..rows * cols).map(|_| random_scalar(field, rng)))
}

/// Haar-distributed unitary (orthogonal over R) via QR with phase fixing.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = random_matrix(n, n, field, rng);
    let (mut q, r) = match field {
        Field::Real => {
            let qr = g.map(|z| z.re).qr();
            (qr.q().map(|v| C64::new(v, 0.0)), qr.r().map(|v| C64::new(v, 0.0)))
        }
        Field::Complex => {
            let qr = g.qr();
            (qr.q(), qr.r())
        }
    };
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random `x ∈ R(A)` with `||x||_A = 1`.
pub fn random_range_unit<R: Rng + ?Sized>(pos: &PositiveOperator, rng: &mut R) -> Result<CVector> {
    if pos.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let z = random_vector(pos.rank(), pos.field(), rng);
    let n = z.norm();
    Ok(pos.lift(&z.unscale(n)))
}

/// Random vector of `N(A)` (zero when `A` is invertible).
pub fn random_null<R: Rng + ?Sized>(pos: &PositiveOperator, rng: &mut R) -> CVector {
    let k = pos.null_basis().ncols();
    pos.null_basis() * random_vector(k, pos.field(), rng)
}

/// Checks `x ⊥_A y` through the norm inequality `||x + λy||_A >= ||x||_A`.
///
/// `λ` ranges over `grid_size` real magnitudes in `[-10, 10]` times eight
/// phases (one over R), plus the exact minimizer `-<x, y>_A / ||y||_A^2`.
/// Seminorms are evaluated as `||A^{1/2} v||`, independently of the
/// closed-form test.
pub fn defn_orthogonality_oracle(
    pos: &PositiveOperator,
    x: &CVector,
    y: &CVector,
    grid_size: usize,
) -> Result<bool> {
    let n = pos.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let s = pos.sqrt();
    let (sx, sy) = (s * x, s * y);
    let norm_x = sx.norm();
    let bound = norm_x - pos.tol().eq_rel * (1.0 + norm_x);
    let holds = |lambda: C64| (&sx + &sy * lambda).norm() >= bound;

    let phases: Vec<C64> = match pos.field() {
        Field::Real => vec![C64::new(1.0, 0.0)],
        Field::Complex => (0..8)
            .map(|j| C64::from_polar(1.0, std::f64::consts::PI * j as f64 / 4.0))
            .collect(),
    };
    for k in 0..grid_size {
        let t = if grid_size == 1 {
            0.0
        } else {
            -10.0 + 20.0 * k as f64 / (grid_size - 1) as f64
        };
        if !phases.iter().all(|&p| holds(p * t)) {
            return Ok(false);
        }
    }
    let norm_y = sy.norm();
    if norm_y > pos.tol().rank_rel * pos.lambda_max().sqrt() * y.norm() {
        // <x, y>_A = (A^{1/2} y)* (A^{1/2} x)
        let xy = sy.dotc(&sx);
        if !holds(-xy / (norm_y * norm_y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws `samples` vectors `y ⊥_A x` and checks `Tx ⊥_A Ty` for each.
pub fn sampling_preservation_oracle<R: Rng + ?Sized>(
    pos: &PositiveOperator,
    t: &CMatrix,
    x: &CVector,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    pos.check_vector(x)?;
    require_bounded(pos, t)?;
    if pos.is_degenerate(x) {
        return Err(Error::DegenerateBase);
    }
    let zx = pos.reduce(x);
    let zx = zx.unscale(zx.norm());
    let tx = t * x;
    for _ in 0..samples {
        let w = random_vector(pos.dim(), pos.field(), rng);
        // Project in seminorm coordinates and keep the N(A) part of w. A range
        // part that cancels to rounding level is the zero vector (always the
        // case when rank A = 1).
        let zw = pos.reduce(&w);
        let mut zy = &zw - &zx * zx.dotc(&zw);
        if zy.norm() <= pos.tol().eq_rel * zw.norm() {
            zy.fill(C64::new(0.0, 0.0));
        }
        let null = pos.null_basis();
        let y = pos.lift(&zy) + null * (null.adjoint() * &w);
        if !a_orthogonal(pos, &tx, &(t * y))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(max, min)` of `||Tx||_A` over `samples` random A-unit vectors `x`,
/// each with a random `N(A)` component.
pub fn sampling_norm_oracle<R: Rng + ?Sized>(
    pos: &PositiveOperator,
    t: &CMatrix,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    require_bounded(pos, t)?;
    if pos.rank() == 0 {
        return Err(Error::ZeroRank);
    }
    let mut lower_max: f64 = 0.0;
    let mut upper_min = f64::INFINITY;
    for _ in 0..samples {
        let x = random_range_unit(pos, rng)? + random_null(pos, rng);
        let v = pos.reduce(&(t * x)).norm();
        lower_max = lower_max.max(v);
        upper_min = upper_min.min(v);
    }
    Ok((lower_max, upper_min))
}

/// `G* diag(λ) G` with random unitary `G` and `rank` eigenvalues drawn
/// log-uniformly from `[1e-3, 1e3]`.
pub fn gen_positive<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    field: Field,
    rng: &mut R,
) -> Result<DenseMatrix> {
    if rank > n {
        return Err(Error::BadRank { rank, dim: n });
    }
    let g = random_unitary(n, field, rng);
    let mut lam = CMatrix::zeros(n, n);
    for i in 0..rank {
        let e: f64 = rng.random_range(-3.0..=3.0);
        lam[(i, i)] = C64::new(10f64.powf(e), 0.0);
    }
    let a = hermitian_part(&(g.adjoint() * lam * g));
    DenseMatrix::new(field, a)
}

/// `P M P + (I - P) M (I - P)` for random `M`: maps `N(A)` into itself.
pub fn gen_a_bounded<R: Rng + ?Sized>(pos: &PositiveOperator, rng: &mut R) -> CMatrix {
    let n = pos.dim();
    let m = random_matrix(n, n, pos.field(), rng);
    let p = pos.proj();
    let q = CMatrix::identity(n, n) - p;
    p * &m * p + &q * m * &q
}

/// `M - P M (I - P)` for random `M`: the block of `M` carrying `N(A)` into
/// `R(A)` is removed, which is exactly what A-adjointability requires.
pub fn gen_adjointable<R: Rng + ?Sized>(pos: &PositiveOperator, rng: &mut R) -> CMatrix {
    let n = pos.dim();
    let m = random_matrix(n, n, pos.field(), rng);
    let p = pos.proj();
    let q = CMatrix::identity(n, n) - p;
    &m - p * &m * q
}

/// `scale · U_r Λ^{-1/2} W Λ^{1/2} U_r* + (I - P) M` with random unitary `W`
/// and random `M`, a scalar multiple of an A-isometry with factor `scale`.
pub fn gen_a_isometry<R: Rng + ?Sized>(
    pos: &PositiveOperator,
    rng: &mut R,
    scale: f64,
) -> Result<CMatrix> {
    let r = pos.rank();
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let n = pos.dim();
    let lam = pos.eigvals();
    let mut w = random_unitary(r, pos.field(), rng);
    for i in 0..r {
        for j in 0..r {
            w[(i, j)] *= C64::new(scale * (lam[j] / lam[i]).sqrt(), 0.0);
        }
    }
    let u = pos.range_basis();
    let z = (CMatrix::identity(n, n) - pos.proj()) * random_matrix(n, n, pos.field(), rng);
    Ok(&u * w * u.adjoint() + z)
}
