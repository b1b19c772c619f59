//! K_A-sets: finite subsets `D` of the A-unit sphere inside `R(A)` such that
//! preserving A-orthogonality at every point of `D` forces an adjointable
//! operator to be a scalar multiple of an A-isometry.
//!
//! `D` is a K_A-set iff it spans `R(A)` and admits no split `D = D1 ∪ D2`
//! into nonempty parts with `D1 ⊥_A D2`. The second condition is the
//! connectivity of the graph joining non-A-orthogonal vectors. When either
//! condition fails, [`construct_witness`] returns an adjointable operator
//! that preserves A-orthogonality on `D` without being a scalar multiple of
//! an A-isometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{CMatrix, CVector, C64};
use crate::linalg::{column_space, numerical_rank, svd};
use crate::psd::PositiveOperator;
use crate::semi_inner::a_orthogonal;
use crate::union_find::UnionFind;

#[derive(Debug, Clone)]
pub struct OrthoGraph {
    pub vertices: Vec<CVector>,
    /// `adjacency[i][j]` iff `d_i` and `d_j` are not A-orthogonal.
    pub adjacency: Vec<Vec<bool>>,
    pub components: Vec<Vec<usize>>,
}

impl OrthoGraph {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSetReport {
    pub spans: bool,
    pub connected: bool,
    pub is_kset: bool,
    /// Minimality, reported for K_A-sets only.
    pub is_minimal: Option<bool>,
    /// Whether `D` is a basis of `R(A)`.
    pub is_basis: bool,
    /// `(D1, D2)` with `D1 ⊥_A D2`, when the graph is disconnected.
    pub partition_witness: Option<(Vec<usize>, Vec<usize>)>,
    /// Operator preserving A-orthogonality on `D` that is not a scalar
    /// multiple of an A-isometry, when `D` is not a K_A-set.
    #[serde(skip)]
    pub counterexample: Option<CMatrix>,
}

fn validate(pos: &PositiveOperator, d: &[CVector]) -> Result<()> {
    if d.is_empty() {
        return Err(Error::EmptySet);
    }
    let eq = pos.tol().eq_rel;
    for (index, v) in d.iter().enumerate() {
        pos.check_vector(v)?;
        let a_norm = pos.reduce(v).norm();
        if (a_norm - 1.0).abs() > eq {
            return Err(Error::NotAUnit { index, a_norm });
        }
        let residual = pos.projection_residual(v)?;
        if residual > eq * v.norm().max(1.0) {
            return Err(Error::NotInRange { residual });
        }
    }
    Ok(())
}

fn build_graph(pos: &PositiveOperator, d: &[CVector]) -> Result<OrthoGraph> {
    let m = d.len();
    let mut adjacency = vec![vec![false; m]; m];
    let mut uf = UnionFind::new(m);
    for i in 0..m {
        adjacency[i][i] = true;
        for j in (i + 1)..m {
            let edge = !a_orthogonal(pos, &d[i], &d[j])?;
            adjacency[i][j] = edge;
            adjacency[j][i] = edge;
            if edge {
                uf.union(i, j);
            }
        }
    }
    Ok(OrthoGraph {
        vertices: d.to_vec(),
        adjacency,
        components: uf.classes(),
    })
}

/// The A-orthogonality graph of `D`, with components from union-find.
pub fn ortho_graph(pos: &PositiveOperator, d: &[CVector]) -> Result<OrthoGraph> {
    validate(pos, d)?;
    build_graph(pos, d)
}

/// Seminorm coordinates of the vectors, as columns of an `r x |D|` matrix.
fn reduced_columns(pos: &PositiveOperator, d: &[CVector]) -> CMatrix {
    let mut z = CMatrix::zeros(pos.rank(), d.len());
    for (j, v) in d.iter().enumerate() {
        z.set_column(j, &pos.reduce(v));
    }
    z
}

fn span_rank(pos: &PositiveOperator, d: &[CVector]) -> usize {
    let s = svd(&reduced_columns(pos, d));
    numerical_rank(&s.values, pos.tol().rank_rel)
}

/// `(spans, graph)` for an already validated set.
fn verdict(pos: &PositiveOperator, d: &[CVector]) -> Result<(bool, OrthoGraph)> {
    let spans = span_rank(pos, d) == pos.rank();
    Ok((spans, build_graph(pos, d)?))
}

fn is_kset_unchecked(pos: &PositiveOperator, d: &[CVector]) -> Result<bool> {
    if d.is_empty() {
        return Ok(false);
    }
    let (spans, graph) = verdict(pos, d)?;
    Ok(spans && graph.is_connected())
}

fn minimal_unchecked(pos: &PositiveOperator, d: &[CVector]) -> Result<bool> {
    // A spanning connected set stays both when an A-unit vector of R(A) is
    // added, so checking the maximal proper subsets is enough.
    for skip in 0..d.len() {
        let rest: Vec<CVector> = d
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, v)| v.clone())
            .collect();
        if is_kset_unchecked(pos, &rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_kset(pos: &PositiveOperator, d: &[CVector]) -> Result<KSetReport> {
    validate(pos, d)?;
    let (spans, graph) = verdict(pos, d)?;
    let connected = graph.is_connected();
    let is_kset = spans && connected;
    let partition_witness = (!connected).then(|| {
        let first = graph.components[0].clone();
        let rest = graph.components[1..].concat();
        let mut rest = rest;
        rest.sort_unstable();
        (first, rest)
    });
    let is_minimal = if is_kset {
        Some(minimal_unchecked(pos, d)?)
    } else {
        None
    };
    let counterexample = if is_kset {
        None
    } else {
        Some(witness_for(pos, d, spans, &graph))
    };
    Ok(KSetReport {
        spans,
        connected,
        is_kset,
        is_minimal,
        is_basis: spans && d.len() == pos.rank(),
        partition_witness,
        counterexample,
    })
}

pub fn is_minimal_kset(pos: &PositiveOperator, d: &[CVector]) -> Result<bool> {
    validate(pos, d)?;
    Ok(is_kset_unchecked(pos, d)? && minimal_unchecked(pos, d)?)
}

/// Counterexample operator for a set that is not a K_A-set.
///
/// If `D` does not span `R(A)`, the operator is zero on `span D`, the
/// identity on its A-orthogonal complement within `R(A)`, and zero on
/// `N(A)`. Otherwise `D` splits as `D1 ⊥_A D2` and the operator is the
/// identity on `span D1`, zero on its A-orthogonal complement within
/// `R(A)`, and zero on `N(A)`.
pub fn construct_witness(pos: &PositiveOperator, d: &[CVector]) -> Result<CMatrix> {
    validate(pos, d)?;
    let (spans, graph) = verdict(pos, d)?;
    if spans && graph.is_connected() {
        return Err(Error::AlreadyKSet);
    }
    Ok(witness_for(pos, d, spans, &graph))
}

fn witness_for(pos: &PositiveOperator, d: &[CVector], spans: bool, graph: &OrthoGraph) -> CMatrix {
    let r = pos.rank();
    // Work in seminorm coordinates, where ⊥_A on R(A) is Euclidean ⊥.
    let (members, keep_span): (Vec<CVector>, bool) = if !spans {
        (d.to_vec(), false)
    } else {
        (graph.components[0].iter().map(|&i| d[i].clone()).collect(), true)
    };
    let basis = column_space(&reduced_columns(pos, &members), pos.tol().rank_rel);
    let onto_span = &basis * basis.adjoint();
    let q = if keep_span {
        onto_span
    } else {
        CMatrix::identity(r, r) - onto_span
    };
    // T = U_r diag(λ_r)^{-1/2} Q diag(λ_r)^{1/2} U_r*.
    let u = pos.range_basis();
    let lam = pos.eigvals();
    let mut mid = q;
    for i in 0..r {
        for j in 0..r {
            mid[(i, j)] *= C64::new((lam[j] / lam[i]).sqrt(), 0.0);
        }
    }
    &u * mid * u.adjoint()
}
