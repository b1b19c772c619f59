//! Operator theory on finite-dimensional semi-Hilbert spaces.
//!
//! A positive semidefinite matrix `A` induces the semi-inner product
//! `<x, y>_A = <Ax, y>` and the seminorm `||x||_A`. This crate computes
//! A-adjoints, A-operator norms and where they are attained, pointwise and
//! directional preservation of A-orthogonality, A-isometry classification,
//! and K_A-sets together with counterexample operators when a set fails to
//! be one.
//!
//! Everything is driven from a [`PositiveOperator`], which validates `A` and
//! caches its spectral data.

pub mod error;
pub mod field;
pub mod io;
pub mod kset;
mod linalg;
pub mod operator;
pub mod oracle;
pub mod preservation;
pub mod psd;
pub mod semi_inner;
mod union_find;

pub use error::{Error, Result};
pub use field::{CMatrix, CVector, DenseMatrix, Field, Tolerances, C64};
pub use kset::{construct_witness, is_kset, is_minimal_kset, ortho_graph, KSetReport, OrthoGraph};
pub use operator::{
    a_adjoint, a_eigenpairs, a_null_space, admits_a_adjoint, analyze_operator,
    attainment_subspaces, is_a_bounded, operator_a_norm, operator_min_a_norm, AEigenPair,
    Attainment, OperatorAnalysis,
};
pub use preservation::{
    a_eigen_test, classify_cone_map, isometry_classify, preserves_at, preserves_directionally_at,
    preserves_everywhere, ConeMapping, IsometryKind, IsometryVerdict, PreservationReport,
};
pub use psd::{analyze_positive, projection_residual, PositiveOperator};
pub use semi_inner::{
    a_inner, a_norm, a_orthogonal, cone_membership, global_cone_membership, ConeMembership,
    Direction, GlobalConeMembership,
};
