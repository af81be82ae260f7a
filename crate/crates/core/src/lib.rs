//! Chern-connection geometry of explicitly given Hermitian manifolds.
//!
//! The crate computes the torsion and curvature of the Chern connection, the
//! Ricci-type traces `k`, `k*`, `s`, the torsion-quadratic tensor `t` and
//! `H = k − k* − ½t` on a single-chart model of a compact Hermitian manifold,
//! and checks the Bochner-type integral identities of balanced geometry on
//! quadrature grids. See the guide in `book/` for conventions.

pub mod error;
pub mod expr;
pub mod fields;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod manifold;
pub mod report;
pub mod verify;

pub use error::{ExprError, ModelError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    pub mod conventions {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    pub mod expressions {}
    #[doc = include_str!("../../../book/src/manifolds.md")]
    pub mod manifolds {}
    #[doc = include_str!("../../../book/src/balanced.md")]
    pub mod balanced {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/identities.md")]
    pub mod identities {}
    #[doc = include_str!("../../../book/src/theorems.md")]
    pub mod theorems {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
