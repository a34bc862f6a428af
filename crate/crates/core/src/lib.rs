//! Exact algebra of geometries with parallel skew torsion.
//!
//! The crate is organised bottom-up: [`scalar`] and [`linalg`] provide exact
//! arithmetic, [`exterior`] the multilinear algebra of forms, [`liealg`] Lie
//! subalgebras of `so(n)`, [`reductive`] invariant connections on reductive
//! models, [`models`] the concrete catalog, [`splitting`] canonical splittings
//! and [`verify`] the named check suites driven by the CLI.

pub mod error;
pub mod exterior;
pub mod liealg;
pub mod models;
pub mod linalg;
pub mod reductive;
pub mod scalar;
pub mod splitting;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
pub use scalar::{Mode, Quad, Scalar, Q, Q2, Q3, Q5};
