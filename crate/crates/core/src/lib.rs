//! Exact invariants of Z^d-actions by automorphisms of the n-torus.
//!
//! Matrices act on integer row vectors from the right throughout.

pub mod action;
pub mod centralizer;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod format;
pub mod linalg;
pub mod numberfield;
pub mod numeric;
pub mod poly;
pub mod report;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{IntMatrix, RatMatrix};
pub use poly::{IntPoly, RatPoly};
