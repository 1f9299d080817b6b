//! Analysis of where the Hessian of a planar scalar field is positive
//! definite, and of the convexity of its level curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: scalar fields, exact second-order jets, product and
//!   composition combinators, extreme eigenvalues.
//! - [`poly`]: exact bivariate polynomials over ℚ, symbolic Hessian trace,
//!   determinant and the bordered convexity determinant D(f).
//! - [`region`]: pointwise Hess⁺ membership, boundedness certificates for
//!   the complement, complement scans and h_max.
//! - [`critical`]: multistart Newton search for critical points and values.
//! - [`levelset`]: marching-squares level curves, regularity and convexity
//!   verdicts, first convex level search.

// Index loops read better in the dense numeric kernels, and `!(x > 0.0)`
// is used on purpose so that NaN lands on the rejecting branch.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod critical;
pub mod error;
pub mod field;
pub mod grid;
pub mod levelset;
pub mod poly;
pub mod region;
pub mod spec_text;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Jet2, OuterMap, Point, ScalarField, SymmetricMatrix};
pub use poly::{BivariatePoly, FamilySpec};
