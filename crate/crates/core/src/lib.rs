//! Exact computer algebra for linear difference equations over elliptic
//! function fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact`]: Gaussian-rational scalars, polynomials, rational functions and
//!   the function field `C(x, y)` of a Weierstrass curve.
//! - [`laurent`]: truncated Laurent series, Weierstrass expansions, the
//!   dilation operators `f(z) -> f(mz)`, membership in `K[z, 1/z, zeta]`, and
//!   series solvers for q-difference equations.
//! - [`isogeny`]: multiplication-by-m pullbacks, division polynomials, the
//!   elements `zeta(mz) - m zeta(z)`, the group law and functions with a
//!   prescribed divisor.
//! - [`divisors`]: discretely supported functions on `C`, the periodicity
//!   solver and the first-order descent decision.
//! - [`diffmod`]: difference systems, gauge transforms, isomonodromy checks
//!   and the order-one verdict.
//! - [`numeval`]: floating-point lattice sums used as an independent check.
//! - [`cli`]: JSON request dispatch behind the `ellipdiff` binary.

pub mod cli;
pub mod diffmod;
pub mod divisors;
pub mod error;
pub mod exact;
pub mod isogeny;
pub mod laurent;
pub mod linalg;
pub(crate) mod modp;
pub mod numeval;

pub use error::{Error, Result};
