//! Exact scalar, polynomial, rational-function and elliptic-function-field arithmetic.

pub mod ellfn;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use ellfn::{ell_arith, ell_derive, ell_is_constant, ArithKind, CurveParams, EllFn, EllFnRepr};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use scalar::{rat, rat_int, Rational, Scalar};
