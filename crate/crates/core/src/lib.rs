//! Binary linear codes from trace-based defining sets over
//! `F_q = GF(2^phi(l^m))`.
//!
//! The crate builds the codes `C_D` with
//! `D = {(x, y) != (0, 0) : Tr(a x^((q-1)/l^m) + b y) = 0}`, computes their
//! weight distributions and generalized Hamming weights both exhaustively
//! and from closed forms, and cross-checks the two.

pub mod codegen;
pub mod error;
pub mod expsum;
pub mod field;
pub mod ghw;
pub mod linalg;
pub mod numtheory;
pub mod subspace;
pub mod verify;
pub mod walsh;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use numtheory::{Gf2Poly, Params};

/// Exact rational arithmetic for closed-form evaluation.
pub type Rational = num_rational::Ratio<i128>;

/// Convert an integral rational to `i64`.
pub(crate) fn rational_to_int(r: Rational) -> Option<i64> {
    r.is_integer().then(|| i64::try_from(r.to_integer()).ok()).flatten()
}
