//! Weil algebras: finite presentations of truncated nilpotent algebras.
//!
//! A [`WeilAlgebra`] is `ℝ[ε1..εm]` modulo `(ε)^(l+1)` and optional extra
//! relations, reduced once to a monomial basis by exact row reduction.
//! [`WeilElement`]s are the numbers of higher-order forward-mode AD:
//! [`taylor_extend`] pushes an expression through nilpotent arguments.
//!
//! ```
//! use cahiers::weil::{taylor_extend, WeilAlgebra, WeilElement};
//!
//! let d = WeilAlgebra::dual_numbers();
//! let x = WeilElement::parse(&d, "3 + e1").unwrap();
//! let y = taylor_extend(&cahiers::parse("x^2").unwrap(), &["x"], &[x]).unwrap();
//! assert_eq!(y.to_string(), "9 + 6*e1");
//! ```

mod algebra;
mod element;
mod kaehler;
pub mod linalg;
pub mod monomial;
mod tangent;
mod taylor;

use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub use algebra::WeilAlgebra;
pub use element::{Coeffs, Mode, Scalar, WeilElement};
pub use kaehler::{KaehlerForm, KaehlerModule};
pub use monomial::{Monomial, Poly};
pub use tangent::{form_to_tangent_function, TangentFunction, TangentSlice};
pub use taylor::{taylor_extend, taylor_extend_in};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeilError {
    #[error("a Weil algebra needs at least one generator")]
    NoGenerators,
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("relation `{0}` has a nonzero constant term")]
    ConstantTerm(String),
    #[error("invalid algebra spec `{0}`; expected D(m,l) or D(m,l);rel=<poly>,...")]
    Spec(String),
    #[error("not a polynomial in the generators: {0}")]
    NotPolynomial(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("elements of different algebras: {0} and {1}")]
    AlgebraMismatch(String, String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error(transparent)]
    Domain(#[from] EvalError),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
