//! Jet coordinates over a chart: multi-indices, prolongation, total
//! derivatives and vector fields on the jet bundle.

mod context;
mod field;
mod index;

use thiserror::Error;

use crate::expr::{Binding, ParseError};

pub use context::{JetContext, Prolongation, Section};
pub(crate) use context::split_assignments;
pub use field::{ev_pushforward, prolong_evolutionary, JetTangent, JetVectorField};
pub use index::{JetVar, MultiIndex};

/// Functions on the jet bundle are ordinary expressions whose variables are
/// coordinates and jet variables of a [`JetContext`].
pub type JetExpr = crate::expr::Expr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("coordinate names must be single letters, got `{0}`")]
    InvalidCoordinate(String),
    #[error("invalid field name `{0}`; use letters and digits without `_`")]
    InvalidField(String),
    #[error("name `{0}` declared twice")]
    Duplicate(String),
    #[error("`{0}` is neither a coordinate nor a jet variable")]
    UnknownVariable(String),
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("needs jet order {needed}, only {available} available")]
    OrderShortfall { needed: usize, available: usize },
    #[error("invalid section assignment `{0}`; expected <field>=<expr>")]
    Section(String),
    #[error("chain rule fails: residue {residue} is {value} at {binding:?}")]
    ChainRule { residue: String, binding: Binding, value: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}
