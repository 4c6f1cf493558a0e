//! Synthetic differential calculus on the computer.
//!
//! * [`expr`]: symbolic scalar expressions, the coefficient ring of everything else.
//! * [`weil`]: Weil algebras (truncated nilpotent algebras); their elements are
//!   arbitrary-order forward-mode dual numbers.
//! * [`morphism`]: plots as algebra morphisms, tangent vectors, Weil bundles.
//! * [`jet`]: jet coordinates, prolongation and total derivatives.
//! * [`bicomplex`]: the variational bicomplex of local forms.
//! * [`variational`]: Euler-Lagrange and Jacobi operators, actions, perturbative expansion.

pub mod bicomplex;
pub mod cli;
pub mod expr;
pub mod jet;
pub mod json;
pub mod morphism;
pub mod random;
pub mod variational;
pub mod weil;

pub use expr::{parse, Expr};
