//! Exact sparse multivariate polynomials over the rationals, Gröbner bases,
//! polynomial matrices and rational linear algebra.

mod groebner;
mod linalg;
mod matrix;
mod monomial;
mod order;
mod polynomial;
mod text;
mod vars;

pub use groebner::GroebnerBasis;
pub use linalg::{linear_solve, AffineSolution, LinearSolution};
pub use matrix::PolyMatrix;
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};
pub use polynomial::{int, rat, Polynomial};
pub use text::parse_polynomial;
pub use vars::{default_weight, VarTable, Variable};

pub(crate) use polynomial::format_monomial;

pub type Rational = num::BigRational;
