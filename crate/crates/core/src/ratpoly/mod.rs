//! Exact sparse polynomials over `Q` in rings `Q[u_1..u_k]/(u_1^{n_1}, .., u_k^{n_k})`.

mod action;
mod poly;
mod rational;
mod ring;
mod series;

pub use action::{PermutationGroup, SignedPermutation};
pub use poly::{elementary_symmetric, power_sum, SymmetrizeMode, TruncatedPolynomial};
pub use rational::{format_rational, format_rational_latex, parse_rational, Rational};
pub use ring::{Monomial, RingSpec};
pub use series::UnivariateSeries;
