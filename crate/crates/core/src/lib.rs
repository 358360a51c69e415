//! Cohomology of symplectic quotients `X//G` computed on the torus quotient `X//T`.
//!
//! The torus quotient is modelled by a truncated polynomial ring with a top-monomial
//! integration functional. Root data supplies the Euler classes `e(alpha)` that correct
//! torus-side integrals, Weyl-invariant classes modulo `ann(e)` give the ring of `X//G`,
//! and characteristic classes of split bundles give characteristic numbers and indices.
//! A partition-based Schubert calculus serves as an independent oracle for Grassmannians.

pub mod charclass;
pub mod cli;
pub mod config;
pub mod error;
pub mod presentation;
pub mod quotient;
pub mod ratpoly;
pub mod rootdata;
pub mod schubert;

pub use error::{Error, Result};
