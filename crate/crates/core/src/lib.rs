//! Exact mean values of products of two and three Dirichlet L-functions at
//! positive integers.
//!
//! Every mean value is an exact rational multiple of a power of π. This crate
//! evaluates those values three independent ways:
//!
//! * closed forms built from periodic Bernoulli functions, Möbius sums and
//!   Jordan totients ([`meanvalues`]),
//! * exact Möbius–Bernoulli lattice sums that the closed forms rewrite
//!   ([`meanvalues::v2_lattice`], [`meanvalues::v3_lattice`]),
//! * a brute-force floating-point sum over the full character group
//!   ([`oracle`]).
//!
//! [`suites`] bundles the parameter sweeps that check all three agree.

pub mod arith;
pub mod bernoulli;
pub mod characters;
mod error;
pub mod lvalues;
pub mod meanvalues;
pub mod oracle;
pub mod suites;

pub use bernoulli::Rational;
pub use error::{Error, Result};
pub use lvalues::ComplexApprox;
pub use meanvalues::PiValue;
