//! Exact computations with the valuation semigroups of a family of
//! rank-one valuations dominating `k(t)[x, y]_(x, y)`.
//!
//! The crate builds the generating sequence `P_0 = x, P_1 = y,
//! P_{i+1} = P_i^{p_i^2} - (1+t) x^{p_i a_i}`, transports it through the
//! monomial center changes `R_j -> R_{j+1}` and through quadratic transforms,
//! audits every value identity exactly, cross-checks the transforms on
//! explicit polynomials, and issues re-checkable certificates showing that the
//! value semigroup grows after adjoining a root of `u^p - (1+t)`.
//!
//! Modules:
//! - [`exactnum`]: rationals, lexicographic rank-2 values, subgroups of Q and
//!   numerical semigroups.
//! - [`scenario`]: primes, the `a_i` recurrence, the starting state.
//! - [`transform`]: the generating-sequence state machine and its auditor.
//! - [`polyoracle`]: sparse polynomials used as an independent oracle.
//! - [`gapcert`]: semigroup-gap and composite-lift certificates.
//! - [`cli`]: the `valsgp` command-line front end.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod gapcert;
pub mod limits;
pub mod polyoracle;
pub mod scenario;
pub mod transform;

pub use error::{Error, Result};
pub use exactnum::{LexVal, NumSgp, QSubgroup, Rat};
pub use limits::Limits;
pub use scenario::{PrimeSeq, ScenarioConfig};
pub use transform::GenSeqState;
