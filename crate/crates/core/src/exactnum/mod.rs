//! Exact arithmetic for valuation values.
//!
//! Values of the rank-one valuation live in [`Rat`]; values of the rank-two
//! composite valuation live in [`LexVal`]. Finitely generated subgroups of Q
//! are cyclic and are stored as a single positive generator ([`QSubgroup`]);
//! finitely generated semigroups of nonnegative rationals are decided exactly
//! by scaling to integers and a shortest-path table over residues
//! ([`NumSgp`]).

mod group;
mod lex;
mod rat;
mod semigroup;
pub mod serde_int;

pub use group::{group_of, index, QSubgroup};
pub use lex::LexVal;
pub use rat::Rat;
pub use semigroup::{sgp_enumerate, sgp_member, AperyTable, NumSgp};
