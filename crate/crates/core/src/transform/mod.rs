//! The generating-sequence state machine.
//!
//! A [`GenSeqState`] records, at a regular local ring `D_j` obtained from
//! `R_l` by `j` quadratic transforms, the values of the parameters `z, w`,
//! the exponents of the relations
//!
//! ```text
//! Q_2     = w^{p c} - (1+t) tau_1^p z^{p e1}                       p = p_{1+l}
//! Q_{i+1} = Q_i^{p_i^2} - (1+t) tau_i^{p_i} z^{p_i e_i} w^{p_i f_i}   p_i = p_{i+l}
//! ```
//!
//! and the values `nu(Q_i)`. Two moves act on it: [`GenSeqState::advance_center`]
//! (`R_l -> R_{l+1}`) and [`GenSeqState::quadratic_step`] (`D_j -> D_{j+1}`).

mod advance;
mod audit;
mod state;
mod step;

pub use advance::{bezout_pair, AdvanceTrace};
pub use audit::{reduce_ratio, AuditCheck, AuditReport, DiFailure, DiReport, IndexEntry};
pub use state::{BezoutPair, GenSeqState, HigherTerm, UnitEntry, UnitFactor};
pub use step::{StepCase, StepDivisor, StepTrace};
