//! Brute-force polynomial oracle: the generating sequence written out as
//! explicit sparse polynomials, exact monomial substitution and division,
//! and the discriminant of `u^p - (1+t)` from a resultant.

mod chain;
mod coeff;
mod disc;
mod sparse;

pub use chain::{
    build_p, template_from, template_polys, template_vars, verify_chain, ChainReport,
    IdentityCheck, IdentityKind,
};
pub use coeff::{format_tpoly, CoeffField, TPoly};
pub use disc::{discriminant_check, resultant, DiscReport};
pub use sparse::{format_monomial, Exponents, SparsePoly, Substitution};
