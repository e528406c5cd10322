//! Resource caps shared by the enumeration and expansion routines.

use std::env;

pub const TERM_CAP_VAR: &str = "VALSGP_TERM_CAP";
pub const DP_CAP_VAR: &str = "VALSGP_DP_CAP";
pub const ENUM_CAP_VAR: &str = "VALSGP_ENUM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of terms in any polynomial produced by the oracle.
    pub term_cap: usize,
    /// Maximum table size for semigroup membership and enumeration.
    pub dp_cap: usize,
    /// Maximum number of exponent tuples visited by the D(i) audit.
    pub enum_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            term_cap: 1_000_000,
            dp_cap: 10_000_000,
            enum_cap: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults overridden by `VALSGP_TERM_CAP`, `VALSGP_DP_CAP` and
    /// `VALSGP_ENUM_CAP` when those are set to positive integers.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = read_var(TERM_CAP_VAR) {
            limits.term_cap = v;
        }
        if let Some(v) = read_var(DP_CAP_VAR) {
            limits.dp_cap = v;
        }
        if let Some(v) = read_var(ENUM_CAP_VAR) {
            limits.enum_cap = v;
        }
        limits
    }
}

fn read_var(name: &str) -> Option<usize> {
    env::var(name).ok()?.trim().parse().ok().filter(|v| *v > 0)
}
