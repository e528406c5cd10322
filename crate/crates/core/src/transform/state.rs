use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{serde_int, Rat};

/// Exponents and value attached to `Q_i`, `i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigherTerm {
    pub i: usize,
    #[serde(with = "serde_int")]
    pub e: BigInt,
    #[serde(with = "serde_int")]
    pub f: BigInt,
    pub nu: Rat,
}

/// `y~_var ^ exp`; unit variable `var` is introduced by the move to `R_var`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitFactor {
    pub var: usize,
    #[serde(with = "serde_int")]
    pub exp: BigInt,
}

/// The unit `tau_{i,l}` as a monomial in the unit variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitEntry {
    pub i: usize,
    pub monomial: Vec<UnitFactor>,
}

/// Positive solution of `p b - e1 a = 1` used for the move to `R_center`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutPair {
    pub center: usize,
    #[serde(with = "serde_int")]
    pub a: BigInt,
    #[serde(with = "serde_int")]
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSeqState {
    pub characteristic: u64,
    pub primes: Vec<u64>,
    #[serde(with = "serde_int::vec")]
    pub a_seq: Vec<BigInt>,
    pub l: usize,
    pub j: usize,
    pub nuz: Rat,
    pub nuw: Rat,
    #[serde(with = "serde_int")]
    pub c: BigInt,
    #[serde(with = "serde_int")]
    pub e1: BigInt,
    /// Entries for `i = 2, ..., depth`, in order.
    pub higher: Vec<HigherTerm>,
    /// `tau_{i,l}` for `i = 1, ..., depth`; empty at `R_0` where every unit is 1.
    pub units: Vec<UnitEntry>,
    pub bezout: Vec<BezoutPair>,
}

impl GenSeqState {
    /// Number of tracked elements `Q_1, ..., Q_depth`.
    pub fn depth(&self) -> usize {
        self.higher.len() + 1
    }

    /// `p_k`, 1-based.
    pub fn prime(&self, k: usize) -> Result<u64> {
        k.checked_sub(1)
            .and_then(|i| self.primes.get(i))
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("prime p_{k} is beyond the prime list")))
    }

    /// `p_{i+l}`.
    pub fn p_at(&self, i: usize) -> Result<BigInt> {
        self.prime(i + self.l).map(BigInt::from)
    }

    pub fn nu_q(&self, i: usize) -> Option<Rat> {
        match i {
            0 => Some(self.nuz.clone()),
            1 => Some(self.nuw.clone()),
            _ => self.higher.get(i - 2).map(|h| h.nu.clone()),
        }
    }

    /// `nu(Q_0), ..., nu(Q_depth)`.
    pub fn values(&self) -> Vec<Rat> {
        (0..=self.depth()).filter_map(|i| self.nu_q(i)).collect()
    }

    pub fn tau(&self, i: usize) -> &[UnitFactor] {
        self.units
            .iter()
            .find(|u| u.i == i)
            .map(|u| u.monomial.as_slice())
            .unwrap_or(&[])
    }

    /// Standard form at a center `R_l`: `c = p_{1+l}` and every `f_i = 0`.
    pub fn is_standard(&self) -> bool {
        self.p_at(1).is_ok_and(|p| p == self.c)
            && self.higher.iter().all(|h| h.f == BigInt::from(0))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let state: GenSeqState = serde_json::from_str(s)?;
        state.check_shape()?;
        Ok(state)
    }

    /// Structural sanity of deserialized data; value identities are left to
    /// the auditor.
    pub fn check_shape(&self) -> Result<()> {
        for (k, h) in self.higher.iter().enumerate() {
            if h.i != k + 2 {
                return Err(Error::InvalidInput(format!(
                    "higher term {} out of order at position {k}",
                    h.i
                )));
            }
        }
        if !self.nuz.is_positive() || !self.nuw.is_positive() {
            return Err(Error::InvalidInput(
                "parameter values must be positive".into(),
            ));
        }
        if self.primes.len() < self.l + self.depth() {
            return Err(Error::InvalidInput(format!(
                "{} primes cannot cover depth {} at offset {}",
                self.primes.len(),
                self.depth(),
                self.l
            )));
        }
        Ok(())
    }
}
