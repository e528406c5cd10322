use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::Rat;
use crate::error::{Error, Result};

/// A finitely generated subgroup of Q, stored by its positive generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QSubgroup {
    pub generator: Rat,
}

impl QSubgroup {
    pub fn contains(&self, v: &Rat) -> bool {
        (v / &self.generator).is_integer()
    }

    /// True when `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &QSubgroup) -> bool {
        other.contains(&self.generator)
    }
}

/// The subgroup of Q generated by `gens`.
///
/// With `L` the least common denominator, the generator is
/// `gcd(L * g_1, ..., L * g_n) / L`.
pub fn group_of(gens: &[Rat]) -> Result<QSubgroup> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("empty generator list".into()));
    }
    if let Some(g) = gens.iter().find(|g| !g.is_positive()) {
        return Err(Error::InvalidInput(format!("nonpositive generator {g}")));
    }
    let lcd = gens.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
    let gcd = gens.iter().fold(BigInt::zero(), |acc, g| {
        let scaled = g.numer() * (&lcd / g.denom());
        acc.gcd(&scaled)
    });
    Ok(QSubgroup {
        generator: Rat::from_bigints(gcd, lcd)?,
    })
}

/// The index `[big : small]`.
pub fn index(big: &QSubgroup, small: &QSubgroup) -> Result<BigInt> {
    (&small.generator / &big.generator)
        .to_integer()
        .ok_or_else(|| Error::NotASubgroup {
            big: big.generator.to_string(),
            small: small.generator.to_string(),
        })
}
