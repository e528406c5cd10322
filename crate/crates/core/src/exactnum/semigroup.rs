use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Rat;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// The semigroup (containing zero) generated by finitely many positive
/// rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumSgp {
    pub generators: Vec<Rat>,
    /// Least common denominator of the generators.
    #[serde(with = "super::serde_int")]
    pub scale: BigInt,
    /// `scale * g` for every generator `g`.
    #[serde(with = "super::serde_int::vec")]
    pub scaled_gens: Vec<BigInt>,
}

/// Least element of the scaled semigroup in each residue class modulo the
/// smallest reduced generator.
///
/// Elements of the scaled semigroup are multiples of `gcd`; after dividing by
/// `gcd`, a number `n` is a member iff `n >= least[n mod modulus]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperyTable {
    pub gcd: BigInt,
    pub modulus: u64,
    pub least: Vec<u128>,
}

impl NumSgp {
    pub fn new(generators: Vec<Rat>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("semigroup needs a generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| !g.is_positive()) {
            return Err(Error::InvalidInput(format!("nonpositive generator {g}")));
        }
        let scale = generators
            .iter()
            .fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
        let scaled_gens = generators
            .iter()
            .map(|g| g.numer() * (&scale / g.denom()))
            .collect();
        Ok(NumSgp {
            generators,
            scale,
            scaled_gens,
        })
    }

    /// `scale * v` when that is an integer.
    pub fn scaled(&self, v: &Rat) -> Option<BigInt> {
        (v * &self.scale).to_integer()
    }

    /// Shortest paths over residues modulo the smallest reduced generator.
    pub fn apery(&self, limits: &Limits) -> Result<AperyTable> {
        let gcd = self
            .scaled_gens
            .iter()
            .fold(BigInt::zero(), |acc, g| acc.gcd(g));
        let reduced: Vec<u64> = self
            .scaled_gens
            .iter()
            .map(|g| {
                (g / &gcd)
                    .to_u64()
                    .ok_or_else(|| Error::Resource(format!("scaled generator {g} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?;
        let modulus = *reduced.iter().min().expect("nonempty");
        if modulus as u128 > limits.dp_cap as u128 {
            return Err(Error::Resource(format!(
                "residue table of size {modulus} exceeds cap {}",
                limits.dp_cap
            )));
        }
        let m = modulus as usize;
        let mut least = vec![u128::MAX; m];
        least[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u128, 0usize)));
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > least[r] {
                continue;
            }
            for &g in &reduced {
                let nd = d + g as u128;
                let nr = (r + (g % modulus) as usize) % m;
                if nd < least[nr] {
                    least[nr] = nd;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        Ok(AperyTable {
            gcd,
            modulus,
            least,
        })
    }

    pub fn member(&self, v: &Rat, limits: &Limits) -> Result<bool> {
        if v.is_negative() {
            return Err(Error::InvalidInput(format!("negative value {v}")));
        }
        let Some(n) = self.scaled(v) else {
            return Ok(false);
        };
        let table = self.apery(limits)?;
        Ok(table.contains(&n))
    }

    /// All elements `<= bound`, ascending.
    pub fn enumerate(&self, bound: &Rat, limits: &Limits) -> Result<Vec<Rat>> {
        if !bound.is_positive() {
            return Err(Error::InvalidInput(format!("nonpositive bound {bound}")));
        }
        let table = self.apery(limits)?;
        let top = (bound * &self.scale).floor() / &table.gcd;
        let top = top
            .to_u128()
            .filter(|t| *t < limits.dp_cap as u128)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "enumeration up to {bound} exceeds cap {}",
                    limits.dp_cap
                ))
            })?;
        let m = table.modulus as u128;
        Ok((0..=top)
            .filter(|n| table.least[(n % m) as usize] <= *n)
            .map(|n| {
                Rat::from_bigints(BigInt::from(n) * &table.gcd, self.scale.clone())
                    .expect("scale is positive")
            })
            .collect())
    }
}

impl AperyTable {
    /// Membership of an integer in the scaled semigroup.
    pub fn contains(&self, n: &BigInt) -> bool {
        if n < &BigInt::zero() || !n.is_multiple_of(&self.gcd) {
            return false;
        }
        let n = n / &self.gcd;
        let r = (&n % self.modulus).to_usize().expect("residue fits");
        BigInt::from(self.least[r]) <= n
    }
}

pub fn sgp_member(s: &NumSgp, v: &Rat) -> Result<bool> {
    s.member(v, &Limits::from_env())
}

pub fn sgp_enumerate(s: &NumSgp, bound: &Rat) -> Result<Vec<Rat>> {
    s.enumerate(bound, &Limits::from_env())
}
