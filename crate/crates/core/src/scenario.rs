//! The concrete data the valuation is built from: the primes different from
//! the characteristic, the integers `a_i`, the starting state at `R_0` and the
//! degrees of the residue-field tower.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::serde_int;
use crate::exactnum::Rat;
use crate::transform::{GenSeqState, HigherTerm};

/// Increasing primes skipping the characteristic; `p(1)` is the first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSeq {
    pub characteristic: u64,
    pub primes: Vec<u64>,
}

impl PrimeSeq {
    /// The `k`-th prime, 1-based.
    pub fn p(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.primes.get(i)).copied()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// `a_1 = p_1 + 1`, `a_{i+1} = p_i p_{i+1} a_i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASeq {
    #[serde(with = "serde_int::vec")]
    pub a: Vec<BigInt>,
}

/// Residue of `P_i^{p_i} / x^{a_i}` has minimal polynomial
/// `u^{p} - (1+t) tau^{p}` over the previous field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPolyDescriptor {
    pub index: usize,
    pub offset: usize,
    pub degree: u64,
}

impl fmt::Display for MinPolyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offset == 0 {
            write!(f, "u^{} - (1+t)", self.degree)
        } else {
            write!(
                f,
                "u^{p} - (1+t)*tau_{{{i},{l}}}^{p}",
                p = self.degree,
                i = self.index,
                l = self.offset
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLedger {
    pub degrees: Vec<u64>,
    pub minpolys: Vec<MinPolyDescriptor>,
}

impl TowerLedger {
    /// Degree of the whole tower over `k(t)`.
    pub fn total_degree(&self) -> BigInt {
        self.degrees.iter().map(|d| BigInt::from(*d)).product()
    }
}

/// Parameters of a run. Read and written as
/// `{"characteristic":0,"prime_count":5,"depth":4,"l":1,"bound":"8/1"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub characteristic: u64,
    pub prime_count: usize,
    /// Generating-sequence elements `Q_1, ..., Q_depth` tracked at `R_l`.
    pub depth: usize,
    pub l: usize,
    pub bound: Rat,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            characteristic: 0,
            prime_count: 5,
            depth: 4,
            l: 1,
            bound: Rat::int(8),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        check_characteristic(self.characteristic)?;
        if self.depth < 2 {
            return Err(Error::InvalidInput(format!(
                "depth must be at least 2, got {}",
                self.depth
            )));
        }
        if self.prime_count < self.l + self.depth {
            return Err(Error::InvalidInput(format!(
                "prime_count {} < l + depth = {}",
                self.prime_count,
                self.l + self.depth
            )));
        }
        if !self.bound.is_positive() {
            return Err(Error::InvalidInput(format!(
                "bound must be positive, got {}",
                self.bound
            )));
        }
        Ok(())
    }

    pub fn primes(&self) -> Result<PrimeSeq> {
        self.validate()?;
        build_primes(self.characteristic, self.prime_count)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_characteristic(characteristic: u64) -> Result<()> {
    if characteristic != 0 && !is_prime(characteristic) {
        return Err(Error::InvalidInput(format!(
            "characteristic must be 0 or prime, got {characteristic}"
        )));
    }
    Ok(())
}

pub fn build_primes(characteristic: u64, count: usize) -> Result<PrimeSeq> {
    check_characteristic(characteristic)?;
    if count == 0 {
        return Err(Error::InvalidInput("prime count must be positive".into()));
    }
    let primes = (2u64..)
        .filter(|&n| n != characteristic && is_prime(n))
        .take(count)
        .collect();
    Ok(PrimeSeq {
        characteristic,
        primes,
    })
}

pub fn build_a_seq(primes: &PrimeSeq, depth: usize) -> Result<ASeq> {
    if depth == 0 || depth > primes.len() {
        return Err(Error::InvalidInput(format!(
            "depth {depth} needs between 1 and {} primes",
            primes.len()
        )));
    }
    let mut a = Vec::with_capacity(depth);
    a.push(BigInt::from(primes.primes[0]) + 1);
    for i in 1..depth {
        let next: BigInt = BigInt::from(primes.primes[i - 1]) * primes.primes[i] * &a[i - 1] + 1;
        a.push(next);
    }
    for (ai, p) in a.iter().zip(&primes.primes) {
        if !ai.gcd(&BigInt::from(*p)).is_one() {
            return Err(Error::Invariant(format!("gcd({ai}, {p}) != 1")));
        }
    }
    Ok(ASeq { a })
}

/// `nu(P_i) = a_i / p_i` with `nu(x) = 1`; index 0 is `nu(x)`.
pub fn p_values(primes: &PrimeSeq, a: &ASeq) -> Vec<Rat> {
    std::iter::once(Rat::one())
        .chain(
            a.a.iter()
                .zip(&primes.primes)
                .map(|(ai, p)| Rat::from_bigints(ai.clone(), BigInt::from(*p)).expect("p > 0")),
        )
        .collect()
}

pub fn tower_ledger(primes: &PrimeSeq, depth: usize) -> Result<TowerLedger> {
    if depth == 0 || depth > primes.len() {
        return Err(Error::InvalidInput(format!(
            "tower depth {depth} needs between 1 and {} primes",
            primes.len()
        )));
    }
    let degrees: Vec<u64> = primes.primes[..depth].to_vec();
    let minpolys = degrees
        .iter()
        .enumerate()
        .map(|(i, &p)| MinPolyDescriptor {
            index: i + 1,
            offset: 0,
            degree: p,
        })
        .collect();
    Ok(TowerLedger { degrees, minpolys })
}

/// The generating-sequence state at `R_0` with `depth` tracked elements.
pub fn initial_state_from_primes(primes: &PrimeSeq, depth: usize) -> Result<GenSeqState> {
    if depth < 1 {
        return Err(Error::InvalidInput("depth must be positive".into()));
    }
    let a = build_a_seq(primes, depth)?;
    let values = p_values(primes, &a);
    let higher = (2..=depth)
        .map(|i| HigherTerm {
            i,
            e: a.a[i - 1].clone(),
            f: BigInt::from(0),
            nu: values[i].clone(),
        })
        .collect();
    Ok(GenSeqState {
        characteristic: primes.characteristic,
        primes: primes.primes.clone(),
        a_seq: a.a.clone(),
        l: 0,
        j: 0,
        nuz: Rat::one(),
        nuw: values[1].clone(),
        c: BigInt::from(primes.primes[0]),
        e1: a.a[0].clone(),
        higher,
        units: Vec::new(),
        bezout: Vec::new(),
    })
}

/// The state at `R_0` for a configuration with `l = 0`.
pub fn initial_state_r0(config: &ScenarioConfig) -> Result<GenSeqState> {
    config.validate()?;
    if config.l != 0 {
        return Err(Error::InvalidInput(format!(
            "initial state needs l = 0, got {}",
            config.l
        )));
    }
    initial_state_from_primes(&config.primes()?, config.depth)
}

/// The state at `R_advance`, obtained by starting at `R_0` with
/// `depth + advance` elements and moving the center `advance` times.
pub fn state_at_center(config: &ScenarioConfig, advance: usize) -> Result<GenSeqState> {
    let mut probe = config.clone();
    probe.l = advance;
    probe.validate()?;
    let primes = probe.primes()?;
    let mut state = initial_state_from_primes(&primes, config.depth + advance)?;
    for _ in 0..advance {
        state = state.advance_center()?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|n| BigInt::from(*n)).collect()
    }

    /// Sieve of Eratosthenes, kept independent of `is_prime`.
    fn sieve(limit: usize) -> Vec<u64> {
        let mut composite = vec![false; limit + 1];
        let mut out = Vec::new();
        for n in 2..=limit {
            if !composite[n] {
                out.push(n as u64);
                for m in (n * n..=limit).step_by(n) {
                    composite[m] = true;
                }
            }
        }
        out
    }

    #[test]
    fn primes_skip_characteristic() {
        assert_eq!(build_primes(0, 4).unwrap().primes, vec![2, 3, 5, 7]);
        assert_eq!(build_primes(2, 3).unwrap().primes, vec![3, 5, 7]);
        assert_eq!(build_primes(0, 1).unwrap().primes, vec![2]);
        let s = sieve(200);
        assert_eq!(build_primes(0, 40).unwrap().primes, s[..40].to_vec());
        let skip7: Vec<u64> = s.iter().copied().filter(|p| *p != 7).take(20).collect();
        assert_eq!(build_primes(7, 20).unwrap().primes, skip7);
    }

    #[test]
    fn bad_characteristic() {
        assert!(matches!(build_primes(4, 3), Err(Error::InvalidInput(_))));
        assert!(matches!(build_primes(1, 3), Err(Error::InvalidInput(_))));
        assert!(matches!(build_primes(0, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn a_recurrence() {
        let p = build_primes(0, 4).unwrap();
        assert_eq!(build_a_seq(&p, 4).unwrap().a, ints(&[3, 19, 286, 10011]));
        assert_eq!(build_a_seq(&p, 1).unwrap().a, ints(&[3]));
        let p2 = build_primes(2, 3).unwrap();
        assert_eq!(build_a_seq(&p2, 2).unwrap().a, ints(&[4, 61]));
        assert!(build_a_seq(&p2, 4).is_err());
    }

    #[test]
    fn values_grow_fast() {
        let p = build_primes(0, 6).unwrap();
        let a = build_a_seq(&p, 6).unwrap();
        let v = p_values(&p, &a);
        for i in 2..=6 {
            let pp = Rat::int(p.primes[i - 2] * p.primes[i - 2]);
            assert!(v[i] > &pp * &v[i - 1], "i = {i}");
        }
    }

    #[test]
    fn initial_state() {
        let cfg = ScenarioConfig {
            characteristic: 0,
            prime_count: 3,
            depth: 3,
            l: 0,
            bound: Rat::int(8),
        };
        let s = initial_state_r0(&cfg).unwrap();
        assert_eq!(s.nuz, Rat::one());
        assert_eq!(s.nuw, Rat::new(3, 2));
        assert_eq!(s.nu_q(2), Some(Rat::new(19, 3)));
        assert_eq!(s.nu_q(3), Some(Rat::new(286, 5)));
        assert_eq!(
            (s.c.clone(), s.e1.clone()),
            (BigInt::from(2), BigInt::from(3))
        );
        assert_eq!(s.higher[0].e, BigInt::from(19));
        assert_eq!(s.higher[1].e, BigInt::from(286));
        assert!(s.units.is_empty());
        // nu(Q_2) > p_1^2 nu(w) = 6
        assert!(Rat::new(19, 3) > Rat::int(4) * Rat::new(3, 2));
        let shifted = ScenarioConfig {
            l: 1,
            prime_count: 4,
            ..cfg
        };
        assert!(initial_state_r0(&shifted).is_err());
    }

    #[test]
    fn tower() {
        let p = build_primes(0, 3).unwrap();
        let t = tower_ledger(&p, 3).unwrap();
        assert_eq!(t.degrees, vec![2, 3, 5]);
        assert_eq!(t.total_degree(), BigInt::from(30));
        assert_eq!(tower_ledger(&p, 1).unwrap().degrees, vec![2]);
        assert_eq!(t.minpolys[2].to_string(), "u^5 - (1+t)");
    }

    #[test]
    fn config_json_and_validation() {
        let cfg = ScenarioConfig::default();
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            s,
            r#"{"characteristic":0,"prime_count":5,"depth":4,"l":1,"bound":"8/1"}"#
        );
        assert_eq!(serde_json::from_str::<ScenarioConfig>(&s).unwrap(), cfg);
        assert!(ScenarioConfig {
            depth: 1,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(ScenarioConfig {
            prime_count: 4,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(ScenarioConfig {
            bound: Rat::zero(),
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(ScenarioConfig {
            characteristic: 9,
            ..cfg
        }
        .validate()
        .is_err());
    }
}
