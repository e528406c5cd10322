use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::state::{BezoutPair, GenSeqState, HigherTerm, UnitEntry, UnitFactor};
use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// Result of moving the center `R_l -> R_{l+1}`.
///
/// With `p = p_{1+l}`, `e1 = a_{1,l}` and Bezout pair `(a, b)`, the
/// substitution is `x_l = x'^p y~^a`, `y_l = x'^e1 y~^b`; the new element
/// `Q'_i` is the image of `Q_{i+1}` divided by `x'^{divisors[i-1]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvanceTrace {
    pub state: GenSeqState,
    pub bezout: BezoutPair,
    pub divisors: Vec<BigInt>,
    /// Unit variable introduced at the new center.
    pub unit_var: usize,
}

/// Minimal positive `(a, b)` with `p b - e a = 1`; requires `gcd(p, e) = 1`.
pub fn bezout_pair(p: &BigInt, e: &BigInt) -> Result<(BigInt, BigInt)> {
    if !p.is_positive() || !e.is_positive() {
        return Err(Error::InvalidInput(format!(
            "Bezout inputs must be positive: {p}, {e}"
        )));
    }
    let ext = e.extended_gcd(p);
    if !ext.gcd.is_one() {
        return Err(Error::Invariant(format!("gcd({p}, {e}) != 1")));
    }
    // ext.x * e = 1 (mod p), so a = -ext.x (mod p) gives e a = -1.
    let mut a = (-ext.x).mod_floor(p);
    if a.is_zero() {
        a = p.clone();
    }
    let b = (BigInt::one() + e * &a) / p;
    debug_assert_eq!(p * &b - e * &a, BigInt::one());
    Ok((a, b))
}

fn sq(n: &BigInt) -> BigInt {
    n * n
}

impl GenSeqState {
    pub fn advance_center(&self) -> Result<GenSeqState> {
        self.advance_center_traced().map(|t| t.state)
    }

    pub fn advance_center_traced(&self) -> Result<AdvanceTrace> {
        let depth = self.depth();
        if depth < 2 {
            return Err(Error::NotACenter(
                "need nu(Q_2) to form the next parameter".into(),
            ));
        }
        if !self.is_standard() {
            return Err(Error::NotACenter(format!(
                "state at l = {}, j = {} is not in standard form (c = {}, f = {:?})",
                self.l,
                self.j,
                self.c,
                self.higher
                    .iter()
                    .map(|h| h.f.to_string())
                    .collect::<Vec<_>>()
            )));
        }
        let l = self.l;
        let p1 = self.p_at(1)?;
        let (ba, bb) = bezout_pair(&p1, &self.e1)?;
        let nux = &self.nuz / Rat::from(p1.clone());

        // Divisor of Q_{i+1}: x'^{e1 p_{1+l}^2 ... p_{i+l}^2}, i = 1 .. depth-1.
        let mut divisors = Vec::with_capacity(depth - 1);
        let mut acc = self.e1.clone();
        for i in 1..depth {
            acc *= sq(&self.p_at(i)?);
            divisors.push(acc.clone());
        }

        // New values nu(Q'_i) = nu(Q_{i+1}) - divisor * nu(x'), i = 1 .. depth-1.
        let new_values: Vec<Rat> = (1..depth)
            .map(|i| {
                let old = self.nu_q(i + 1).expect("tracked");
                old - &nux * &divisors[i - 1]
            })
            .collect();

        // a_{i,l+1} = nu(Q'_i) p_{i+l+1} / nu(x').
        let mut a_new = Vec::with_capacity(depth - 1);
        for (k, v) in new_values.iter().enumerate() {
            let i = k + 1;
            let p = self.p_at(i + 1)?;
            if !v.is_positive() {
                return Err(Error::Invariant(format!(
                    "nu(Q_{i}) = {v} is not positive at center {}",
                    l + 1
                )));
            }
            let a = (v * &p / &nux).to_integer().ok_or_else(|| {
                Error::Invariant(format!(
                    "nu(Q_{i}) * p_{} / nu(x) = {} is not an integer",
                    i + l + 1,
                    v * &p / &nux
                ))
            })?;
            if !a.gcd(&p).is_one() {
                return Err(Error::Invariant(format!(
                    "gcd(a_{{{i},{}}}, p_{}) = gcd({a}, {p}) != 1",
                    l + 1,
                    i + l + 1
                )));
            }
            // Closed form: p_{1+l} a_{i+1,l} - a_{1,l} p_{1+l}^2 ... p_{i+l}^2 p_{i+1+l}.
            let closed = &p1 * &self.higher[i - 1].e - &divisors[i - 1] * &p;
            if closed != a {
                return Err(Error::Invariant(format!(
                    "a_{{{i},{}}} recovered as {a} but the closed form gives {closed}",
                    l + 1
                )));
            }
            a_new.push(a);
        }

        // tau_{i,l+1} = tau_{i+1,l} * y~_{l+1}^{a a_{i+1,l}}.
        let unit_var = l + 1;
        let units = (1..depth)
            .map(|i| {
                let mut monomial = self.tau(i + 1).to_vec();
                monomial.push(UnitFactor {
                    var: unit_var,
                    exp: &ba * &self.higher[i - 1].e,
                });
                UnitEntry { i, monomial }
            })
            .collect();

        let higher = (2..depth)
            .map(|i| HigherTerm {
                i,
                e: a_new[i - 1].clone(),
                f: BigInt::zero(),
                nu: new_values[i - 1].clone(),
            })
            .collect();

        let bezout = BezoutPair {
            center: l + 1,
            a: ba,
            b: bb,
        };
        let mut history = self.bezout.clone();
        history.push(bezout.clone());

        let state = GenSeqState {
            characteristic: self.characteristic,
            primes: self.primes.clone(),
            a_seq: self.a_seq.clone(),
            l: l + 1,
            j: 0,
            nuz: nux,
            nuw: new_values[0].clone(),
            c: self.p_at(2)?,
            e1: a_new[0].clone(),
            higher,
            units,
            bezout: history,
        };
        Ok(AdvanceTrace {
            state,
            bezout,
            divisors,
            unit_var,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{build_primes, initial_state_from_primes};

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn bezout_minimal() {
        assert_eq!(bezout_pair(&big(2), &big(3)).unwrap(), (big(1), big(2)));
        assert_eq!(bezout_pair(&big(3), &big(2)).unwrap(), (big(1), big(1)));
        assert_eq!(bezout_pair(&big(5), &big(3)).unwrap(), (big(3), big(2)));
        for p in [2i64, 3, 5, 7, 11] {
            for e in 1..40i64 {
                if e % p == 0 {
                    assert!(bezout_pair(&big(p), &big(e)).is_err());
                    continue;
                }
                let (a, b) = bezout_pair(&big(p), &big(e)).unwrap();
                assert_eq!(big(p) * &b - big(e) * &a, big(1));
                // brute force: no smaller positive a works
                let brute = (1..=p).find(|a| (e * a + 1) % p == 0).unwrap();
                assert_eq!(a, big(brute));
            }
        }
    }

    #[test]
    fn r0_to_r1() {
        let primes = build_primes(0, 3).unwrap();
        let s0 = initial_state_from_primes(&primes, 3).unwrap();
        let t = s0.advance_center_traced().unwrap();
        let s1 = &t.state;
        assert_eq!(s1.l, 1);
        assert_eq!(s1.nuz, r(1, 2));
        assert_eq!(s1.nuw, r(1, 3));
        assert_eq!(s1.e1, big(2));
        assert_eq!(s1.c, big(3));
        assert_eq!(s1.depth(), 2);
        assert_eq!(s1.higher[0].e, big(32));
        assert_eq!(s1.higher[0].nu, r(16, 5));
        assert_eq!((t.bezout.a.clone(), t.bezout.b.clone()), (big(1), big(2)));
        assert_eq!(t.divisors, vec![big(12), big(108)]);
        // 286/5 - 108 * 1/2 = 16/5
        assert_eq!(r(286, 5) - r(108, 1) * r(1, 2), r(16, 5));
        // tau_{1,1} = y~_1^{a_0 a_2} = y~_1^19, tau_{2,1} = y~_1^286
        assert_eq!(
            s1.tau(1),
            &[UnitFactor {
                var: 1,
                exp: big(19)
            }]
        );
        assert_eq!(
            s1.tau(2),
            &[UnitFactor {
                var: 1,
                exp: big(286)
            }]
        );
    }

    #[test]
    fn second_advance_accumulates_units() {
        let primes = build_primes(0, 5).unwrap();
        let s0 = initial_state_from_primes(&primes, 5).unwrap();
        let s1 = s0.advance_center().unwrap();
        let s2 = s1.advance_center().unwrap();
        assert_eq!(s2.l, 2);
        assert_eq!(s2.nuz, r(1, 6));
        assert_eq!(s2.c, big(5));
        assert_eq!(s2.depth(), 3);
        assert_eq!(s2.tau(1).len(), 2);
        assert_eq!(s2.bezout.len(), 2);
        // nu(x_j) = 1 / (p_1 ... p_j)
        let s3 = s2.advance_center().unwrap();
        assert_eq!(s3.nuz, r(1, 30));
    }

    #[test]
    fn needs_standard_form() {
        let primes = build_primes(0, 4).unwrap();
        let s1 = initial_state_from_primes(&primes, 4)
            .unwrap()
            .advance_center()
            .unwrap();
        let stepped = s1.quadratic_step().unwrap();
        assert!(matches!(
            stepped.advance_center(),
            Err(Error::NotACenter(_))
        ));
        let short = initial_state_from_primes(&primes, 1).unwrap();
        assert!(matches!(short.advance_center(), Err(Error::NotACenter(_))));
    }
}
