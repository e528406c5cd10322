use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::state::GenSeqState;
use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// Which parameter is divided at a quadratic transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCase {
    /// `nu(w) < nu(z)`: `z = z' w'`, `w = w'`.
    ZOverW,
    /// `nu(z) < nu(w)`: `z = z'`, `w = z' w'`.
    WOverZ,
}

/// `Q'_i = Q_i / (z'^z_exp w'^w_exp)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDivisor {
    pub i: usize,
    #[serde(with = "crate::exactnum::serde_int")]
    pub z_exp: BigInt,
    #[serde(with = "crate::exactnum::serde_int")]
    pub w_exp: BigInt,
}

impl StepDivisor {
    /// Weight `z_exp nu(z) + w_exp nu(w)` of the divisor.
    pub fn weight(&self, nuz: &Rat, nuw: &Rat) -> Rat {
        nuz * &self.z_exp + nuw * &self.w_exp
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTrace {
    pub state: GenSeqState,
    pub case: StepCase,
    pub divisors: Vec<StepDivisor>,
}

impl GenSeqState {
    pub fn quadratic_step(&self) -> Result<GenSeqState> {
        self.quadratic_step_traced().map(|t| t.state)
    }

    /// One quadratic transform, the case forced by comparing `nu(z)` and
    /// `nu(w)`.
    pub fn quadratic_step_traced(&self) -> Result<StepTrace> {
        let case = match self.nuw.cmp(&self.nuz) {
            std::cmp::Ordering::Less => StepCase::ZOverW,
            std::cmp::Ordering::Greater => StepCase::WOverZ,
            std::cmp::Ordering::Equal => {
                return Err(Error::ChainTerminated(self.nuz.to_string()));
            }
        };
        let p1 = self.p_at(1)?;
        // Multiplier on the divided parameter: e1 in the first case, c in the second.
        let mult = match case {
            StepCase::ZOverW => self.e1.clone(),
            StepCase::WOverZ => self.c.clone(),
        };
        let mut next = self.clone();
        next.j += 1;
        let divided_value = match case {
            StepCase::ZOverW => {
                next.nuz = &self.nuz - &self.nuw;
                next.c = &self.c - &self.e1;
                check_positive("c", &next.c)?;
                self.nuw.clone()
            }
            StepCase::WOverZ => {
                next.nuw = &self.nuw - &self.nuz;
                next.e1 = &self.e1 - &self.c;
                check_positive("e1", &next.e1)?;
                self.nuz.clone()
            }
        };

        let mut divisors = Vec::with_capacity(self.higher.len());
        // D_i = mult * p_{1+l} * prod_{s=2}^{i-1} p_{s+l}^2
        let mut d = &mult * &p1;
        for (k, h) in self.higher.iter().enumerate() {
            let i = k + 2;
            if i > 2 {
                let p = self.p_at(i - 1)?;
                d *= &p * &p;
            }
            let pi = self.p_at(i)?;
            let nh = &mut next.higher[k];
            nh.nu = &h.nu - &divided_value * &d;
            // mult * M(i) with M(i) = D_i / mult * p_{i+l}
            let derived = &h.e + &h.f - &d * &pi;
            match case {
                StepCase::ZOverW => {
                    check_positive(&format!("f_{i}"), &derived)?;
                    nh.f = derived;
                }
                StepCase::WOverZ => {
                    check_positive(&format!("e_{i}"), &derived)?;
                    nh.e = derived;
                }
            }
            let zero = BigInt::from(0);
            divisors.push(match case {
                StepCase::ZOverW => StepDivisor {
                    i,
                    z_exp: zero,
                    w_exp: d.clone(),
                },
                StepCase::WOverZ => StepDivisor {
                    i,
                    z_exp: d.clone(),
                    w_exp: zero,
                },
            });
        }
        Ok(StepTrace {
            state: next,
            case,
            divisors,
        })
    }

    /// Quadratic steps until the parameters have equal value or `max_steps`
    /// is reached. The first element is `self`.
    pub fn quadratic_chain(&self, max_steps: Option<usize>) -> Result<(Vec<GenSeqState>, bool)> {
        let mut states = vec![self.clone()];
        loop {
            if max_steps.is_some_and(|m| states.len() > m) {
                return Ok((states, false));
            }
            match states.last().expect("nonempty").quadratic_step() {
                Ok(s) => states.push(s),
                Err(Error::ChainTerminated(_)) => return Ok((states, true)),
                Err(e) => return Err(e),
            }
        }
    }
}

fn check_positive(name: &str, v: &BigInt) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "derived exponent {name} = {v} is not positive"
        )))
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

    fn r1(count: usize, depth_r0: usize) -> GenSeqState {
        let primes = build_primes(0, count).unwrap();
        initial_state_from_primes(&primes, depth_r0)
            .unwrap()
            .advance_center()
            .unwrap()
    }

    fn summary(s: &GenSeqState) -> (Rat, Rat, BigInt, BigInt, Rat) {
        (
            s.nuz.clone(),
            s.nuw.clone(),
            s.c.clone(),
            s.e1.clone(),
            s.nu_q(2).unwrap(),
        )
    }

    #[test]
    fn worked_chain_from_r1() {
        let s0 = r1(3, 3);
        assert_eq!(summary(&s0), (r(1, 2), r(1, 3), big(3), big(2), r(16, 5)));
        let t1 = s0.quadratic_step_traced().unwrap();
        assert_eq!(t1.case, StepCase::ZOverW);
        assert_eq!(
            summary(&t1.state),
            (r(1, 6), r(1, 3), big(1), big(2), r(6, 5))
        );
        assert_eq!(t1.state.higher[0].f, big(2));
        assert_eq!(t1.divisors[0].w_exp, big(6));
        let t2 = t1.state.quadratic_step_traced().unwrap();
        assert_eq!(t2.case, StepCase::WOverZ);
        assert_eq!(
            summary(&t2.state),
            (r(1, 6), r(1, 6), big(1), big(1), r(7, 10))
        );
        assert_eq!(t2.state.higher[0].e, big(19));
        assert!(matches!(
            t2.state.quadratic_step(),
            Err(Error::ChainTerminated(_))
        ));
    }

    #[test]
    fn chain_helper() {
        let (states, terminated) = r1(3, 3).quadratic_chain(None).unwrap();
        assert_eq!(states.len(), 3);
        assert!(terminated);
        let (states, terminated) = r1(3, 3).quadratic_chain(Some(1)).unwrap();
        assert_eq!(states.len(), 2);
        assert!(!terminated);
    }

    #[test]
    fn chain_from_r0() {
        let primes = build_primes(0, 3).unwrap();
        let s = initial_state_from_primes(&primes, 3).unwrap();
        let (states, terminated) = s.quadratic_chain(None).unwrap();
        assert!(terminated);
        let got: Vec<_> = states.iter().map(summary).collect();
        assert_eq!(
            got,
            vec![
                (r(1, 1), r(3, 2), big(2), big(3), r(19, 3)),
                (r(1, 1), r(1, 2), big(2), big(1), r(7, 3)),
                (r(1, 2), r(1, 2), big(1), big(1), r(4, 3)),
            ]
        );
    }

    #[test]
    fn values_and_max_decrease() {
        let (states, _) = r1(5, 5).quadratic_chain(None).unwrap();
        for pair in states.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(a.nuz.clone().max(a.nuw.clone()) > b.nuz.clone().max(b.nuw.clone()));
            for i in 2..=a.depth() {
                assert!(b.nu_q(i).unwrap() < a.nu_q(i).unwrap());
            }
        }
    }

    #[test]
    fn divisor_weights_match_value_drops() {
        let (states, _) = r1(5, 5).quadratic_chain(None).unwrap();
        for s in &states[..states.len() - 1] {
            let t = s.quadratic_step_traced().unwrap();
            for d in &t.divisors {
                let drop = s.nu_q(d.i).unwrap() - t.state.nu_q(d.i).unwrap();
                assert_eq!(drop, d.weight(&t.state.nuz, &t.state.nuw));
            }
        }
    }
}
