use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;

/// A value of the rank-two composite valuation, ordered lexicographically
/// with the rank-one component dominant.
///
/// Serialized as `["nu", "mu"]`, both components as strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LexVal {
    pub nu: Rat,
    pub mu: BigInt,
}

impl LexVal {
    pub fn new(nu: Rat, mu: impl Into<BigInt>) -> Self {
        LexVal { nu, mu: mu.into() }
    }

    /// The image under the projection onto the rank-one value group.
    pub fn project(&self) -> Rat {
        self.nu.clone()
    }

    pub fn add(&self, other: &LexVal) -> LexVal {
        LexVal {
            nu: &self.nu + &other.nu,
            mu: &self.mu + &other.mu,
        }
    }

    pub fn cmp_lex(&self, other: &LexVal) -> Ordering {
        self.cmp(other)
    }
}

impl fmt::Display for LexVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.nu, self.mu)
    }
}

impl Serialize for LexVal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.nu.to_string(), self.mu.to_string()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LexVal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (nu, mu) = <(String, String)>::deserialize(deserializer)?;
        let nu = nu.parse().map_err(serde::de::Error::custom)?;
        let mu = mu.trim().parse().map_err(serde::de::Error::custom)?;
        Ok(LexVal { nu, mu })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(n: i64, d: i64, m: i64) -> LexVal {
        LexVal::new(Rat::new(n, d), m)
    }

    #[test]
    fn worked_cases() {
        assert_eq!(lv(0, 1, 1).add(&lv(1, 1, 0)), lv(1, 1, 1));
        assert_eq!(lv(0, 1, 5).cmp_lex(&lv(1, 1, -9)), Ordering::Less);
        assert_eq!(lv(3, 2, 7).project(), Rat::new(3, 2));
    }

    #[test]
    fn json_pair() {
        let v = lv(3, 2, -7);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["3/2","-7"]"#);
        assert_eq!(serde_json::from_str::<LexVal>(&s).unwrap(), v);
    }

    fn arb() -> impl Strategy<Value = LexVal> {
        (-50i64..50, 1i64..12, -50i64..50).prop_map(|(n, d, m)| lv(n, d, m))
    }

    proptest! {
        #[test]
        fn addition_commutes_and_associates(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn projection_is_additive(a in arb(), b in arb()) {
            prop_assert_eq!(a.add(&b).project(), a.project() + b.project());
        }

        #[test]
        fn order_is_total_and_translation_invariant(a in arb(), b in arb(), c in arb()) {
            let ab = a.cmp(&b);
            prop_assert_eq!(ab.reverse(), b.cmp(&a));
            prop_assert_eq!(a.add(&c).cmp(&b.add(&c)), ab);
            if a.nu != b.nu {
                prop_assert_eq!(ab, a.nu.cmp(&b.nu));
            }
        }
    }
}
