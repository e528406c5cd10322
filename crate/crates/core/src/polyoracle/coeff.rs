//! Coefficient rings `Z[t]` (standing in for `Q[t]`) and `F_p[t]`.
//!
//! Every identity the oracle checks has integral coefficients, so in
//! characteristic zero the coefficients are kept in `Z[t]`; exact division is
//! only ever by polynomials whose quotient is integral.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial in `t`, coefficients ascending, no trailing zeros.
pub type TPoly = Vec<BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffField {
    Rational,
    Prime(u64),
}

impl CoeffField {
    pub fn from_characteristic(characteristic: u64) -> Self {
        if characteristic == 0 {
            CoeffField::Rational
        } else {
            CoeffField::Prime(characteristic)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffField::Rational => 0,
            CoeffField::Prime(p) => *p,
        }
    }

    fn reduce_scalar(&self, c: BigInt) -> BigInt {
        match self {
            CoeffField::Rational => c,
            CoeffField::Prime(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn normalize(&self, mut a: TPoly) -> TPoly {
        if let CoeffField::Prime(_) = self {
            a = a.into_iter().map(|c| self.reduce_scalar(c)).collect();
        }
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> TPoly {
        self.normalize(vec![c.into()])
    }

    /// `1 + t`.
    pub fn one_plus_t(&self) -> TPoly {
        self.normalize(vec![BigInt::one(), BigInt::one()])
    }

    pub fn add(&self, a: &TPoly, b: &TPoly) -> TPoly {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        let out = (0..n)
            .map(|k| a.get(k).unwrap_or(&zero) + b.get(k).unwrap_or(&zero))
            .collect();
        self.normalize(out)
    }

    pub fn neg(&self, a: &TPoly) -> TPoly {
        self.normalize(a.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, a: &TPoly, b: &TPoly) -> TPoly {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &TPoly, b: &TPoly) -> TPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.normalize(out)
    }

    pub fn pow(&self, a: &TPoly, mut e: u64) -> TPoly {
        let mut base = a.clone();
        let mut acc = self.constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scalar_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        match self {
            CoeffField::Rational => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(q)
            }
            CoeffField::Prime(p) => {
                let p = BigInt::from(*p);
                let inv = b.extended_gcd(&p).x;
                Some((a * inv).mod_floor(&p))
            }
        }
    }

    /// `a / b` when the quotient exists in the coefficient ring.
    pub fn exact_div(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        if b.is_empty() {
            return Err(Error::InvalidInput(
                "division by the zero polynomial".into(),
            ));
        }
        let mut rem = a.clone();
        if rem.len() < b.len() {
            return if rem.is_empty() {
                Ok(Vec::new())
            } else {
                Err(self.not_divisible(a, b))
            };
        }
        let lead = b.last().expect("nonzero");
        let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + b.len() - 1];
            if top.is_zero() {
                continue;
            }
            let q = self
                .scalar_div(top, lead)
                .ok_or_else(|| self.not_divisible(a, b))?;
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &q * bj;
            }
            rem = rem.into_iter().map(|c| self.reduce_scalar(c)).collect();
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(self.not_divisible(a, b));
        }
        Ok(self.normalize(quot))
    }

    fn not_divisible(&self, a: &TPoly, b: &TPoly) -> Error {
        Error::NotDivisible {
            term: format_tpoly(a),
            divisor: format_tpoly(b),
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rational => write!(f, "Q[t]"),
            CoeffField::Prime(p) => write!(f, "F_{p}[t]"),
        }
    }
}

/// `c0 + c1*t + c2*t^2`, ascending, zero terms omitted.
pub fn format_tpoly(a: &TPoly) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => c.to_string(),
            1 => format!("{c}*t"),
            _ => format!("{c}*t^{k}"),
        })
        .collect();
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(v: &[i64]) -> TPoly {
        v.iter().map(|c| BigInt::from(*c)).collect()
    }

    #[test]
    fn arithmetic_over_z() {
        let f = CoeffField::Rational;
        let a = f.one_plus_t();
        assert_eq!(f.pow(&a, 3), tp(&[1, 3, 3, 1]));
        assert_eq!(f.sub(&a, &a), tp(&[]));
        assert_eq!(f.exact_div(&tp(&[1, 3, 3, 1]), &a).unwrap(), tp(&[1, 2, 1]));
        assert!(f.exact_div(&tp(&[1, 0, 1]), &a).is_err());
        assert!(f.exact_div(&tp(&[1]), &tp(&[2])).is_err());
    }

    #[test]
    fn arithmetic_over_f2() {
        let f = CoeffField::Prime(2);
        let a = f.one_plus_t();
        assert_eq!(f.pow(&a, 2), tp(&[1, 0, 1]));
        assert_eq!(f.constant(27), tp(&[1]));
        assert_eq!(f.exact_div(&tp(&[1, 0, 1]), &a).unwrap(), a);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_tpoly(&tp(&[-1, -1])), "-1 - 1*t");
        assert_eq!(format_tpoly(&tp(&[0, 0, 4])), "4*t^2");
        assert_eq!(format_tpoly(&tp(&[])), "0");
    }
}
