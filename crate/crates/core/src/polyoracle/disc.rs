//! Discriminant of `u^p - (1+t)` over `Q[t]` or `F_q[t]` via the Sylvester
//! resultant.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::coeff::{format_tpoly, CoeffField, TPoly};
use crate::error::{Error, Result};
use crate::scenario::is_prime;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscReport {
    pub p: u64,
    pub field: String,
    /// `Res(f, f')`.
    pub resultant: String,
    /// `(-1)^{p(p-1)/2} Res(f, f')`; `f` is monic.
    pub discriminant: String,
    /// `(-1)^{p(p-1)/2} p^p (1+t)^{p-1}`.
    pub formula: String,
    pub matches_formula: bool,
    /// `discriminant = unit * (1+t)^k`, when such `k` exists.
    pub one_plus_t_exponent: Option<u64>,
    pub unit: Option<String>,
    pub unit_times_power: bool,
}

/// Determinant by fraction-free elimination; entries in an integral domain.
fn determinant(field: CoeffField, mut m: Vec<Vec<TPoly>>) -> Result<TPoly> {
    let n = m.len();
    let mut negate = false;
    let mut prev = field.constant(1);
    for k in 0..n {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&r| !m[r][k].is_empty()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Vec::new()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = field.sub(
                    &field.mul(&m[i][j], &m[k][k]),
                    &field.mul(&m[i][k], &m[k][j]),
                );
                m[i][j] = field.exact_div(&num, &prev)?;
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { field.neg(&det) } else { det })
}

/// Resultant of two polynomials in `u` given by coefficient lists in
/// descending powers of `u`, leading coefficients nonzero.
pub fn resultant(field: CoeffField, f: &[TPoly], g: &[TPoly]) -> Result<TPoly> {
    if f.len() < 2 || g.is_empty() || f[0].is_empty() || g[0].is_empty() {
        return Err(Error::InvalidInput(
            "resultant needs nonzero leading coefficients".into(),
        ));
    }
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return Ok(field.constant(1));
    }
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![Vec::new(); size];
        for (k, c) in f.iter().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![Vec::new(); size];
        for (k, c) in g.iter().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(field, rows)
}

fn sign_pow(field: CoeffField, a: &TPoly, p: u64) -> TPoly {
    if (p * (p - 1) / 2) % 2 == 1 {
        field.neg(a)
    } else {
        a.clone()
    }
}

/// Computes the discriminant of `u^p - (1+t)` and compares it with the
/// closed form, and with the weaker shape `unit * (1+t)^k`.
pub fn discriminant_check(p: u64, field: CoeffField) -> Result<DiscReport> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if field.characteristic() == p {
        return Err(Error::InvalidInput(format!(
            "degree {p} equals the characteristic"
        )));
    }
    let deg = p as usize;
    // f = u^p - (1+t), f' = p u^{p-1}, descending in u
    let mut f = vec![Vec::new(); deg + 1];
    f[0] = field.constant(1);
    f[deg] = field.neg(&field.one_plus_t());
    let mut g = vec![Vec::new(); deg];
    g[0] = field.constant(p);
    let res = resultant(field, &f, &g)?;
    let disc = sign_pow(field, &res, p);
    let formula = sign_pow(
        field,
        &field.mul(
            &field.constant(BigInt::from(p).pow(p as u32)),
            &field.pow(&field.one_plus_t(), p - 1),
        ),
        p,
    );

    let mut rest = disc.clone();
    let mut k = 0u64;
    while !rest.is_empty() {
        match field.exact_div(&rest, &field.one_plus_t()) {
            Ok(q) => {
                rest = q;
                k += 1;
            }
            Err(_) => break,
        }
    }
    let unit_times_power = rest.len() == 1 && !rest[0].is_zero();
    Ok(DiscReport {
        p,
        field: field.to_string(),
        resultant: format_tpoly(&res),
        discriminant: format_tpoly(&disc),
        formula: format_tpoly(&formula),
        matches_formula: disc == formula,
        one_plus_t_exponent: unit_times_power.then_some(k),
        unit: unit_times_power.then(|| format_tpoly(&rest)),
        unit_times_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(v: &[i64]) -> TPoly {
        v.iter().map(|c| BigInt::from(*c)).collect()
    }

    #[test]
    fn quadratic_against_b2_minus_4ac() {
        // u^2 - (1+t): b^2 - 4ac = 4(1+t)
        let q = CoeffField::Rational;
        let r = discriminant_check(2, q).unwrap();
        assert_eq!(r.resultant, format_tpoly(&tp(&[-4, -4])));
        assert_eq!(r.discriminant, format_tpoly(&tp(&[4, 4])));
        assert_eq!(r.formula, format_tpoly(&tp(&[-4, -4])));
        assert!(!r.matches_formula);
        assert!(r.unit_times_power);
        assert_eq!(r.one_plus_t_exponent, Some(1));
    }

    #[test]
    fn cubic_against_depressed_cubic_formula() {
        // u^3 + a u + b has discriminant -4a^3 - 27b^2; here a = 0, b = -(1+t)
        let q = CoeffField::Rational;
        let r = discriminant_check(3, q).unwrap();
        let expected = q.mul(&tp(&[-27]), &q.pow(&q.one_plus_t(), 2));
        assert_eq!(r.discriminant, format_tpoly(&expected));
        assert!(r.matches_formula);
    }

    #[test]
    fn odd_primes_match_and_char_two() {
        for p in [5u64, 7] {
            let r = discriminant_check(p, CoeffField::Rational).unwrap();
            assert!(r.matches_formula, "{r:?}");
            assert_eq!(r.one_plus_t_exponent, Some(p - 1));
        }
        for p in [3u64, 5] {
            let r = discriminant_check(p, CoeffField::Prime(2)).unwrap();
            assert!(r.matches_formula, "{r:?}");
            assert_eq!(r.unit.as_deref(), Some("1"));
        }
    }

    #[test]
    fn rejects_characteristic_and_composites() {
        assert!(matches!(
            discriminant_check(2, CoeffField::Prime(2)),
            Err(Error::InvalidInput(_))
        ));
        assert!(discriminant_check(4, CoeffField::Rational).is_err());
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(u - 2, u - 5) = 2 - 5
        let q = CoeffField::Rational;
        let r = resultant(q, &[tp(&[1]), tp(&[-2])], &[tp(&[1]), tp(&[-5])]).unwrap();
        assert_eq!(r, tp(&[-3]));
    }
}
