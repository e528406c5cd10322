use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::coeff::{format_tpoly, CoeffField, TPoly};
use crate::error::{Error, Result};
use crate::limits::Limits;

pub type Exponents = Vec<u64>;

/// Sparse polynomial in named variables with coefficients in `Q[t]` or
/// `F_p[t]`. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    pub vars: Vec<String>,
    pub field: CoeffField,
    pub terms: BTreeMap<Exponents, TPoly>,
}

/// Monomial substitution: each source variable maps to a monomial in the
/// target variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub target_vars: Vec<String>,
    pub images: BTreeMap<String, Exponents>,
}

impl Substitution {
    pub fn new(target_vars: Vec<String>) -> Self {
        Substitution {
            target_vars,
            images: BTreeMap::new(),
        }
    }

    /// Maps `var` to `prod target_k ^ e_k` for the given `(target, e)` pairs.
    pub fn map(mut self, var: &str, monomial: &[(&str, u64)]) -> Result<Self> {
        let mut exps = vec![0u64; self.target_vars.len()];
        for (name, e) in monomial {
            let k = self
                .target_vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown target variable {name}")))?;
            exps[k] += e;
        }
        self.images.insert(var.to_string(), exps);
        Ok(self)
    }

    /// Every target variable mapped to itself, under the same name.
    pub fn identity(vars: &[String]) -> Self {
        let mut s = Substitution::new(vars.to_vec());
        for (k, v) in vars.iter().enumerate() {
            let mut exps = vec![0u64; vars.len()];
            exps[k] = 1;
            s.images.insert(v.clone(), exps);
        }
        s
    }
}

impl SparsePoly {
    pub fn zero(vars: &[String], field: CoeffField) -> Self {
        SparsePoly {
            vars: vars.to_vec(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(vars: &[String], field: CoeffField, exps: Exponents, coeff: TPoly) -> Self {
        let mut p = SparsePoly::zero(vars, field);
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let coeff = field.normalize(coeff);
        if !coeff.is_empty() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn constant(vars: &[String], field: CoeffField, coeff: TPoly) -> Self {
        SparsePoly::monomial(vars, field, vec![0; vars.len()], coeff)
    }

    pub fn var(vars: &[String], field: CoeffField, name: &str) -> Result<Self> {
        let k = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))?;
        let mut exps = vec![0; vars.len()];
        exps[k] = 1;
        Ok(SparsePoly::monomial(vars, field, exps, field.constant(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.vars != other.vars || self.field != other.field {
            return Err(Error::InvalidInput(format!(
                "incompatible polynomials: {:?} over {} vs {:?} over {}",
                self.vars, self.field, other.vars, other.field
            )));
        }
        Ok(())
    }

    fn insert_add(&mut self, exps: Exponents, coeff: &TPoly) {
        let field = self.field;
        match self.terms.get_mut(&exps) {
            Some(c) => {
                let sum = field.add(c, coeff);
                if sum.is_empty() {
                    self.terms.remove(&exps);
                } else {
                    *c = sum;
                }
            }
            None => {
                if !coeff.is_empty() {
                    self.terms.insert(exps, coeff.clone());
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SparsePoly, limits: &Limits) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = SparsePoly::zero(&self.vars, self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = self.field.mul(ca, cb);
                out.insert_add(e, &c);
            }
            if out.terms.len() > limits.term_cap {
                return Err(term_cap_error(limits));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64, limits: &Limits) -> Result<SparsePoly> {
        let mut base = self.clone();
        let mut acc = SparsePoly::constant(&self.vars, self.field, self.field.constant(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, limits)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, limits)?;
            }
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &TPoly) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.vars, self.field);
        for (e, x) in &self.terms {
            out.insert_add(e.clone(), &self.field.mul(x, c));
        }
        out
    }

    /// Image under a monomial substitution; every variable of `self` that
    /// occurs with a positive exponent must be mapped.
    pub fn substitute(&self, s: &Substitution) -> Result<SparsePoly> {
        let mut images = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            images.push(s.images.get(v));
        }
        let mut out = SparsePoly::zero(&s.target_vars, self.field);
        for (e, c) in &self.terms {
            let mut target = vec![0u64; s.target_vars.len()];
            for (k, ek) in e.iter().enumerate() {
                if *ek == 0 {
                    continue;
                }
                let img = images[k].ok_or_else(|| {
                    Error::InvalidInput(format!("variable {} is not mapped", self.vars[k]))
                })?;
                for (t, ik) in target.iter_mut().zip(img) {
                    *t = ik
                        .checked_mul(*ek)
                        .and_then(|x| t.checked_add(x))
                        .ok_or_else(|| Error::Resource("exponent overflow".into()))?;
                }
            }
            out.insert_add(target, c);
        }
        Ok(out)
    }

    /// Exact quotient by the monomial with exponent vector `m`.
    pub fn divide_by_monomial(&self, m: &[u64]) -> Result<SparsePoly> {
        if m.len() != self.vars.len() {
            return Err(Error::InvalidInput(
                "divisor has the wrong number of variables".into(),
            ));
        }
        let mut out = SparsePoly::zero(&self.vars, self.field);
        for (e, c) in &self.terms {
            if e.iter().zip(m).any(|(x, y)| x < y) {
                return Err(Error::NotDivisible {
                    term: format_term(&self.vars, e, c),
                    divisor: format_monomial(&self.vars, m),
                });
            }
            let q: Exponents = e.iter().zip(m).map(|(x, y)| x - y).collect();
            out.terms.insert(q, c.clone());
        }
        Ok(out)
    }

    /// Smallest exponent of variable `k` over all terms; positive means the
    /// polynomial is still divisible by that variable.
    pub fn min_exponent(&self, k: usize) -> Option<u64> {
        self.terms.keys().map(|e| e[k]).min()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Text dump: a header naming the variables and the coefficient ring,
    /// then one term per line in ascending exponent order, each coefficient
    /// written in ascending powers of `t`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# vars {} over {}", self.vars.join(" "), self.field);
        for (e, c) in &self.terms {
            let _ = writeln!(s, "{}", format_term(&self.vars, e, c));
        }
        s
    }
}

fn term_cap_error(limits: &Limits) -> Error {
    Error::Resource(format!("polynomial exceeds {} terms", limits.term_cap))
}

pub fn format_monomial(vars: &[String], e: &[u64]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, k)| **k > 0)
        .map(|(v, k)| {
            if *k == 1 {
                v.clone()
            } else {
                format!("{v}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn format_term(vars: &[String], e: &[u64], c: &TPoly) -> String {
    format!("({}) * {}", format_tpoly(c), format_monomial(vars, e))
}
