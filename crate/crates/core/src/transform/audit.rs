use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::state::GenSeqState;
use crate::error::{Error, Result};
use crate::exactnum::{group_of, index, serde_int, Rat};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// `[G(nu(Q_0..Q_i)) : G(nu(Q_0..Q_{i-1}))]` against its expected value
/// (`c` for `i = 1`, `p_{i+l}` for `i >= 2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub i: usize,
    #[serde(with = "serde_int")]
    pub index: BigInt,
    #[serde(with = "serde_int")]
    pub expected: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub l: usize,
    pub j: usize,
    pub passed: bool,
    pub checks: Vec<AuditCheck>,
    pub index_table: Vec<IndexEntry>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn index_at(&self, i: usize) -> Option<&BigInt> {
        self.index_table.iter().find(|e| e.i == i).map(|e| &e.index)
    }
}

struct Checks(Vec<AuditCheck>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: String) {
        self.0.push(AuditCheck {
            name: name.into(),
            passed,
            detail,
        });
    }
}

impl GenSeqState {
    /// Checks every value identity of the state exactly. Failures are
    /// reported, never raised.
    pub fn audit(&self) -> AuditReport {
        let mut checks = Checks(Vec::new());
        let values = self.values();

        let nonpositive: Vec<String> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_positive())
            .map(|(i, v)| format!("nu(Q_{i}) = {v}"))
            .collect();
        checks.push(
            "positive_values",
            nonpositive.is_empty(),
            nonpositive.join(", "),
        );

        let exps_ok = self.c.is_positive()
            && self.e1.is_positive()
            && self
                .higher
                .iter()
                .all(|h| !h.e.is_negative() && !h.f.is_negative());
        checks.push(
            "exponents_nonnegative",
            exps_ok,
            format!("c = {}, e1 = {}", self.c, self.e1),
        );

        let g = self.c.gcd(&self.e1);
        checks.push(
            "gcd_c_e1",
            g.is_one(),
            format!("gcd({}, {}) = {g}", self.c, self.e1),
        );

        let lhs = &self.nuw * &self.c;
        let rhs = &self.nuz * &self.e1;
        checks.push(
            "balance_q1",
            lhs == rhs,
            format!("c nu(w) = {lhs}, e1 nu(z) = {rhs}"),
        );

        match self.p_at(1) {
            Ok(p1) => {
                if let Some(q2) = self.nu_q(2) {
                    let bound = &self.nuw * &(&p1 * &self.c);
                    checks.push(
                        "q2_bound",
                        q2 > bound,
                        format!("nu(Q_2) = {q2} vs p c nu(w) = {bound}"),
                    );
                }
            }
            Err(e) => checks.push("prime_lookup", false, e.to_string()),
        }

        for s in 3..=self.depth() {
            let (Some(cur), Some(prev)) = (self.nu_q(s), self.nu_q(s - 1)) else {
                continue;
            };
            match self.p_at(s - 1) {
                Ok(p) => {
                    let bound = &prev * &(&p * &p);
                    checks.push(
                        format!("chain_bound_q{s}"),
                        cur > bound,
                        format!("nu(Q_{s}) = {cur} vs p^2 nu(Q_{}) = {bound}", s - 1),
                    );
                }
                Err(e) => checks.push(format!("chain_bound_q{s}"), false, e.to_string()),
            }
        }

        for h in &self.higher {
            match self.p_at(h.i) {
                Ok(p) => {
                    let lhs = &h.nu * &p;
                    let rhs = &self.nuz * &h.e + &self.nuw * &h.f;
                    checks.push(
                        format!("balance_q{}", h.i),
                        lhs == rhs,
                        format!("p nu(Q_{}) = {lhs}, e nu(z) + f nu(w) = {rhs}", h.i),
                    );
                }
                Err(e) => checks.push(format!("balance_q{}", h.i), false, e.to_string()),
            }
        }

        let mut index_table = Vec::new();
        if nonpositive.is_empty() {
            for i in 1..values.len() {
                let expected = if i == 1 {
                    Ok(self.c.clone())
                } else {
                    self.p_at(i)
                };
                let idx = group_of(&values[..=i])
                    .and_then(|big| Ok((big, group_of(&values[..i])?)))
                    .and_then(|(big, small)| index(&big, &small));
                match (idx, expected) {
                    (Ok(idx), Ok(expected)) => {
                        checks.push(
                            format!("index_{i}"),
                            idx == expected,
                            format!("index {idx}, expected {expected}"),
                        );
                        index_table.push(IndexEntry {
                            i,
                            index: idx,
                            expected,
                        });
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        checks.push(format!("index_{i}"), false, e.to_string())
                    }
                }
            }
        }

        let passed = checks.0.iter().all(|c| c.passed);
        AuditReport {
            l: self.l,
            j: self.j,
            passed,
            checks: checks.0,
            index_table,
        }
    }

    /// Degree of the residue `gamma_n` over the residue field of the center:
    /// `p_{n+l}`.
    pub fn gamma_degrees(&self) -> Result<Vec<BigInt>> {
        (1..=self.depth()).map(|n| self.p_at(n)).collect()
    }

    /// Bounded audit of the linear-independence property D(i) with
    /// `i = depth`.
    ///
    /// Visits every exponent vector `(f_0, ..., f_i)` with
    /// `0 <= f_1 < p_{1+l} c`, `0 <= f_n < p_{n+l}^2` for `n >= 2` and value
    /// at most `budget`, groups them by value and reduces the ratio of each
    /// pair in a class to a monomial in the residues `gamma_n`. A pair passes
    /// when the reduction exists and some exponent is not a multiple of the
    /// degree of its `gamma_n`, so the two residues are not proportional.
    pub fn audit_di(&self, budget: &Rat, limits: &Limits) -> Result<DiReport> {
        if budget.is_negative() {
            return Err(Error::InvalidInput(format!("negative budget {budget}")));
        }
        let depth = self.depth();
        let values = self.values();
        let mut box_sizes = Vec::with_capacity(depth);
        box_sizes.push(&self.p_at(1)? * &self.c);
        for n in 2..=depth {
            let p = self.p_at(n)?;
            box_sizes.push(&p * &p);
        }
        let box_sizes: Vec<i64> = box_sizes
            .iter()
            .map(|b| {
                b.to_i64()
                    .ok_or_else(|| Error::Resource(format!("exponent box {b} too large")))
            })
            .collect::<Result<_>>()?;

        let mut classes: BTreeMap<Rat, Vec<Vec<i64>>> = BTreeMap::new();
        let mut tuples = 0usize;
        let mut tail = vec![0i64; depth];
        // Odometer over (f_1, ..., f_depth); f_0 fills the remaining budget.
        'outer: loop {
            let partial: Rat = tail
                .iter()
                .enumerate()
                .map(|(k, f)| &values[k + 1] * &BigInt::from(*f))
                .sum();
            if &partial <= budget {
                let max_f0 = ((budget - &partial) / &self.nuz).floor();
                let max_f0 = max_f0.to_i64().unwrap_or(i64::MAX);
                for f0 in 0..=max_f0 {
                    tuples += 1;
                    if tuples > limits.enum_cap {
                        return Err(Error::Resource(format!(
                            "D(i) enumeration exceeds {} tuples",
                            limits.enum_cap
                        )));
                    }
                    let mut t = Vec::with_capacity(depth + 1);
                    t.push(f0);
                    t.extend_from_slice(&tail);
                    let v = &partial + &self.nuz * &BigInt::from(f0);
                    classes.entry(v).or_default().push(t);
                }
            }
            let mut k = 0;
            loop {
                if k == depth {
                    break 'outer;
                }
                tail[k] += 1;
                // Past the budget, raising f_1 further cannot help.
                let over = k == 0 && &partial > budget;
                if tail[k] < box_sizes[k] && !over {
                    break;
                }
                tail[k] = 0;
                k += 1;
            }
        }

        let degrees = self.gamma_degrees()?;
        let mut report = DiReport {
            budget: budget.clone(),
            tuples,
            classes: classes.len(),
            pairs: 0,
            outside_degree_box: 0,
            failures: Vec::new(),
            passed: true,
        };
        for (value, members) in &classes {
            for (a, first) in members.iter().enumerate() {
                for second in &members[a + 1..] {
                    report.pairs += 1;
                    if report.pairs > limits.enum_cap {
                        return Err(Error::Resource(format!(
                            "D(i) audit exceeds {} pairs",
                            limits.enum_cap
                        )));
                    }
                    let delta: Vec<BigInt> = first
                        .iter()
                        .zip(second)
                        .map(|(x, y)| BigInt::from(y - x))
                        .collect();
                    let fail = |reason: String| DiFailure {
                        value: value.clone(),
                        first: first.clone(),
                        second: second.clone(),
                        reason,
                    };
                    match reduce_ratio(self, &delta) {
                        Ok(gamma) => {
                            let proportional =
                                gamma.iter().zip(&degrees).all(|(k, d)| k.is_multiple_of(d));
                            if proportional {
                                report.failures.push(fail(format!(
                                    "ratio reduces to gamma^{gamma:?}, a constant in the base field"
                                )));
                            }
                            if gamma.iter().zip(&degrees).any(|(k, d)| k.abs() >= *d) {
                                report.outside_degree_box += 1;
                            }
                        }
                        Err(reason) => report.failures.push(fail(reason)),
                    }
                }
            }
        }
        report.passed = report.failures.is_empty();
        Ok(report)
    }
}

/// Rewrites the value-zero monomial `Q_0^{d_0} ... Q_i^{d_i}` as
/// `gamma_1^{k_1} ... gamma_i^{k_i}` using `Q_n^{p_{n+l}} = gamma_n z^{e_n} w^{f_n}`
/// (top down) and `Q_1^c = gamma_1 z^{e1}`. Returns `(k_1, ..., k_i)`.
pub fn reduce_ratio(
    state: &GenSeqState,
    delta: &[BigInt],
) -> std::result::Result<Vec<BigInt>, String> {
    let depth = state.depth();
    if delta.len() != depth + 1 {
        return Err(format!(
            "expected {} exponents, got {}",
            depth + 1,
            delta.len()
        ));
    }
    let mut d = delta.to_vec();
    let mut gamma = vec![BigInt::zero(); depth];
    for n in (2..=depth).rev() {
        let p = state.p_at(n).map_err(|e| e.to_string())?;
        let (k, rem) = d[n].div_rem(&p);
        if !rem.is_zero() {
            return Err(format!(
                "exponent {} of Q_{n} is not a multiple of {p}",
                d[n]
            ));
        }
        let h = &state.higher[n - 2];
        d[0] += &k * &h.e;
        d[1] += &k * &h.f;
        d[n] = BigInt::zero();
        gamma[n - 1] = k;
    }
    let (k1, rem) = d[1].div_rem(&state.c);
    if !rem.is_zero() {
        return Err(format!(
            "exponent {} of Q_1 is not a multiple of c = {}",
            d[1], state.c
        ));
    }
    d[0] += &k1 * &state.e1;
    gamma[0] = k1;
    if !d[0].is_zero() {
        return Err(format!("leftover power z^{} after reduction", d[0]));
    }
    Ok(gamma)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiFailure {
    pub value: Rat,
    pub first: Vec<i64>,
    pub second: Vec<i64>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiReport {
    pub budget: Rat,
    pub tuples: usize,
    pub classes: usize,
    pub pairs: usize,
    /// Pairs whose reduced exponent of some `gamma_n` has absolute value at
    /// least the degree of `gamma_n`. Informational.
    pub outside_degree_box: usize,
    pub failures: Vec<DiFailure>,
    pub passed: bool,
}
