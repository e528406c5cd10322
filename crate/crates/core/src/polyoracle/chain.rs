//! Explicit polynomials for the generating sequence and exact checks of the
//! transform module against them.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::coeff::CoeffField;
use super::sparse::{SparsePoly, Substitution};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::limits::Limits;
use crate::scenario::{build_a_seq, initial_state_from_primes, ASeq, PrimeSeq};
use crate::transform::{GenSeqState, StepCase};

/// Which family an identity belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    /// The recurrence for `P_i` against the template at `R_0`.
    PSeq,
    /// Strict transforms under the move to the next center.
    Eq21,
    /// Strict transforms under a quadratic step.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub characteristic: u64,
    pub primes: Vec<u64>,
    pub depth: usize,
    pub l_max: usize,
    pub step_max: usize,
    pub identities: Vec<IdentityCheck>,
    pub passed: bool,
}

impl ChainReport {
    pub fn of_kind(&self, kind: IdentityKind) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(move |c| c.kind == kind)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identities.iter().filter(|c| !c.passed)
    }
}

fn to_u64(n: &BigInt, what: &str) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::Resource(format!("exponent {what} = {n} does not fit the oracle")))
}

fn xy_vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

/// Variables `z, w, u1, ..., u_units` used for templates.
pub fn template_vars(units: usize) -> Vec<String> {
    let mut v = vec!["z".to_string(), "w".to_string()];
    v.extend((1..=units).map(|k| format!("u{k}")));
    v
}

fn check_field(field: CoeffField, characteristic: u64) -> Result<()> {
    if field.characteristic() != characteristic {
        return Err(Error::InvalidInput(format!(
            "coefficient field {field} does not match characteristic {characteristic}"
        )));
    }
    Ok(())
}

/// `P_0 = x`, `P_1 = y`, `P_{i+1} = P_i^{p_i^2} - (1+t) x^{p_i a_i}`, for
/// `i < depth`.
pub fn build_p(
    depth: usize,
    primes: &PrimeSeq,
    a_seq: &ASeq,
    field: CoeffField,
    limits: &Limits,
) -> Result<Vec<SparsePoly>> {
    check_field(field, primes.characteristic)?;
    if depth == 0 || depth > primes.len() || depth > a_seq.a.len() + 1 {
        return Err(Error::InvalidInput(format!(
            "depth {depth} exceeds the {} available primes",
            primes.len()
        )));
    }
    let vars = xy_vars();
    let mut out = vec![
        SparsePoly::var(&vars, field, "x")?,
        SparsePoly::var(&vars, field, "y")?,
    ];
    for i in 1..depth {
        let p = primes.primes[i - 1];
        let x_exp = to_u64(&(&a_seq.a[i - 1] * p), "p a")?;
        let power = out[i].pow(p * p, limits)?;
        let tail = SparsePoly::monomial(&vars, field, vec![x_exp, 0], field.one_plus_t());
        out.push(power.sub(&tail)?);
    }
    Ok(out)
}

fn unit_monomial(
    state: &GenSeqState,
    vars: &[String],
    i: usize,
    power: &BigInt,
) -> Result<Vec<u64>> {
    let mut exps = vec![0u64; vars.len()];
    for f in state.tau(i) {
        let name = format!("u{}", f.var);
        let k = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| Error::InvalidInput(format!("unit variable {name} is not available")))?;
        exps[k] += to_u64(&(&f.exp * power), "unit")?;
    }
    Ok(exps)
}

/// `Q_0, ..., Q_depth` from the relations of `state`, starting from the given
/// polynomials for `Q_0` and `Q_1`.
pub fn template_from(
    state: &GenSeqState,
    q0: &SparsePoly,
    q1: &SparsePoly,
    limits: &Limits,
) -> Result<Vec<SparsePoly>> {
    let vars = q0.vars.clone();
    let field = q0.field;
    let mut out = vec![q0.clone(), q1.clone()];
    for i in 1..state.depth() {
        let p = state.p_at(i)?;
        let (lead_exp, e, f) = if i == 1 {
            (&p * &state.c, state.e1.clone(), BigInt::from(0))
        } else {
            let h = &state.higher[i - 2];
            (&p * &p, h.e.clone(), h.f.clone())
        };
        let lead = out[i].pow(to_u64(&lead_exp, "leading")?, limits)?;
        let unit = SparsePoly::monomial(
            &vars,
            field,
            unit_monomial(state, &vars, i, &p)?,
            field.one_plus_t(),
        );
        let tail = unit
            .mul(&q0.pow(to_u64(&(&p * &e), "z")?, limits)?, limits)?
            .mul(&q1.pow(to_u64(&(&p * &f), "w")?, limits)?, limits)?;
        out.push(lead.sub(&tail)?);
    }
    Ok(out)
}

/// Template polynomials of `state` in the variables `z, w, u1, ..., u_l`.
pub fn template_polys(state: &GenSeqState, limits: &Limits) -> Result<Vec<SparsePoly>> {
    let vars = template_vars(state.l);
    let field = CoeffField::from_characteristic(state.characteristic);
    let z = SparsePoly::var(&vars, field, "z")?;
    let w = SparsePoly::var(&vars, field, "w")?;
    template_from(state, &z, &w, limits)
}

fn record(
    out: &mut Vec<IdentityCheck>,
    kind: IdentityKind,
    name: String,
    passed: bool,
    detail: String,
) {
    out.push(IdentityCheck {
        kind,
        name,
        passed,
        detail,
    });
}

fn monomial_weight(nuz: &Rat, nuw: &Rat, z_exp: u64, w_exp: u64) -> Rat {
    nuz * &Rat::from(BigInt::from(z_exp)) + nuw * &Rat::from(BigInt::from(w_exp))
}

/// The recurrence for `P_i` equals the template at `R_0`, and both terms of
/// each relation have the same weight.
fn check_p_seq(
    state: &GenSeqState,
    depth: usize,
    limits: &Limits,
    out: &mut Vec<IdentityCheck>,
) -> Result<()> {
    let primes = PrimeSeq {
        characteristic: state.characteristic,
        primes: state.primes.clone(),
    };
    let field = CoeffField::from_characteristic(state.characteristic);
    let a = build_a_seq(&primes, depth)?;
    let ps = build_p(depth, &primes, &a, field, limits)?;
    let rename = Substitution::new(template_vars(0))
        .map("x", &[("z", 1)])?
        .map("y", &[("w", 1)])?;
    let templ = template_polys(state, limits)?;
    for (i, (p, t)) in ps.iter().zip(&templ).enumerate() {
        let img = p.substitute(&rename)?;
        let ok = img == *t;
        record(
            out,
            IdentityKind::PSeq,
            format!("p_seq_{i}"),
            ok,
            format!("{} terms", p.term_count()),
        );
    }
    for i in 1..depth {
        let p = BigInt::from(primes.primes[i - 1]);
        let lead = state.nu_q(i).expect("tracked") * &(&p * &p);
        let tail = Rat::from(&a.a[i - 1] * &p);
        record(
            out,
            IdentityKind::PSeq,
            format!("p_seq_weight_{}", i + 1),
            lead == tail,
            format!("{lead} vs {tail}"),
        );
    }
    Ok(())
}

/// Substitutes the move to the next center into the template of `state`,
/// divides by the predicted powers of the new `z`, and compares with the
/// template of the resulting state.
fn check_advance(
    state: &GenSeqState,
    limits: &Limits,
    out: &mut Vec<IdentityCheck>,
) -> Result<GenSeqState> {
    let trace = state.advance_center_traced()?;
    let next = &trace.state;
    let l = state.l;
    let dst = template_vars(l + 1);
    let unit = format!("u{}", l + 1);
    let p = to_u64(&state.p_at(1)?, "p")?;
    let e1 = to_u64(&state.e1, "e1")?;
    let ba = to_u64(&trace.bezout.a, "a")?;
    let bb = to_u64(&trace.bezout.b, "b")?;
    let mut subst = Substitution::new(dst.clone())
        .map("z", &[("z", p), (&unit, ba)])?
        .map("w", &[("z", e1), (&unit, bb)])?;
    for k in 1..=l {
        let u = format!("u{k}");
        subst = subst.map(&u, &[(&u, 1)])?;
    }
    let templ = template_polys(state, limits)?;
    let tag = format!("advance_l{l}");

    // Parameter values: z = x'^p, w = x'^e1 up to units.
    let nux = &next.nuz;
    let z_ok = state.nuz == nux * &Rat::from(BigInt::from(p));
    let w_ok = state.nuw == nux * &Rat::from(BigInt::from(e1));
    record(
        out,
        IdentityKind::Eq21,
        format!("{tag}_z_value"),
        z_ok,
        format!("{} = {p} * {nux}", state.nuz),
    );
    record(
        out,
        IdentityKind::Eq21,
        format!("{tag}_w_value"),
        w_ok,
        format!("{} = {e1} * {nux}", state.nuw),
    );

    let mut quotients = Vec::with_capacity(state.depth() - 1);
    for i in 1..state.depth() {
        let img = templ[i + 1].substitute(&subst)?;
        let found = img.min_exponent(0).unwrap_or(0);
        let predicted = to_u64(&trace.divisors[i - 1], "divisor")?;
        let mut m = vec![0u64; dst.len()];
        m[0] = found;
        let quot = img.divide_by_monomial(&m)?;
        let weight_drop = state.nu_q(i + 1).expect("tracked") - next.nu_q(i).expect("tracked");
        let weight = monomial_weight(nux, &Rat::zero(), found, 0);
        record(
            out,
            IdentityKind::Eq21,
            format!("{tag}_divisor_q{}", i + 1),
            found == predicted && weight == weight_drop,
            format!(
                "z^{found} (predicted z^{predicted}), weight {weight}, value drop {weight_drop}"
            ),
        );
        quotients.push(quot);
    }

    // w at the new center: u^{a p e1} (u^p - (1+t) tau_1^p).
    let field = CoeffField::from_characteristic(state.characteristic);
    let ui = dst.len() - 1;
    let mut lead = vec![0u64; dst.len()];
    lead[ui] = ba * p * e1 + p;
    let mut tail = unit_monomial(state, &dst, 1, &BigInt::from(p))?;
    tail[ui] += ba * p * e1;
    let w_expected = SparsePoly::monomial(&dst, field, lead, field.constant(1))
        .sub(&SparsePoly::monomial(&dst, field, tail, field.one_plus_t()))?;
    record(
        out,
        IdentityKind::Eq21,
        format!("{tag}_w_shape"),
        quotients[0] == w_expected,
        format!("{} terms", quotients[0].term_count()),
    );

    let z = SparsePoly::var(&dst, field, "z")?;
    let new_templ = template_from(next, &z, &quotients[0], limits)?;
    for i in 2..next.depth() + 1 {
        let ok = quotients[i - 1] == new_templ[i];
        record(
            out,
            IdentityKind::Eq21,
            format!("{tag}_q{}_to_q{i}", i + 1),
            ok,
            format!(
                "{} terms vs {} terms",
                quotients[i - 1].term_count(),
                new_templ[i].term_count()
            ),
        );
    }
    Ok(next.clone())
}

/// Substitutes one quadratic step into the template of `state`, divides by
/// the largest monomial in the new parameters, and compares with the
/// template of the resulting state.
fn check_step(
    state: &GenSeqState,
    limits: &Limits,
    out: &mut Vec<IdentityCheck>,
) -> Result<GenSeqState> {
    let trace = state.quadratic_step_traced()?;
    let next = &trace.state;
    let vars = template_vars(state.l);
    let mut subst = match trace.case {
        StepCase::ZOverW => Substitution::new(vars.clone())
            .map("z", &[("z", 1), ("w", 1)])?
            .map("w", &[("w", 1)])?,
        StepCase::WOverZ => Substitution::new(vars.clone())
            .map("z", &[("z", 1)])?
            .map("w", &[("z", 1), ("w", 1)])?,
    };
    for k in 1..=state.l {
        let u = format!("u{k}");
        subst = subst.map(&u, &[(&u, 1)])?;
    }
    let old = template_polys(state, limits)?;
    let new = template_polys(next, limits)?;
    let tag = format!("step_l{}_j{}", state.l, state.j);
    for (i, q) in old.iter().enumerate() {
        let img = q.substitute(&subst)?;
        let predicted = match (i, trace.case) {
            (0, StepCase::ZOverW) => (0, 1),
            (0, StepCase::WOverZ) | (1, StepCase::ZOverW) => (0, 0),
            (1, StepCase::WOverZ) => (1, 0),
            _ => {
                let d = &trace.divisors[i - 2];
                (to_u64(&d.z_exp, "divisor")?, to_u64(&d.w_exp, "divisor")?)
            }
        };
        // The parameters are monomials, so their exceptional factor is the
        // predicted one; higher elements determine theirs from the terms.
        let (fz, fw) = if i < 2 {
            predicted
        } else {
            (
                img.min_exponent(0).unwrap_or(0),
                img.min_exponent(1).unwrap_or(0),
            )
        };
        let mut m = vec![0u64; vars.len()];
        m[0] = fz;
        m[1] = fw;
        let quot = img.divide_by_monomial(&m)?;
        let weight = monomial_weight(&next.nuz, &next.nuw, fz, fw);
        let drop = state.nu_q(i).expect("tracked") - next.nu_q(i).expect("tracked");
        record(
            out,
            IdentityKind::Strict,
            format!("{tag}_divisor_q{i}"),
            (fz, fw) == predicted && weight == drop,
            format!(
                "z^{fz} w^{fw} (predicted z^{} w^{}), weight {weight}, value drop {drop}",
                predicted.0, predicted.1
            ),
        );
        record(
            out,
            IdentityKind::Strict,
            format!("{tag}_q{i}"),
            quot == new[i],
            format!(
                "{} terms vs {} terms",
                quot.term_count(),
                new[i].term_count()
            ),
        );
    }
    Ok(next.clone())
}

/// Builds the sequence at `R_0` with `depth` elements and checks, exactly,
/// the recurrence, every move to the next center up to `R_{l_max}`, and up
/// to `step_max` quadratic steps at each center.
pub fn verify_chain(
    primes: &PrimeSeq,
    depth: usize,
    l_max: usize,
    step_max: usize,
    limits: &Limits,
) -> Result<ChainReport> {
    if depth < 2 {
        return Err(Error::InvalidInput(
            "chain verification needs depth >= 2".into(),
        ));
    }
    if l_max + 2 > depth {
        return Err(Error::InvalidInput(format!(
            "depth {depth} supports at most {} moves of the center",
            depth - 2
        )));
    }
    let mut identities = Vec::new();
    let mut center = initial_state_from_primes(primes, depth)?;
    check_p_seq(&center, depth, limits, &mut identities)?;
    for l in 0..=l_max {
        let mut s = center.clone();
        for _ in 0..step_max {
            match check_step(&s, limits, &mut identities) {
                Ok(next) => s = next,
                Err(Error::ChainTerminated(_)) => break,
                Err(e) => return Err(e),
            }
        }
        if l < l_max {
            center = check_advance(&center, limits, &mut identities)?;
        }
    }
    let passed = identities.iter().all(|c| c.passed);
    Ok(ChainReport {
        characteristic: primes.characteristic,
        primes: primes.primes.clone(),
        depth,
        l_max,
        step_max,
        identities,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::build_primes;

    fn primes() -> PrimeSeq {
        build_primes(0, 4).unwrap()
    }

    #[test]
    fn p2_and_p3() {
        let pr = primes();
        let a = build_a_seq(&pr, 3).unwrap();
        let ps = build_p(3, &pr, &a, CoeffField::Rational, &Limits::default()).unwrap();
        assert_eq!(
            ps[2].dump(),
            "# vars x y over Q[t]\n(1) * y^4\n(-1 - 1*t) * x^6\n"
        );
        assert_eq!(ps[3].term_count(), 11);
        // leading term y^36, and the lone x^57 tail
        assert!(ps[3].terms.contains_key(&vec![0, 36]));
        assert!(ps[3].terms.contains_key(&vec![57, 0]));
        let one = build_p(1, &pr, &a, CoeffField::Rational, &Limits::default()).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!(
            one[1],
            SparsePoly::var(&xy_vars(), CoeffField::Rational, "y").unwrap()
        );
    }

    #[test]
    fn field_mismatch_is_rejected() {
        let pr = primes();
        let a = build_a_seq(&pr, 2).unwrap();
        assert!(build_p(2, &pr, &a, CoeffField::Prime(2), &Limits::default()).is_err());
    }

    #[test]
    fn eq21_instance() {
        let report = verify_chain(&primes(), 3, 1, 0, &Limits::default()).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        assert!(report
            .of_kind(IdentityKind::Eq21)
            .any(|c| c.name == "advance_l0_q3_to_q2"));
        assert_eq!(report.of_kind(IdentityKind::Strict).count(), 0);
    }

    #[test]
    fn full_small_chain() {
        let report = verify_chain(&primes(), 3, 1, 2, &Limits::default()).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        // two steps at each of R_0 and R_1, four elements then three
        assert_eq!(
            report.of_kind(IdentityKind::Strict).count(),
            2 * (2 * 4 + 2 * 3)
        );
    }

    #[test]
    fn char_two() {
        let pr = build_primes(2, 3).unwrap();
        let report = verify_chain(&pr, 3, 1, 2, &Limits::default()).unwrap();
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn tampered_state_is_caught() {
        let pr = primes();
        let mut s = initial_state_from_primes(&pr, 3).unwrap();
        s.higher[0].e += 1;
        let mut out = Vec::new();
        check_p_seq(&s, 3, &Limits::default(), &mut out).unwrap();
        assert!(out.iter().any(|c| c.name == "p_seq_3" && !c.passed));
        assert!(out.iter().any(|c| c.name == "p_seq_2" && c.passed));
    }
}
