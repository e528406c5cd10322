//! Certificates that the value semigroup grows after adjoining `lambda` with
//! `lambda^p = 1+t`, and lifts of values to the rank-two composite valuation.
//!
//! Over the extension, `Q_2 = w^{pc} - (1+t) tau^p z^{p e1}` splits into `p`
//! factors `h_j = w^c - omega^j lambda tau z^{e1}`. All but at most one of
//! them have value `e1 nu(z)`; the values sum to `nu(Q_2)`, which pins the
//! value of the last factor. When that value is not in the semigroup of
//! `nu(Q_0), nu(Q_1)` it is new, and the certificate records why.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{group_of, index, LexVal, NumSgp, Rat};
use crate::limits::Limits;
use crate::transform::GenSeqState;

pub const CERT_VERSION: u32 = 1;
pub const CERT_KIND: &str = "prop1-gap";
pub const SECTION_CONVENTION: &str =
    "phi(x-monomial of value v) = (v, 0); phi(t) = (0, 1); Phi = Q x Z ordered lexicographically";

/// The extension by a `p`-th root of `1+t`, with its `p` roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub p: u64,
    pub omega_count: u64,
}

impl ExtensionSpec {
    /// The extension matching the current center of `state`.
    pub fn for_state(state: &GenSeqState) -> Result<Self> {
        let p = state.prime(1 + state.l)?;
        if p == state.characteristic {
            return Err(Error::InvalidInput(format!(
                "degree {p} equals the characteristic"
            )));
        }
        Ok(ExtensionSpec { p, omega_count: p })
    }
}

/// The state data a certificate depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub characteristic: u64,
    pub l: usize,
    pub j: usize,
    pub p: u64,
    #[serde(with = "crate::exactnum::serde_int")]
    pub c: BigInt,
    #[serde(with = "crate::exactnum::serde_int")]
    pub e1: BigInt,
    pub nu_q0: Rat,
    pub nu_q1: Rat,
    pub nu_q2: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapChecks {
    pub sum: bool,
    #[serde(rename = "lt_nuQ2")]
    pub lt_nu_q2: bool,
    pub not_in_group: bool,
    pub not_in_semigroup: bool,
}

/// Data from which nonmembership can be read off directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapWitness {
    /// Least common denominator of `nu(Q_0), nu(Q_1)`.
    #[serde(with = "crate::exactnum::serde_int")]
    pub scale: BigInt,
    /// `scale * gap` when integral.
    pub scaled_gap: Option<String>,
    /// Modulus of the residue table used for membership.
    pub residue_modulus: u64,
    /// Least scaled semigroup element in the residue class of the scaled gap;
    /// the gap is a member iff it is at least this.
    pub residue_least: Option<String>,
    /// Positive generator of `G(nu(Q_0), nu(Q_1))`.
    pub group_generator: Rat,
    /// `[G(nu(Q_0), nu(Q_1)) : G(nu(Q_0))]`, equal to `c`.
    #[serde(with = "crate::exactnum::serde_int")]
    pub index_q1: BigInt,
    /// `[G(nu(Q_0), nu(Q_1), nu(Q_2)) : G(nu(Q_0), nu(Q_1))]`.
    #[serde(with = "crate::exactnum::serde_int")]
    pub index_q2: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub version: u32,
    pub kind: String,
    pub snapshot: Snapshot,
    pub h_values: Vec<Rat>,
    pub gap: Rat,
    pub checks: GapChecks,
    pub witness: GapWitness,
    pub narrative: String,
}

impl GapCertificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn holds(&self) -> bool {
        self.checks.sum && self.checks.lt_nu_q2 && self.checks.not_in_semigroup
    }
}

/// Result of trying to certify a gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapOutcome {
    Issued(GapCertificate),
    /// The candidate gap lies in the semigroup; kept for inspection.
    Refuted(GapCertificate),
}

impl GapOutcome {
    pub fn certificate(&self) -> &GapCertificate {
        match self {
            GapOutcome::Issued(c) | GapOutcome::Refuted(c) => c,
        }
    }

    pub fn is_issued(&self) -> bool {
        matches!(self, GapOutcome::Issued(_))
    }
}

fn snapshot_of(state: &GenSeqState, ext: &ExtensionSpec) -> Result<Snapshot> {
    let expected = ExtensionSpec::for_state(state)?;
    if *ext != expected {
        return Err(Error::InvalidInput(format!(
            "extension of degree {} with {} roots of unity does not match p_{} = {}",
            ext.p,
            ext.omega_count,
            1 + state.l,
            expected.p
        )));
    }
    let nu_q2 = state
        .nu_q(2)
        .ok_or_else(|| Error::InvalidInput("state does not track Q_2".into()))?;
    Ok(Snapshot {
        characteristic: state.characteristic,
        l: state.l,
        j: state.j,
        p: ext.p,
        c: state.c.clone(),
        e1: state.e1.clone(),
        nu_q0: state.nuz.clone(),
        nu_q1: state.nuw.clone(),
        nu_q2,
    })
}

fn snapshot_h_values(s: &Snapshot) -> Result<Vec<Rat>> {
    if s.p < 2 || s.p == s.characteristic {
        return Err(Error::InvalidInput(format!(
            "unusable extension degree {}",
            s.p
        )));
    }
    if !s.nu_q0.is_positive() || !s.nu_q1.is_positive() {
        return Err(Error::InvalidInput(
            "parameter values must be positive".into(),
        ));
    }
    let base = &s.nu_q0 * &s.e1;
    if &s.nu_q1 * &s.c != base {
        return Err(Error::Invariant(format!(
            "c nu(w) = {} differs from e1 nu(z) = {base}",
            &s.nu_q1 * &s.c
        )));
    }
    let p = BigInt::from(s.p);
    if s.nu_q2 <= &base * &p {
        return Err(Error::Invariant(format!(
            "nu(Q_2) = {} is not above p e1 nu(z) = {}",
            s.nu_q2,
            &base * &p
        )));
    }
    let gap = &s.nu_q2 - &base * &(&p - 1);
    let mut out = vec![base; (s.p - 1) as usize];
    out.push(gap);
    let total: Rat = out.iter().cloned().sum();
    if total != s.nu_q2 {
        return Err(Error::Invariant(format!(
            "h-values sum to {total}, not nu(Q_2) = {}",
            s.nu_q2
        )));
    }
    Ok(out)
}

/// Values of the `p` factors of `Q_2` over the extension: `p - 1` copies of
/// `e1 nu(z)`, then the remaining value.
pub fn h_values(state: &GenSeqState, ext: &ExtensionSpec) -> Result<Vec<Rat>> {
    snapshot_h_values(&snapshot_of(state, ext)?)
}

fn derive(s: &Snapshot, limits: &Limits) -> Result<GapCertificate> {
    let h = snapshot_h_values(s)?;
    let gap = h.last().expect("p >= 2").clone();
    let sum = h.iter().cloned().sum::<Rat>() == s.nu_q2;
    let lt = gap < s.nu_q2;
    if !lt {
        return Err(Error::Invariant(format!(
            "gap {gap} is not below nu(Q_2) = {}",
            s.nu_q2
        )));
    }
    let gens = vec![s.nu_q0.clone(), s.nu_q1.clone()];
    let sgp = NumSgp::new(gens.clone())?;
    let table = sgp.apery(limits)?;
    let scaled = sgp.scaled(&gap);
    let in_semigroup = scaled.as_ref().is_some_and(|n| table.contains(n));
    let residue_least = scaled.as_ref().and_then(|n| {
        if !(n % &table.gcd).to_u64().is_some_and(|r| r == 0) {
            return None;
        }
        let r = ((n / &table.gcd) % table.modulus).to_usize()?;
        Some((BigInt::from(table.least[r]) * &table.gcd).to_string())
    });
    let g01 = group_of(&gens)?;
    let g0 = group_of(&gens[..1])?;
    let g012 = group_of(&[s.nu_q0.clone(), s.nu_q1.clone(), s.nu_q2.clone()])?;
    let in_group = g01.contains(&gap);
    let index_q1 = index(&g01, &g0)?;
    let index_q2 = index(&g012, &g01)?;

    let checks = GapChecks {
        sum,
        lt_nu_q2: lt,
        not_in_group: !in_group,
        not_in_semigroup: !in_semigroup,
    };
    let base = &h[0];
    let narrative = if in_semigroup {
        format!(
            "The remaining factor has value {gap} = nu(Q_2) - {} * {base}, which lies in \
             S({}, {}); no new value is certified.",
            s.p - 1,
            s.nu_q0,
            s.nu_q1
        )
    } else {
        let level = if in_group {
            format!(
                "{gap} lies in G({}, {}) = {}Z but not in S({}, {})",
                s.nu_q0, s.nu_q1, g01.generator, s.nu_q0, s.nu_q1
            )
        } else {
            format!(
                "{gap} is not even in G({}, {}) = {}Z",
                s.nu_q0, s.nu_q1, g01.generator
            )
        };
        format!(
            "Over the extension of degree {p}, Q_2 splits into {p} factors; {k} of them have \
             value e1 nu(z) = {base}, and the values sum to nu(Q_2) = {q2}, so the last has \
             value {gap} < nu(Q_2). Every value of the base ring below nu(Q_2) lies in \
             S({z}, {w}), and {level}. If it were a base value, nu(Q_2) = {k} * {base} + {gap} \
             would lie in G({z}, {w}), whose index in G({z}, {w}, {q2}) is {idx}. The value \
             semigroup therefore grows.",
            p = s.p,
            k = s.p - 1,
            q2 = s.nu_q2,
            z = s.nu_q0,
            w = s.nu_q1,
            idx = index_q2,
        )
    };
    Ok(GapCertificate {
        version: CERT_VERSION,
        kind: CERT_KIND.to_string(),
        snapshot: s.clone(),
        h_values: h,
        gap,
        checks,
        witness: GapWitness {
            scale: sgp.scale.clone(),
            scaled_gap: scaled.map(|n| n.to_string()),
            residue_modulus: table.modulus,
            residue_least,
            group_generator: g01.generator,
            index_q1,
            index_q2,
        },
        narrative,
    })
}

/// Issues a certificate for the value of the special factor, or reports
/// that it lies in the semigroup.
pub fn certify_gap(
    state: &GenSeqState,
    ext: &ExtensionSpec,
    limits: &Limits,
) -> Result<GapOutcome> {
    let cert = derive(&snapshot_of(state, ext)?, limits)?;
    Ok(if cert.holds() {
        GapOutcome::Issued(cert)
    } else {
        GapOutcome::Refuted(cert)
    })
}

/// Re-derives every field of a certificate from its snapshot. True iff the
/// certificate is exactly what would be issued and all its claims hold.
pub fn recheck(json: &str, limits: &Limits) -> Result<bool> {
    let cert: GapCertificate =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if cert.version != CERT_VERSION || cert.kind != CERT_KIND {
        return Ok(false);
    }
    let derived = match derive(&cert.snapshot, limits) {
        Ok(d) => d,
        Err(Error::Invariant(_)) | Err(Error::InvalidInput(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(derived == cert && derived.holds())
}

/// A value of the base semigroup with its lift to the composite valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lift {
    pub value: Rat,
    pub lift: LexVal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectionCertificate {
    pub section: String,
    pub t_value: LexVal,
    pub t_projection: Rat,
    pub lifts: Vec<Lift>,
    /// Every lift projects back to its value.
    pub all_project: bool,
}

/// Lifts each value `v` to `(v, 0)` under the monomial section and records
/// the value of `t`.
pub fn composite_lift(values: &[Rat], t_value: &LexVal) -> Result<SurjectionCertificate> {
    if let Some(v) = values.iter().find(|v| v.is_negative()) {
        return Err(Error::InvalidInput(format!("negative value {v}")));
    }
    let lifts: Vec<Lift> = values
        .iter()
        .map(|v| Lift {
            value: v.clone(),
            lift: LexVal::new(v.clone(), 0),
        })
        .collect();
    let all_project = lifts.iter().all(|l| l.lift.project() == l.value);
    Ok(SurjectionCertificate {
        section: SECTION_CONVENTION.to_string(),
        t_value: t_value.clone(),
        t_projection: t_value.project(),
        lifts,
        all_project,
    })
}

/// Elements of `S(nu(Q_0), ..., nu(Q_depth))` up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupTruncation {
    pub generators: Vec<Rat>,
    pub bound: Rat,
    pub values: Vec<Rat>,
    /// True when `bound <= p_{depth+l}^2 nu(Q_depth) < nu(Q_{depth+1})`, so no
    /// untracked element contributes below the bound.
    pub exact: bool,
}

pub fn truncated_semigroup(
    state: &GenSeqState,
    bound: &Rat,
    limits: &Limits,
) -> Result<SemigroupTruncation> {
    let generators = state.values();
    let sgp = NumSgp::new(generators.clone())?;
    let values = sgp.enumerate(bound, limits)?;
    let d = state.depth();
    let p = state.p_at(d)?;
    let ceiling = state.nu_q(d).expect("tracked") * &(&p * &p);
    Ok(SemigroupTruncation {
        generators,
        bound: bound.clone(),
        values,
        exact: *bound <= ceiling,
    })
}
