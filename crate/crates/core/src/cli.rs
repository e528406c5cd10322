//! The `valsgp` command-line front end.
//!
//! Every subcommand builds one report value; `--json` prints it as JSON,
//! otherwise a short text summary is printed. Files named by `--out` always
//! receive JSON and are written to a temporary file first, then renamed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{LexVal, NumSgp, Rat};
use crate::gapcert::{
    certify_gap, composite_lift, recheck, truncated_semigroup, ExtensionSpec, GapOutcome,
    SemigroupTruncation, SurjectionCertificate,
};
use crate::limits::Limits;
use crate::polyoracle::{
    build_p, discriminant_check, verify_chain, CoeffField, DiscReport, IdentityCheck, IdentityKind,
};
use crate::scenario::{build_a_seq, build_primes, p_values, state_at_center, ScenarioConfig};
use crate::transform::{AuditReport, GenSeqState};

#[derive(Parser, Debug)]
#[command(
    name = "valsgp",
    version,
    about = "Valuation semigroups, generating sequences and gap certificates"
)]
struct Cli {
    /// Print machine-readable JSON instead of a text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a scenario configuration.
    Scenario(ScenarioArgs),
    /// Move the center, run quadratic steps and audit each state.
    Chain(ChainArgs),
    /// Enumerate or query a numerical semigroup with rational generators.
    Semigroup(SemigroupArgs),
    /// Polynomial oracle checks.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Issue certificates.
    Certify {
        #[command(subcommand)]
        command: CertifyCommand,
    },
    /// Re-check a gap certificate offline.
    Recheck {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
    #[arg(long = "primes", default_value_t = 5)]
    prime_count: usize,
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    l: usize,
    #[arg(long, default_value = "8")]
    bound: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Scenario file, or `default`.
    #[arg(long, default_value = "default")]
    scenario: String,
    /// Number of center moves from `R_0`; defaults to the scenario's `l`.
    #[arg(long)]
    advance: Option<usize>,
    /// `auto` runs until the chain terminates.
    #[arg(long, default_value = "auto")]
    steps: String,
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SemigroupArgs {
    /// Comma-separated positive rationals.
    #[arg(long)]
    gens: String,
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    member: Option<String>,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    Verify(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleWhat {
    PSeq,
    Eq21,
    Strict,
    Disc,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_enum)]
    what: OracleWhat,
    /// Number of elements of the sequence at `R_0`.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Degree for the discriminant; all small primes when omitted.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
    #[arg(long, default_value_t = 1)]
    l_max: usize,
    #[arg(long, default_value_t = 2)]
    steps: usize,
    /// Print the polynomials `P_0, ..., P_depth`.
    #[arg(long)]
    dump: bool,
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Gap certificate for the special factor of `Q_2`.
    Prop1(CertifyArgs),
    /// Lifts of truncated semigroup values to the composite valuation.
    Lift(LiftArgs),
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// State file; the default scenario at its center when omitted.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, default_value = "4")]
    bound: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Output of one command: the report, its text form, and the exit code.
struct Outcome {
    json: String,
    text: String,
    code: i32,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, text: String, code: i32) -> Result<Self> {
        Ok(Outcome {
            json: serde_json::to_string_pretty(report)?,
            text,
            code,
        })
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let limits = Limits::from_env();
    match dispatch(&cli.command, &limits) {
        Ok((outcome, path)) => {
            if let Some(path) = path {
                if let Err(e) = write_atomic(&path, &outcome.json) {
                    let _ = writeln!(err, "error: {e}");
                    return e.exit_code();
                }
            }
            let body = if cli.json {
                &outcome.json
            } else {
                &outcome.text
            };
            let _ = writeln!(out, "{}", body.trim_end());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, limits: &Limits) -> Result<(Outcome, Option<PathBuf>)> {
    match cmd {
        Command::Scenario(a) => Ok((cmd_scenario(a)?, None)),
        Command::Chain(a) => Ok((cmd_chain(a)?, a.out.clone())),
        Command::Semigroup(a) => Ok((cmd_semigroup(a, limits)?, None)),
        Command::Oracle {
            command: OracleCommand::Verify(a),
        } => Ok((cmd_oracle(a, limits)?, None)),
        Command::Certify {
            command: CertifyCommand::Prop1(a),
        } => Ok((cmd_prop1(a, limits)?, a.out.clone())),
        Command::Certify {
            command: CertifyCommand::Lift(a),
        } => Ok((cmd_lift(a, limits)?, a.out.clone())),
        Command::Recheck { cert } => Ok((cmd_recheck(cert, limits)?, None)),
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Error::Parse(format!("not a rational: {s:?}")))
}

fn load_scenario(name: &str) -> Result<ScenarioConfig> {
    let config = if name == "default" {
        ScenarioConfig::default()
    } else {
        serde_json::from_str(&read_file(Path::new(name))?)?
    };
    config.validate()?;
    Ok(config)
}

fn load_state(path: Option<&PathBuf>) -> Result<GenSeqState> {
    match path {
        Some(p) => GenSeqState::from_json(&read_file(p)?),
        None => {
            let config = ScenarioConfig::default();
            state_at_center(&config, config.l)
        }
    }
}

fn join(values: &[Rat]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn describe_state(s: &GenSeqState) -> String {
    let higher: Vec<String> = s
        .higher
        .iter()
        .map(|h| format!("Q_{}: e={} f={} nu={}", h.i, h.e, h.f, h.nu))
        .collect();
    format!(
        "R_{} j={}: nu(z)={} nu(w)={} c={} e1={}; {}",
        s.l,
        s.j,
        s.nuz,
        s.nuw,
        s.c,
        s.e1,
        higher.join("; ")
    )
}

#[derive(Serialize)]
struct ScenarioReport {
    config: ScenarioConfig,
    primes: Vec<u64>,
    a_seq: Vec<String>,
    values: Vec<Rat>,
}

fn cmd_scenario(a: &ScenarioArgs) -> Result<Outcome> {
    let config = ScenarioConfig {
        characteristic: a.characteristic,
        prime_count: a.prime_count,
        depth: a.depth,
        l: a.l,
        bound: parse_rat(&a.bound)?,
    };
    config.validate()?;
    let primes = config.primes()?;
    let aseq = build_a_seq(&primes, primes.len())?;
    let values = p_values(&primes, &aseq);
    let text = format!(
        "characteristic {}, primes [{}], depth {}, l {}, bound {}\na = [{}]\nnu(P_i) = [{}]",
        config.characteristic,
        primes
            .primes
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        config.depth,
        config.l,
        config.bound,
        aseq.a
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        join(&values)
    );
    if let Some(path) = &a.out {
        // the file holds the configuration itself
        write_atomic(path, &serde_json::to_string(&config)?)?;
    }
    let report = ScenarioReport {
        config,
        primes: primes.primes.clone(),
        a_seq: aseq.a.iter().map(|v| v.to_string()).collect(),
        values,
    };
    Outcome::new(&report, text, 0)
}

#[derive(Serialize)]
struct ChainEntry {
    state: GenSeqState,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditReport>,
}

#[derive(Serialize)]
struct ChainReport {
    scenario: ScenarioConfig,
    advance: usize,
    steps: usize,
    terminated: bool,
    audits_passed: Option<bool>,
    states: Vec<ChainEntry>,
}

fn cmd_chain(a: &ChainArgs) -> Result<Outcome> {
    let config = load_scenario(&a.scenario)?;
    let max_steps = match a.steps.as_str() {
        "auto" => None,
        k => Some(
            k.parse::<usize>()
                .map_err(|_| Error::Parse(format!("--steps expects auto or a count, got {k:?}")))?,
        ),
    };
    let advance = a.advance.unwrap_or(config.l);
    let start = state_at_center(&config, advance)?;
    let (states, terminated) = start.quadratic_chain(max_steps)?;
    let entries: Vec<ChainEntry> = states
        .into_iter()
        .map(|s| {
            let audit = a.audit.then(|| s.audit());
            ChainEntry { state: s, audit }
        })
        .collect();
    let audits_passed = a.audit.then(|| {
        entries
            .iter()
            .all(|e| e.audit.as_ref().is_some_and(|r| r.passed))
    });
    let mut text = String::new();
    for e in &entries {
        let _ = write!(text, "{}", describe_state(&e.state));
        if let Some(r) = &e.audit {
            let _ = write!(text, " | audit {}", if r.passed { "pass" } else { "FAIL" });
            for c in r.failures() {
                let _ = write!(text, " [{}: {}]", c.name, c.detail);
            }
        }
        text.push('\n');
    }
    let steps = entries.len() - 1;
    let _ = write!(
        text,
        "{steps} step(s); {}",
        if terminated {
            "chain terminated (nu(z) = nu(w))"
        } else {
            "step limit reached"
        }
    );
    let code = if audits_passed == Some(false) { 1 } else { 0 };
    let report = ChainReport {
        scenario: config,
        advance,
        steps,
        terminated,
        audits_passed,
        states: entries,
    };
    Outcome::new(&report, text, code)
}

#[derive(Serialize)]
struct SemigroupReport {
    generators: Vec<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    member: Option<(Rat, bool)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Rat>>,
}

fn cmd_semigroup(a: &SemigroupArgs, limits: &Limits) -> Result<Outcome> {
    let gens = a
        .gens
        .split(',')
        .map(parse_rat)
        .collect::<Result<Vec<_>>>()?;
    let sgp = NumSgp::new(gens.clone())?;
    if a.member.is_none() && a.bound.is_none() {
        return Err(Error::InvalidInput(
            "give --member, --bound, or both".into(),
        ));
    }
    let member = match &a.member {
        Some(v) => {
            let v = parse_rat(v)?;
            let m = sgp.member(&v, limits)?;
            Some((v, m))
        }
        None => None,
    };
    let bound = a.bound.as_deref().map(parse_rat).transpose()?;
    let elements = match &bound {
        Some(b) => Some(sgp.enumerate(b, limits)?),
        None => None,
    };
    let mut lines = Vec::new();
    if let Some(els) = &elements {
        lines.push(join(els));
    }
    if let Some((_, m)) = &member {
        lines.push(m.to_string());
    }
    let report = SemigroupReport {
        generators: gens,
        member,
        bound,
        elements,
    };
    Outcome::new(&report, lines.join("\n"), 0)
}

#[derive(Serialize)]
struct OracleReport {
    what: String,
    characteristic: u64,
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    identities: Vec<IdentityCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    discriminants: Vec<DiscReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    dumps: Vec<String>,
}

fn cmd_oracle(a: &OracleArgs, limits: &Limits) -> Result<Outcome> {
    let field = CoeffField::from_characteristic(a.characteristic);
    let mut text = String::new();
    let mut report = OracleReport {
        what: format!("{:?}", a.what).to_lowercase(),
        characteristic: a.characteristic,
        passed: true,
        identities: Vec::new(),
        discriminants: Vec::new(),
        dumps: Vec::new(),
    };
    if a.what == OracleWhat::Disc {
        let ps: Vec<u64> = match a.p {
            Some(p) => vec![p],
            None => [2u64, 3, 5, 7]
                .into_iter()
                .filter(|p| *p != a.characteristic)
                .collect(),
        };
        for p in ps {
            let d = discriminant_check(p, field)?;
            let _ = writeln!(
                text,
                "p={p}: disc = {}; formula {}; {}; unit*(1+t)^k: {}",
                d.discriminant,
                d.formula,
                if d.matches_formula {
                    "match"
                } else {
                    "MISMATCH"
                },
                d.one_plus_t_exponent
                    .map_or("no".into(), |k| format!("k={k}"))
            );
            report.passed &= d.matches_formula && d.unit_times_power;
            report.discriminants.push(d);
        }
    } else {
        let primes = build_primes(a.characteristic, a.depth)?;
        if a.dump {
            let aseq = build_a_seq(&primes, a.depth)?;
            for (i, p) in build_p(a.depth, &primes, &aseq, field, limits)?
                .iter()
                .enumerate()
            {
                let d = format!("# P_{i}\n{}", p.dump());
                let _ = write!(text, "{d}");
                report.dumps.push(d);
            }
        }
        let kind = match a.what {
            OracleWhat::PSeq => IdentityKind::PSeq,
            OracleWhat::Eq21 => IdentityKind::Eq21,
            _ => IdentityKind::Strict,
        };
        let (l_max, steps) = match kind {
            IdentityKind::PSeq => (0, 0),
            IdentityKind::Eq21 => (a.l_max, 0),
            IdentityKind::Strict => (a.l_max, a.steps),
        };
        let chain = verify_chain(&primes, a.depth, l_max, steps, limits)?;
        for c in chain.of_kind(kind) {
            let _ = writeln!(
                text,
                "{} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            );
            report.passed &= c.passed;
            report.identities.push(c.clone());
        }
    }
    let _ = write!(
        text,
        "{}",
        if report.passed {
            "all checks passed"
        } else {
            "some checks FAILED"
        }
    );
    let code = if report.passed { 0 } else { 1 };
    Outcome::new(&report, text, code)
}

fn cmd_prop1(a: &CertifyArgs, limits: &Limits) -> Result<Outcome> {
    let state = load_state(a.state.as_ref())?;
    let ext = ExtensionSpec::for_state(&state)?;
    let outcome = certify_gap(&state, &ext, limits)?;
    let cert = outcome.certificate();
    let text = format!(
        "{}: gap {} with h-values [{}]; not in semigroup: {}; not in group: {}",
        if outcome.is_issued() {
            "issued"
        } else {
            "REFUTED"
        },
        cert.gap,
        join(&cert.h_values),
        cert.checks.not_in_semigroup,
        cert.checks.not_in_group
    );
    let code = match outcome {
        GapOutcome::Issued(_) => 0,
        GapOutcome::Refuted(_) => 1,
    };
    Ok(Outcome {
        json: cert.to_json()?,
        text,
        code,
    })
}

#[derive(Serialize)]
struct LiftReport {
    truncation: SemigroupTruncation,
    certificate: SurjectionCertificate,
}

fn cmd_lift(a: &LiftArgs, limits: &Limits) -> Result<Outcome> {
    let state = load_state(a.state.as_ref())?;
    let bound = parse_rat(&a.bound)?;
    let truncation = truncated_semigroup(&state, &bound, limits)?;
    let certificate = composite_lift(&truncation.values, &LexVal::new(Rat::zero(), 1))?;
    let text = format!(
        "{} values up to {} (exact truncation: {}); all lifts project back: {}\nsection: {}",
        truncation.values.len(),
        bound,
        truncation.exact,
        certificate.all_project,
        certificate.section
    );
    let code = if certificate.all_project { 0 } else { 1 };
    Outcome::new(
        &LiftReport {
            truncation,
            certificate,
        },
        text,
        code,
    )
}

#[derive(Serialize)]
struct RecheckReport {
    valid: bool,
}

fn cmd_recheck(path: &Path, limits: &Limits) -> Result<Outcome> {
    let valid = recheck(&read_file(path)?, limits)?;
    Outcome::new(
        &RecheckReport { valid },
        valid.to_string(),
        if valid { 0 } else { 1 },
    )
}
