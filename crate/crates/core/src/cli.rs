//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 on a domain error or a failed oracle
//! check, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decomposition::{Decomposition, Term};
use crate::error::Error;
use crate::homext::GenericCalculus;
use crate::lss::{generic_lss_decomposition, luna_strata, semi_invariant_generators};
use crate::oracle::{
    oracle_ext, oracle_hom, verify_decomposition, Check, DecompositionKind, OracleConfig,
    DEFAULT_PRIME, DEFAULT_TRIALS,
};
use crate::perp::{perp_schur, perp_sequence, Side};
use crate::quiver::{parse_csv, parse_quiver, DimVector, Quiver};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "quiver-lss",
    version,
    about = "Generic and locally semi-simple decompositions for acyclic quivers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Quiver file (`vertices n` and `arrow t h` lines, 1-based).
    #[arg(long, value_name = "FILE")]
    pub quiver: PathBuf,
    /// Dimension vector, e.g. `2,3`.
    #[arg(long, value_name = "CSV")]
    pub dim: Option<String>,
    /// Sequence of vectors, e.g. `1,0;1,1`.
    #[arg(long, value_name = "SEQ")]
    pub roots: Option<String>,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    pub side: SideArg,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u32,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Cross-check the result against sampled representations.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Generic,
    Lss,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler form <a,b> of the two vectors given by --roots.
    Euler(Common),
    /// Tits form and root class of --dim.
    Tits(Common),
    /// Generic decomposition of --dim.
    Decomp(Common),
    /// Generic locally semi-simple decomposition of --dim.
    Lss(Common),
    /// Perpendicular category of the real Schur root --dim.
    PerpRoot(Common),
    /// Perpendicular category of the sequence --roots.
    PerpSeq(Common),
    /// Luna strata of the prehomogeneous vector --dim.
    Strata(Common),
    /// Semi-invariant generator roots and weights for --dim.
    Generators(Common),
    /// Verify a decomposition given by --roots and --mults.
    Check {
        #[command(flatten)]
        common: Common,
        /// Multiplicities, one per root (default all 1).
        #[arg(long, value_name = "CSV")]
        mults: Option<String>,
        #[arg(long, value_enum, default_value_t = KindArg::Generic)]
        kind: KindArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Euler(_) => "euler",
            Command::Tits(_) => "tits",
            Command::Decomp(_) => "decomp",
            Command::Lss(_) => "lss",
            Command::PerpRoot(_) => "perp-root",
            Command::PerpSeq(_) => "perp-seq",
            Command::Strata(_) => "strata",
            Command::Generators(_) => "generators",
            Command::Check { .. } => "check",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Euler(c)
            | Command::Tits(c)
            | Command::Decomp(c)
            | Command::Lss(c)
            | Command::PerpRoot(c)
            | Command::PerpSeq(c)
            | Command::Strata(c)
            | Command::Generators(c) => c,
            Command::Check { common, .. } => common,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// What a command produced: JSON result, text lines, and oracle checks.
struct Output {
    result: Value,
    text: Vec<String>,
    checks: Option<CheckSet>,
}

#[derive(Serialize)]
struct CheckSet {
    kind: &'static str,
    passed: bool,
    checks: Vec<Check>,
}

impl CheckSet {
    fn new(kind: &'static str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        CheckSet {
            kind,
            passed,
            checks,
        }
    }
}

fn parse_vector(s: &str) -> Outcome<DimVector> {
    let entries = parse_csv(s).map_err(|e| Failure::Usage(format!("bad vector {s:?}: {e}")))?;
    DimVector::new(entries).map_err(|e| Failure::Usage(e.to_string()))
}

fn required_dim(c: &Common) -> Outcome<DimVector> {
    let s = c
        .dim
        .as_deref()
        .ok_or_else(|| Failure::Usage("--dim is required for this command".into()))?;
    parse_vector(s)
}

fn required_roots(c: &Common) -> Outcome<Vec<DimVector>> {
    let s = c
        .roots
        .as_deref()
        .ok_or_else(|| Failure::Usage("--roots is required for this command".into()))?;
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(parse_vector).collect()
}

fn config(c: &Common) -> Outcome<OracleConfig> {
    OracleConfig::new(c.prime, c.trials, c.seed).map_err(|e| Failure::Usage(e.to_string()))
}

fn load_quiver(c: &Common) -> Outcome<Quiver> {
    let text = std::fs::read_to_string(&c.quiver)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", c.quiver.display())))?;
    Ok(parse_quiver(&text)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn decomposition_lines(d: &Decomposition) -> Vec<String> {
    if d.terms.is_empty() {
        vec!["0".into()]
    } else {
        vec![d.to_string()]
    }
}

fn report_checks(
    q: &Quiver,
    d: &Decomposition,
    kind: DecompositionKind,
    cfg: &OracleConfig,
) -> CheckSet {
    let report = verify_decomposition(q, d, kind, cfg);
    let label = match kind {
        DecompositionKind::Generic => "generic",
        DecompositionKind::Lss => "lss",
    };
    CheckSet::new(label, report.checks)
}

/// Oracle checks that every output root lies on the requested side of
/// every input root.
fn perp_checks(
    q: &Quiver,
    inputs: &[DimVector],
    outputs: &[DimVector],
    side: Side,
    cfg: &OracleConfig,
) -> CheckSet {
    let mut checks = Vec::new();
    for g in inputs {
        for r in outputs {
            let (from, to) = match side {
                Side::Right => (g, r),
                Side::Left => (r, g),
            };
            let hom = oracle_hom(q, from, to, cfg);
            let ext = oracle_ext(q, from, to, cfg);
            for (name, value) in [("hom", hom), ("ext", ext)] {
                let (passed, detail) = match value {
                    Ok(v) => (v == 0, format!("{name} = {v}")),
                    Err(e) => (false, e.to_string()),
                };
                checks.push(Check {
                    name: format!("{name} {from} {to}"),
                    passed,
                    detail,
                });
            }
        }
    }
    CheckSet::new("perp", checks)
}

fn execute(cmd: &Command, q: &Quiver) -> Outcome<Output> {
    let c = cmd.common();
    let cfg = config(c)?;
    let calc = || GenericCalculus::new(q.clone());
    let out = match cmd {
        Command::Euler(_) => {
            let roots = required_roots(c)?;
            let [a, b] = <[DimVector; 2]>::try_from(roots).map_err(|r| {
                Failure::Usage(format!("euler needs exactly two vectors, got {}", r.len()))
            })?;
            let value = q.euler(a.as_slice(), b.as_slice())?;
            Output {
                result: json!({ "a": a, "b": b, "value": value }),
                text: vec![format!("<{a}, {b}> = {value}")],
                checks: None,
            }
        }
        Command::Tits(_) => {
            let a = required_dim(c)?;
            let (value, class) = q.tits(a.as_slice())?;
            Output {
                result: json!({ "dim": a, "value": value, "class": class }),
                text: vec![format!("q{a} = {value} [{class}]")],
                checks: None,
            }
        }
        Command::Decomp(_) => {
            let a = required_dim(c)?;
            let d = calc()?.generic_decomposition(&a)?;
            let checks = c
                .verify
                .then(|| report_checks(q, &d, DecompositionKind::Generic, &cfg));
            Output {
                result: to_value(&d),
                text: decomposition_lines(&d),
                checks,
            }
        }
        Command::Lss(_) => {
            let a = required_dim(c)?;
            let d = generic_lss_decomposition(&calc()?, &a)?;
            let checks = c
                .verify
                .then(|| report_checks(q, &d, DecompositionKind::Lss, &cfg));
            let mut text = decomposition_lines(&d);
            text.push(format!("almost loopless: {}", d.almost_loopless));
            Output {
                result: to_value(&d),
                text,
                checks,
            }
        }
        Command::PerpRoot(_) => {
            let g = required_dim(c)?;
            let side = Side::from(c.side);
            let roots = perp_schur(&calc()?, &g, side)?;
            let checks = c
                .verify
                .then(|| perp_checks(q, std::slice::from_ref(&g), &roots, side, &cfg));
            Output {
                result: json!({ "root": g, "side": side, "roots": roots }),
                text: roots.iter().map(ToString::to_string).collect(),
                checks,
            }
        }
        Command::PerpSeq(_) => {
            let seq = required_roots(c)?;
            let side = Side::from(c.side);
            let roots = perp_sequence(&calc()?, &seq, side)?;
            let checks = c.verify.then(|| perp_checks(q, &seq, &roots, side, &cfg));
            Output {
                result: json!({ "sequence": seq, "side": side, "roots": roots }),
                text: roots.iter().map(ToString::to_string).collect(),
                checks,
            }
        }
        Command::Strata(_) => {
            let b = required_dim(c)?;
            let strata = luna_strata(&calc()?, &b)?;
            let mut text = Vec::new();
            for (k, s) in strata.strata.iter().enumerate() {
                let sub: Vec<String> = s.subsequence.iter().map(ToString::to_string).collect();
                text.push(format!(
                    "stratum {}: [{}] {}",
                    k + 1,
                    sub.join(" "),
                    decomposition_lines(&s.decomposition)[0]
                ));
            }
            Output {
                result: to_value(&strata),
                text,
                checks: None,
            }
        }
        Command::Generators(_) => {
            let b = required_dim(c)?;
            let gens = semi_invariant_generators(&calc()?, &b)?;
            let text = if gens.is_empty() {
                vec!["no semi-invariant generators".into()]
            } else {
                gens.iter()
                    .map(|g| format!("root {} weight {}", g.root, g.weight))
                    .collect()
            };
            Output {
                result: json!({ "generators": gens }),
                text,
                checks: None,
            }
        }
        Command::Check { mults, kind, .. } => {
            let roots = required_roots(c)?;
            let mults: Vec<u64> = match mults {
                None => vec![1; roots.len()],
                Some(s) => parse_csv(s)
                    .map_err(|e| Failure::Usage(format!("bad --mults {s:?}: {e}")))?
                    .into_iter()
                    .map(|m| {
                        u64::try_from(m)
                            .map_err(|_| Failure::Usage(format!("negative multiplicity {m}")))
                    })
                    .collect::<Outcome<_>>()?,
            };
            if mults.len() != roots.len() {
                return Err(Failure::Usage(format!(
                    "{} multiplicities for {} roots",
                    mults.len(),
                    roots.len()
                )));
            }
            let terms = roots
                .into_iter()
                .zip(mults)
                .map(|(r, m)| Term::new(q, r, m))
                .collect::<Result<Vec<_>, _>>()?;
            let total = match &c.dim {
                Some(s) => parse_vector(s)?,
                None => {
                    Decomposition::new(DimVector::zero(q.vertex_count()), terms.clone()).sum()?
                }
            };
            let d = Decomposition::new(total, terms);
            let kind = match kind {
                KindArg::Generic => DecompositionKind::Generic,
                KindArg::Lss => DecompositionKind::Lss,
            };
            let set = report_checks(q, &d, kind, &cfg);
            Output {
                result: json!({ "decomposition": d, "passed": set.passed }),
                text: decomposition_lines(&d),
                checks: Some(set),
            }
        }
    };
    Ok(out)
}

fn quiver_json(q: &Quiver) -> Value {
    let arrows: Vec<[usize; 2]> = q.arrows().iter().map(|&(t, h)| [t + 1, h + 1]).collect();
    json!({ "n": q.vertex_count(), "arrows": arrows })
}

fn render(cmd: &Command, q: &Quiver, out: &Output) -> String {
    if cmd.common().json {
        let doc = json!({
            "v": SCHEMA_VERSION,
            "command": cmd.name(),
            "quiver": quiver_json(q),
            "result": out.result,
            "checks": out.checks.as_ref().map(to_value),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
        s.push('\n');
        return s;
    }
    let mut s = String::new();
    for line in &out.text {
        s.push_str(line);
        s.push('\n');
    }
    if let Some(set) = &out.checks {
        for c in &set.checks {
            let status = if c.passed { "ok" } else { "FAILED" };
            s.push_str(&format!("check {}: {status} ({})\n", c.name, c.detail));
        }
        s.push_str(&format!(
            "verification {}\n",
            if set.passed { "passed" } else { "failed" }
        ));
    }
    s
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let outcome = load_quiver(cli.command.common())
        .and_then(|q| execute(&cli.command, &q).map(|out| (q, out)));
    match outcome {
        Ok((q, out)) => {
            let _ = write!(stdout, "{}", render(&cli.command, &q, &out));
            match &out.checks {
                Some(set) if !set.passed => {
                    let _ = writeln!(stderr, "error: oracle verification failed");
                    1
                }
                _ => 0,
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
