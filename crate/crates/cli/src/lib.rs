//! Command-line front end for `hermpic-core`.

pub mod corpus;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use hermpic_core::abgrp::{fixed_and_twisted, tate_cohomology, AbGroup, GroupJson};
use hermpic_core::brauerseq::{run_scenario, ScenarioError, Scenario};
use hermpic_core::classgrp::{class_group, twisted_fixed_classes, ClassError};
use hermpic_core::hermforms::{kernel_representatives, pich, pich_bruteforce, verify_five_term};
use hermpic_core::pnpic::pic_p;
use hermpic_core::ringsinv::{Involution, RingError, RingWithInvolution};
use hermpic_core::unitsnorm::unit_group;
use hermpic_core::{Error, Limits};

#[derive(Parser, Debug)]
#[command(
    name = "hermpic",
    about = "Hermitian and Poincare Picard groups of rings with involution",
    version
)]
pub struct Cli {
    /// Print machine-readable JSON instead of a report
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unit group with the action of the involution
    Units {
        /// Shorthand (`finite:zmod8`, `imquad:-23:conj`), inline JSON or a JSON file
        #[arg(long, allow_hyphen_values = true)]
        ring: String,
    },
    /// Hermitian Picard group
    Pich {
        #[arg(long, allow_hyphen_values = true)]
        ring: String,
        /// Also run the enumeration path and cross-check
        #[arg(long)]
        oracle: bool,
    },
    /// Poincare Picard group
    Picp {
        #[arg(long, allow_hyphen_values = true)]
        ring: String,
    },
    /// Class group of an imaginary quadratic order
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, value_enum, default_value_t = InvolutionArg::Trivial)]
        involution: InvolutionArg,
    },
    /// Tate cohomology of a C2-module given as JSON
    Tate {
        /// `{"torsion":[..],"rank":r,"action":[[..]]}`, inline or a file
        #[arg(long)]
        group: String,
    },
    /// Solve for the unknown term of an exact-sequence scenario
    Scenario {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        name: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check exactness of the unit/class sequence of a ring
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        ring: String,
    },
    /// Re-run the example corpus and diff against stored results
    Corpus {
        #[arg(long, default_value = corpus::DEFAULT_DIR)]
        dir: PathBuf,
        /// Glob on entry ids, e.g. `pich-*`
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InvolutionArg {
    Trivial,
    Conj,
}

impl From<InvolutionArg> for Involution {
    fn from(a: InvolutionArg) -> Self {
        match a {
            InvolutionArg::Trivial => Involution::Trivial,
            InvolutionArg::Conj => Involution::Conj,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Compute(_) => "computation",
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let input = match &e {
            Error::Ring(r) => !matches!(r, RingError::Infinite | RingError::CapExceeded { .. }),
            Error::Class(c) => !matches!(c, ClassError::BoundExceeded { .. }),
            Error::Scenario(s) => !matches!(
                s,
                ScenarioError::Underdetermined(_) | ScenarioError::Inexact { .. }
            ),
            Error::Group(_) | Error::Structure(_) | Error::Form(_) => false,
        };
        if input {
            CliError::Input(e.to_string())
        } else {
            CliError::Compute(e.to_string())
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A command result: JSON for `--json`, text otherwise, plus a failure flag
/// for results that were computed but are not clean (exit 1).
struct Report {
    json: Value,
    text: String,
    failed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, failed: false }
    }
}

pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let limits = Limits::from_env();
    match run(&cli.command, &limits) {
        Ok(r) => Outcome {
            code: if r.failed { 1 } else { 0 },
            stdout: if cli.json { to_json_text(&r.json) } else { r.text },
            stderr: String::new(),
        },
        Err(e) if cli.json => Outcome {
            code: e.exit_code(),
            stdout: to_json_text(&json!({"error": e.to_string(), "kind": e.kind()})),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Inline text, or the contents of `arg` when it names an existing file.
fn read_arg(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")));
    }
    if arg.ends_with(".json") {
        return Err(CliError::Input(format!("no such file: {arg}")));
    }
    Ok(arg.to_string())
}

fn load_ring(arg: &str) -> Result<RingWithInvolution, CliError> {
    let text = read_arg(arg)?;
    RingWithInvolution::parse(&text).map_err(|e| CliError::from(Error::from(e)))
}

fn ring_label(r: &RingWithInvolution) -> Value {
    to_value(&r.to_spec())
}

fn run(cmd: &Command, limits: &Limits) -> Result<Report, CliError> {
    match cmd {
        Command::Units { ring } => units(&load_ring(ring)?, limits),
        Command::Pich { ring, oracle } => pich_cmd(&load_ring(ring)?, *oracle, limits),
        Command::Picp { ring } => picp(&load_ring(ring)?, limits),
        Command::Classgroup { disc, involution } => classgroup(*disc, (*involution).into(), limits),
        Command::Tate { group } => tate(group),
        Command::Scenario { name, file } => scenario(name.as_deref(), file.as_deref()),
        Command::Verify { ring } => verify(&load_ring(ring)?, limits),
        Command::Corpus { dir, filter } => corpus::corpus_command(dir, filter.as_deref()),
    }
}

fn units(r: &RingWithInvolution, limits: &Limits) -> Result<Report, CliError> {
    let u = unit_group(r, limits)?;
    let json = json!({
        "ring": ring_label(r),
        "order": u.order(),
        "group": u.group.to_json(),
        "action": u.group.action().to_rows(),
        "generators": u.generators(),
    });
    let gens: Vec<String> = u.generators().iter().map(|g| g.to_string()).collect();
    let text = format!(
        "units: {} (order {})\naction: {:?}\ngenerators: {}\n",
        u.group,
        u.order(),
        u.group.action().to_rows(),
        gens.join(", ")
    );
    Ok(Report::ok(json, text))
}

fn pich_cmd(r: &RingWithInvolution, oracle: bool, limits: &Limits) -> Result<Report, CliError> {
    let p = pich(r, limits)?;
    let reps: Vec<Value> = kernel_representatives(&p)
        .into_iter()
        .map(|(class, value)| json!({"class": class, "value": value}))
        .collect();
    let mut json = json!({
        "ring": ring_label(r),
        "group": p.group.to_json(),
        "kernel": p.kernel.group().to_json(),
        "quotient": p.quotient.group.to_json(),
        "generators": p.generators.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
        "kernel_representatives": reps,
        "section": p.section(),
        "warnings": p.warnings,
    });
    let mut text = format!(
        "Pic^h = {}\n  fixed units / norms = {}\n  twisted fixed classes = {}\n",
        p.group,
        p.kernel.group(),
        p.quotient.group
    );
    for (i, g) in p.generators.iter().enumerate() {
        text += &format!("  generator {i}: {g}\n");
    }
    let mut failed = !p.warnings.is_empty();
    for w in &p.warnings {
        text += &format!("warning: {}\n", serde_json::to_string(w).unwrap_or_default());
    }
    if oracle {
        let b = pich_bruteforce(r, limits)?;
        let agrees = b.group.isomorphic(&p.group);
        json["oracle"] = json!({
            "group": b.group.to_json(),
            "classes": b.classes,
            "agrees": agrees,
        });
        text += &format!(
            "oracle: {} ({})\n",
            b.group,
            if agrees { "agrees" } else { "DISAGREES" }
        );
        failed |= !agrees;
    }
    Ok(Report { json, text, failed })
}

fn picp(r: &RingWithInvolution, limits: &Limits) -> Result<Report, CliError> {
    let p = pic_p(r, limits)?;
    let gens: Vec<Value> = (0..p.group.ngens())
        .map(|j| {
            let e = p.element(&p.group.generator(j));
            json!({"line": e.line.to_json(), "degrees": e.degrees})
        })
        .collect();
    let json = json!({
        "hermitian": p.hermitian.group.to_json(),
        "shift_rank": p.shift_rank(),
        "total": p.group.to_json(),
        "components": p.shift.spec,
        "generators": gens,
    });
    let text = format!(
        "Pic^p = {}\n  hermitian part = {}\n  sign functions of rank {}\n",
        p.group,
        p.hermitian.group,
        p.shift_rank()
    );
    Ok(Report::ok(json, text))
}

fn classgroup(disc: i64, inv: Involution, limits: &Limits) -> Result<Report, CliError> {
    let cg = class_group(disc, inv, limits).map_err(Error::from)?;
    let tw = twisted_fixed_classes(&cg);
    let json = json!({
        "disc": disc,
        "involution": inv,
        "class_number": cg.class_number(),
        "group": cg.group.to_json(),
        "forms": cg.forms,
        "generators": cg.generators(),
        "twisted_fixed": tw.group.to_json(),
    });
    let forms: Vec<String> = cg.forms.iter().map(|f| f.to_string()).collect();
    let text = format!(
        "Cl({disc}) = {} (h = {})\nforms: {}\ntwisted fixed classes: {}\n",
        cg.group,
        cg.class_number(),
        forms.join(" "),
        tw.group
    );
    Ok(Report::ok(json, text))
}

fn parse_group(arg: &str) -> Result<AbGroup, CliError> {
    let text = read_arg(arg)?;
    let j: GroupJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed group JSON: {e}")))?;
    AbGroup::from_json(&j).map_err(|e| CliError::Input(e.to_string()))
}

fn tate(arg: &str) -> Result<Report, CliError> {
    let g = parse_group(arg)?;
    let t = tate_cohomology(&g);
    let fx = fixed_and_twisted(&g);
    let json = json!({
        "group": g.to_json(),
        "h0": t.h0.group().to_json(),
        "h1": t.h1.group().to_json(),
        "fixed": fx.fixed.group.to_json(),
        "twisted": fx.twisted.group.to_json(),
    });
    let text = format!(
        "H^0 = {}\nH^1 = {}\nfixed = {}\ntwisted fixed = {}\n",
        t.h0.group(),
        t.h1.group(),
        fx.fixed.group,
        fx.twisted.group
    );
    Ok(Report::ok(json, text))
}

fn scenario(name: Option<&str>, file: Option<&Path>) -> Result<Report, CliError> {
    let s = match (name, file) {
        (Some(n), _) => Scenario::builtin(n).map_err(Error::from)?,
        (None, Some(f)) => {
            let text = std::fs::read_to_string(f)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", f.display())))?;
            Scenario::from_json(&text).map_err(Error::from)?
        }
        (None, None) => return Err(CliError::Input("give --name or --file".into())),
    };
    let out = run_scenario(&s)?;
    let mut json = to_value(&out);
    json["value"] = to_value(&out.value().map(AbGroup::to_json));
    json["provenance"] = to_value(&s.provenance);
    let value = out
        .value()
        .map_or_else(|| "extension-ambiguous".to_string(), |g| g.to_string());
    let mut text = format!(
        "{}: {} = {value}\n  sub = {}, quotient = {}\n",
        out.name, out.unknown, out.sub, out.quotient
    );
    for lb in &out.lower_bounds {
        text += &format!("  lower bound {}: {}\n", lb.label, lb.group);
    }
    for p in &s.provenance {
        text += &format!("  [{}] {}\n", p.entry, p.anchor);
    }
    let failed = out.matches_expected == Some(false)
        || out.lower_bounds.iter().any(|l| l.matches_expected == Some(false));
    Ok(Report { json, text, failed })
}

fn verify(r: &RingWithInvolution, limits: &Limits) -> Result<Report, CliError> {
    let report = verify_five_term(r, limits)?;
    let exact = report.all_exact();
    let json = json!({
        "ring": ring_label(r),
        "exact": exact,
        "junctions": report.junctions,
    });
    let mut text = String::new();
    for j in &report.junctions {
        text += &format!(
            "term {}: {}\n",
            j.term,
            if j.exact { "exact" } else { "NOT exact" }
        );
    }
    Ok(Report {
        json,
        text,
        failed: !exact,
    })
}
