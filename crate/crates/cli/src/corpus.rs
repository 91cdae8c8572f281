//! The example corpus: one JSON file per invocation with its stored result.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{dispatch, CliError, Report};

pub const DEFAULT_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    /// A value stated in the reference text.
    Reference,
    Trivial,
    /// A value produced by an independent oracle.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryProvenance {
    pub kind: SourceKind,
    /// The statement or oracle the value comes from.
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    /// Arguments after the program name; `--json` is implied.
    pub command: Vec<String>,
    #[serde(default)]
    pub exit: i32,
    pub expected: Value,
    pub provenance: EntryProvenance,
}

/// One differing leaf, addressed by a JSON path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Difference {
    pub path: String,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryResult {
    pub id: String,
    pub passed: bool,
    pub provenance: EntryProvenance,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub differences: Vec<Difference>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<EntryResult>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Reads every `*.json` file in `dir`, sorted by id.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>, CliError> {
    let listing = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("missing corpus directory {}: {e}", dir.display())))?;
    let mut entries = Vec::new();
    for item in listing {
        let path = item.map_err(|e| CliError::Input(e.to_string()))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let entry: CorpusEntry = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        entries.push(entry);
    }
    if entries.is_empty() {
        return Err(CliError::Input(format!("no corpus files in {}", dir.display())));
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(entries)
}

/// Leaf-level differences between two JSON values.
pub fn diff(expected: &Value, actual: &Value) -> Vec<Difference> {
    let mut out = Vec::new();
    diff_at("$", expected, actual, &mut out);
    out
}

fn diff_at(path: &str, e: &Value, a: &Value, out: &mut Vec<Difference>) {
    match (e, a) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                let p = format!("{path}.{k}");
                diff_at(&p, x.get(k).unwrap_or(&Value::Null), y.get(k).unwrap_or(&Value::Null), out);
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            for i in 0..x.len().max(y.len()) {
                let p = format!("{path}[{i}]");
                diff_at(&p, x.get(i).unwrap_or(&Value::Null), y.get(i).unwrap_or(&Value::Null), out);
            }
        }
        _ if e != a => out.push(Difference {
            path: path.to_string(),
            expected: e.clone(),
            actual: a.clone(),
        }),
        _ => {}
    }
}

/// Re-executes one entry and compares exit status and output.
pub fn run_entry(entry: &CorpusEntry) -> EntryResult {
    let fail = |differences| EntryResult {
        id: entry.id.clone(),
        passed: false,
        provenance: entry.provenance.clone(),
        differences,
    };
    if entry.command.first().map(String::as_str) == Some("corpus") {
        return fail(vec![Difference {
            path: "$command".into(),
            expected: json!("a non-corpus subcommand"),
            actual: json!("corpus"),
        }]);
    }
    let mut argv = vec!["hermpic".to_string()];
    argv.extend(entry.command.iter().cloned());
    if !entry.command.iter().any(|a| a == "--json") {
        argv.push("--json".into());
    }
    let out = dispatch(argv);
    let mut differences = Vec::new();
    if out.code != entry.exit {
        differences.push(Difference {
            path: "$exit".into(),
            expected: json!(entry.exit),
            actual: json!(out.code),
        });
    }
    match serde_json::from_str::<Value>(&out.stdout) {
        Ok(actual) => differences.extend(diff(&entry.expected, &actual)),
        Err(_) => differences.push(Difference {
            path: "$".into(),
            expected: entry.expected.clone(),
            actual: json!({"stdout": out.stdout, "stderr": out.stderr}),
        }),
    }
    if differences.is_empty() {
        EntryResult {
            id: entry.id.clone(),
            passed: true,
            provenance: entry.provenance.clone(),
            differences,
        }
    } else {
        fail(differences)
    }
}

/// Runs the entries whose id matches `filter` concurrently; results come
/// back in id order.
pub fn run_corpus(entries: &[CorpusEntry], filter: Option<&str>) -> Result<CorpusReport, CliError> {
    let pattern = filter
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| CliError::Input(format!("bad filter: {e}")))?;
    let selected: Vec<&CorpusEntry> = entries
        .iter()
        .filter(|e| pattern.as_ref().is_none_or(|p| p.matches(&e.id)))
        .collect();
    let mut results: Vec<EntryResult> = selected.par_iter().map(|e| run_entry(e)).collect();
    results.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(CorpusReport {
        passed,
        failed: results.len() - passed,
        entries: results,
    })
}

pub(crate) fn corpus_command(dir: &Path, filter: Option<&str>) -> Result<Report, CliError> {
    let entries = load_corpus(dir)?;
    let report = run_corpus(&entries, filter)?;
    let mut text = String::new();
    for r in &report.entries {
        let kind = serde_json::to_value(r.provenance.kind).unwrap_or_default();
        text += &format!(
            "{} {} [{}: {}]\n",
            if r.passed { "ok  " } else { "FAIL" },
            r.id,
            kind.as_str().unwrap_or_default(),
            r.provenance.anchor
        );
        for d in &r.differences {
            text += &format!("    at {}: expected {}, got {}\n", d.path, d.expected, d.actual);
        }
    }
    text += &format!("{} passed, {} failed\n", report.passed, report.failed);
    Ok(Report {
        json: serde_json::to_value(&report).expect("serializable"),
        text,
        failed: !report.all_passed(),
    })
}
