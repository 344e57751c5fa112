//! Verification reports and their human and JSON renderings.

use std::fmt::Write;

use nca_core::{Check, Tolerances};

use crate::json::{self, Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub suite: String,
    pub check: Check,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub entries: Vec<Entry>,
    /// Per-suite computed values, in suite order.
    pub results: Vec<(String, Json)>,
}

impl Report {
    pub fn new(command: &str, seed: u64, tolerances: Tolerances) -> Self {
        Report {
            command: command.to_string(),
            seed,
            tolerances,
            entries: Vec::new(),
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, suite: &str, check: Check) {
        self.entries.push(Entry {
            suite: suite.to_string(),
            check,
        });
    }

    pub fn passed_count(&self) -> usize {
        self.entries.iter().filter(|e| e.check.passed).count()
    }

    pub fn failed_count(&self) -> usize {
        self.entries.len() - self.passed_count()
    }

    pub fn passed(&self) -> bool {
        self.failed_count() == 0
    }

    pub fn to_json(&self) -> Json {
        let checks = self
            .entries
            .iter()
            .map(|e| {
                let mut o = Json::obj()
                    .with("suite", e.suite.as_str())
                    .with("check", e.check.name.as_str())
                    .with("passed", e.check.passed)
                    .with("residual", e.check.residual);
                if let Some(w) = &e.check.witness {
                    o.push("witness", json::witness(w));
                }
                o
            })
            .collect::<Vec<_>>();
        Json::obj()
            .with("command", self.command.as_str())
            .with("seed", self.seed)
            .with(
                "tolerances",
                Json::obj()
                    .with("pos", self.tolerances.pos)
                    .with("rank", self.tolerances.rank)
                    .with("eq", self.tolerances.eq),
            )
            .with(
                "summary",
                Json::obj()
                    .with("passed", self.passed_count())
                    .with("failed", self.failed_count()),
            )
            .with("checks", Json::Arr(checks))
            .with("results", Json::Obj(self.results.clone()))
    }

    fn human(&self) -> String {
        let mut out = String::new();
        writeln!(out, "nca {} (seed {})", self.command, self.seed).unwrap();
        let sw = self.entries.iter().map(|e| e.suite.len()).chain([5]).max().unwrap();
        let cw = self.entries.iter().map(|e| e.check.name.len()).chain([5]).max().unwrap();
        writeln!(out, "{:sw$}  {:cw$}  status  residual", "suite", "check").unwrap();
        for e in &self.entries {
            let status = if e.check.passed { "pass" } else { "FAIL" };
            writeln!(out, "{:sw$}  {:cw$}  {status:6}  {:.3e}", e.suite, e.check.name, e.check.residual).unwrap();
            if let Some(w) = &e.check.witness {
                writeln!(out, "{:sw$}  witness: {}", "", compact(&json::witness(w))).unwrap();
            }
        }
        for (suite, values) in &self.results {
            if let Json::Obj(fields) = values {
                for (key, v) in fields {
                    writeln!(out, "{suite}.{key}: {}", compact(v)).unwrap();
                }
            }
        }
        writeln!(out, "{} passed, {} failed", self.passed_count(), self.failed_count()).unwrap();
        out
    }
}

/// Single-line rendering with short floats, for the human format.
fn compact(j: &Json) -> String {
    match j {
        Json::Null => "null".into(),
        Json::Bool(b) => b.to_string(),
        Json::Int(i) => i.to_string(),
        Json::Num(x) => format!("{x:.6}"),
        Json::Str(s) => s.clone(),
        Json::Arr(items) => format!("[{}]", items.iter().map(compact).collect::<Vec<_>>().join(", ")),
        Json::Obj(fields) => format!(
            "{{{}}}",
            fields
                .iter()
                .map(|(k, v)| format!("{k}: {}", compact(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json().render(),
        Format::Human => report.human(),
    }
}
