//! Command reports and their two renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gclh_core::verify::{Exactness, Witness};
use gclh_core::window::{HilbertTable, Window};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    VerdictFalse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub arguments: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub values: Vec<Value>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Witness>,
    pub stabilization: Vec<Stabilization>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub label: String,
    /// `None` stands for infinity (nothing nonzero found).
    pub value: Option<i64>,
}

/// Nonzero entries of a Hilbert table, in lexicographic degree order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub label: String,
    pub window: Window,
    pub entries: Vec<(Vec<i64>, usize)>,
}

impl Table {
    pub fn new(label: impl Into<String>, t: &HilbertTable) -> Self {
        Table {
            label: label.into(),
            window: t.window.clone(),
            entries: t.support().into_iter().map(|(d, v)| (d.0, v)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: String,
    /// `None` when the statement does not apply.
    pub holds: Option<bool>,
    pub exactness: Exactness,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub what: String,
    pub stabilized_at: Option<usize>,
    pub s_max: usize,
}

impl Report {
    pub fn new(command: &str, arguments: Vec<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            arguments,
            config: BTreeMap::new(),
            values: Vec::new(),
            tables: Vec::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            stabilization: Vec::new(),
            outcome: Outcome::Success,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    /// Sets the outcome from the verdicts: any `false` makes it `VerdictFalse`.
    pub fn settle(&mut self) {
        self.outcome = if self.verdicts.iter().any(|v| v.holds == Some(false)) {
            Outcome::VerdictFalse
        } else {
            Outcome::Success
        };
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Success => 0,
            Outcome::VerdictFalse => 1,
        }
    }
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Table => emit_table(report),
    }
}

pub fn parse_machine(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn exactness(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::WindowLimited => "window-limited",
    }
}

/// One table in the fixed-width layout, preceded by a blank line.
pub fn write_table(out: &mut String, t: &Table) {
    let _ = writeln!(out, "\n{}  on window {}", t.label, t.window);
    if t.entries.is_empty() {
        let _ = writeln!(out, "  all zero on window");
        return;
    }
    let cells: Vec<String> = t
        .entries
        .iter()
        .map(|(d, _)| format!("({})", d.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let dw = cells.iter().map(String::len).max().unwrap_or(0).max("degree".len());
    let vw = t.entries.iter().map(|(_, v)| v.to_string().len()).max().unwrap_or(0).max("dim".len());
    let _ = writeln!(out, "  {:<dw$}  {:>vw$}", "degree", "dim");
    for (cell, (_, v)) in cells.iter().zip(&t.entries) {
        let _ = writeln!(out, "  {cell:<dw$}  {v:>vw$}");
    }
}

fn emit_table(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "gclh {} {}", r.command, r.arguments.join(" "));
    if !r.config.is_empty() {
        let width = r.config.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &r.config {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
    }
    for v in &r.values {
        let shown = v.value.map_or("inf".to_string(), |x| x.to_string());
        let _ = writeln!(out, "\n{} = {}", v.label, shown);
    }
    for t in &r.tables {
        write_table(&mut out, t);
    }
    if !r.stabilization.is_empty() {
        let _ = writeln!(out, "\nstabilization");
        let ww = r.stabilization.iter().map(|s| s.what.len()).max().unwrap_or(0);
        for s in &r.stabilization {
            let at = s.stabilized_at.map_or("no".to_string(), |k| format!("stage {k}"));
            let _ = writeln!(out, "  {:<ww$}  {at} (of {})", s.what, s.s_max);
        }
    }
    if !r.verdicts.is_empty() {
        let _ = writeln!(out, "\nverdicts");
        let lw = r.verdicts.iter().map(|v| v.label.len()).max().unwrap_or(0);
        for v in &r.verdicts {
            let h = match v.holds {
                Some(true) => "true",
                Some(false) => "false",
                None => "n/a",
            };
            let _ = writeln!(
                out,
                "  {:<lw$}  {h:<5}  {:<14}  {}",
                v.label,
                exactness(v.exactness),
                v.detail
            );
        }
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(out, "\nwitnesses");
        for w in &r.witnesses {
            let n = w.n_label.as_deref().map(|n| format!("N = {n}, ")).unwrap_or_default();
            let _ = writeln!(out, "  {n}index {} at degree {}: {}", w.index, w.degree, w.detail);
        }
    }
    let _ = writeln!(
        out,
        "\noutcome: {}",
        match r.outcome {
            Outcome::Success => "success",
            Outcome::VerdictFalse => "verdict false",
        }
    );
    out
}
