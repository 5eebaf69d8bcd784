//! Rendering of command results as text or JSON. Nothing here depends on
//! wall-clock time or hash order, so equal inputs give byte-identical output.

use lr_core::algebras::format_combination;
use lr_core::liecore::LieStructure;
use lr_core::{Report, Status};
use serde_json::{json, Value};

use crate::format::{self, Object, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// What a command produced.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Outcome {
    Report { command: String, report: Report },
    Structure { command: String, summary: Summary },
    Written { command: String, files: Vec<String> },
}

/// A computed Lie structure plus extra named facts (e.g. inner-derivation rank).
#[derive(Clone, Debug)]
pub struct Summary {
    pub structure: LieStructure,
    pub facts: Vec<(String, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Report { report, .. } => report.all_passed(),
            _ => true,
        }
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Text => self.text(),
            OutputFormat::Json => format::pretty(&self.json()),
        }
    }

    fn json(&self) -> Value {
        match self {
            Outcome::Report { command, report } => json!({
                "format": FORMAT_VERSION,
                "command": command,
                "status": if report.all_passed() { "pass" } else { "fail" },
                "checks": report.checks.iter().map(|c| json!({
                    "name": c.name,
                    "status": c.status.to_string(),
                    "witness": c.witness,
                })).collect::<Vec<_>>(),
            }),
            Outcome::Structure { command, summary } => {
                let obj = Object::from(summary.structure.clone());
                let body: Value = serde_json::from_str(&format::render(&obj)).expect("rendered JSON parses");
                json!({
                    "format": FORMAT_VERSION,
                    "command": command,
                    "dim": summary.structure.dim(),
                    "facts": summary.facts.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                    "structure": body,
                })
            }
            Outcome::Written { command, files } => json!({
                "format": FORMAT_VERSION,
                "command": command,
                "files": files,
            }),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Outcome::Report { command, report } => {
                out.push_str(&format!("{command}\n"));
                for c in &report.checks {
                    match &c.witness {
                        Some(w) => out.push_str(&format!("  {} {}: {}\n", c.status, c.name, w)),
                        None => out.push_str(&format!("  {} {}\n", c.status, c.name)),
                    }
                }
                let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
                let status = if failed == 0 { "pass" } else { "fail" };
                out.push_str(&format!(
                    "status: {status} ({} checks, {failed} failed)\n",
                    report.checks.len()
                ));
            }
            Outcome::Structure { command, summary } => {
                out.push_str(&format!("{command}\n"));
                out.push_str(&describe(&summary.structure));
                for (k, v) in &summary.facts {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            Outcome::Written { command, files } => {
                out.push_str(&format!("{command}\n"));
                for f in files {
                    out.push_str(&format!("  wrote {f}\n"));
                }
            }
        }
        out
    }
}

/// Dimension, basis, nonzero brackets, anchor images and (for Lie–Rinehart
/// structures) the base action on the basis.
pub fn describe(s: &LieStructure) -> String {
    let lie = s.lie();
    let names = lie.basis_names();
    let base = s.base();
    let mut out = format!("dim {}\nbasis: {}\n", s.dim(), names.join(", "));
    let mut brackets = Vec::new();
    for i in 0..s.dim() {
        for j in i + 1..s.dim() {
            let b = lie.basis_bracket(i, j);
            if b.iter().any(|c| !c.is_zero()) {
                brackets.push(format!(
                    "  [{}, {}] = {}\n",
                    names[i],
                    names[j],
                    format_combination(names, b)
                ));
            }
        }
    }
    if !brackets.is_empty() {
        out.push_str("brackets:\n");
        brackets.iter().for_each(|b| out.push_str(b));
    }
    let mut anchors = Vec::new();
    for (x, name) in names.iter().enumerate() {
        let w = s.anchored().omega(x);
        let images: Vec<String> = (0..base.dim())
            .filter_map(|a| {
                let img = w.column(a);
                img.iter()
                    .any(|c| !c.is_zero())
                    .then(|| format!("{} ↦ {}", base.basis_names()[a], base.format_element(&img)))
            })
            .collect();
        if !images.is_empty() {
            anchors.push(format!("  ω({name}): {}\n", images.join(", ")));
        }
    }
    if !anchors.is_empty() {
        out.push_str("anchor:\n");
        anchors.iter().for_each(|a| out.push_str(a));
    }
    if let Some(lr) = s.lie_rinehart() {
        let mut action = Vec::new();
        for a in 0..base.dim() {
            if base.unit()[a].is_one() && base.unit().iter().filter(|c| !c.is_zero()).count() == 1 {
                continue;
            }
            for x in 0..s.dim() {
                let v = lr.basis_action(a, x);
                if v.iter().any(|c| !c.is_zero()) {
                    action.push(format!(
                        "  {}·{} = {}\n",
                        base.basis_names()[a],
                        names[x],
                        format_combination(names, v)
                    ));
                }
            }
        }
        if !action.is_empty() {
            out.push_str("action:\n");
            action.iter().for_each(|a| out.push_str(a));
        }
    }
    out
}
