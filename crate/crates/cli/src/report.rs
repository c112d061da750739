//! Run reports and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::scene::SceneError;
use orbicycle::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Error,
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Error => "error",
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommandReport {
    pub index: usize,
    pub line: usize,
    pub command: String,
    pub status: Status,
    pub fields: BTreeMap<String, Value>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub budget: Budget,
    pub field: Option<String>,
    pub warnings: Vec<String>,
    pub commands: Vec<CommandReport>,
    pub scene_error: Option<SceneError>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    /// A report for a scene that did not parse.
    pub fn rejected(seed: u64, budget: Budget, e: SceneError) -> Report {
        Report { seed, budget, field: None, warnings: vec![], commands: vec![], scene_error: Some(e) }
    }

    pub fn errors(&self) -> usize {
        self.commands.iter().filter(|c| c.status == Status::Error).count() + usize::from(self.scene_error.is_some())
    }

    pub fn failures(&self) -> usize {
        self.commands.iter().filter(|c| c.status == Status::Fail).count()
    }

    /// 0 when everything succeeded, 2 on any engine or scene error, else 1
    /// when a verification failed.
    pub fn exit_code(&self) -> i32 {
        if self.errors() > 0 {
            2
        } else if self.failures() > 0 {
            1
        } else {
            0
        }
    }

    fn budget_value(&self) -> Value {
        json!({
            "degree_bound": self.budget.degree_bound,
            "max_pairs": self.budget.max_pairs,
            "max_terms": self.budget.max_terms,
        })
    }

    pub fn to_json(&self) -> Value {
        let commands: Vec<Value> = self
            .commands
            .iter()
            .map(|c| {
                let mut m: Map<String, Value> = c.fields.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                m.insert("command".into(), Value::String(c.command.clone()));
                m.insert("index".into(), json!(c.index));
                m.insert("line".into(), json!(c.line));
                m.insert("status".into(), Value::String(c.status.as_str().into()));
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("budgets".into(), self.budget_value());
        top.insert("commands".into(), Value::Array(commands));
        top.insert("exit_code".into(), json!(self.exit_code()));
        if let Some(f) = &self.field {
            top.insert("field".into(), Value::String(f.clone()));
        }
        if let Some(e) = &self.scene_error {
            top.insert(
                "scene_error".into(),
                json!({"column": e.column, "kind": e.kind.as_str(), "line": e.line, "message": e.message}),
            );
        }
        top.insert("seed".into(), json!(self.seed));
        top.insert("warnings".into(), json!(self.warnings));
        Value::Object(top)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(
            out,
            "budgets: degree_bound={} max_pairs={} max_terms={}",
            self.budget.degree_bound, self.budget.max_pairs, self.budget.max_terms
        );
        if let Some(f) = &self.field {
            let _ = writeln!(out, "field: {}", f);
        }
        if let Some(e) = &self.scene_error {
            let _ = writeln!(out, "scene error: {}", e);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {}", w);
        }
        for c in &self.commands {
            let _ = writeln!(out, "[{}] line {}: {}", c.index, c.line, c.command);
            let _ = writeln!(out, "  status: {}", c.status.as_str());
            for (k, v) in &c.fields {
                write_field(&mut out, k, v, 2);
            }
        }
        let _ = writeln!(
            out,
            "summary: {} commands, {} errors, {} failed verifications, exit {}",
            self.commands.len(),
            self.errors(),
            self.failures(),
            self.exit_code()
        );
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn write_field(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for (k, x) in m {
                write_field(out, k, x, indent + 2);
            }
        }
        Value::Array(items) if items.is_empty() => {
            let _ = writeln!(out, "{}{}: none", pad, key);
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{}{}:", pad, key);
            for x in items {
                match x {
                    Value::Object(m) => {
                        let _ = writeln!(out, "{}  -", pad);
                        for (k, y) in m {
                            write_field(out, k, y, indent + 4);
                        }
                    }
                    other => {
                        let _ = writeln!(out, "{}  - {}", pad, scalar(other));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{}{}: {}", pad, key, scalar(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::SceneErrorKind;

    fn command(status: Status) -> CommandReport {
        let mut fields = BTreeMap::new();
        fields.insert("cycle".into(), json!("1 · [u]"));
        CommandReport { index: 1, line: 3, command: "show X".into(), status, fields }
    }

    fn report(statuses: &[Status]) -> Report {
        Report {
            seed: 5,
            budget: Budget::default(),
            field: Some("rationals".into()),
            warnings: vec![],
            commands: statuses.iter().map(|s| command(*s)).collect(),
            scene_error: None,
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(report(&[]).exit_code(), 0);
        assert_eq!(report(&[Status::Ok, Status::Pass]).exit_code(), 0);
        assert_eq!(report(&[Status::Pass, Status::Fail]).exit_code(), 1);
        assert_eq!(report(&[Status::Fail, Status::Error]).exit_code(), 2);
        let e = SceneError { kind: SceneErrorKind::Name, line: 2, column: 1, message: "duplicate".into() };
        assert_eq!(Report::rejected(0, Budget::default(), e).exit_code(), 2);
    }

    #[test]
    fn text_layout() {
        let text = report(&[Status::Ok]).render(Format::Text);
        assert!(text.contains("[1] line 3: show X\n  status: ok\n  cycle: 1 · [u]\n"), "{}", text);
        assert!(text.ends_with("summary: 1 commands, 0 errors, 0 failed verifications, exit 0\n"));
    }
}
