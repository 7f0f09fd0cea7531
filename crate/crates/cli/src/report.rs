use std::fmt::Write;

use metord::rational::fmt_rat;
use metord::Rational;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub relation: &'static str,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: &Rational, threshold: &Rational) -> Self {
        Self::cmp(name, value, "<=", threshold, value <= threshold)
    }

    pub fn lt(name: impl Into<String>, value: &Rational, threshold: &Rational) -> Self {
        Self::cmp(name, value, "<", threshold, value < threshold)
    }

    pub fn eq(name: impl Into<String>, value: &Rational, expected: &Rational) -> Self {
        Self::cmp(name, value, "=", expected, value == expected)
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), value: ok.to_string(), relation: "=", threshold: "true".into(), pass: ok }
    }

    /// A comparison of already formatted values.
    pub fn text(name: impl Into<String>, value: String, relation: &'static str, threshold: String, pass: bool) -> Self {
        Check { name: name.into(), value, relation, threshold, pass }
    }

    fn cmp(name: impl Into<String>, value: &Rational, relation: &'static str, threshold: &Rational, pass: bool) -> Self {
        Check { name: name.into(), value: fmt_rat(value), relation, threshold: fmt_rat(threshold), pass }
    }
}

/// A tab-separated output row that is not a check.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub key: String,
    pub fields: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report { command, artifacts: Vec::new(), checks: Vec::new(), pass: true, elapsed_ms: None }
    }

    pub fn artifact<S: ToString>(&mut self, key: &str, fields: impl IntoIterator<Item = S>) {
        self.artifacts.push(Artifact { key: key.into(), fields: fields.into_iter().map(|f| f.to_string()).collect() });
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command\t{}", self.command).unwrap();
        for a in &self.artifacts {
            out.push_str(&a.key);
            for f in &a.fields {
                out.push('\t');
                out.push_str(f);
            }
            out.push('\n');
        }
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            writeln!(out, "check\t{}\t{}\t{}\t{}\t{verdict}", c.name, c.value, c.relation, c.threshold).unwrap();
        }
        writeln!(out, "result\t{}", if self.pass { "pass" } else { "FAIL" }).unwrap();
        if let Some(ms) = self.elapsed_ms {
            writeln!(out, "elapsed_ms\t{ms}").unwrap();
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
