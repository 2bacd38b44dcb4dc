//! Command reports and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// A computed value with no pass/fail meaning.
    #[serde(rename = "INFO")]
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "PASS" => Some(Status::Pass),
            "FAIL" => Some(Status::Fail),
            "INFO" => Some(Status::Info),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultLine {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

impl ResultLine {
    pub fn info(check: impl Into<String>, value: impl Into<String>) -> Self {
        ResultLine { check: check.into(), status: Status::Info, value: Some(value.into()), witness: None }
    }

    pub fn verdict(check: impl Into<String>, passed: bool) -> Self {
        ResultLine {
            check: check.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value: None,
            witness: None,
        }
    }

    pub fn with_value(mut self, value: impl Into<String>) -> Self {
        self.value = Some(value.into());
        self
    }

    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<ResultLine>,
    pub exit_code: i32,
}

/// Multi-line strings are folded so that every result stays on one text line.
fn one_line(s: &str) -> String {
    s.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join("; ")
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), inputs: BTreeMap::new(), results: Vec::new(), exit_code: 0 }
    }

    pub fn input(&mut self, name: &str, value: impl Into<String>) {
        self.inputs.insert(name.into(), one_line(&value.into()));
    }

    pub fn push(&mut self, mut line: ResultLine) {
        line.value = line.value.map(|v| one_line(&v));
        line.witness = line.witness.map(|w| one_line(&w));
        self.results.push(line);
    }

    pub fn any_failed(&self) -> bool {
        self.results.iter().any(|r| r.status == Status::Fail)
    }

    /// Exit code 1 when any result failed, 0 otherwise.
    pub fn settle(&mut self) {
        self.exit_code = i32::from(self.any_failed());
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "input {k}: {v}");
        }
        for r in &self.results {
            let _ = write!(out, "{} {}", r.status.as_str(), r.check);
            if let Some(v) = &r.value {
                let _ = write!(out, " = {v}");
            }
            if let Some(w) = &r.witness {
                let _ = write!(out, " | witness: {w}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "exit code: {}", self.exit_code);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Inverse of [`Report::to_text`]. Check names never contain ` = `.
    pub fn parse_text(text: &str) -> Option<Report> {
        let mut lines = text.lines();
        let command = lines.next()?.strip_prefix("command: ")?.to_string();
        let mut report = Report::new(&command);
        for line in lines {
            if let Some(rest) = line.strip_prefix("input ") {
                let (k, v) = rest.split_once(": ")?;
                report.inputs.insert(k.into(), v.into());
            } else if let Some(code) = line.strip_prefix("exit code: ") {
                report.exit_code = code.parse().ok()?;
            } else {
                let (status, rest) = line.split_once(' ')?;
                let status = Status::parse(status)?;
                let (rest, witness) = match rest.split_once(" | witness: ") {
                    Some((a, w)) => (a, Some(w.to_string())),
                    None => (rest, None),
                };
                let (check, value) = match rest.split_once(" = ") {
                    Some((c, v)) => (c, Some(v.to_string())),
                    None => (rest, None),
                };
                report.results.push(ResultLine { check: check.into(), status, value, witness });
            }
        }
        Some(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut r = Report::new("verify");
        r.input("map", "phi1");
        r.push(ResultLine::verdict("composition", false).with_witness(Some("X*S*U".into())).with_value("generator X"));
        r.push(ResultLine::info("grdegU", "2/1"));
        r.settle();
        assert_eq!(r.exit_code, 1);
        let text = r.to_text();
        assert!(text.contains("FAIL composition = generator X | witness: X*S*U\n"));
        assert_eq!(Report::parse_text(&text).unwrap(), r);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
