//! Case identifiers and verdict records.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::intarith::FactoredNat;

pub(crate) fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_display_vec<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "WARN")]
    Warn,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Text(String),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<u32> for Param {
    fn from(v: u32) -> Self {
        Param::Int(v as i64)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v as i64)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

/// Case family plus ordered parameters; the derived order is the report order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CaseId {
    pub family: String,
    pub params: Vec<(String, Param)>,
}

impl CaseId {
    pub fn new(family: &str) -> Self {
        CaseId { family: family.to_string(), params: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.params.push((key.to_string(), value.into()));
        self
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.family)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Expected or computed payload of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Value {
    None,
    Integer(FactoredNat),
    Set(Vec<FactoredNat>),
    /// An integer too large to factor within the run.
    Unfactored(#[serde(serialize_with = "ser_display")] num_bigint::BigUint),
    Text(String),
    List(Vec<String>),
}

impl Value {
    pub fn human(&self) -> String {
        match self {
            Value::None => "-".into(),
            Value::Integer(f) => human_factored(f),
            Value::Set(v) => format!("{{{}}}", v.iter().map(human_factored).collect::<Vec<_>>().join(", ")),
            Value::Unfactored(n) => n.to_string(),
            Value::Text(s) => s.clone(),
            Value::List(v) => v.join("; "),
        }
    }
}

fn human_factored(f: &FactoredNat) -> String {
    if f.is_one() || f.is_prime() {
        f.value().to_string()
    } else {
        format!("{} [{}]", f.value(), f.factor_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case: CaseId,
    pub status: Status,
    /// Set when a scan cap stopped the case before a certificate was found.
    pub inconclusive: bool,
    pub expected: Value,
    pub computed: Value,
    pub witnesses: Vec<String>,
    /// Wall-clock time; excluded from structured records to keep them reproducible.
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl CaseReport {
    pub fn new(case: CaseId, status: Status) -> Self {
        CaseReport {
            case,
            status,
            inconclusive: false,
            expected: Value::None,
            computed: Value::None,
            witnesses: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn expected(mut self, v: Value) -> Self {
        self.expected = v;
        self
    }

    pub fn computed(mut self, v: Value) -> Self {
        self.computed = v;
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn witnesses(mut self, w: impl IntoIterator<Item = String>) -> Self {
        self.witnesses.extend(w);
        self
    }

    /// Converts an error into an inconclusive WARN report.
    pub fn from_error(case: CaseId, err: &crate::Error) -> Self {
        let mut r = CaseReport::new(case, Status::Warn).witness(format!("error: {err}"));
        r.inconclusive = matches!(err, crate::Error::ScanCap { .. } | crate::Error::Inconclusive(_));
        r
    }

    pub fn human_line(&self) -> String {
        let mut s = format!("{:<4}  {}", self.status, self.case);
        if self.inconclusive {
            s.push_str("  (inconclusive)");
        }
        if self.computed != Value::None {
            s.push_str(&format!("\n      computed: {}", self.computed.human()));
        }
        if self.expected != Value::None && self.expected != self.computed {
            s.push_str(&format!("\n      expected: {}", self.expected.human()));
        }
        for w in &self.witnesses {
            s.push_str(&format!("\n      - {w}"));
        }
        s
    }
}

/// Sorts by case id; the order is independent of how the reports were produced.
pub fn sort_reports(reports: &mut [CaseReport]) {
    reports.sort_by(|a, b| a.case.cmp(&b.case));
}

/// Overall status: FAIL dominates WARN dominates PASS.
pub fn overall(reports: &[CaseReport]) -> Status {
    reports.iter().map(|r| r.status).max().unwrap_or(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_order_and_display() {
        let a = CaseId::new("table3").with("n", 7u32).with("m", 5u32);
        let b = CaseId::new("table3").with("n", 11u32).with("m", 3u32);
        assert!(a < b);
        assert_eq!(a.to_string(), "table3 n=7 m=5");
    }

    #[test]
    fn overall_status() {
        let id = CaseId::new("x");
        let r = vec![CaseReport::new(id.clone(), Status::Pass), CaseReport::new(id, Status::Warn)];
        assert_eq!(overall(&r), Status::Warn);
        assert_eq!(overall(&[]), Status::Pass);
    }
}
