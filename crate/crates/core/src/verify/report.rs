//! Case records, suite summaries and their JSON/CSV serialization.

use std::fmt;

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    /// A check of a printed form that is known not to hold; does not count
    /// as a failure.
    ExpectedFail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::ExpectedFail => "EXPECTED_FAIL",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered parameter record.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Params(pub Vec<(String, Value)>);

impl Params {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_u64(&self, key: &str) -> Option<u64> {
        self.get(key).and_then(Value::as_u64)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.get(key).and_then(Value::as_str)
    }
}

impl fmt::Display for Params {
    /// `N=3;ell=1`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match v {
                Value::String(s) => write!(f, "{k}={s}")?,
                other => write!(f, "{k}={other}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// `params!["N" => n, "ell" => l]`
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {
        $crate::verify::Params(vec![$(($k.to_string(), ::serde_json::json!($v))),*])
    };
}

/// Float error measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `|a - b| / |b|`, or `|a - b|` when `b = 0`.
    Relative,
    /// `|a - b| / (1 + |b|)`.
    Mixed,
}

impl Metric {
    pub fn apply(self, abs_err: f64, reference_norm: f64) -> f64 {
        match self {
            Metric::Relative if reference_norm == 0.0 => abs_err,
            Metric::Relative => abs_err / reference_norm,
            Metric::Mixed => abs_err / (1.0 + reference_norm),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Metric::Relative => "rel_err",
            Metric::Mixed => "scaled_err",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub suite: String,
    pub params: Params,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: Option<f64>,
    pub note: String,
}

impl CaseResult {
    /// An exact comparison; `abs_err` stays empty.
    pub fn exact(suite: &str, params: Params, lhs: impl fmt::Display, rhs: impl fmt::Display, equal: bool) -> Self {
        CaseResult {
            suite: suite.to_string(),
            params,
            status: if equal { Status::Pass } else { Status::Fail },
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            abs_err: None,
            note: String::new(),
        }
    }

    pub fn float(suite: &str, params: Params, lhs: f64, rhs: f64, metric: Metric, tol: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        Self::float_parts(suite, params, fmt_f64(lhs), fmt_f64(rhs), abs_err, metric.apply(abs_err, rhs.abs()), metric, tol)
    }

    pub fn float_complex(suite: &str, params: Params, lhs: Complex64, rhs: Complex64, metric: Metric, tol: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        Self::float_parts(
            suite,
            params,
            fmt_complex(lhs),
            fmt_complex(rhs),
            abs_err,
            metric.apply(abs_err, rhs.norm()),
            metric,
            tol,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn float_parts(
        suite: &str,
        params: Params,
        lhs: String,
        rhs: String,
        abs_err: f64,
        err: f64,
        metric: Metric,
        tol: f64,
    ) -> Self {
        CaseResult {
            suite: suite.to_string(),
            params,
            status: if err <= tol { Status::Pass } else { Status::Fail },
            lhs,
            rhs,
            abs_err: Some(abs_err),
            note: format!("{}={}", metric.label(), fmt_f64(err)),
        }
    }

    pub fn skip(suite: &str, params: Params, reason: impl Into<String>) -> Self {
        CaseResult {
            suite: suite.to_string(),
            params,
            status: Status::Skip,
            lhs: String::new(),
            rhs: String::new(),
            abs_err: None,
            note: reason.into(),
        }
    }

    /// An error raised while evaluating one side counts as a failure.
    pub fn error(suite: &str, params: Params, err: impl fmt::Display) -> Self {
        CaseResult {
            suite: suite.to_string(),
            params,
            status: Status::Fail,
            lhs: String::new(),
            rhs: String::new(),
            abs_err: None,
            note: format!("error: {err}"),
        }
    }

    /// Marks a check of a printed form that is known not to hold.
    pub fn expect_failure(mut self) -> Self {
        if self.status == Status::Fail {
            self.status = Status::ExpectedFail;
        } else if self.status == Status::Pass {
            self.push_note("printed form holds here");
        }
        self
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        self.push_note(note.as_ref());
        self
    }

    fn push_note(&mut self, note: &str) {
        if note.is_empty() {
            return;
        }
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(note);
    }

    /// Downgrades a passing case, e.g. when a structural side condition fails.
    pub fn fail_unless(mut self, ok: bool, why: &str) -> Self {
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
            self.push_note(why);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn new(name: &str, cases: Vec<CaseResult>) -> Self {
        SuiteReport { name: name.to_string(), cases }
    }

    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    pub fn checked(&self) -> usize {
        self.cases.len() - self.count(Status::Skip)
    }

    pub fn passed(&self) -> usize {
        self.count(Status::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skip)
    }

    pub fn expected_failures(&self) -> usize {
        self.count(Status::ExpectedFail)
    }

    /// Cases whose parameter record has `key = value`.
    pub fn filter<'a>(&'a self, key: &'a str, value: &'a str) -> impl Iterator<Item = &'a CaseResult> + 'a {
        self.cases.iter().filter(move |c| c.params.get_str(key) == Some(value))
    }
}

impl Serialize for SuiteReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SuiteReport", 7)?;
        st.serialize_field("suite", &self.name)?;
        st.serialize_field("checked", &self.checked())?;
        st.serialize_field("passed", &self.passed())?;
        st.serialize_field("failed", &self.failed())?;
        st.serialize_field("skipped", &self.skipped())?;
        st.serialize_field("expected_fail", &self.expected_failures())?;
        st.serialize_field("cases", &self.cases)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    /// Whether any check failed that was expected to pass.
    pub fn has_failures(&self) -> bool {
        self.suites.iter().any(|s| s.failed() > 0)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    /// One line per suite: checked, passed, failed, skipped, expected failures.
    pub fn summary(&self) -> String {
        self.suites
            .iter()
            .map(|s| {
                format!(
                    "{}: checked={} passed={} failed={} skipped={} expected_fail={}\n",
                    s.name,
                    s.checked(),
                    s.passed(),
                    s.failed(),
                    s.skipped(),
                    s.expected_failures()
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 7] = ["suite", "params", "status", "lhs", "rhs", "abs_err", "note"];

pub fn emit_report(report: &VerifyReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for case in report.suites.iter().flat_map(|s| &s.cases) {
                let abs_err = case.abs_err.map(fmt_f64).unwrap_or_default();
                w.write_record([
                    case.suite.as_str(),
                    &case.params.to_string(),
                    case.status.name(),
                    &case.lhs,
                    &case.rhs,
                    &abs_err,
                    &case.note,
                ])
                .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// Decimal rendering with 15 significant digits and trailing zeros removed.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.14e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        format!("{}e{e}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return fmt_f64(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}
