use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A point value or a closed interval; a missing bound is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Expected {
    Value(f64),
    Interval([Option<f64>; 2]),
}

impl Expected {
    pub fn between(lo: f64, hi: f64) -> Self {
        Expected::Interval([Some(lo), Some(hi)])
    }

    pub fn at_least(lo: f64) -> Self {
        Expected::Interval([Some(lo), None])
    }

    pub fn at_most(hi: f64) -> Self {
        Expected::Interval([None, Some(hi)])
    }

    pub fn unbounded() -> Self {
        Expected::Interval([None, None])
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Expected::Value(v) => x == v,
            Expected::Interval([lo, hi]) => lo.is_none_or(|l| x >= l) && hi.is_none_or(|h| x <= h),
        }
    }

    fn csv_cell(&self) -> String {
        match *self {
            Expected::Value(v) => num(v),
            Expected::Interval([lo, hi]) => {
                let f = |b: Option<f64>| b.map(num).unwrap_or_default();
                format!("[{},{}]", f(lo), f(hi))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub expected: Expected,
    pub observed: f64,
    pub stderr: Option<f64>,
    pub z_score: Option<f64>,
    pub verdict: Verdict,
    /// Seconds.
    pub duration: f64,
}

/// Fills a report whose clock started at `start`.
pub struct Draft {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    start: Instant,
}

impl Draft {
    pub fn new(command: impl Into<String>, inputs: BTreeMap<String, Value>) -> Self {
        Draft {
            command: command.into(),
            inputs,
            start: Instant::now(),
        }
    }

    /// Backdates the clock to a shared start.
    pub fn since(mut self, start: Instant) -> Self {
        self.start = start;
        self
    }

    pub fn input(mut self, key: &str, v: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    /// Verdict from `expected.contains(observed)`.
    pub fn check(self, expected: Expected, observed: f64) -> VerificationReport {
        let v = Verdict::from_bool(expected.contains(observed));
        self.finish(expected, observed, None, None, v)
    }

    /// Monte Carlo value against `expected`; pass iff |z| ≤ `z_max`.
    pub fn z_test(self, expected: f64, est: f64, stderr: f64, z_max: f64) -> VerificationReport {
        let z = z_score(est, expected, stderr);
        let v = Verdict::from_bool(z.abs() <= z_max);
        self.finish(Expected::Value(expected), est, Some(stderr), Some(z), v)
    }

    pub fn finish(
        self,
        expected: Expected,
        observed: f64,
        stderr: Option<f64>,
        z_score: Option<f64>,
        verdict: Verdict,
    ) -> VerificationReport {
        VerificationReport {
            command: self.command,
            inputs: self.inputs,
            expected,
            observed,
            stderr,
            z_score,
            verdict,
            duration: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// (est − expected)/stderr, with 0/0 read as 0 and a nonzero gap over 0 as ±∞.
pub fn z_score(est: f64, expected: f64, stderr: f64) -> f64 {
    let d = est - expected;
    if stderr > 0.0 {
        d / stderr
    } else if d == 0.0 {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

/// Shortest round-trip form, as in the JSON output; non-finite values spelled out.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::Value::from(x).to_string()
    } else {
        x.to_string()
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn inputs_cell(inputs: &BTreeMap<String, Value>) -> String {
    inputs
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_reports<W: Write>(reports: &[VerificationReport], format: Format, mut out: W) -> CliResult<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["command", "inputs", "expected", "observed", "stderr", "z_score", "verdict", "duration"])?;
            for r in reports {
                let verdict = match r.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "fail",
                    Verdict::Inconclusive => "inconclusive",
                };
                w.write_record([
                    r.command.clone(),
                    inputs_cell(&r.inputs),
                    r.expected.csv_cell(),
                    num(r.observed),
                    opt_cell(r.stderr),
                    opt_cell(r.z_score),
                    verdict.to_string(),
                    num(r.duration),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        assert!(Expected::at_least(0.0).contains(0.0));
        assert!(!Expected::at_most(-1e-6).contains(0.0));
        assert!(Expected::unbounded().contains(-3.0));
        assert!(!Expected::between(0.0, 1.0).contains(f64::NAN));
    }

    #[test]
    fn z_edge_cases() {
        assert_eq!(z_score(1.0, 1.0, 0.0), 0.0);
        assert_eq!(z_score(2.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(z_score(2.0, 1.0, 0.5), 2.0);
    }

    #[test]
    fn csv_projection() {
        let mut inputs = BTreeMap::new();
        inputs.insert("seed".into(), Value::from(7));
        inputs.insert("lambda".into(), serde_json::json!([1.0, 0.0]));
        let r = Draft::new("x", inputs).check(Expected::at_least(0.0), 1.0);
        let mut buf = Vec::new();
        write_reports(&[r], Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "command,inputs,expected,observed,stderr,z_score,verdict,duration");
        assert!(lines.next().unwrap().starts_with("x,\"lambda=[1.0,0.0];seed=7\",\"[0.0,]\",1.0,,,pass,"));
    }
}
