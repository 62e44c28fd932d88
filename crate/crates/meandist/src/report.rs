//! Number formatting and verification report rows.

use std::io::Write;

use serde::Serialize;

/// Significant digits in every printed number.
pub const DIGITS: usize = 12;

/// `x` with [`DIGITS`] significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..DIGITS as i32).contains(&e) {
        let decimals = (DIGITS as i32 - 1 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{:.*e}", DIGITS - 1, x)
    }
}

/// `x` rounded to [`DIGITS`] significant digits, for JSON output.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub suite: String,
    pub d: usize,
    pub delta: Option<f64>,
    pub quantity: String,
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(suite: &str, d: usize, quantity: impl Into<String>, estimate: f64, std_error: f64, target: f64, pass: bool) -> Self {
        Self { suite: suite.into(), d, delta: None, quantity: quantity.into(), estimate, std_error, target, pass }
    }

    pub fn at(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }
}

pub const CSV_HEADER: [&str; 8] = ["suite", "d", "delta", "quantity", "estimate", "std_error", "target", "pass"];

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.suite.clone(),
            r.d.to_string(),
            r.delta.map(fmt_sig).unwrap_or_default(),
            r.quantity.clone(),
            fmt_sig(r.estimate),
            fmt_sig(r.std_error),
            fmt_sig(r.target),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A row as JSON with rounded numbers.
pub fn row_json(r: &ReportRow) -> serde_json::Value {
    serde_json::json!({
        "suite": r.suite,
        "d": r.d,
        "delta": r.delta.map(round_sig),
        "quantity": r.quantity,
        "estimate": round_sig(r.estimate),
        "std_error": round_sig(r.std_error),
        "target": round_sig(r.target),
        "pass": r.pass,
    })
}
