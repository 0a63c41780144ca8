use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::run::RunReport;
use crate::BenchError;

pub const CSV_HEADER: &str =
    "alpha,gamma,N,M,left_nodal,left_rate,right_nodal,right_rate,pp_global,pp_rate,seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `x` rounded to 6 significant digits.
pub fn round6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

/// `x` with 6 significant digits in the style of C's `%g`, e.g. `6.39e-05`.
pub fn format_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{:.*}", decimals, round6(x))).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub(crate) mod sig6 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(super::round6(*x))
    }

    pub fn serialize_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&super::round6(*v)),
            None => s.serialize_none(),
        }
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_g6).unwrap_or_default()
}

pub fn to_csv(reports: &[RunReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_g6(r.alpha),
            format_g6(r.gamma),
            r.intervals,
            r.subintervals,
            cell(r.left_nodal),
            cell(r.left_rate),
            cell(r.right_nodal),
            cell(r.right_rate),
            cell(r.pp_global),
            cell(r.pp_rate),
            format_g6(r.seconds),
        );
    }
    out
}

pub fn to_json(reports: &[RunReport]) -> Result<String, BenchError> {
    let mut text = serde_json::to_string_pretty(reports)?;
    text.push('\n');
    Ok(text)
}

pub fn render(reports: &[RunReport], format: Format) -> Result<String, BenchError> {
    match format {
        Format::Csv => Ok(to_csv(reports)),
        Format::Json => to_json(reports),
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(reports: &[RunReport], format: Format, path: Option<&Path>) -> Result<(), BenchError> {
    let text = render(reports, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| BenchError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
