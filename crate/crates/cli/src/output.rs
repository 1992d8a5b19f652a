//! CSV and JSON emission. Every number is a decimal string, so files do not
//! depend on binary float formatting.

use crate::config::Format;
use crate::error::CliError;
use ggue_core::positivity::PositivityResult;
use ggue_core::{Ctx, Real};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityRecord {
    pub lambda: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub log_p_exact: String,
    pub log_p_asymptotic: String,
    pub abs_error: String,
    pub log10_abs_error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffRecord {
    pub n: usize,
    pub alpha: String,
    pub beta: String,
    pub r1: String,
    pub r2: String,
    pub alpha_pred: String,
    pub beta_pred: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionRecord {
    pub lambda: String,
    pub s: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub log_z: String,
    pub achieved_digits: u32,
    /// Closed form where one exists (`s = 0`), else empty.
    pub log_z_closed_form: String,
}

/// Significant digits written for every number.
pub fn decimal(x: &Real, ctx: &Ctx) -> String {
    x.to_sci_string(ctx.target_digits() as usize, ctx)
}

pub fn positivity_record(r: &PositivityResult, ctx: &Ctx) -> PositivityRecord {
    let log10 = if r.abs_error.is_zero() { String::from("-Inf") } else { decimal(&r.log10_abs_error(ctx), ctx) };
    PositivityRecord {
        lambda: r.lambda.to_string(),
        n: r.n,
        log_p_exact: decimal(&r.log_p_exact, ctx),
        log_p_asymptotic: decimal(&r.log_p_asymptotic, ctx),
        abs_error: decimal(&r.abs_error, ctx),
        log10_abs_error: log10,
    }
}

pub fn render<T: Serialize>(records: &[T], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit<T: Serialize>(records: &[T], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = render(records, format)?;
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
