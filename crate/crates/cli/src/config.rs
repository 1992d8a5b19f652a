use crate::error::CliError;
use ggue_core::{Ctx, PrecisionContext, Rational};
use std::path::PathBuf;

/// Environment override for the working precision. Flags win over it.
pub const PRECISION_ENV: &str = "GGUE_PD_PRECISION";

/// Smallest accepted working precision, in decimal digits.
pub const MIN_PRECISION: u32 = 50;

/// Accuracy promised for reported numbers when the working precision allows.
pub const DEFAULT_TARGET: u32 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub min: u32,
    pub max: u32,
    pub step: u32,
}

impl NRange {
    pub fn single(n: u32) -> Self {
        NRange { min: n, max: n, step: 1 }
    }

    pub fn values(&self) -> Vec<u32> {
        (self.min..=self.max).step_by(self.step as usize).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub lambdas: Vec<Rational>,
    pub n_range: NRange,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// `max(200, 12 N_max)` unless overridden.
pub fn default_precision(n_max: u32) -> u32 {
    PrecisionContext::for_matrix_size(n_max).digits()
}

impl RunConfig {
    /// Validates and fixes the precision: the explicit value if given
    /// (flag or environment, already merged by the caller), else the
    /// default for the largest `N`.
    pub fn new(
        precision: Option<u32>,
        mut lambdas: Vec<Rational>,
        n_range: NRange,
        output_path: Option<PathBuf>,
        format: Format,
    ) -> Result<Self, CliError> {
        if n_range.min < 1 {
            return Err(CliError::InvalidArgs("N must be at least 1".into()));
        }
        if n_range.max < n_range.min {
            return Err(CliError::InvalidArgs(format!("empty N range {}..{}", n_range.min, n_range.max)));
        }
        if n_range.step < 1 {
            return Err(CliError::InvalidArgs("N step must be at least 1".into()));
        }
        if lambdas.is_empty() {
            return Err(CliError::InvalidArgs("no lambda values given".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| **l <= Rational::int(-1)) {
            return Err(CliError::InvalidArgs(format!("lambda must exceed -1, got {l}")));
        }
        let precision = precision.unwrap_or_else(|| default_precision(n_range.max));
        if precision < MIN_PRECISION {
            return Err(CliError::InvalidArgs(format!("precision must be at least {MIN_PRECISION} digits, got {precision}")));
        }
        lambdas.sort();
        lambdas.dedup();
        Ok(RunConfig { precision, lambdas, n_range, output_path, format })
    }

    pub fn precision_context(&self) -> PrecisionContext {
        precision_context(self.precision)
    }

    pub fn context(&self) -> Ctx {
        Ctx::new(self.precision_context())
    }
}

/// Working precision `digits` with target `min(50, digits - 20)` and two
/// escalation steps.
pub fn precision_context(digits: u32) -> PrecisionContext {
    let target = DEFAULT_TARGET.min(digits.saturating_sub(20)).max(1);
    PrecisionContext::new(digits.max(target + 20), target, 2).expect("guard digits respected")
}

pub fn parse_rational(text: &str) -> Result<Rational, String> {
    Rational::parse(text.trim()).map_err(|e| e.to_string())
}
