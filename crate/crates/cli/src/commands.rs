use crate::cache;
use crate::config::{precision_context, RunConfig};
use crate::error::CliError;
use crate::output::{decimal, positivity_record, CoeffRecord, PartitionRecord, PositivityRecord};
use ggue_core::asymptotics::{expansion_coeffs, log_z_lue_exact};
use ggue_core::opchain::{log_partition_certified, string_residual};
use ggue_core::positivity::PositivityResult;
use ggue_core::weight::WeightSpec;
use ggue_core::Rational;

/// Figure grid when no flags are given: `λ ∈ {0, 1, 2}`, `N = 4, 8, ..., 40`.
pub const FIGURE_LAMBDAS: [i64; 3] = [0, 1, 2];
pub const FIGURE_N: (u32, u32, u32) = (4, 40, 4);

/// Exact and asymptotic log-probabilities over the grid, sorted by
/// `(λ, N)`.
pub fn positivity_table(config: &RunConfig) -> Result<Vec<PositivityResult>, CliError> {
    let ctx = cache::context(config.precision_context());
    let mut rows = Vec::new();
    for lambda in &config.lambdas {
        for n in config.n_range.values() {
            let r = cache::positivity(n, lambda, &ctx).map_err(|e| CliError::at_point(e, lambda, n))?;
            rows.push(r);
        }
    }
    rows.sort_by(|a, b| (&a.lambda, a.n).cmp(&(&b.lambda, b.n)));
    Ok(rows)
}

pub fn cmd_positivity(config: &RunConfig) -> Result<Vec<PositivityRecord>, CliError> {
    let ctx = cache::context(config.precision_context());
    Ok(positivity_table(config)?.iter().map(|r| positivity_record(r, &ctx)).collect())
}

/// Same columns as [`cmd_positivity`]; kept separate because the figure
/// has its own default grid.
pub fn cmd_figure1(config: &RunConfig) -> Result<Vec<PositivityRecord>, CliError> {
    cmd_positivity(config)
}

/// `α_n, β_n`, string residuals and `f0 + f1/N`, `g0 + g1/N` at `q = n/N`
/// for `n = 1..=N`.
pub fn cmd_coeffs(precision: u32, lambda: &Rational, s: &Rational, n: u32) -> Result<Vec<CoeffRecord>, CliError> {
    let ctx = cache::context(precision_context(precision));
    let spec = WeightSpec::new(lambda.clone(), s.clone(), n).map_err(|e| CliError::InvalidArgs(e.to_string()))?;
    let rt = cache::recurrence_table(&spec, n as usize + 1, &ctx).map_err(|e| CliError::at_point(e, lambda, n))?;
    let inv_n = ctx.one() / i64::from(n);
    let mut rows = Vec::with_capacity(n as usize);
    for k in 1..=n as usize {
        let (r1, r2) = string_residual(&rt, k, &ctx)?;
        let e = expansion_coeffs(&Rational::ratio(k as i64, i64::from(n)), lambda, s, &ctx)?;
        rows.push(CoeffRecord {
            n: k,
            alpha: decimal(&rt.alpha[k], &ctx),
            beta: decimal(&rt.beta[k], &ctx),
            r1: decimal(&r1, &ctx),
            r2: decimal(&r2, &ctx),
            alpha_pred: decimal(&(&e.f0 + &e.f1 * &inv_n), &ctx),
            beta_pred: decimal(&(&e.g0 + &e.g1 * &inv_n), &ctx),
        });
    }
    Ok(rows)
}

/// Certified `log Z_N(s)` from the moment route, with the Laguerre closed
/// form alongside at `s = 0`.
pub fn cmd_partition(precision: u32, lambda: &Rational, s: &Rational, n: u32) -> Result<Vec<PartitionRecord>, CliError> {
    let ctx = cache::context(precision_context(precision));
    let spec = WeightSpec::new(lambda.clone(), s.clone(), n).map_err(|e| CliError::InvalidArgs(e.to_string()))?;
    let (log_z, achieved) =
        log_partition_certified(&spec, n as usize, &ctx).map_err(|e| CliError::at_point(e, lambda, n))?;
    let closed = if s.is_zero() { decimal(&log_z_lue_exact(n, lambda, &ctx)?, &ctx) } else { String::new() };
    Ok(vec![PartitionRecord {
        lambda: lambda.to_string(),
        s: s.to_string(),
        n,
        log_z: decimal(&log_z, &ctx),
        achieved_digits: achieved,
        log_z_closed_form: closed,
    }])
}

