//! The probability that the matrix is positive definite, exactly and from
//! the large-`N` expansion.
//!
//! Integrating out the eigenvectors turns the probability into a ratio of
//! partition functions: the `s = 1` weight `x^λ e^{-N x²}` on the half line
//! over the whole-line weight `|x|^λ e^{-N x²}`.

use crate::asymptotics::{log_z_ggue_exact, log_positivity_asymptotic};
use crate::opchain::log_partition_certified;
use crate::weight::WeightSpec;
use crate::{Ctx, Rational, Real, Result};

#[derive(Clone, Debug)]
pub struct PositivityResult {
    pub lambda: Rational,
    pub n: u32,
    pub log_p_exact: Real,
    pub log_p_asymptotic: Real,
    pub abs_error: Real,
    /// Certified digits of the half-line partition function.
    pub achieved_digits: u32,
}

impl PositivityResult {
    /// `log10 |log_p_exact - log_p_asymptotic|`.
    pub fn log10_abs_error(&self, ctx: &Ctx) -> Real {
        self.abs_error.ln(ctx) / ctx.int(10).ln(ctx)
    }
}

/// `log P = log Z_N(1) - log Z^gGUE_N` next to the expansion value.
pub fn positivity(n: u32, lambda: &Rational, ctx: &Ctx) -> Result<PositivityResult> {
    let spec = WeightSpec::new(lambda.clone(), Rational::int(1), n)?;
    let (log_z, achieved_digits) = log_partition_certified(&spec, n as usize, ctx)?;
    let log_p_exact = log_z - log_z_ggue_exact(n, lambda, ctx)?;
    let log_p_asymptotic = log_positivity_asymptotic(n, lambda, ctx)?;
    let abs_error = (&log_p_exact - &log_p_asymptotic).abs();
    Ok(PositivityResult { lambda: lambda.clone(), n, log_p_exact, log_p_asymptotic, abs_error, achieved_digits })
}

/// Estimate of the `1/N` coefficient of the remainder from signed
/// remainders at `N` and `2N`, assuming `r(N) = c/N + d/N² + ...`:
/// `c ≈ 2·(2N r(2N)) - N r(N)`. A numerical estimate, not a closed form.
pub fn richardson_inverse_n(n: u32, remainder_n: &Real, remainder_2n: &Real) -> Real {
    let nn = i64::from(n);
    remainder_2n * (4 * nn) - remainder_n * nn
}

/// Signed remainder `log_p_exact - log_p_asymptotic`.
pub fn remainder(r: &PositivityResult) -> Real {
    &r.log_p_exact - &r.log_p_asymptotic
}
