//! Monic orthogonal polynomials of the deformed Laguerre weight.
//!
//! The three-term recurrence `π_{n+1} = (x - α_n) π_n - β_n π_{n-1}` is read
//! off the Cholesky factor `L` of the moment matrix `[m_{i+j}]`:
//! `h_n = L_nn²`, `β_n = (L_nn / L_{n-1,n-1})²` and
//! `α_n = L_{n+1,n}/L_nn - L_{n,n-1}/L_{n-1,n-1}`. The moment matrix is
//! exponentially ill conditioned, so every table carries a certified digit
//! count from a second run at 1.5 times the precision.
//!
//! On top of the table sit the partition function `Z_N = N! ∏ h_j`, the
//! exact deformation formula for `d log Z_N / ds`, two independent routes to
//! the same derivative, and the residuals of the two string equations.

use crate::linalg::{determinant, hankel_cholesky, HankelFactor};
use crate::quad::{self, QuadRule};
use crate::specfun::log_gamma;
use crate::weight::{moment_table, moments, potential, MomentTable, WeightSpec};
use crate::{with_escalation, Ctx, Error, Rational, Real, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

const UNDERFLOW_EXPONENT: f64 = -1.0e7;

/// Recurrence data for indices `0..=n_max`. `beta[0]` is the conventional 0.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub spec: WeightSpec,
    pub n_max: usize,
    pub alpha: Vec<Real>,
    pub beta: Vec<Real>,
    pub log_h: Vec<Real>,
    /// Decimal digits on which the working and certification runs agree.
    pub achieved_digits: u32,
}

impl RecurrenceTable {
    fn require(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::Depth { needed: n, available: self.n_max });
        }
        Ok(())
    }

    /// Exact tables for `s = 0`: `α_n = (2n+λ+1)/N`, `β_n = n(n+λ)/N²`,
    /// `h_n = n! Γ(n+λ+1) / N^{2n+λ+1}`.
    pub fn laguerre(spec: &WeightSpec, n_max: usize, ctx: &Ctx) -> Result<Self> {
        if !spec.s.is_zero() {
            return Err(Error::Domain("closed-form Laguerre table needs s = 0".into()));
        }
        let lambda = spec.lambda.to_real(ctx);
        let big_n = ctx.uint(u64::from(spec.big_n));
        let ln_n = big_n.ln(ctx);
        let n2 = big_n.square();
        let mut alpha = Vec::with_capacity(n_max + 1);
        let mut beta = Vec::with_capacity(n_max + 1);
        let mut log_h = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let k = n as i64;
            alpha.push((&lambda + (2 * k + 1)) / &big_n);
            beta.push((&lambda + k) * k / &n2);
            let lh = log_gamma(&ctx.int(k + 1), ctx)? + log_gamma(&(&lambda + (k + 1)), ctx)?
                - (&lambda + (2 * k + 1)) * &ln_n;
            log_h.push(lh);
        }
        Ok(Self { spec: spec.clone(), n_max, alpha, beta, log_h, achieved_digits: ctx.digits() })
    }
}

fn table_from_factor(spec: &WeightSpec, l: &HankelFactor, n_max: usize, ctx: &Ctx) -> RecurrenceTable {
    let mut alpha = Vec::with_capacity(n_max + 1);
    let mut beta = Vec::with_capacity(n_max + 1);
    let mut log_h = Vec::with_capacity(n_max + 1);
    let mut previous_ratio = ctx.zero();
    for n in 0..=n_max {
        let d = l.entry(n, n);
        log_h.push(d.square().ln(ctx));
        beta.push(if n == 0 { ctx.zero() } else { (d / l.entry(n - 1, n - 1)).square() });
        let ratio = l.entry(n + 1, n) / d;
        alpha.push(&ratio - &previous_ratio);
        previous_ratio = ratio;
    }
    RecurrenceTable { spec: spec.clone(), n_max, alpha, beta, log_h, achieved_digits: 0 }
}

/// Decimal digits of agreement between two equally shaped sequences,
/// relative to `max(|value|, 1)`.
fn agreement_digits(a: &[Real], b: &[Real], cap: u32, ctx: &Ctx) -> u32 {
    let mut worst = f64::INFINITY;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        if diff.is_zero() {
            continue;
        }
        let scale = y.abs().max(ctx.one());
        worst = worst.min(-(diff / scale).log10_abs());
    }
    if worst.is_finite() {
        (libm::floor(worst).max(0.0) as u32).min(cap)
    } else {
        cap
    }
}

/// Recurrence table from a supplied moment table, without certification.
pub fn recurrence_uncertified(table: &MomentTable, n_max: usize, ctx: &Ctx) -> Result<RecurrenceTable> {
    let l = hankel_cholesky(&table.values, n_max)?;
    Ok(table_from_factor(&table.spec, &l, n_max, ctx))
}

/// Recurrence table from moments, certified by recomputing the moments and
/// the factorization at 1.5 times the working precision.
pub fn recurrence_from_moments(table: &MomentTable, n_max: usize, ctx: &Ctx) -> Result<RecurrenceTable> {
    let mut rt = recurrence_uncertified(table, n_max, ctx)?;
    let cert = ctx.certification();
    let check_moments = moments(&table.spec, 2 * n_max + 1, cert)?;
    let l = hankel_cholesky(&check_moments, n_max)?;
    let check = table_from_factor(&table.spec, &l, n_max, cert);
    let cap = ctx.digits();
    let d = agreement_digits(&rt.alpha, &check.alpha, cap, cert)
        .min(agreement_digits(&rt.beta, &check.beta, cap, cert))
        .min(agreement_digits(&rt.log_h, &check.log_h, cap, cert));
    rt.achieved_digits = d;
    Ok(rt)
}

fn moment_depth(n_max: usize) -> usize {
    (2 * n_max + 1).max(2)
}

/// Certified recurrence table for `spec`, escalating precision on pivot
/// failures, quadrature failures, or fewer certified digits than the target.
pub fn recurrence_table(spec: &WeightSpec, n_max: usize, ctx: &Ctx) -> Result<RecurrenceTable> {
    with_escalation(ctx, |c| {
        let table = moment_table(spec, moment_depth(n_max), c)?;
        let rt = recurrence_from_moments(&table, n_max, c)?;
        if rt.achieved_digits < c.target_digits() {
            return Err(Error::NotConverged(format!(
                "only {} certified digits at {} working digits",
                rt.achieved_digits,
                c.digits()
            )));
        }
        Ok(rt)
    })
}

fn log_partition_from(rt: &RecurrenceTable, n: usize, ctx: &Ctx) -> Result<Real> {
    let mut sum = log_gamma(&ctx.uint(n as u64 + 1), ctx)?;
    for lh in &rt.log_h[..n] {
        sum += lh;
    }
    Ok(sum)
}

fn require_matched(spec: &WeightSpec, n: usize) -> Result<()> {
    if spec.big_n as usize != n {
        return Err(Error::Domain(format!(
            "partition function needs the weight's N ({}) to equal the matrix size ({n})",
            spec.big_n
        )));
    }
    Ok(())
}

/// `log Z_N(s) = log N! + Σ_{j<N} log h_j` without certification; the
/// factorization is retried at escalated precision if it breaks down.
pub fn log_partition(spec: &WeightSpec, n: usize, ctx: &Ctx) -> Result<Real> {
    require_matched(spec, n)?;
    with_escalation(ctx, |c| {
        let table = moment_table(spec, moment_depth(n - 1), c)?;
        let rt = recurrence_uncertified(&table, n - 1, c)?;
        log_partition_from(&rt, n, c)
    })
}

/// `log Z_N(s)` together with its certified digit count.
pub fn log_partition_certified(spec: &WeightSpec, n: usize, ctx: &Ctx) -> Result<(Real, u32)> {
    require_matched(spec, n)?;
    let rt = recurrence_table(spec, n - 1, ctx)?;
    Ok((log_partition_from(&rt, n, ctx)?, rt.achieved_digits))
}

/// `log(N! det[m_{i+j}]_{i,j<N})` by fraction-free elimination: the Heine
/// identity, independent of the Cholesky route.
pub fn log_partition_heine(moments: &[Real], n: usize, ctx: &Ctx) -> Result<Real> {
    if moments.len() < 2 * n - 1 {
        return Err(Error::Depth { needed: 2 * n - 2, available: moments.len().saturating_sub(1) });
    }
    let matrix: Vec<Vec<Real>> = (0..n).map(|i| (0..n).map(|j| moments[i + j].clone()).collect()).collect();
    let det = determinant(&matrix, ctx);
    if !det.is_positive() {
        return Err(Error::NonPositivePivot { n });
    }
    Ok(log_gamma(&ctx.uint(n as u64 + 1), ctx)? + det.ln(ctx))
}

/// Right-hand side of the exact deformation formula,
/// `β_N c - N² [(1 - 3s) E + 2s F]`, with `c = N²(3 - s) + λN`,
/// `E = β_N (α_N + α_{N-1})` and
/// `F = β_N (β_{N+1} + β_N + β_{N-1} + α_N² + α_N α_{N-1} + α_{N-1}²)`.
pub fn deformation_rhs(rt: &RecurrenceTable, n: usize, ctx: &Ctx) -> Result<Real> {
    require_matched(&rt.spec, n)?;
    rt.require(n + 1)?;
    let s = rt.spec.s.to_real(ctx);
    let lambda = rt.spec.lambda.to_real(ctx);
    let big_n = ctx.uint(n as u64);
    let n2 = big_n.square();
    let (a1, a0) = (&rt.alpha[n], &rt.alpha[n - 1]);
    let (b_next, b, b_prev) = (&rt.beta[n + 1], &rt.beta[n], &rt.beta[n - 1]);
    let c = &n2 * (ctx.int(3) - &s) + &lambda * &big_n;
    let e = b * (a1 + a0);
    let f = b * (b_next + b + b_prev + a1.square() + a1 * a0 + a0.square());
    let bracket = (ctx.one() - &s * 3) * e + &s * 2 * f;
    Ok(b * c - n2 * bracket)
}

/// The two string-equation residuals at index `n`, with `q = n/N`:
/// `r1 = 2s(β_{n+1} + β_n + α_n²) + (1-s)α_n - 2q - (λ+1)/N` and
/// `r2 = β_n(2sα_n + 1 - s)(2sα_{n-1} + 1 - s) - (2sβ_n - q)(2sβ_n - q - λ/N)`.
pub fn string_residual(rt: &RecurrenceTable, n: usize, ctx: &Ctx) -> Result<(Real, Real)> {
    if n == 0 {
        return Err(Error::Domain("string residuals start at n = 1".into()));
    }
    rt.require(n + 1)?;
    let s = rt.spec.s.to_real(ctx);
    let lambda = rt.spec.lambda.to_real(ctx);
    let big_n = i64::from(rt.spec.big_n);
    let q = ctx.ratio(n as i64, big_n);
    let one_minus_s = ctx.one() - &s;
    let two_s = &s * 2;
    let (a, a_prev) = (&rt.alpha[n], &rt.alpha[n - 1]);
    let (b, b_next) = (&rt.beta[n], &rt.beta[n + 1]);
    let r1 = &two_s * (b_next + b + a.square()) + &one_minus_s * a - &q * 2 - (&lambda + 1) / big_n;
    let shifted = &two_s * b - &q;
    let r2 = b * (&two_s * a + &one_minus_s) * (&two_s * a_prev + &one_minus_s)
        - &shifted * (&shifted - &lambda / big_n);
    Ok((r1, r2))
}

/// `π_{N-1}, π'_{N-1}, π_N, π'_N` at `x` by the recurrence.
fn polys_with_derivatives(rt: &RecurrenceTable, n: usize, x: &Real, ctx: &Ctx) -> [Real; 4] {
    let (mut p_prev, mut p) = (ctx.zero(), ctx.one());
    let (mut d_prev, mut d) = (ctx.zero(), ctx.zero());
    for k in 0..n {
        let shift = x - &rt.alpha[k];
        let p_next = &shift * &p - &rt.beta[k] * &p_prev;
        let d_next = &p + &shift * &d - &rt.beta[k] * &d_prev;
        p_prev = core::mem::replace(&mut p, p_next);
        d_prev = core::mem::replace(&mut d, d_next);
    }
    [p_prev, d_prev, p, d]
}

/// `(π_N' π_{N-1} - π_N π_{N-1}') / h_{N-1}`: the density without the weight.
fn density_polynomial(rt: &RecurrenceTable, n: usize, x: &Real, inv_h: &Real, ctx: &Ctx) -> Real {
    let [p_prev, d_prev, p, d] = polys_with_derivatives(rt, n, x, ctx);
    (d * p_prev - p * d_prev) * inv_h
}

fn density_order(rt: &RecurrenceTable) -> Result<usize> {
    let n = rt.spec.big_n as usize;
    rt.require(n - 1)?;
    Ok(n)
}

/// Christoffel–Darboux one-point density
/// `ρ_N(x) = w(x) (π_N' π_{N-1} - π_N π_{N-1}') / h_{N-1}` with `N` the
/// weight's `N`. Integrates to `N`.
pub fn one_point_density(rt: &RecurrenceTable, x: &Real, ctx: &Ctx) -> Result<Real> {
    let n = density_order(rt)?;
    if !x.is_positive() {
        return Err(Error::Domain(format!("density is evaluated on x > 0, got {:e}", x.to_f64())));
    }
    let w = crate::weight::weight_eval(x, &rt.spec, ctx)?;
    let inv_h = (-&rt.log_h[n - 1]).exp(ctx);
    Ok(w * density_polynomial(rt, n, x, &inv_h, ctx))
}

/// `∫_0^∞ g(x) ρ_N(x) dx` for polynomial-like `g`, by half-line quadrature.
pub fn density_integral(
    rt: &RecurrenceTable,
    rule: &QuadRule,
    ctx: &Ctx,
    g: impl Fn(&Real) -> Real,
) -> Result<Real> {
    let n = density_order(rt)?;
    let lambda = rt.spec.lambda.to_real(ctx);
    let s = rt.spec.s.to_real(ctx);
    let big_n = i64::from(rt.spec.big_n);
    let inv_h = (-&rt.log_h[n - 1]).exp(ctx);
    let v = quad::half_line(ctx, 1, rule, |node| {
        let exponent = &lambda * &node.t - potential(&node.x, &s) * big_n;
        if exponent.to_f64() < UNDERFLOW_EXPONENT {
            return Ok(vec![ctx.zero()]);
        }
        let poly = density_polynomial(rt, n, &node.x, &inv_h, ctx);
        Ok(vec![exponent.exp(ctx) * &node.dx * poly * g(&node.x)])
    })?;
    Ok(v.into_iter().next().expect("one component"))
}

/// `-N ∫ (x² - x) ρ_N(x) dx`, the derivative of `log Z_N(s)` written as a
/// linear statistic of the one-point density.
pub fn linear_statistic(rt: &RecurrenceTable, n: usize, ctx: &Ctx) -> Result<Real> {
    require_matched(&rt.spec, n)?;
    let rule = QuadRule::digits(ctx, i64::from(ctx.digits()) - 15).with_abs_floor(ctx.one());
    let v = density_integral(rt, &rule, ctx, |x| x.square() - x)?;
    Ok(-v * n as i64)
}

/// Finite-difference step `10^{-target/4}` used by the derivative oracle.
pub fn finite_difference_step(ctx: &Ctx) -> Rational {
    let k = (ctx.target_digits() / 4).max(1);
    Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), k as usize))
}

/// `d log Z_N / ds` by a fourth-order finite difference of
/// [`log_partition`]: centred inside `(0, 1)`, one sided at the ends.
pub fn log_partition_derivative_fd(spec: &WeightSpec, n: usize, ctx: &Ctx) -> Result<Real> {
    let eps = finite_difference_step(ctx);
    let at = |k: i64| -> Result<Real> {
        let s = spec.s.add(&eps.mul(&Rational::int(k)));
        log_partition(&spec.with_s(s)?, n, ctx)
    };
    let room_below = spec.s >= eps.mul(&Rational::int(2));
    let room_above = spec.s.add(&eps.mul(&Rational::int(2))) <= Rational::int(1);
    let h = eps.to_real(ctx) * 12;
    let v = if room_below && room_above {
        at(-2)? - at(-1)? * 8 + at(1)? * 8 - at(2)?
    } else if room_above {
        -(at(0)? * 25) + at(1)? * 48 - at(2)? * 36 + at(3)? * 16 - at(4)? * 3
    } else {
        at(0)? * 25 - at(-1)? * 48 + at(-2)? * 36 - at(-3)? * 16 + at(-4)? * 3
    };
    Ok(v / h)
}
