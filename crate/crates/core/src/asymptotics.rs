//! Closed-form asymptotic objects: the leading recurrence coefficients,
//! the deformation integrands `A, B, C` and their integrals over `s`, the
//! exact and asymptotic LUE and gGUE partition functions, and the
//! large-`N` expansion of the positivity log-probability.
//!
//! `g0` is `f0²/4`. The form `(Δ+s-1)Δ/(72s²)` that circulates for it
//! violates the leading-order string equations; see
//! [`g0_inconsistent_form`].

use crate::linalg::determinant;
use crate::quad::{self, QuadRule};
use crate::specfun::{constants, log_barnes_g, log_gamma};
use crate::{Ctx, Error, Rational, Real, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

fn check_unit(s: &Rational) -> Result<()> {
    if *s < Rational::int(0) || *s > Rational::int(1) {
        return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ExpansionEval {
    pub q: Rational,
    pub lambda: Rational,
    pub s: Rational,
    pub delta: Real,
    pub f0: Real,
    pub f1: Real,
    pub g0: Real,
    pub g1: Real,
}

/// `Δ = sqrt(s² + 24qs - 2s + 1)`.
pub fn delta(q: &Real, s: &Real) -> Real {
    (s.square() + q * s * 24 - s * 2 + 1).sqrt()
}

/// `f0 = (s-1+Δ)/(6s)` rewritten as `4q/(Δ+1-s)`, which is exact at
/// `s = 0` and has no cancellation for small `s`. `g1 = λ f0/(2Δ)` is the
/// same rewrite of `(Δ+s-1)λ/(12Δs)`.
pub fn expansion_coeffs(q: &Rational, lambda: &Rational, s: &Rational, ctx: &Ctx) -> Result<ExpansionEval> {
    check_unit(s)?;
    if *q <= Rational::int(0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    let (qr, lr, sr) = (q.to_real(ctx), lambda.to_real(ctx), s.to_real(ctx));
    let d = delta(&qr, &sr);
    let f0 = &qr * 4 / (&d + 1 - &sr);
    let f1 = (&lr + 1) / &d;
    let g0 = f0.square() / 4;
    let g1 = &lr * &f0 / (&d * 2);
    Ok(ExpansionEval { q: q.clone(), lambda: lambda.clone(), s: s.clone(), delta: d, f0, f1, g0, g1 })
}

/// The alternative `g0 = (Δ+s-1)Δ/(72s²)`, kept only so tests can show
/// it fails the leading-order string equations.
pub fn g0_inconsistent_form(q: &Rational, s: &Rational, ctx: &Ctx) -> Result<Real> {
    if s.is_zero() {
        return Err(Error::Domain("the alternative g0 form diverges at s = 0".into()));
    }
    check_unit(s)?;
    let (qr, sr) = (q.to_real(ctx), s.to_real(ctx));
    let d = delta(&qr, &sr);
    Ok((&d + &sr - 1) * &d / (sr.square() * 72))
}

/// Residuals of the two leading-order string equations at `(f0, g0)`:
/// `2s(2g0+f0²) + (1-s)f0 - 2q` and `g0(2s f0+1-s)² - (2s g0-q)²`.
pub fn leading_order_residuals(f0: &Real, g0: &Real, q: &Rational, s: &Rational, ctx: &Ctx) -> (Real, Real) {
    let (qr, sr) = (q.to_real(ctx), s.to_real(ctx));
    let one_minus_s = ctx.one() - &sr;
    let r1 = &sr * 2 * (g0 * 2 + f0.square()) + &one_minus_s * f0 - &qr * 2;
    let r2 = g0 * (&sr * 2 * f0 + &one_minus_s).square() - (&sr * 2 * g0 - &qr).square();
    (r1, r2)
}

/// Plugs `α_m ≈ f0(m/N) + f1(m/N)/N`, `β_m ≈ g0(m/N) + g1(m/N)/N` into
/// the finite-`N` string equations at `n = qN`. Both residuals are
/// `O(N^{-2})` exactly when the first two orders are right.
pub fn next_order_residual(q: &Rational, lambda: &Rational, s: &Rational, big_n: u32, ctx: &Ctx) -> Result<(Real, Real)> {
    let step = Rational::ratio(1, i64::from(big_n));
    let inv_n = ctx.one() / i64::from(big_n);
    let at = |qq: &Rational| -> Result<(Real, Real)> {
        let e = expansion_coeffs(qq, lambda, s, ctx)?;
        Ok((&e.f0 + &e.f1 * &inv_n, &e.g0 + &e.g1 * &inv_n))
    };
    let minus = Rational::ratio(-1, i64::from(big_n));
    let (alpha, beta) = at(q)?;
    let (_, beta_up) = at(&q.add(&step))?;
    let (alpha_down, _) = at(&q.add(&minus))?;
    let (qr, lr, sr) = (q.to_real(ctx), lambda.to_real(ctx), s.to_real(ctx));
    let one_minus_s = ctx.one() - &sr;
    let r1 = &sr * 2 * (&beta_up + &beta + alpha.square()) + &one_minus_s * &alpha - &qr * 2 - (&lr + 1) * &inv_n;
    let lhs = &beta * (&sr * 2 * &alpha + &one_minus_s) * (&sr * 2 * &alpha_down + &one_minus_s);
    let centre = &sr * 2 * &beta - &qr;
    let rhs = &centre * (&centre - &lr * &inv_n);
    Ok((r1, lhs - rhs))
}

#[derive(Clone, Debug)]
pub struct IntegrandEval {
    pub s: Real,
    pub a: Real,
    pub b: Real,
    pub c: Real,
}

/// `A, B, C` at `q = 1`. Each displayed fraction is multiplied through by
/// its conjugate, which leaves positive denominators on `[0, 1]`:
///
/// * `A = 2(s³+33s²-23s-1) / ((1+s)Δ³ - p)`, `p = s⁴+34s³-216s²-34s-1`
/// * `B = 2λ(s-2) / ((1+s)Δ + 1 + 12s - s²)`
/// * `C = -2λ²(1+s) / (Δ(s²+6s+1+(1-s)Δ))
///      + 4s(1+s)² / (Δ²((1+s)³Δ + (1-s²)(s²+14s+1)))`
///
/// The zero of `s²-10s+1` at `5-2√6` and the `s⁻ᵏ` factors cancel
/// exactly, so there is nothing removable left to step around.
pub fn integrand_abc(s: &Real, lambda: &Rational, ctx: &Ctx) -> Result<IntegrandEval> {
    if !s.is_positive() || *s > ctx.one() {
        return Err(Error::Domain("integrand needs s in (0, 1]".into()));
    }
    Ok(integrand_abc_unchecked(s, &lambda.to_real(ctx), ctx))
}

fn integrand_abc_unchecked(s: &Real, l: &Real, ctx: &Ctx) -> IntegrandEval {
    let s2 = s.square();
    let s3 = &s2 * s;
    let d = delta(&ctx.one(), s);
    let u = s + 1;
    let p = &s2 * &s2 + &s3 * 34 - &s2 * 216 - s * 34 - 1;
    let a = (&s3 + &s2 * 33 - s * 23 - 1) * 2 / (&u * d.powi(3) - p);
    let b = l * (s - 2) * 2 / (&u * &d + 1 + s * 12 - &s2);
    let one_minus_s = ctx.one() - s;
    let c_lambda = -(l.square() * &u * 2) / (&d * (&s2 + s * 6 + 1 + &one_minus_s * &d));
    let c_free = s * u.square() * 4 / (d.square() * (u.powi(3) * &d + (ctx.one() - &s2) * (&s2 + s * 14 + 1)));
    IntegrandEval { s: s.clone(), a, b, c: c_lambda + c_free }
}

/// `A, B, C` straight from the displayed fractions, with `C` as the single
/// fraction over `12s(s²-10s+1)Δ²`. Only meant as a cross-check of
/// [`integrand_abc`]; it loses digits near `0` and near `5-2√6`.
pub fn integrand_abc_displayed(s: &Real, lambda: &Rational, ctx: &Ctx) -> Result<IntegrandEval> {
    if !s.is_positive() || *s > ctx.one() {
        return Err(Error::Domain("integrand needs s in (0, 1]".into()));
    }
    let l = lambda.to_real(ctx);
    let s2 = s.square();
    let s3 = &s2 * s;
    let d = delta(&ctx.one(), s);
    let u = s + 1;
    let a = (d.powi(3) * &u + &s2 * &s2 + &s3 * 34 - &s2 * 216 - s * 34 - 1) / (&s3 * 432);
    let b = &l * (&s2 - s * 12 - 1 + &u * &d) / (&s2 * 24);
    let quad_10 = &s2 - s * 10 + 1;
    let num = l.square() * 3 * &u * (&s2 + s * 6 + 1 + (s - 1) * &d) * &d
        - (u.powi(3) * &d + (&s2 - 1) * (&s2 + s * 14 + 1));
    if quad_10.is_zero() {
        return Err(Error::Domain("displayed C has a zero denominator here".into()));
    }
    let c = num / (s * 12 * quad_10 * d.square());
    Ok(IntegrandEval { s: s.clone(), a, b, c })
}

#[derive(Clone, Debug)]
pub struct IntegralsAbc {
    /// `(3/4 - log6/2, (1/2 - log6/2)λ, λ² log(2/3)/2 + log3/8 - log2/6)`.
    pub closed: [Real; 3],
    /// The same three integrals by tanh-sinh quadrature on `[0, 1]`.
    pub quadrature: [Real; 3],
}

pub fn integrals_abc_closed(lambda: &Rational, ctx: &Ctx) -> [Real; 3] {
    let l = lambda.to_real(ctx);
    let ln2 = ctx.int(2).ln(ctx);
    let ln3 = ctx.int(3).ln(ctx);
    let ln6 = &ln2 + &ln3;
    [
        ctx.ratio(3, 4) - &ln6 / 2,
        (ctx.ratio(1, 2) - &ln6 / 2) * &l,
        l.square() * (&ln2 - &ln3) / 2 + &ln3 / 8 - &ln2 / 6,
    ]
}

/// Closed forms plus quadrature; fails with a verification error when the
/// two disagree beyond `target/2` digits.
pub fn integrals_abc(lambda: &Rational, ctx: &Ctx) -> Result<IntegralsAbc> {
    let closed = integrals_abc_closed(lambda, ctx);
    let l = lambda.to_real(ctx);
    let wanted = i64::from(ctx.target_digits()) / 2 + 10;
    let rule = QuadRule::digits(ctx, wanted);
    let v = quad::interval(ctx, &ctx.zero(), &ctx.one(), 3, &rule, |p| {
        let e = integrand_abc_unchecked(&p.x, &l, ctx);
        Ok(vec![e.a, e.b, e.c])
    })?;
    let quadrature: [Real; 3] = [v[0].clone(), v[1].clone(), v[2].clone()];
    let tol = ctx.tolerance(i64::from(ctx.target_digits()) / 2);
    for (k, (a, b)) in closed.iter().zip(quadrature.iter()).enumerate() {
        if (a - b).abs() > &tol * a.abs().max(ctx.one()) {
            return Err(Error::Verification(format!("integral {k} of the deformation integrand disagrees with its closed form")));
        }
    }
    Ok(IntegralsAbc { closed, quadrature })
}

/// Coefficients of `a N² + b N log N + c N + d log N + e + f/N`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub n_sq: Real,
    pub n_log_n: Real,
    pub n: Real,
    pub log_n: Real,
    pub constant: Real,
    pub inv_n: Real,
}

impl Expansion {
    pub fn eval(&self, big_n: u32, ctx: &Ctx) -> Real {
        let n = ctx.uint(u64::from(big_n));
        let ln = n.ln(ctx);
        &self.n_sq * n.square() + &self.n_log_n * &n * &ln + &self.n * &n + &self.log_n * &ln + &self.constant
            + &self.inv_n / &n
    }

    pub fn add(&self, o: &Self) -> Self {
        Expansion {
            n_sq: &self.n_sq + &o.n_sq,
            n_log_n: &self.n_log_n + &o.n_log_n,
            n: &self.n + &o.n,
            log_n: &self.log_n + &o.log_n,
            constant: &self.constant + &o.constant,
            inv_n: &self.inv_n + &o.inv_n,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Expansion {
            n_sq: &self.n_sq - &o.n_sq,
            n_log_n: &self.n_log_n - &o.n_log_n,
            n: &self.n - &o.n,
            log_n: &self.log_n - &o.log_n,
            constant: &self.constant - &o.constant,
            inv_n: &self.inv_n - &o.inv_n,
        }
    }

    /// The first four coefficients that the full expansion is built from:
    /// `N²`, `N`, `log N`, constant.
    pub fn core_terms(&self) -> [&Real; 4] {
        [&self.n_sq, &self.n, &self.log_n, &self.constant]
    }
}

/// `∫A N² + ∫B N + ∫C` from the closed forms.
pub fn integrals_expansion(lambda: &Rational, ctx: &Ctx) -> Expansion {
    let [a, b, c] = integrals_abc_closed(lambda, ctx);
    Expansion { n_sq: a, n_log_n: ctx.zero(), n: b, log_n: ctx.zero(), constant: c, inv_n: ctx.zero() }
}

/// `log Z` of the Laguerre weight `x^λ e^{-Nx}`:
/// `-N(N+λ) log N + Σ_{j=1}^N [lnΓ(j+1) + lnΓ(j+λ)]`.
pub fn log_z_lue_exact(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let n = ctx.uint(u64::from(big_n));
    let mut sum = -(&n * (&n + &l) * n.ln(ctx));
    for j in 1..=i64::from(big_n) {
        sum += log_gamma(&ctx.int(j + 1), ctx)? + log_gamma(&(&l + j), ctx)?;
    }
    Ok(sum)
}

/// The Barnes form `-N(N+λ)logN + log G(N+2) + log G(N+λ+1) - log G(λ+1)`.
pub fn log_z_lue_barnes(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let n = ctx.uint(u64::from(big_n));
    Ok(-(&n * (&n + &l) * n.ln(ctx)) + log_barnes_g(&(&n + 2), ctx)? + log_barnes_g(&(&n + &l + 1), ctx)?
        - log_barnes_g(&(&l + 1), ctx)?)
}

pub fn lue_expansion(lambda: &Rational, ctx: &Ctx) -> Result<Expansion> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let ln2pi = (ctx.pi() * 2).ln(ctx);
    let log_a = constants(ctx)?.log_glaisher;
    Ok(Expansion {
        n_sq: ctx.ratio(-3, 2),
        n_log_n: ctx.one(),
        n: &ln2pi - 1 - &l,
        log_n: (l.square() * 3 + 2) / 6,
        constant: (ctx.one() + (&l + 1) * 3 * &ln2pi) / 6 - log_a * 2 - log_barnes_g(&(&l + 1), ctx)?,
        inv_n: (l.powi(3) * 2 - &l + 1) / 12,
    })
}

/// The large-`N` expansion of [`log_z_lue_exact`] through `1/N`.
pub fn log_z_lue_asymptotic(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    Ok(lue_expansion(lambda, ctx)?.eval(big_n, ctx))
}

fn check_lambda(lambda: &Rational) -> Result<()> {
    if *lambda <= Rational::int(-1) {
        return Err(Error::Domain(format!("lambda must exceed -1, got {lambda}")));
    }
    Ok(())
}

fn ggue_prefactor(big_n: u32, l: &Real, ctx: &Ctx) -> Real {
    let n = ctx.uint(u64::from(big_n));
    let ln_n = n.ln(ctx);
    -(n.square() / 2 * (ctx.int(2).ln(ctx) + &ln_n)) + &n / 2 * (ctx.pi() * 2).ln(ctx) - l * &n / 2 * ln_n
}

/// `log Z` of `|x|^λ e^{-N x²}` on the whole line:
/// prefactor plus `Σ_{j=1}^N [lnΓ((λ+1)/2+⌊j/2⌋) - lnΓ(1/2+⌊j/2⌋) + lnΓ(j+1)]`.
/// Valid for every `N`.
pub fn log_z_ggue_exact(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let base = (&l + 1) / 2;
    let half = ctx.ratio(1, 2);
    let mut sum = ggue_prefactor(big_n, &l, ctx);
    for j in 1..=i64::from(big_n) {
        let k = j / 2;
        sum += log_gamma(&(&base + k), ctx)? - log_gamma(&(&half + k), ctx)? + log_gamma(&ctx.int(j + 1), ctx)?;
    }
    Ok(sum)
}

fn ggue_barnes_ratio(l: &Real, ctx: &Ctx) -> Result<Real> {
    let g = |x: Real| log_barnes_g(&x, ctx);
    Ok(g(ctx.ratio(3, 2))? + g(ctx.ratio(1, 2))? - g((l + 3) / 2)? - g((l + 1) / 2)?)
}

/// The Barnes form of [`log_z_ggue_exact`], which needs `N` even.
pub fn log_z_ggue_barnes(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    check_lambda(lambda)?;
    if big_n == 0 || big_n % 2 == 1 {
        return Err(Error::Domain(format!("the Barnes form needs a positive even N, got {big_n}")));
    }
    let l = lambda.to_real(ctx);
    let n = ctx.uint(u64::from(big_n));
    let g = |x: Real| log_barnes_g(&x, ctx);
    Ok(ggue_prefactor(big_n, &l, ctx) + ggue_barnes_ratio(&l, ctx)? + g(&n + 2)? + g((&l + &n + 3) / 2)?
        + g((&l + &n + 1) / 2)?
        - g((&n + 3) / 2)?
        - g((&n + 1) / 2)?)
}

pub fn ggue_expansion(lambda: &Rational, ctx: &Ctx) -> Result<Expansion> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let ln2 = ctx.int(2).ln(ctx);
    let ln2pi = (ctx.pi() * 2).ln(ctx);
    let log_a = constants(ctx)?.log_glaisher;
    let c0 = (ctx.one() - l.square() * 3 * &ln2 - log_a * 12 + (&l + 1) * 6 * &ln2pi) / 12 + ggue_barnes_ratio(&l, ctx)?;
    Ok(Expansion {
        n_sq: -(ctx.ratio(3, 4) + &ln2 / 2),
        n_log_n: ctx.one(),
        n: &ln2pi - ((ctx.one() + &ln2) * &l + 2) / 2,
        log_n: (l.square() * 3 + 5) / 12,
        constant: c0,
        inv_n: (l.powi(3) + &l + 1) / 12,
    })
}

/// The large-`N` expansion of [`log_z_ggue_exact`] through `1/N`. Derived
/// for even `N`; evaluated for any `N`.
pub fn log_z_ggue_asymptotic(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    Ok(ggue_expansion(lambda, ctx)?.eval(big_n, ctx))
}

/// Relative gap between `det[Γ(z+i+j)]_{i,j=0..M}` and `∏_{j=0}^M j! Γ(z+j)`.
pub fn gamma_det_identity_check(z: &Real, m: u32, ctx: &Ctx) -> Result<Real> {
    if !z.is_positive() {
        return Err(Error::Domain("gamma determinant needs z > 0".into()));
    }
    if m > 8 {
        return Err(Error::Domain(format!("gamma determinant is limited to M <= 8, got {m}")));
    }
    let size = m as usize + 1;
    let gammas: Vec<Real> =
        (0..2 * size - 1).map(|k| Ok(log_gamma(&(z + k as i64), ctx)?.exp(ctx))).collect::<Result<_>>()?;
    let matrix: Vec<Vec<Real>> = (0..size).map(|i| gammas[i..i + size].to_vec()).collect();
    let det = determinant(&matrix, ctx);
    let mut log_prod = ctx.zero();
    for j in 0..size as i64 {
        log_prod += log_gamma(&ctx.int(j + 1), ctx)? + log_gamma(&(z + j), ctx)?;
    }
    let prod = log_prod.exp(ctx);
    Ok(((det - &prod) / prod).abs())
}

/// Coefficients of the positivity expansion through `O(1)`:
/// `-c1 N² - (λ log3/2) N + (c2 + λ²/4) log N + c3 + (3λ²/4) log2
///  - (λ²/2) log3 - log[G(3/2)G(1/2)G(λ+1)/(G((λ+3)/2)G((λ+1)/2))]`.
pub fn positivity_expansion(lambda: &Rational, ctx: &Ctx) -> Result<Expansion> {
    check_lambda(lambda)?;
    let l = lambda.to_real(ctx);
    let k = constants(ctx)?;
    let ln2 = ctx.int(2).ln(ctx);
    let ln3 = ctx.int(3).ln(ctx);
    let l2 = l.square();
    let barnes = ggue_barnes_ratio(&l, ctx)? + log_barnes_g(&(&l + 1), ctx)?;
    Ok(Expansion {
        n_sq: -&k.c1,
        n_log_n: ctx.zero(),
        n: -(&l * &ln3 / 2),
        log_n: &k.c2 + &l2 / 4,
        constant: &k.c3 + &l2 * 3 / 4 * &ln2 - &l2 / 2 * &ln3 - barnes,
        inv_n: ctx.zero(),
    })
}

/// `log P(M_N > 0)` from the large-`N` expansion, truncated after `O(1)`.
pub fn log_positivity_asymptotic(big_n: u32, lambda: &Rational, ctx: &Ctx) -> Result<Real> {
    Ok(positivity_expansion(lambda, ctx)?.eval(big_n, ctx))
}

/// `integrals + LUE - gGUE`, which must coincide with
/// [`positivity_expansion`] in the `N²`, `N`, `log N` and constant terms.
pub fn assembled_expansion(lambda: &Rational, ctx: &Ctx) -> Result<Expansion> {
    Ok(integrals_expansion(lambda, ctx).add(&lue_expansion(lambda, ctx)?).sub(&ggue_expansion(lambda, ctx)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrecisionContext;

    fn ctx() -> Ctx {
        Ctx::new(PrecisionContext::new(60, 40, 1).unwrap())
    }

    fn close(a: &Real, b: &Real, d: i64, c: &Ctx) -> bool {
        (a - b).abs() <= c.tolerance(d) * b.abs().max(c.one())
    }

    #[test]
    fn coefficients_at_q1_s1() {
        let c = ctx();
        let e = expansion_coeffs(&Rational::int(1), &Rational::int(0), &Rational::int(1), &c).unwrap();
        let r6 = c.int(6).sqrt();
        assert!(close(&e.delta, &(&r6 * 2), 55, &c));
        assert!(close(&e.f0, &(&r6 / 3), 55, &c));
        assert!(close(&e.g0, &c.ratio(1, 6), 55, &c));
        assert!(close(&e.f0.square(), &c.ratio(2, 3), 55, &c));
    }

    #[test]
    fn alternative_g0_breaks_string_equations() {
        let c = ctx();
        let (q, s) = (Rational::int(1), Rational::int(1));
        let e = expansion_coeffs(&q, &Rational::int(0), &s, &c).unwrap();
        let (r1, r2) = leading_order_residuals(&e.f0, &e.g0, &q, &s, &c);
        assert!(r1.abs() < c.tolerance(55) && r2.abs() < c.tolerance(55));
        let bad = g0_inconsistent_form(&q, &s, &c).unwrap();
        assert!(close(&bad, &c.ratio(1, 3), 55, &c));
        let (r1, r2) = leading_order_residuals(&e.f0, &bad, &q, &s, &c);
        assert!(r1.abs() > c.ratio(1, 10) && r2.abs() > c.ratio(1, 100));
        // both roots of the leading-order system at q = s = 1
        for g in [c.ratio(1, 2), c.ratio(1, 6)] {
            let f0sq = ctx().one() - &g * 2;
            let resid = &g * &f0sq * 4 - (&g * 2 - 1).square();
            assert!(resid.abs() < c.tolerance(55));
        }
    }

    #[test]
    fn small_s_limits() {
        let c = ctx();
        let (q, l) = (Rational::ratio(3, 4), Rational::ratio(5, 2));
        let e = expansion_coeffs(&q, &l, &Rational::int(0), &c).unwrap();
        let qr = q.to_real(&c);
        let lr = l.to_real(&c);
        assert!(close(&e.f0, &(&qr * 2), 55, &c));
        assert!(close(&e.g0, &qr.square(), 55, &c));
        assert!(close(&e.f1, &(&lr + 1), 55, &c));
        assert!(close(&e.g1, &(&qr * &lr), 55, &c));
        let tiny = expansion_coeffs(&q, &l, &Rational::parse("1e-30").unwrap(), &c).unwrap();
        assert!(close(&tiny.f0, &e.f0, 25, &c));
    }

    #[test]
    fn next_order_balance_scales_like_inverse_square() {
        let c = ctx();
        let (q, l, s) = (Rational::int(1), Rational::ratio(3, 2), Rational::ratio(7, 10));
        let (a1, a2) = next_order_residual(&q, &l, &s, 1000, &c).unwrap();
        let (b1, b2) = next_order_residual(&q, &l, &s, 1_000_000, &c).unwrap();
        for (x, y) in [(a1, b1), (a2, b2)] {
            let ratio = (x / y).abs().to_f64();
            assert!(ratio > 0.5e6 && ratio < 2e6, "ratio {ratio}");
        }
    }

    #[test]
    fn integrand_values() {
        let c = ctx();
        let e = integrand_abc(&c.one(), &Rational::int(0), &c).unwrap();
        let want = (c.int(6).sqrt() * 96 - 216) / 432;
        assert!(close(&e.a, &want, 55, &c));
        assert!(integrand_abc(&c.zero(), &Rational::int(0), &c).is_err());
        for (s, l) in [("0.37", 2), ("0.9", -1), ("0.05", 1)] {
            let sr = c.parse(s);
            let lam = Rational::ratio(l, 2);
            let x = integrand_abc(&sr, &lam, &c).unwrap();
            let y = integrand_abc_displayed(&sr, &lam, &c).unwrap();
            assert!(close(&x.a, &y.a, 50, &c) && close(&x.b, &y.b, 50, &c) && close(&x.c, &y.c, 50, &c));
        }
    }

    #[test]
    fn displayed_c_has_matching_limits_at_removable_point() {
        let hi = Ctx::new(PrecisionContext::new(120, 80, 0).unwrap());
        let c = ctx();
        let s0 = c.int(5) - c.int(24).sqrt();
        let s0_hi = hi.int(5) - hi.int(24).sqrt();
        let lam = Rational::int(2);
        let stable = integrand_abc(&s0, &lam, &c).unwrap().c;
        let eps = hi.tolerance(6);
        let left = integrand_abc_displayed(&(&s0_hi - &eps), &lam, &hi).unwrap().c;
        let right = integrand_abc_displayed(&(&s0_hi + &eps), &lam, &hi).unwrap().c;
        // one-sided values straddle the stable value to O(eps²)
        assert!((&left - &right).abs().to_f64() < 1e-4);
        let mid = (left + right) / 2;
        assert!((mid.to_f64() - stable.to_f64()).abs() < 1e-10);
    }

    #[test]
    fn integrals_agree_with_closed_forms() {
        let c = ctx();
        for l in [0, 2] {
            let r = integrals_abc(&Rational::int(l), &c).unwrap();
            assert!(r.closed.iter().zip(&r.quadrature).all(|(a, b)| close(a, b, 38, &c)));
        }
        let r = integrals_abc_closed(&Rational::int(0), &c);
        assert!(r[1].is_zero());
        assert!((r[2].to_f64() - 0.021802).abs() < 1e-6);
    }

    #[test]
    fn lue_small_values() {
        let c = ctx();
        assert!(log_z_lue_exact(1, &Rational::int(0), &c).unwrap().abs() < c.tolerance(55));
        let v = log_z_lue_exact(2, &Rational::int(0), &c).unwrap();
        assert!(close(&v, &-(c.int(2).ln(&c) * 3), 55, &c));
        for l in [Rational::ratio(-1, 2), Rational::ratio(5, 2)] {
            let a = log_z_lue_exact(7, &l, &c).unwrap();
            let b = log_z_lue_barnes(7, &l, &c).unwrap();
            assert!(close(&a, &b, 50, &c));
        }
        let e = lue_expansion(&Rational::int(1), &c).unwrap();
        assert!(close(&e.inv_n, &c.ratio(1, 6), 55, &c));
    }

    #[test]
    fn ggue_small_values() {
        let c = ctx();
        let v = log_z_ggue_exact(1, &Rational::int(0), &c).unwrap();
        assert!(close(&v, &(c.pi().ln(&c) / 2), 55, &c));
        for n in [2, 4, 6] {
            for l in [Rational::int(0), Rational::ratio(3, 2)] {
                let a = log_z_ggue_exact(n, &l, &c).unwrap();
                let b = log_z_ggue_barnes(n, &l, &c).unwrap();
                assert!(close(&a, &b, 50, &c), "N={n}");
            }
        }
        assert!(log_z_ggue_barnes(3, &Rational::int(0), &c).is_err());
        let e = ggue_expansion(&Rational::int(0), &c).unwrap();
        assert!(close(&e.log_n, &c.ratio(5, 12), 55, &c));
        assert!(close(&e.inv_n, &c.ratio(1, 12), 55, &c));
    }

    #[test]
    fn gamma_determinant() {
        let c = ctx();
        assert!(gamma_det_identity_check(&c.one(), 1, &c).unwrap() < c.tolerance(50));
        assert!(gamma_det_identity_check(&c.ratio(1, 2), 3, &c).unwrap() < c.tolerance(30));
        assert!(gamma_det_identity_check(&c.ratio(3, 2), 4, &c).unwrap() < c.tolerance(30));
        assert!(gamma_det_identity_check(&c.one(), 9, &c).is_err());
    }

    #[test]
    fn positivity_constants_at_lambda_zero() {
        let c = ctx();
        let e = positivity_expansion(&Rational::int(0), &c).unwrap();
        let k = constants(&c).unwrap();
        assert!(close(&e.n_sq, &-&k.c1, 55, &c));
        assert!(e.n.is_zero());
        assert!(close(&e.log_n, &c.ratio(-1, 12), 55, &c));
        assert!(close(&e.constant, &k.c3, 50, &c));
    }

    #[test]
    fn assembly_matches() {
        let c = ctx();
        for l in [0, 1, 2] {
            let lam = Rational::int(l);
            let a = positivity_expansion(&lam, &c).unwrap();
            let b = assembled_expansion(&lam, &c).unwrap();
            for (x, y) in a.core_terms().iter().zip(b.core_terms().iter()) {
                assert!(close(x, y, 50, &c), "lambda {l}");
            }
            assert!(b.n_log_n.abs() < c.tolerance(55));
        }
    }
}
