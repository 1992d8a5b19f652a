//! Equilibrium measure of the potential `V(x; s) = x + s(x² - x)` on the
//! half line.
//!
//! The measure lives on `(0, c)` with density
//! `ψ(x) = -(1/π)(a x + b) sqrt((c - x)/x)`, where
//! `c = (s - 1 + r)/(3s)`, `a = -s`, `b = (2s - 2 - r)/6` and
//! `r = sqrt(s² + 22s + 1)`. Its Cauchy transform is
//! `ω(z) = V'(z)/2 + (a z + b) sqrt((z - c)/z)`.

use crate::complex::Complex;
use crate::quad::{self, QuadRule};
use crate::specfun::log_gamma;
use crate::weight::potential_derivative;
use crate::{Ctx, Error, Rational, Real, Result};
use alloc::format;

#[derive(Clone, Debug)]
pub struct EquilibriumData {
    pub s: Rational,
    /// Right end of the support.
    pub c: Real,
    pub a: Real,
    pub b: Real,
}

pub fn equilibrium_data(s: &Rational, ctx: &Ctx) -> Result<EquilibriumData> {
    if *s < Rational::int(0) || *s > Rational::int(1) {
        return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
    }
    if s.is_zero() {
        return Ok(EquilibriumData { s: s.clone(), c: ctx.int(4), a: ctx.zero(), b: ctx.ratio(-1, 2) });
    }
    let sr = s.to_real(ctx);
    let r = (sr.square() + &sr * 22 + 1).sqrt();
    // (s - 1 + r)/(3s) without the cancellation at small s
    let c = ctx.int(8) / (&r + 1 - &sr);
    let a = -&sr;
    let b = (&sr * 2 - 2 - &r) / 6;
    Ok(EquilibriumData { s: s.clone(), c, a, b })
}

/// `ψ` from `x` and `c - x` given separately, so that quadrature nodes
/// next to `c` keep their accuracy.
pub fn density_from_parts(x: &Real, c_minus_x: &Real, eq: &EquilibriumData, ctx: &Ctx) -> Real {
    -((&eq.a * x + &eq.b) * (c_minus_x / x).sqrt()) / ctx.pi()
}

/// `ψ(x)`; zero off the support. `x = 0` is refused because the density
/// is unbounded there.
pub fn density_eval(x: &Real, eq: &EquilibriumData, ctx: &Ctx) -> Result<Real> {
    if x.is_zero() {
        return Err(Error::Domain("equilibrium density is unbounded at x = 0".into()));
    }
    if x.is_negative() || x >= &eq.c {
        return Ok(ctx.zero());
    }
    Ok(density_from_parts(x, &(&eq.c - x), eq, ctx))
}

fn log_beta(p: &Real, q: &Real, ctx: &Ctx) -> Result<Real> {
    Ok(log_gamma(p, ctx)? + log_gamma(q, ctx)? - log_gamma(&(p + q), ctx)?)
}

/// `μ_k = ∫ x^k ψ(x) dx` for `k <= 2`, via Euler Beta integrals:
/// `-(1/π)[a c^{k+2} B(k+3/2, 3/2) + b c^{k+1} B(k+1/2, 3/2)]`.
pub fn equilibrium_moment(k: u32, eq: &EquilibriumData, ctx: &Ctx) -> Result<Real> {
    if k > 2 {
        return Err(Error::Domain(format!("moment index must be at most 2, got {k}")));
    }
    let half = ctx.ratio(1, 2);
    let three_halves = ctx.ratio(3, 2);
    let kk = i64::from(k);
    let b1 = log_beta(&(&three_halves + kk), &three_halves, ctx)?.exp(ctx);
    let b2 = log_beta(&(&half + kk), &three_halves, ctx)?.exp(ctx);
    let ck1 = eq.c.powi(k + 1);
    let sum = &eq.a * &ck1 * &eq.c * b1 + &eq.b * ck1 * b2;
    Ok(-sum / ctx.pi())
}

/// `∫_0^c x^k ψ(x) dx` by tanh-sinh quadrature, the oracle for
/// [`equilibrium_moment`].
pub fn equilibrium_moment_quadrature(k: u32, eq: &EquilibriumData, digits: i64, ctx: &Ctx) -> Result<Real> {
    let rule = QuadRule::digits(ctx, digits);
    quad::interval_scalar(ctx, &ctx.zero(), &eq.c, &rule, |p| {
        Ok(density_from_parts(&p.from_a, &p.to_b, eq, ctx) * p.x.powi(k))
    })
}

fn on_support(z: &Complex, eq: &EquilibriumData) -> bool {
    z.im.is_zero() && !z.re.is_negative() && z.re <= eq.c
}

/// `ω(z) = V'(z)/2 + (a z + b) sqrt((z - c)/z)`, the root taken as
/// `exp((log(z - c) - log z)/2)` with principal logarithms. Both logarithms
/// jump together across the negative axis, so the only cut is `[0, c]`, and
/// the root tends to `+1` at infinity.
pub fn resolvent_eval(z: &Complex, eq: &EquilibriumData, ctx: &Ctx) -> Result<Complex> {
    if on_support(z, eq) {
        return Err(Error::Domain("resolvent is evaluated off the support [0, c]".into()));
    }
    let s = eq.s.to_real(ctx);
    let z_minus_c = Complex::new(&z.re - &eq.c, z.im.clone());
    let half = ctx.ratio(1, 2);
    let root = (&z_minus_c.ln(ctx) - &z.ln(ctx)).scale(&half).exp(ctx);
    // V'(z)/2 = s z + (1 - s)/2
    let vp_half = Complex::new(&s * &z.re + (ctx.one() - &s) / 2, &s * &z.im);
    let linear = Complex::new(&eq.a * &z.re + &eq.b, &eq.a * &z.im);
    Ok(&vp_half + &(&linear * &root))
}

/// `∫ ψ(x)/(z - x) dx` for real `z` outside `[0, c]`, by quadrature.
pub fn resolvent_quadrature(z: &Real, eq: &EquilibriumData, digits: i64, ctx: &Ctx) -> Result<Real> {
    if !z.is_negative() && z <= &eq.c {
        return Err(Error::Domain("quadrature resolvent needs z outside [0, c]".into()));
    }
    let rule = QuadRule::digits(ctx, digits);
    quad::interval_scalar(ctx, &ctx.zero(), &eq.c, &rule, |p| {
        Ok(density_from_parts(&p.from_a, &p.to_b, eq, ctx) / (z - &p.x))
    })
}

/// Boundary values at `x ∓ iε`: returns `(ω(x+iε) + ω(x-iε) - V'(x),
/// Im ω(x-iε)/π - ψ(x))`, both of which vanish as `ε → 0`.
pub fn boundary_defects(x: &Real, eps: &Real, eq: &EquilibriumData, ctx: &Ctx) -> Result<(Real, Real)> {
    let s = eq.s.to_real(ctx);
    let above = resolvent_eval(&Complex::new(x.clone(), eps.clone()), eq, ctx)?;
    let below = resolvent_eval(&Complex::new(x.clone(), -eps), eq, ctx)?;
    let jump = &above.re + &below.re - potential_derivative(x, &s);
    let psi = density_eval(x, eq, ctx)?;
    Ok((jump, &below.im / ctx.pi() - psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrecisionContext;

    fn ctx() -> Ctx {
        Ctx::new(PrecisionContext::new(60, 40, 0).unwrap())
    }

    fn tol(c: &Ctx, d: i64) -> Real {
        c.tolerance(d)
    }

    #[test]
    fn closed_form_endpoints() {
        let c = ctx();
        let e = equilibrium_data(&Rational::int(0), &c).unwrap();
        assert_eq!(e.c, c.int(4));
        let e = equilibrium_data(&Rational::int(1), &c).unwrap();
        let r6 = c.int(6).sqrt();
        assert!((&e.c - &r6 * 2 / 3).abs() < tol(&c, 55));
        assert!((&e.a + 1).abs() < tol(&c, 55));
        assert!((&e.b + &r6 / 3).abs() < tol(&c, 55));
        let e = equilibrium_data(&Rational::ratio(1, 2), &c).unwrap();
        assert!((&e.c - 2).abs() < tol(&c, 55));
        assert!((&e.b + c.ratio(3, 4)).abs() < tol(&c, 55));
        assert!(equilibrium_data(&Rational::int(2), &c).is_err());
    }

    #[test]
    fn density_values() {
        let c = ctx();
        let e = equilibrium_data(&Rational::int(0), &c).unwrap();
        let psi = density_eval(&c.int(2), &e, &c).unwrap();
        assert!((psi - (c.pi() * 2).recip()).abs() < tol(&c, 55));
        assert!(density_eval(&c.int(5), &e, &c).unwrap().is_zero());
        assert!(density_eval(&c.zero(), &e, &c).is_err());
    }

    #[test]
    fn moments_match_quadrature() {
        let c = ctx();
        for s in [Rational::int(0), Rational::ratio(3, 10), Rational::int(1)] {
            let e = equilibrium_data(&s, &c).unwrap();
            assert!((equilibrium_moment(0, &e, &c).unwrap() - 1).abs() < tol(&c, 55));
            for k in 0..=2 {
                let a = equilibrium_moment(k, &e, &c).unwrap();
                let b = equilibrium_moment_quadrature(k, &e, 45, &c).unwrap();
                assert!((a - b).abs() < tol(&c, 40), "s={s} k={k}");
            }
        }
        let e = equilibrium_data(&Rational::int(0), &c).unwrap();
        assert!((equilibrium_moment(1, &e, &c).unwrap() - 1).abs() < tol(&c, 55));
    }

    #[test]
    fn resolvent_at_minus_one() {
        let c = ctx();
        let e = equilibrium_data(&Rational::int(0), &c).unwrap();
        let w = resolvent_eval(&Complex::from_real(c.int(-1)), &e, &c).unwrap();
        let want = (ctx().one() - c.int(5).sqrt()) / 2;
        assert!((&w.re - &want).abs() < tol(&c, 55) && w.im.abs() < tol(&c, 55));
        let q = resolvent_quadrature(&c.int(-1), &e, 45, &c).unwrap();
        assert!((q - want).abs() < tol(&c, 40));
    }

    #[test]
    fn resolvent_decays_like_inverse_z() {
        let c = ctx();
        let e = equilibrium_data(&Rational::ratio(7, 10), &c).unwrap();
        let z = Complex::new(c.int(1_000_000), c.int(1_000_000));
        let w = resolvent_eval(&z, &e, &c).unwrap();
        let inv = &Complex::from_real(c.one()) / &z;
        let mu2 = equilibrium_moment(2, &e, &c).unwrap();
        let bound = (mu2.abs() + 1) * 3 / z.norm_sqr();
        assert!((&w - &inv).abs() < bound);
    }

    #[test]
    fn boundary_values_reproduce_density() {
        let c = ctx();
        let e = equilibrium_data(&Rational::ratio(2, 5), &c).unwrap();
        let x = &e.c / 3;
        let (jump, dens) = boundary_defects(&x, &c.tolerance(20), &e, &c).unwrap();
        assert!(jump.abs() < tol(&c, 18) && dens.abs() < tol(&c, 18));
    }
}
