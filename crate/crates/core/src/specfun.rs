//! Log-Gamma, Barnes G and the constants built from them.
//!
//! Both log-Gamma and log-Barnes-G push their argument above a threshold
//! `z0 = max(30, digits / 2)` with the functional equation, evaluate the
//! Stirling-type asymptotic series there, and unwind. The unwinding is done
//! with products rather than sums of logarithms, so it costs one logarithm
//! regardless of the shift length.

use crate::{Ctx, Error, Rational, Real, Result};
use alloc::format;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Tangent numbers `T_1..T_n` (`tan x = Σ T_k x^{2k-1} / (2k-1)!`), by the
/// in-place integer recurrence of Brent and Harvey.
fn tangent_numbers(n: usize) -> Vec<BigUint> {
    let mut t: Vec<BigUint> = Vec::with_capacity(n + 1);
    t.push(BigUint::zero());
    if n == 0 {
        return t;
    }
    t.push(BigUint::one());
    for k in 2..=n {
        let next = &t[k - 1] * BigUint::from(k - 1);
        t.push(next);
    }
    for k in 2..=n {
        for j in k..=n {
            let v = &t[j - 1] * BigUint::from(j - k) + &t[j] * BigUint::from(j - k + 2);
            t[j] = v;
        }
    }
    t
}

/// `B_{2k} = (-1)^{k-1} 2k T_k / (2^{2k} (2^{2k} - 1))`.
fn bernoulli_from_tangent(k: usize, tk: &BigUint) -> Rational {
    let num = BigInt::from(tk * BigUint::from(2 * k));
    let pow = BigInt::one() << (2 * k);
    let den = &pow * (&pow - BigInt::one());
    let num = if k % 2 == 1 { num } else { -num };
    Rational::new(num, den)
}

/// The Bernoulli number `B_index` for even `index >= 2`, exactly, in lowest terms.
pub fn bernoulli(index: u32) -> Result<Rational> {
    if index < 2 || index % 2 == 1 {
        return Err(Error::Domain(format!("Bernoulli index must be even and >= 2, got {index}")));
    }
    let k = (index / 2) as usize;
    let t = tangent_numbers(k);
    Ok(bernoulli_from_tangent(k, &t[k]))
}

/// `B_{2k}` at working precision, from the per-context cache.
fn bernoulli_real(ctx: &Ctx, k: usize) -> Real {
    debug_assert!(k >= 1);
    {
        let cache = ctx.bernoulli.borrow();
        if let Some(b) = cache.get(k - 1) {
            return b.clone();
        }
    }
    let have = ctx.bernoulli.borrow().len();
    let want = (2 * have).max(k).max(32);
    let t = tangent_numbers(want);
    let mut cache = ctx.bernoulli.borrow_mut();
    let start = cache.len() + 1;
    for (j, tj) in t.iter().enumerate().take(want + 1).skip(start) {
        cache.push(bernoulli_from_tangent(j, tj).to_real(ctx));
    }
    cache[k - 1].clone()
}

/// Argument threshold above which the asymptotic series are used.
pub fn asymptotic_threshold(ctx: &Ctx) -> u64 {
    u64::from((ctx.digits() / 2).max(30))
}

fn half_ln_two_pi(ctx: &Ctx) -> Real {
    ctx.half_ln_two_pi.get_or_init(|| (ctx.pi() * 2).ln(ctx) / 2).clone()
}

fn require_positive(x: &Real, what: &str) -> Result<()> {
    if !x.is_positive() || !x.is_finite() {
        return Err(Error::Domain(format!("{what} needs a positive argument, got {:e}", x.to_f64())));
    }
    Ok(())
}

/// Sums `Σ_{k>=1} B_{2k+shift} first_power z^{-2(k-1)} / denom(k)` until the
/// terms drop below the working epsilon relative to `scale`, or stops at the
/// smallest term if that already meets the target accuracy.
fn asymptotic_tail(
    ctx: &Ctx,
    z: &Real,
    first_power: &Real,
    index_shift: usize,
    denom: impl Fn(usize) -> i64,
    scale: &Real,
) -> Result<Real> {
    let inv_z2 = (z * z).recip();
    let tol = ctx.epsilon() * scale.abs().max(ctx.one());
    let mut power = first_power.clone();
    let mut sum = ctx.zero();
    let mut previous: Option<Real> = None;
    let max_terms = 4 * ctx.digits() as usize + 64;
    for k in 1..=max_terms {
        let b = bernoulli_real(ctx, k + index_shift);
        let term = &b * &power / denom(k);
        let mag = term.abs();
        sum += &term;
        if mag <= tol {
            return Ok(sum);
        }
        if let Some(prev) = &previous {
            if &mag > prev {
                // past the smallest term: acceptable once the target is met
                sum -= &term;
                if prev <= &(ctx.tolerance(i64::from(ctx.target_digits())) * scale.abs().max(ctx.one())) {
                    return Ok(sum);
                }
                return Err(Error::NotConverged(format!(
                    "asymptotic series at z = {:e} stalls before {} digits",
                    z.to_f64(),
                    ctx.target_digits()
                )));
            }
        }
        previous = Some(mag);
        power *= &inv_z2;
    }
    Err(Error::NotConverged(format!("asymptotic series needs more than {max_terms} terms")))
}

/// Stirling series for `log Γ(z)`, valid for `z >= z0`.
fn log_gamma_stirling(z: &Real, ctx: &Ctx) -> Result<Real> {
    let ln_z = z.ln(ctx);
    let main = (z - ctx.ratio(1, 2)) * &ln_z - z + half_ln_two_pi(ctx);
    // B_{2k} / (2k (2k-1) z^{2k-1})
    let tail = asymptotic_tail(ctx, z, &z.recip(), 0, |k| (2 * k * (2 * k - 1)) as i64, &main)?;
    Ok(main + tail)
}

/// `∏_{i=0}^{m-1} (x + i)`.
fn rising(x: &Real, m: u64) -> Real {
    let mut p = x.clone();
    for i in 1..m {
        p *= x + i as i64;
    }
    p
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: &Real, ctx: &Ctx) -> Result<Real> {
    require_positive(x, "log_gamma")?;
    let z0 = ctx.uint(asymptotic_threshold(ctx));
    if x >= &z0 {
        return log_gamma_stirling(x, ctx);
    }
    let m = shift_count(x, &z0);
    let shifted = x + m as i64;
    Ok(log_gamma_stirling(&shifted, ctx)? - rising(x, m).ln(ctx))
}

/// Smallest `m >= 1` with `x + m >= z0`.
fn shift_count(x: &Real, z0: &Real) -> u64 {
    let gap = (z0 - x).to_f64();
    (libm::ceil(gap).max(1.0)) as u64
}

/// The asymptotic series for `log G(z + 1)` without its `-log A` term.
fn barnes_series_without_constant(z: &Real, log_gamma_z1: &Real, ctx: &Ctx) -> Result<Real> {
    let ln_z = z.ln(ctx);
    let zz = z * z;
    let main = &zz / 4 + z * log_gamma_z1 - ((&zz + z) / 2 + ctx.ratio(1, 12)) * &ln_z;
    // B_{2k+2} / (2k (2k+1) (2k+2) z^{2k})
    let tail = asymptotic_tail(ctx, z, &zz.recip(), 1, |k| (2 * k * (2 * k + 1) * (2 * k + 2)) as i64, &main)?;
    Ok(main + tail)
}

/// `log A` for the Glaisher–Kinkelin constant `A`.
///
/// Obtained as the constant of the Barnes asymptotic series: at an integer
/// `n` above the threshold, `log G(n + 1) = log ∏_{j<n} j!` is known exactly,
/// so the series without its constant minus this value is `log A`.
pub fn log_glaisher(ctx: &Ctx) -> Result<Real> {
    if let Some(v) = ctx.log_glaisher.get() {
        return Ok(v.clone());
    }
    let n = asymptotic_threshold(ctx) + 1;
    let mut factorial = ctx.one();
    let mut superfactorial = ctx.one();
    for j in 1..n {
        factorial *= ctx.uint(j);
        superfactorial *= &factorial;
    }
    let n_factorial = &factorial * ctx.uint(n);
    let z = ctx.uint(n);
    let series = barnes_series_without_constant(&z, &n_factorial.ln(ctx), ctx)?;
    let v = series - superfactorial.ln(ctx);
    Ok(ctx.log_glaisher.get_or_init(|| v).clone())
}

/// `log G(x)` for `x > 0`, with `G` the Barnes G-function.
pub fn log_barnes_g(x: &Real, ctx: &Ctx) -> Result<Real> {
    require_positive(x, "log_barnes_g")?;
    let log_a = log_glaisher(ctx)?;
    let z0 = ctx.uint(asymptotic_threshold(ctx));
    let at_large = |y: &Real| -> Result<Real> {
        // y = z + 1 with z >= z0
        let z = y - 1;
        let lg = log_gamma_stirling(y, ctx)?;
        Ok(barnes_series_without_constant(&z, &lg, ctx)? - &log_a)
    };
    let z0_plus_one = &z0 + 1;
    if x >= &z0_plus_one {
        return at_large(x);
    }
    // log G(x) = log G(x+m) - Σ_{j<m} log Γ(x+j)
    //          = log G(x+m) - m log Γ(x) - log ∏_{j=1}^{m-1} ∏_{i<j} (x+i)
    let m = shift_count(x, &z0_plus_one);
    let mut partial = ctx.one();
    let mut nested = ctx.one();
    for j in 1..m {
        partial *= x + (j - 1) as i64;
        nested *= &partial;
    }
    let upper = at_large(&(x + m as i64))?;
    Ok(upper - log_gamma(x, ctx)? * m as i64 - nested.ln(ctx))
}

/// Constants of the positivity asymptotics.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSet {
    /// `log A`.
    pub log_glaisher: Real,
    /// `ζ'(-1) = 1/12 - log A`.
    pub zeta_prime_neg1: Real,
    /// `log(3) / 2`, the rate of the `N²` decay.
    pub c1: Real,
    /// `-1/12`, the `log N` coefficient at `λ = 0`.
    pub c2: Real,
    /// `log(3)/8 - log(2)/6 + ζ'(-1)`.
    pub c3: Real,
}

pub fn constants(ctx: &Ctx) -> Result<ConstantSet> {
    let log_glaisher = log_glaisher(ctx)?;
    let zeta_prime_neg1 = ctx.ratio(1, 12) - &log_glaisher;
    let ln3 = ctx.int(3).ln(ctx);
    let ln2 = ctx.int(2).ln(ctx);
    let c1 = &ln3 / 2;
    let c2 = ctx.ratio(-1, 12);
    let c3 = &ln3 / 8 - &ln2 / 6 + &zeta_prime_neg1;
    Ok(ConstantSet { log_glaisher, zeta_prime_neg1, c1, c2, c3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrecisionContext;

    fn ctx(digits: u32) -> Ctx {
        Ctx::new(PrecisionContext::new(digits, digits - 20, 1).unwrap())
    }

    fn close(a: &Real, b: &Real, digits: i64, ctx: &Ctx) -> bool {
        (a - b).abs() <= ctx.tolerance(digits) * b.abs().max(ctx.one())
    }

    #[test]
    fn bernoulli_small_values() {
        let r = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(bernoulli(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli(4).unwrap(), r(-1, 30));
        assert_eq!(bernoulli(8).unwrap(), r(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), r(-691, 2730));
        assert_eq!(bernoulli(20).unwrap(), r(-174611, 330));
    }

    #[test]
    fn bernoulli_rejects_odd_and_small() {
        assert!(matches!(bernoulli(3), Err(Error::Domain(_))));
        assert!(matches!(bernoulli(0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_gamma_closed_forms() {
        let c = ctx(80);
        assert!(log_gamma(&c.one(), &c).unwrap().abs() < c.tolerance(60));
        let half = log_gamma(&c.ratio(1, 2), &c).unwrap();
        assert!(close(&half, &(c.pi().sqrt().ln(&c)), 60, &c));
        let five = log_gamma(&c.int(5), &c).unwrap();
        assert!(close(&five, &c.int(24).ln(&c), 60, &c));
    }

    #[test]
    fn log_gamma_reference_values() {
        let c = ctx(80);
        let a = log_gamma(&c.parse("0.1"), &c).unwrap();
        assert!(close(&a, &c.parse("2.25271265173420595986970164636849511861562722229495376504173983007887"), 60, &c));
        let b = log_gamma(&c.parse("123.456"), &c).unwrap();
        assert!(close(&b, &c.parse("469.6055471299294687300691923309300468877837658568773157930873995378912"), 60, &c));
    }

    #[test]
    fn log_gamma_domain() {
        let c = ctx(50);
        assert!(matches!(log_gamma(&c.zero(), &c), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(&c.int(-2), &c), Err(Error::Domain(_))));
        assert!(matches!(log_barnes_g(&c.zero(), &c), Err(Error::Domain(_))));
    }

    #[test]
    fn glaisher_matches_printed_digits() {
        let c = ctx(60);
        let a = log_glaisher(&c).unwrap().exp(&c);
        assert!((a.to_f64() - 1.2824271291).abs() < 1e-10);
        let reference = c.parse("0.248754477033784262547252993576113976097369713668535116999855639690693");
        assert!(close(&log_glaisher(&c).unwrap(), &reference, 45, &c));
    }

    #[test]
    fn barnes_integer_values() {
        let c = ctx(60);
        for (x, want) in [(1, 1), (2, 1), (3, 1), (4, 2), (5, 12), (6, 288)] {
            let g = log_barnes_g(&c.int(x), &c).unwrap();
            let want = c.int(want).ln(&c);
            assert!((g - want).abs() < c.tolerance(40), "G({x})");
        }
    }

    #[test]
    fn barnes_half_integer_reference() {
        let c = ctx(80);
        let g = log_barnes_g(&c.ratio(1, 2), &c).unwrap();
        let r = c.parse("-0.5054330544896953827976849898083449517213991014666199327898275603418492");
        assert!(close(&g, &r, 60, &c));
        let g = log_barnes_g(&c.ratio(3, 2), &c).unwrap();
        let r = c.parse("0.06693188843500470427402868586818440410224830499103585296698397539421966");
        assert!(close(&g, &r, 60, &c));
        let g = log_barnes_g(&c.parse("0.05"), &c).unwrap();
        let r = c.parse("-2.949837068213386160145618297182093508781137161891379612124667705689083");
        assert!(close(&g, &r, 60, &c));
    }

    /// Independent route: series at x + 39 and forty explicit downward steps
    /// of `G(z+1) = Γ(z) G(z)`, at doubled precision.
    #[test]
    fn barnes_half_matches_forty_step_oracle() {
        let c = ctx(60);
        let hi = Ctx::new(PrecisionContext::new(120, 80, 0).unwrap());
        let x = hi.ratio(1, 2);
        let z = &x + 39;
        let lg = log_gamma_stirling(&(&z + 1), &hi).unwrap();
        let mut v = barnes_series_without_constant(&z, &lg, &hi).unwrap() - log_glaisher(&hi).unwrap();
        for j in (0..40).rev() {
            v -= log_gamma(&(&x + j), &hi).unwrap();
        }
        let got = log_barnes_g(&c.ratio(1, 2), &c).unwrap();
        assert!((got - v).abs() < c.tolerance(40));
    }

    #[test]
    fn superfactorial_at_twenty_one() {
        // G(21) = prod_{j<20} j!
        let c = ctx(60);
        let mut prod = c.one();
        let mut f = c.one();
        for j in 1..20 {
            f *= c.int(j);
            prod *= &f;
        }
        let g = log_barnes_g(&c.int(21), &c).unwrap();
        assert!((g - prod.ln(&c)).abs() < c.tolerance(25));
    }

    #[test]
    fn constants_consistent() {
        let c = ctx(60);
        let k = constants(&c).unwrap();
        assert!(((&k.log_glaisher + &k.zeta_prime_neg1) - c.ratio(1, 12)).abs() < c.tolerance(55));
        assert!((k.c1.to_f64() - 0.5493061443).abs() < 1e-10);
        let zeta = c.parse("-0.1654211437004509292139196602427806427640363803352017836665223063573597");
        assert!(close(&k.zeta_prime_neg1, &zeta, 40, &c));
        let c3 = c.parse("-0.1436191377102614360257193592038276910290167496674006445531321829015719");
        assert!(close(&k.c3, &c3, 40, &c));
    }

    #[test]
    fn doubling_precision_is_stable() {
        let lo = ctx(60);
        let hi = ctx(120);
        for s in ["0.3", "2.5", "17.25"] {
            let a = log_barnes_g(&lo.parse(s), &lo).unwrap();
            let b = log_barnes_g(&hi.parse(s), &hi).unwrap();
            assert!((a - b).abs() < lo.tolerance(40), "{s}");
        }
    }
}
