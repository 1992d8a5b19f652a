//! The deformed Laguerre weight `w(x) = x^λ exp(-N (x + s (x² - x)))` on
//! `(0, ∞)` and its moments.
//!
//! At `s = 0` this is the Laguerre weight, at `s = 1` a half-Gaussian with
//! the `|x|^λ` factor. Moments come from double-exponential quadrature in
//! `t = log x`, where `x^{k+λ} dx = exp((k + λ + 1) t) dt` and the integrand
//! is smooth for every `λ > -1`.

use crate::quad::{self, QuadRule};
use crate::specfun::log_gamma;
use crate::{Ctx, Error, Rational, Real, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Exponents below this are taken as an exact zero. `exp(-1e7)` is far
/// below anything representable relative to the moments at any supported
/// precision.
const UNDERFLOW_EXPONENT: f64 = -1.0e7;

/// Parameters of the weight. `big_n` is the `N` multiplying the potential.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSpec {
    pub lambda: Rational,
    pub s: Rational,
    pub big_n: u32,
}

impl WeightSpec {
    pub fn new(lambda: Rational, s: Rational, big_n: u32) -> Result<Self> {
        if lambda <= Rational::int(-1) {
            return Err(Error::Domain(format!("lambda must exceed -1, got {lambda}")));
        }
        if s < Rational::int(0) || s > Rational::int(1) {
            return Err(Error::Domain(format!("s must lie in [0, 1], got {s}")));
        }
        if big_n == 0 {
            return Err(Error::Domain("N must be positive".into()));
        }
        Ok(Self { lambda, s, big_n })
    }

    /// The same weight with another deformation parameter.
    pub fn with_s(&self, s: Rational) -> Result<Self> {
        Self::new(self.lambda.clone(), s, self.big_n)
    }
}

/// `V(x; s) = x + s (x² - x)`.
pub fn potential(x: &Real, s: &Real) -> Real {
    x + s * (x.square() - x)
}

/// `V'(x; s) = 1 + s (2x - 1)`.
pub fn potential_derivative(x: &Real, s: &Real) -> Real {
    s * (x * 2 - 1) + 1
}

/// `x^λ exp(-N V(x; s))` for `x >= 0`.
pub fn weight_eval(x: &Real, spec: &WeightSpec, ctx: &Ctx) -> Result<Real> {
    if x.is_negative() {
        return Err(Error::Domain(format!("weight is supported on x >= 0, got {:e}", x.to_f64())));
    }
    let lambda = spec.lambda.to_real(ctx);
    let s = spec.s.to_real(ctx);
    let decay = (-(potential(x, &s) * i64::from(spec.big_n))).exp(ctx);
    if x.is_zero() {
        return match spec.lambda.cmp(&Rational::int(0)) {
            core::cmp::Ordering::Less => Err(Error::Domain("x^lambda is infinite at x = 0 for lambda < 0".into())),
            core::cmp::Ordering::Equal => Ok(decay),
            core::cmp::Ordering::Greater => Ok(ctx.zero()),
        };
    }
    Ok(x.pow(&lambda, ctx) * decay)
}

/// Moments `m_k = ∫_0^∞ x^{k+λ} e^{-N V(x;s)} dx` for `k` in `0..=max_k`,
/// from one shared quadrature pass at working precision.
pub fn moments(spec: &WeightSpec, max_k: usize, ctx: &Ctx) -> Result<Vec<Real>> {
    let lambda = spec.lambda.to_real(ctx);
    let s = spec.s.to_real(ctx);
    let n = i64::from(spec.big_n);
    let dim = max_k + 1;
    let rule = QuadRule::working(ctx);
    let values = quad::half_line(ctx, dim, &rule, |node| {
        let exponent = &lambda * &node.t - potential(&node.x, &s) * n;
        if exponent.to_f64() < UNDERFLOW_EXPONENT {
            return Ok(vec![ctx.zero(); dim]);
        }
        let mut term = exponent.exp(ctx) * &node.dx;
        let mut out = Vec::with_capacity(dim);
        for _ in 0..dim {
            out.push(term.clone());
            term *= &node.x;
        }
        Ok(out)
    })?;
    if let Some(k) = values.iter().position(|m| !m.is_positive()) {
        return Err(Error::NotConverged(format!("moment {k} came out non-positive")));
    }
    Ok(values)
}

/// A single moment `m_k`.
pub fn moment(k: usize, spec: &WeightSpec, ctx: &Ctx) -> Result<Real> {
    let lambda_plus_k = spec.lambda.to_real(ctx) + k as i64;
    let s = spec.s.to_real(ctx);
    let n = i64::from(spec.big_n);
    let rule = QuadRule::working(ctx);
    let v = quad::half_line(ctx, 1, &rule, |node| {
        let exponent = &lambda_plus_k * &node.t - potential(&node.x, &s) * n;
        if exponent.to_f64() < UNDERFLOW_EXPONENT {
            return Ok(vec![ctx.zero()]);
        }
        Ok(vec![exponent.exp(ctx) * &node.dx])
    })?;
    Ok(v.into_iter().next().expect("one component"))
}

/// Moments `m_0..=m_K` of one weight with their integration-by-parts check.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub spec: WeightSpec,
    pub values: Vec<Real>,
    pub max_ibp_residual: Real,
}

impl MomentTable {
    /// Builds a table from externally supplied values (for oracles and tests).
    pub fn from_values(spec: WeightSpec, values: Vec<Real>, ctx: &Ctx) -> Self {
        let mut t = Self { spec, values, max_ibp_residual: ctx.zero() };
        t.max_ibp_residual = validate_moments(&t, ctx);
        t
    }

    /// Largest index `K` held.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn moment_table(spec: &WeightSpec, max_k: usize, ctx: &Ctx) -> Result<MomentTable> {
    if max_k < 2 {
        return Err(Error::Domain(format!("moment table needs K >= 2, got {max_k}")));
    }
    let values = moments(spec, max_k, ctx)?;
    Ok(MomentTable::from_values(spec.clone(), values, ctx))
}

/// Largest relative residual of the integration-by-parts relation
/// `(k+1+λ) m_k - N(1-s) m_{k+1} - 2Ns m_{k+2} = 0` over `k <= K-2`. At
/// `s = 0` the two-term form `N m_{k+1} = (k+1+λ) m_k` is checked, over
/// `k <= K-1`.
pub fn validate_moments(table: &MomentTable, ctx: &Ctx) -> Real {
    let m = &table.values;
    let lambda = table.spec.lambda.to_real(ctx);
    let n = i64::from(table.spec.big_n);
    let mut worst = ctx.zero();
    if table.spec.s.is_zero() {
        for k in 0..m.len().saturating_sub(1) {
            let a = (&lambda + 1 + k as i64) * &m[k];
            let b = &m[k + 1] * n;
            let r = (&a - &b).abs() / a.abs().max(b.abs());
            worst = worst.max(r);
        }
        return worst;
    }
    let s = table.spec.s.to_real(ctx);
    let one_minus_s = ctx.one() - &s;
    for k in 0..m.len().saturating_sub(2) {
        let a = (&lambda + 1 + k as i64) * &m[k];
        let b = &one_minus_s * &m[k + 1] * n;
        let c = &s * &m[k + 2] * (2 * n);
        let scale = a.abs().max(b.abs()).max(c.abs());
        worst = worst.max((a - b - c).abs() / scale);
    }
    worst
}

/// `∫_R x^k |x|^λ e^{-N x²} dx`: zero for odd `k`, and
/// `Γ((λ+k+1)/2) N^{-(λ+k+1)/2}` for even `k`.
pub fn moment_fullline(k: usize, lambda: &Rational, big_n: u32, ctx: &Ctx) -> Result<Real> {
    if *lambda <= Rational::int(-1) {
        return Err(Error::Domain(format!("lambda must exceed -1, got {lambda}")));
    }
    if k % 2 == 1 {
        return Ok(ctx.zero());
    }
    let a = (lambda.to_real(ctx) + 1 + k as i64) / 2;
    let n = ctx.uint(u64::from(big_n));
    Ok((log_gamma(&a, ctx)? - &a * n.ln(ctx)).exp(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrecisionContext;

    fn ctx() -> Ctx {
        Ctx::new(PrecisionContext::new(80, 50, 1).unwrap())
    }

    fn spec(l: &str, s: &str, n: u32) -> WeightSpec {
        WeightSpec::new(Rational::parse(l).unwrap(), Rational::parse(s).unwrap(), n).unwrap()
    }

    fn close(a: &Real, b: &Real, d: i64, c: &Ctx) -> bool {
        (a - b).abs() <= c.tolerance(d) * b.abs()
    }

    #[test]
    fn spec_validation() {
        assert!(WeightSpec::new(Rational::int(-1), Rational::int(0), 1).is_err());
        assert!(WeightSpec::new(Rational::int(0), Rational::ratio(3, 2), 1).is_err());
        assert!(WeightSpec::new(Rational::int(0), Rational::int(0), 0).is_err());
    }

    #[test]
    fn weight_values() {
        let c = ctx();
        let w = weight_eval(&c.one(), &spec("0.7", "0.3", 5), &c).unwrap();
        assert!(close(&w, &c.int(-5).exp(&c), 70, &c));
        let w = weight_eval(&c.int(2), &spec("0", "0", 3), &c).unwrap();
        assert!(close(&w, &c.int(-6).exp(&c), 70, &c));
        let w = weight_eval(&c.int(2), &spec("2", "1", 1), &c).unwrap();
        assert!(close(&w, &(c.int(-4).exp(&c) * 4), 70, &c));
        assert!(weight_eval(&c.zero(), &spec("-0.5", "0", 1), &c).is_err());
    }

    #[test]
    fn laguerre_moments() {
        let c = ctx();
        let m = moments(&spec("0", "0", 1), 4, &c).unwrap();
        for (k, f) in [1, 1, 2, 6, 24].iter().enumerate() {
            assert!(close(&m[k], &c.int(*f), 70, &c), "k={k}");
        }
        assert!(close(&moment(3, &spec("0", "0", 1), &c).unwrap(), &c.int(6), 70, &c));
    }

    #[test]
    fn gaussian_moments() {
        let c = ctx();
        let m0 = moment(0, &spec("0", "1", 1), &c).unwrap();
        assert!(close(&m0, &(c.pi().sqrt() / 2), 70, &c));
        let m2 = moment(2, &spec("0", "1", 2), &c).unwrap();
        assert!(close(&m2, &((c.pi() * 2).sqrt() / 16), 70, &c));
        let t = moment_table(&spec("1", "1", 1), 2, &c).unwrap();
        assert!(close(&t.values[0], &c.ratio(1, 2), 70, &c));
        assert!(close(&t.values[1], &(c.pi().sqrt() / 4), 70, &c));
        assert!(close(&t.values[2], &c.ratio(1, 2), 70, &c));
    }

    #[test]
    fn ibp_residuals() {
        let c = ctx();
        let t = moment_table(&spec("0.5", "0.5", 5), 8, &c).unwrap();
        assert!(t.max_ibp_residual < c.tolerance(40));
        let exact: Vec<Real> = (0..6).map(|k| c.int([1, 1, 2, 6, 24, 120][k])).collect();
        let t = MomentTable::from_values(spec("0", "0", 1), exact, &c);
        assert!(t.max_ibp_residual < c.tolerance(70));
        let mut v = moments(&spec("0.5", "0.5", 5), 4, &c).unwrap();
        v[2] *= c.one() + c.tolerance(5);
        let t = MomentTable::from_values(spec("0.5", "0.5", 5), v, &c);
        assert!(t.max_ibp_residual > c.tolerance(6));
    }

    #[test]
    fn full_line() {
        let c = ctx();
        let l0 = Rational::int(0);
        assert!(moment_fullline(3, &l0, 1, &c).unwrap().is_zero());
        assert!(close(&moment_fullline(0, &l0, 1, &c).unwrap(), &c.pi().sqrt(), 70, &c));
        assert!(close(&moment_fullline(2, &Rational::int(1), 1, &c).unwrap(), &c.one(), 70, &c));
    }

    #[test]
    fn singular_weight_moments() {
        // λ = -1/2 at s = 0: m_k = Γ(k + 1/2)
        let c = ctx();
        let m = moments(&spec("-0.5", "0", 1), 3, &c).unwrap();
        for (k, v) in m.iter().enumerate() {
            let g = log_gamma(&(c.ratio(1, 2) + k as i64), &c).unwrap().exp(&c);
            assert!(close(v, &g, 65, &c), "k={k}");
        }
    }
}
