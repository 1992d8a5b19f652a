//! Minimal complex arithmetic over [`Real`], enough for resolvent evaluation.

use crate::{Ctx, Real};
use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real::zero_with_bits(re.precision_bits());
        Self { re, im }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &Real) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    /// Argument in `(-π, π]`.
    pub fn arg(&self, ctx: &Ctx) -> Real {
        atan2(&self.im, &self.re, ctx)
    }

    /// Principal logarithm, branch cut on the negative real axis.
    pub fn ln(&self, ctx: &Ctx) -> Self {
        Self::new(self.abs().ln(ctx), self.arg(ctx))
    }

    pub fn exp(&self, ctx: &Ctx) -> Self {
        let m = self.re.exp(ctx);
        Self::new(&m * self.im.cos(ctx), &m * self.im.sin(ctx))
    }

    /// Principal square root.
    pub fn sqrt(&self, ctx: &Ctx) -> Self {
        if self.re.is_zero() && self.im.is_zero() {
            return self.clone();
        }
        let half = ctx.ratio(1, 2);
        self.ln(ctx).scale(&half).exp(ctx)
    }
}

/// Four-quadrant arctangent of `y / x`, in `(-π, π]`.
pub fn atan2(y: &Real, x: &Real, ctx: &Ctx) -> Real {
    let pi = ctx.pi();
    if x.is_zero() {
        return if y.is_negative() {
            -(pi / 2)
        } else if y.is_zero() {
            ctx.zero()
        } else {
            pi / 2
        };
    }
    let base = (y / x).atan(ctx);
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base - pi
    } else {
        base + pi
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Div for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let d = rhs.norm_sqr();
        Complex::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &d,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &d,
        )
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrecisionContext;

    #[test]
    fn sqrt_principal_branch() {
        let ctx = Ctx::new(PrecisionContext::new(50, 30, 0).unwrap());
        let minus_four = Complex::from_real(ctx.int(-4));
        let r = minus_four.sqrt(&ctx);
        let tol = ctx.tolerance(40);
        assert!(r.re.abs() < tol);
        assert!((&r.im - 2).abs() < tol);
        let z = Complex::new(ctx.int(3), ctx.int(-4));
        let r = z.sqrt(&ctx);
        assert!((&r.re - 2).abs() < tol && (&r.im + 1).abs() < tol);
    }

    #[test]
    fn atan2_quadrants() {
        let ctx = Ctx::new(PrecisionContext::new(50, 30, 0).unwrap());
        let pi = core::f64::consts::PI;
        let cases = [(1, 1, pi / 4.0), (1, -1, 3.0 * pi / 4.0), (-1, -1, -3.0 * pi / 4.0), (-1, 1, -pi / 4.0), (0, -1, pi)];
        for (y, x, want) in cases {
            let got = atan2(&ctx.int(y), &ctx.int(x), &ctx).to_f64();
            assert!((got - want).abs() < 1e-15, "{y} {x}: {got}");
        }
    }
}
