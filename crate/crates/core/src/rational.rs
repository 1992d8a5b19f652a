//! Exact rationals for model parameters.
//!
//! Parameters such as `λ = 0.3` are kept exact so that re-running a
//! computation at a higher precision sees the same number, not a rounding
//! of its binary approximation.

use crate::{Ctx, Error, Real, Result};
use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl Rational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        let g = numerator.gcd(&denominator);
        let (mut n, mut d) = (numerator / &g, denominator / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Self { numerator: n, denominator: d }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    /// The exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite parameter {x}")));
        }
        if x == 0.0 {
            return Ok(Self::int(0));
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        Ok(if e >= 0 {
            Self::new(m << e as usize, BigInt::one())
        } else {
            Self::new(m, BigInt::one() << (-e) as usize)
        })
    }

    /// Parses decimal notation: `"2"`, `"-0.5"`, `"1.25e-3"`, and also `"p/q"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("not a decimal number: {text:?}"));
        let s = text.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Self::new(p, q));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, body) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
        if whole.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut digits = String::from(whole);
        digits.push_str(frac);
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if negative {
            n = -n;
        }
        let scale = exponent - frac.len() as i32;
        let ten = BigInt::from(10);
        Ok(if scale >= 0 {
            Self::new(n * num_traits::pow(ten, scale as usize), BigInt::one())
        } else {
            Self::new(n, num_traits::pow(ten, (-scale) as usize))
        })
    }

    pub fn to_real(&self, ctx: &Ctx) -> Real {
        ctx.big_int(&self.numerator) / ctx.big_int(&self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        match (self.numerator.to_f64(), self.denominator.to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => f64::NAN,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &self.numerator * &other.denominator + &other.numerator * &self.denominator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.numerator * &other.numerator, &self.denominator * &other.denominator)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }
}

/// Prints integers plainly, terminating fractions in decimal, and anything
/// else as `p/q`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            return write!(f, "{}", self.numerator);
        }
        let mut d = self.denominator.clone();
        let (mut twos, mut fives) = (0usize, 0usize);
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return write!(f, "{}/{}", self.numerator, self.denominator);
        }
        let places = twos.max(fives);
        let scaled = &self.numerator * num_traits::pow(BigInt::from(10), places) / &self.denominator;
        let neg = scaled.is_negative();
        let mut digits = scaled.abs().to_string();
        while digits.len() <= places {
            digits.insert(0, '0');
        }
        let (int, frac) = digits.split_at(digits.len() - places);
        write!(f, "{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }
}
