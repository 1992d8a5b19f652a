use crate::precision::PrecisionContext;
use crate::quad::NodeCache;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use core::cell::{OnceCell, RefCell};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

const RM: RoundingMode = RoundingMode::ToEven;

/// Extra bits carried beyond the requested decimal digits.
const GUARD_BITS: usize = 32;

/// A binary floating-point number with a fixed mantissa length.
///
/// Arithmetic between two values is carried out at the larger of the two
/// precisions. Values produced by one [`Ctx`] all share its precision.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    fn wrap(v: BigFloat, p: usize) -> Self {
        Self { v, p }
    }

    pub fn zero_with_bits(p: usize) -> Self {
        Self::wrap(BigFloat::new(p), p)
    }

    pub fn precision_bits(&self) -> usize {
        self.p
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// Strictly negative.
    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    /// Strictly positive.
    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Real {
        Self::wrap(self.v.abs(), self.p)
    }

    pub fn sqrt(&self) -> Real {
        Self::wrap(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn recip(&self) -> Real {
        Self::wrap(self.v.reciprocal(self.p, RM), self.p)
    }

    pub fn powi(&self, n: u32) -> Real {
        Self::wrap(self.v.powi(n as usize, self.p, RM), self.p)
    }

    pub fn square(&self) -> Real {
        self * self
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn exp(&self, ctx: &Ctx) -> Real {
        let v = self.v.exp(self.p, RM, &mut ctx.consts.borrow_mut());
        Self::wrap(v, self.p)
    }

    /// Natural logarithm; NaN for non-positive arguments.
    pub fn ln(&self, ctx: &Ctx) -> Real {
        let v = self.v.ln(self.p, RM, &mut ctx.consts.borrow_mut());
        Self::wrap(v, self.p)
    }

    pub fn sin(&self, ctx: &Ctx) -> Real {
        let v = self.v.sin(self.p, RM, &mut ctx.consts.borrow_mut());
        Self::wrap(v, self.p)
    }

    pub fn cos(&self, ctx: &Ctx) -> Real {
        let v = self.v.cos(self.p, RM, &mut ctx.consts.borrow_mut());
        Self::wrap(v, self.p)
    }

    pub fn atan(&self, ctx: &Ctx) -> Real {
        let v = self.v.atan(self.p, RM, &mut ctx.consts.borrow_mut());
        Self::wrap(v, self.p)
    }

    /// `self^e` for positive `self`, as `exp(e ln self)`.
    pub fn pow(&self, e: &Real, ctx: &Ctx) -> Real {
        (&self.ln(ctx) * e).exp(ctx)
    }

    /// Binary exponent `e` with `|self| = m 2^e`, `m` in `[1/2, 1)`.
    /// `None` for zero and non-finite values.
    pub fn binary_exponent(&self) -> Option<i64> {
        if self.is_zero() || !self.is_finite() {
            return None;
        }
        self.v.exponent().map(i64::from)
    }

    /// Nearest `f64`, saturating to infinity outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        match self.v.as_raw_parts() {
            Some((words, _, sign, e, _)) if !words.is_empty() => {
                let top = words[words.len() - 1];
                let m = (top >> 11) as f64 / (1u64 << 53) as f64;
                let v = libm::ldexp(m, e);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            _ => 0.0,
        }
    }

    /// `log10 |self|` to double precision, valid far outside the `f64` range.
    pub fn log10_abs(&self) -> f64 {
        match self.v.as_raw_parts() {
            Some((words, _, _, e, _)) if !words.is_empty() && self.is_finite() => {
                let top = words[words.len() - 1];
                let m = (top >> 11) as f64 / (1u64 << 53) as f64;
                libm::log10(m) + f64::from(e) * core::f64::consts::LOG10_2
            }
            _ if self.is_zero() => f64::NEG_INFINITY,
            _ => f64::NAN,
        }
    }

    /// Decimal scientific notation with `sig` significant digits, e.g.
    /// `-6.9314718e-1`. Rounding is half-to-even on the exact binary value.
    pub fn to_sci_string(&self, sig: usize, ctx: &Ctx) -> String {
        if !self.is_finite() {
            return String::from(if self.v.is_nan() {
                "NaN"
            } else if self.v.is_negative() {
                "-Inf"
            } else {
                "Inf"
            });
        }
        if self.is_zero() {
            let mut s = String::from("0.");
            s.extend(core::iter::repeat('0').take(sig.saturating_sub(1).max(1)));
            s.push_str("e+0");
            return s;
        }
        let sig = sig.max(1);
        let (sign, digits, exp) = self
            .v
            .convert_to_radix(Radix::Dec, RM, &mut ctx.consts.borrow_mut())
            .expect("finite value converts to decimal");
        // digits d1 d2 ... represent 0.d1d2... * 10^exp
        let first = digits.iter().position(|&d| d != 0).unwrap_or(0);
        let digits = &digits[first..];
        let mut exp10 = i64::from(exp) - first as i64 - 1;
        let mut out: Vec<u8> = digits.iter().take(sig).copied().collect();
        while out.len() < sig {
            out.push(0);
        }
        if digits.len() > sig {
            let next = digits[sig];
            let tail_nonzero = digits[sig + 1..].iter().any(|&d| d != 0);
            let round_up = next > 5 || (next == 5 && (tail_nonzero || out[sig - 1] % 2 == 1));
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        out.insert(0, 1);
                        out.pop();
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if out[i] == 9 {
                        out[i] = 0;
                    } else {
                        out[i] += 1;
                        break;
                    }
                }
            }
        }
        let mut s = String::with_capacity(sig + 8);
        if sign == Sign::Neg {
            s.push('-');
        }
        s.push((b'0' + out[0]) as char);
        s.push('.');
        if sig == 1 {
            s.push('0');
        }
        for &d in &out[1..] {
            s.push((b'0' + d) as char);
        }
        s.push('e');
        if exp10 >= 0 {
            s.push('+');
        }
        s.push_str(&alloc::format!("{exp10}"));
        s
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e}, {} bits)", self.to_f64(), self.p)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $m(self, rhs: i64) -> Real {
                Real::wrap(self.v.$m(&BigFloat::from_i64(rhs, 64), self.p, RM), self.p)
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $m(self, rhs: i64) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $atr<&Real> for Real {
            fn $am(&mut self, rhs: &Real) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<Real> for Real {
            fn $am(&mut self, rhs: Real) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.p)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.clone().neg(), self.p)
    }
}

/// Working context: precision, arithmetic constant caches and the
/// quadrature node cache.
///
/// A `Ctx` is cheap to share by reference within one thread; it is not
/// `Sync`. Independent computations on other threads build their own from
/// the same [`PrecisionContext`], and give bit-identical results.
pub struct Ctx {
    pc: PrecisionContext,
    bits: usize,
    pub(crate) consts: RefCell<Consts>,
    pi: OnceCell<Real>,
    pub(crate) half_ln_two_pi: OnceCell<Real>,
    pub(crate) log_glaisher: OnceCell<Real>,
    pub(crate) bernoulli: RefCell<Vec<Real>>,
    pub(crate) nodes: RefCell<NodeCache>,
    escalated: OnceCell<Option<Box<Ctx>>>,
    certification: OnceCell<Box<Ctx>>,
}

impl Ctx {
    pub fn new(pc: PrecisionContext) -> Self {
        // ceil(digits * log2(10))
        let bits = (pc.digits() as usize * 3_321_929).div_ceil(1_000_000) + GUARD_BITS;
        Self {
            pc,
            bits,
            consts: RefCell::new(Consts::new().expect("constant cache allocation")),
            pi: OnceCell::new(),
            half_ln_two_pi: OnceCell::new(),
            log_glaisher: OnceCell::new(),
            bernoulli: RefCell::new(Vec::new()),
            nodes: RefCell::new(NodeCache::default()),
            escalated: OnceCell::new(),
            certification: OnceCell::new(),
        }
    }

    pub fn precision(&self) -> PrecisionContext {
        self.pc
    }

    pub fn digits(&self) -> u32 {
        self.pc.digits()
    }

    pub fn target_digits(&self) -> u32 {
        self.pc.target_digits()
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Context one escalation step up, built on first use.
    pub fn escalated(&self) -> Option<&Ctx> {
        self.escalated.get_or_init(|| self.pc.escalated().map(|pc| Box::new(Ctx::new(pc)))).as_deref()
    }

    /// Context at 1.5x the working digits used to certify results.
    pub fn certification(&self) -> &Ctx {
        self.certification.get_or_init(|| Box::new(Ctx::new(self.pc.certification())))
    }

    pub fn zero(&self) -> Real {
        Real::zero_with_bits(self.bits)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Real {
        Real::wrap(BigFloat::from_i64(n, self.bits), self.bits)
    }

    pub fn uint(&self, n: u64) -> Real {
        Real::wrap(BigFloat::from_u64(n, self.bits), self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        self.int(num) / self.int(den)
    }

    /// The exact binary value of `x`. Use [`Ctx::parse`] for decimal inputs.
    pub fn from_f64(&self, x: f64) -> Real {
        let mut v = BigFloat::from_f64(x, 64);
        v.set_precision(self.bits, RM).expect("precision within range");
        Real::wrap(v, self.bits)
    }

    /// Parses a decimal literal such as `"0.3"` or `"-1.5e-7"`, rounding once.
    pub fn parse(&self, s: &str) -> Real {
        let v = BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut());
        Real::wrap(v, self.bits)
    }

    /// Converts an arbitrary-size integer exactly (up to rounding to the
    /// working precision).
    pub fn big_int(&self, n: &num_bigint::BigInt) -> Real {
        let (sign, digits) = n.to_u64_digits();
        if digits.is_empty() {
            return self.zero();
        }
        let e = (64 * digits.len()) as i32;
        let mut v = BigFloat::from_words(&digits, if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos }, e);
        v.set_precision(self.bits, RM).expect("precision within range");
        Real::wrap(v, self.bits)
    }

    pub fn pi(&self) -> Real {
        self.pi
            .get_or_init(|| {
                let v = self.consts.borrow_mut().pi(self.bits, RM);
                Real::wrap(v, self.bits)
            })
            .clone()
    }

    /// `2^-bits`: one unit in the last place of 1.
    pub fn epsilon(&self) -> Real {
        let mut v = BigFloat::from_u8(1, self.bits);
        v.set_exponent(1 - self.bits as i32);
        Real::wrap(v, self.bits)
    }

    /// `10^-digits`.
    pub fn tolerance(&self, digits: i64) -> Real {
        let ten = self.int(10);
        if digits >= 0 {
            ten.powi(digits as u32).recip()
        } else {
            ten.powi((-digits) as u32)
        }
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ctx").field("pc", &self.pc).field("bits", &self.bits).finish()
    }
}
