use crate::{Ctx, Error, Result};
use alloc::format;

/// Guard digits kept between the working precision and the requested accuracy.
pub const GUARD_DIGITS: u32 = 20;

/// Working precision and escalation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    target_digits: u32,
    max_escalations: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32, target_digits: u32, max_escalations: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::Domain("target_digits must be positive".into()));
        }
        if digits < target_digits + GUARD_DIGITS {
            return Err(Error::Domain(format!(
                "{digits} working digits cannot carry {target_digits} target digits \
                 plus {GUARD_DIGITS} guard digits"
            )));
        }
        Ok(Self { digits, target_digits, max_escalations })
    }

    /// Context with `digits` working digits and as many target digits as the
    /// guard allows.
    pub fn with_digits(digits: u32) -> Result<Self> {
        let target = digits.saturating_sub(GUARD_DIGITS).max(1);
        Self::new(digits.max(target + GUARD_DIGITS), target, 2)
    }

    /// Default for Hankel computations with matrices of size up to `n`:
    /// `max(200, 12 n)` digits, so that exponential conditioning is absorbed.
    pub fn for_matrix_size(n: u32) -> Self {
        let digits = (12 * n).max(200);
        Self { digits, target_digits: 50, max_escalations: 2 }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn max_escalations(&self) -> u32 {
        self.max_escalations
    }

    /// One escalation step: digits grow by a factor 1.5, rounded up. The
    /// target is unchanged and the remaining escalation budget shrinks by one.
    pub fn escalated(&self) -> Option<Self> {
        if self.max_escalations == 0 {
            return None;
        }
        Some(Self { digits: (3 * self.digits).div_ceil(2), max_escalations: self.max_escalations - 1, ..*self })
    }

    /// The 1.5x context used for two-precision certification. Unlike
    /// [`escalated`](Self::escalated) it does not consume the budget.
    pub fn certification(&self) -> Self {
        Self { digits: (3 * self.digits).div_ceil(2), ..*self }
    }
}

/// Runs `f` at `ctx`, retrying on precision-related failures at successively
/// escalated contexts until the budget is exhausted.
pub fn with_escalation<T>(ctx: &Ctx, mut f: impl FnMut(&Ctx) -> Result<T>) -> Result<T> {
    let mut current = ctx;
    loop {
        match f(current) {
            Err(e) if e.is_precision_related() => match current.escalated() {
                Some(next) => current = next,
                None => return Err(e),
            },
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_digits_enforced() {
        assert!(PrecisionContext::new(60, 40, 2).is_ok());
        assert!(PrecisionContext::new(59, 40, 2).is_err());
    }

    #[test]
    fn escalation_rounds_up_and_is_bounded() {
        let pc = PrecisionContext::new(201, 50, 2).unwrap();
        let e1 = pc.escalated().unwrap();
        assert_eq!(e1.digits(), 302);
        let e2 = e1.escalated().unwrap();
        assert_eq!(e2.digits(), 453);
        assert!(e2.escalated().is_none());
    }

    #[test]
    fn matrix_default_scales_with_size() {
        assert_eq!(PrecisionContext::for_matrix_size(5).digits(), 200);
        assert_eq!(PrecisionContext::for_matrix_size(40).digits(), 480);
    }
}
