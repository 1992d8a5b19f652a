//! Multiprecision kernels for the probability that a generalised GUE matrix,
//! with density proportional to `|det M|^λ exp(-N Tr M²)`, is positive definite.
//!
//! Everything here is `no_std` (with `alloc`) and pure: every value is a
//! function of its arguments and a [`Ctx`] that fixes the working precision.
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: log-Gamma, Barnes G, Bernoulli numbers, Glaisher's constant.
//! * [`quad`]: double-exponential quadrature on the half line and on intervals.
//! * [`weight`]: the deformed Laguerre weight `x^λ e^{-N(x + s(x²-x))}` and its moments.
//! * [`opchain`]: recurrence coefficients from moments, partition functions,
//!   the deformation formula and string-equation residuals.
//! * [`equilibrium`]: the closed-form equilibrium measure and its resolvent.
//! * [`asymptotics`]: large-N coefficients, partition-function closed forms and
//!   the positivity asymptotics.
//! * [`positivity`]: exact-versus-asymptotic log-probabilities.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod complex;
pub mod equilibrium;
mod error;
pub mod linalg;
pub mod opchain;
pub mod positivity;
mod precision;
pub mod quad;
mod rational;
mod real;
pub mod specfun;
pub mod weight;

pub use error::{Error, Result};
pub use precision::{with_escalation, PrecisionContext};
pub use rational::Rational;
pub use real::{Ctx, Real};
