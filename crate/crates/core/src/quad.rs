//! Doubly-exponential quadrature at working precision.
//!
//! Two rules share one engine:
//!
//! * half line `(0, ∞)`: `x = exp(u - e^{-u})`, so an algebraic end at
//!   zero and an exponentially decaying tail both become double exponential
//!   in `u`;
//! * finite interval `[a, b]`: tanh-sinh, with the distances to both
//!   endpoints carried separately so endpoint singularities such as
//!   `sqrt((c - x) / x)` are evaluated without cancellation.
//!
//! Levels use the step `h = 2^-level`. The nodes of level `l` are the odd
//! multiples of `h`, so summing levels `0..=l` gives the trapezoidal sum at
//! step `2^-l` and every refinement reuses all earlier evaluations. Node
//! geometry is cached in the [`Ctx`], integrands are vector valued so
//! several integrals (all moments of one weight, say) share one pass.
//!
//! Convergence: with `d_l` the digits of agreement between levels `l` and
//! `l-1`, the error of level `l` is predicted as `d_l² / d_{l-1}` digits
//! (the digit count roughly doubles per level). A level is accepted when
//! either `d_l` or, once `d_l` covers half the request, the prediction
//! reaches the requested digits.

use crate::{Ctx, Error, Real, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Largest `|u|` ever visited; far beyond any useful node at the supported
/// precisions.
const U_MAX: f64 = 12.0;
/// Consecutive negligible terms that end the walk along one side.
const QUIET_RUN: usize = 4;

/// Half-line node: `t = u - e^{-u}`, `x = e^t`, and `dx/du = x (1 + e^{-u})`.
#[derive(Clone, Debug)]
pub struct HalfLineNode {
    pub t: Real,
    pub x: Real,
    pub dx: Real,
}

/// Tanh-sinh node on `[0, 1]`: `y`, `1 - y` and `dy/du`.
#[derive(Clone, Debug)]
struct UnitNode {
    y: Real,
    one_minus_y: Real,
    dy: Real,
}

/// A point of `[a, b]` with its endpoint distances.
#[derive(Clone, Debug)]
pub struct IntervalPoint {
    pub x: Real,
    pub from_a: Real,
    pub to_b: Real,
}

/// Per-context cache of node geometry, indexed by level then side.
#[derive(Default, Debug)]
pub struct NodeCache {
    half: Vec<[Vec<HalfLineNode>; 2]>,
    unit: Vec<[Vec<UnitNode>; 2]>,
}

/// Convergence controls.
#[derive(Clone, Debug)]
pub struct QuadRule {
    /// Relative agreement required between successive levels.
    pub tol: Real,
    /// Components whose magnitude stays below this are compared absolutely.
    pub abs_floor: Real,
    /// First level at which agreement is tested.
    pub min_level: u32,
    pub max_level: u32,
}

impl QuadRule {
    /// Agreement at `digits` decimal digits.
    pub fn digits(ctx: &Ctx, digits: i64) -> Self {
        Self { tol: ctx.tolerance(digits), abs_floor: ctx.zero(), min_level: 3, max_level: 13 }
    }

    /// Agreement near the working precision, for inputs to ill-conditioned
    /// linear algebra.
    pub fn working(ctx: &Ctx) -> Self {
        Self::digits(ctx, i64::from(ctx.digits()) - 5)
    }

    pub fn with_abs_floor(mut self, floor: Real) -> Self {
        self.abs_floor = floor;
        self
    }
}

/// Numerator of `u` in units of `2^-level`.
fn u_numerator(level: u32, side: usize, i: usize) -> i64 {
    let k = if level == 0 { i as i64 + side as i64 } else { 2 * i as i64 + 1 };
    if side == 0 {
        k
    } else {
        -k
    }
}

fn u_value(ctx: &Ctx, level: u32, side: usize, i: usize) -> Option<Real> {
    let num = u_numerator(level, side, i);
    if (num.unsigned_abs() as f64) / f64::from(1u32 << level) > U_MAX {
        return None;
    }
    Some(ctx.int(num) / ctx.int(1i64 << level))
}

fn sinh_cosh(u: &Real, ctx: &Ctx) -> (Real, Real) {
    let e = u.exp(ctx);
    let inv = e.recip();
    ((&e - &inv) / 2, (&e + &inv) / 2)
}

fn half_line_node(ctx: &Ctx, level: u32, side: usize, i: usize) -> Option<HalfLineNode> {
    {
        let cache = ctx.nodes.borrow();
        if let Some(n) = cache.half.get(level as usize).and_then(|l| l[side].get(i)) {
            return Some(n.clone());
        }
    }
    let u = u_value(ctx, level, side, i)?;
    let e = (-&u).exp(ctx);
    let t = &u - &e;
    let x = t.exp(ctx);
    let dx = &x * (e + 1);
    let node = HalfLineNode { t, x, dx };
    let mut cache = ctx.nodes.borrow_mut();
    while cache.half.len() <= level as usize {
        cache.half.push([Vec::new(), Vec::new()]);
    }
    let slot = &mut cache.half[level as usize][side];
    if slot.len() == i {
        slot.push(node.clone());
    }
    Some(node)
}

fn unit_node(ctx: &Ctx, level: u32, side: usize, i: usize) -> Option<UnitNode> {
    {
        let cache = ctx.nodes.borrow();
        if let Some(n) = cache.unit.get(level as usize).and_then(|l| l[side].get(i)) {
            return Some(n.clone());
        }
    }
    let u = u_value(ctx, level, side, i)?;
    let half_pi = ctx.pi() / 2;
    let (sh, ch) = sinh_cosh(&u, ctx);
    let v = &half_pi * sh;
    let e2v = (v * 2).exp(ctx);
    let denom = &e2v + 1;
    let y = &e2v / &denom;
    let one_minus_y = denom.recip();
    let dy = &y * &one_minus_y * 2 * half_pi * ch;
    let node = UnitNode { y, one_minus_y, dy };
    let mut cache = ctx.nodes.borrow_mut();
    while cache.unit.len() <= level as usize {
        cache.unit.push([Vec::new(), Vec::new()]);
    }
    let slot = &mut cache.unit[level as usize][side];
    if slot.len() == i {
        slot.push(node.clone());
    }
    Some(node)
}

/// Worst-case digits of agreement between two estimates.
fn agreement(a: &[Real], b: &[Real], rule: &QuadRule) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = x.abs().max(rule.abs_floor.clone());
            let diff = x - y;
            if diff.is_zero() {
                f64::INFINITY
            } else if scale.is_zero() {
                f64::NEG_INFINITY
            } else {
                -(diff / scale).log10_abs()
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn integrate<N>(
    ctx: &Ctx,
    dim: usize,
    rule: &QuadRule,
    fetch: impl Fn(&Ctx, u32, usize, usize) -> Option<N>,
    mut f: impl FnMut(&N) -> Result<Vec<Real>>,
) -> Result<Vec<Real>> {
    let walk_eps = ctx.epsilon();
    let wanted = -rule.tol.log10_abs();
    let mut total = vec![ctx.zero(); dim];
    let mut previous: Option<Vec<Real>> = None;
    let mut previous_digits = f64::NAN;
    for level in 0..=rule.max_level {
        for side in 0..2 {
            let mut quiet = 0;
            let mut i = 0;
            while let Some(node) = fetch(ctx, level, side, i) {
                let values = f(&node)?;
                let mut negligible = true;
                for (acc, v) in total.iter_mut().zip(&values) {
                    if !v.is_finite() {
                        return Err(Error::NotConverged(format!(
                            "non-finite integrand value at level {level}"
                        )));
                    }
                    *acc += v;
                    if v.abs() > &walk_eps * acc.abs() {
                        negligible = false;
                    }
                }
                let far = u_numerator(level, side, i).unsigned_abs() >= 1u64 << level;
                if negligible && far {
                    quiet += 1;
                    if quiet >= QUIET_RUN {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                i += 1;
            }
        }
        let h = ctx.one() / ctx.int(1i64 << level);
        let estimate: Vec<Real> = total.iter().map(|t| t * &h).collect();
        if let Some(p) = &previous {
            let d = agreement(&estimate, p, rule);
            if level >= rule.min_level {
                let predicted = if previous_digits > 0.0 { d * d / previous_digits } else { d };
                if d >= wanted || (2.0 * d >= wanted && predicted >= wanted + 10.0) {
                    return Ok(estimate);
                }
            }
            previous_digits = d;
        }
        previous = Some(estimate);
    }
    Err(Error::NotConverged(format!(
        "quadrature did not settle to {:.1} digits by level {}",
        -rule.tol.log10_abs(),
        rule.max_level
    )))
}

/// `∫_0^∞` of a vector integrand. `f` receives a node and must return the
/// integrand values already multiplied by `dx/du`, which lets integrands
/// fold `x^λ = e^{λt}` into a single exponential.
pub fn half_line(
    ctx: &Ctx,
    dim: usize,
    rule: &QuadRule,
    f: impl FnMut(&HalfLineNode) -> Result<Vec<Real>>,
) -> Result<Vec<Real>> {
    integrate(ctx, dim, rule, half_line_node, f)
}

/// `∫_a^b` of a vector integrand given as plain values at each point.
pub fn interval(
    ctx: &Ctx,
    a: &Real,
    b: &Real,
    dim: usize,
    rule: &QuadRule,
    mut f: impl FnMut(&IntervalPoint) -> Result<Vec<Real>>,
) -> Result<Vec<Real>> {
    let width = b - a;
    integrate(ctx, dim, rule, unit_node, |n: &UnitNode| {
        let from_a = &width * &n.y;
        let to_b = &width * &n.one_minus_y;
        let x = if n.y < n.one_minus_y { a + &from_a } else { b - &to_b };
        let p = IntervalPoint { x, from_a, to_b };
        let scale = &width * &n.dy;
        Ok(f(&p)?.into_iter().map(|v| v * &scale).collect())
    })
}

/// Scalar convenience over [`interval`].
pub fn interval_scalar(
    ctx: &Ctx,
    a: &Real,
    b: &Real,
    rule: &QuadRule,
    mut f: impl FnMut(&IntervalPoint) -> Result<Real>,
) -> Result<Real> {
    Ok(interval(ctx, a, b, 1, rule, |p| Ok(vec![f(p)?]))?.remove(0))
}
