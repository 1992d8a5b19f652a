//! Published values, each checked against an independent expression.

use ggue_core::asymptotics::{
    expansion_coeffs, ggue_expansion, integrals_abc, integrals_abc_closed, lue_expansion, positivity_expansion,
};
use ggue_core::opchain::recurrence_table;
use ggue_core::specfun::{constants, log_glaisher};
use ggue_core::weight::WeightSpec;
use ggue_core::{Ctx, PrecisionContext, Rational, Real};

fn ctx() -> Ctx {
    Ctx::new(PrecisionContext::new(120, 80, 1).unwrap())
}

fn close(a: &Real, b: &Real, digits: i64, ctx: &Ctx) {
    let d = (a - b).abs();
    assert!(d <= ctx.tolerance(digits), "{} vs {} differ by {:e}", a.to_f64(), b.to_f64(), d.to_f64());
}

#[test]
fn glaisher_constant_first_ten_digits() {
    let c = ctx();
    let a = log_glaisher(&c).unwrap().exp(&c);
    assert!((&a - c.parse("1.2824271291")).abs() < c.tolerance(10));
}

#[test]
fn laguerre_recurrence_at_s0() {
    // α_n = 2n+λ+1, β_n = n(n+λ) for N = 1
    let c = ctx();
    for l in [0, 2] {
        let spec = WeightSpec::new(Rational::int(l), Rational::int(0), 1).unwrap();
        let rt = recurrence_table(&spec, 6, &c).unwrap();
        for n in 1..=5i64 {
            close(&rt.alpha[n as usize], &c.int(2 * n + l + 1), 60, &c);
            close(&rt.beta[n as usize], &c.int(n * (n + l)), 60, &c);
        }
    }
}

#[test]
fn laguerre_recurrence_at_s0_scaled() {
    // (2n+λ+1)/N and n(n+λ)/N² hold exactly for N > 1 too
    let c = ctx();
    let lambda = Rational::ratio(3, 2);
    let n_big = 7i64;
    let spec = WeightSpec::new(lambda.clone(), Rational::int(0), n_big as u32).unwrap();
    let rt = recurrence_table(&spec, 8, &c).unwrap();
    let l = lambda.to_real(&c);
    for n in 1..=7i64 {
        close(&rt.alpha[n as usize], &((&l + 2 * n + 1) / n_big), 60, &c);
        close(&rt.beta[n as usize], &((&l + n) * n / (n_big * n_big)), 60, &c);
    }
}

#[test]
fn f0_at_q1_s1() {
    let c = ctx();
    let one = Rational::int(1);
    let e = expansion_coeffs(&one, &Rational::int(0), &one, &c).unwrap();
    close(&e.delta, &(c.int(6).sqrt() * 2), 70, &c);
    close(&e.f0, &(c.int(6).sqrt() / 3), 70, &c);
}

#[test]
fn integrals_of_abc_at_lambda0() {
    let c = ctx();
    let ln = |k: i64| c.int(k).ln(&c);
    let [a, b, cc] = integrals_abc_closed(&Rational::int(0), &c);
    close(&a, &(c.ratio(3, 4) - ln(6) / 2), 70, &c);
    assert!(b.is_zero() || b.abs() < c.tolerance(70));
    close(&cc, &(ln(3) / 8 - ln(2) / 6), 70, &c);
    let q = integrals_abc(&Rational::int(0), &c).unwrap();
    close(&q.quadrature[0], &a, 35, &c);
}

#[test]
fn integrals_general_lambda() {
    // N(1/2 - log6/2)λ and λ² log(2/3)/2
    let c = ctx();
    let ln = |k: i64| c.int(k).ln(&c);
    let l = c.ratio(5, 2);
    let [_, b, cc] = integrals_abc_closed(&Rational::ratio(5, 2), &c);
    close(&b, &((c.ratio(1, 2) - ln(6) / 2) * &l), 70, &c);
    close(&cc, &(l.square() * (ln(2) - ln(3)) / 2 + ln(3) / 8 - ln(2) / 6), 70, &c);
}

#[test]
fn laguerre_expansion_terms() {
    let c = ctx();
    let k = constants(&c).unwrap();
    let two_pi_log = (c.pi() * 2).ln(&c);
    let e0 = lue_expansion(&Rational::int(0), &c).unwrap();
    close(&e0.constant, &((c.one() + &two_pi_log * 3) / 6 - &k.log_glaisher * 2), 70, &c);
    close(&e0.log_n, &c.ratio(1, 3), 70, &c);
    let e1 = lue_expansion(&Rational::int(1), &c).unwrap();
    close(&e1.inv_n, &c.ratio(1, 6), 70, &c);
}

#[test]
fn ggue_expansion_terms() {
    let c = ctx();
    let e = ggue_expansion(&Rational::int(0), &c).unwrap();
    close(&e.log_n, &c.ratio(5, 12), 70, &c);
    close(&e.inv_n, &c.ratio(1, 12), 70, &c);
    close(&e.n_sq, &(c.ratio(-3, 4) - c.int(2).ln(&c) / 2), 70, &c);
}

#[test]
fn positivity_expansion_at_lambda0() {
    let c = ctx();
    let k = constants(&c).unwrap();
    let e = positivity_expansion(&Rational::int(0), &c).unwrap();
    close(&e.n_sq, &-(c.int(3).ln(&c) / 2), 70, &c);
    close(&e.log_n, &c.ratio(-1, 12), 70, &c);
    close(&e.constant, &k.c3, 70, &c);
    assert!(e.n.abs() < c.tolerance(70));
}

#[test]
fn assembly_example_from_leading_terms() {
    // (3/4 - log6/2) - 3/2 + 3/4 + log2/2 = -log3/2
    let c = ctx();
    let ln = |k: i64| c.int(k).ln(&c);
    let lhs = c.ratio(3, 4) - ln(6) / 2 - c.ratio(3, 2) + c.ratio(3, 4) + ln(2) / 2;
    let e = positivity_expansion(&Rational::int(2), &c).unwrap();
    close(&lhs, &-(ln(3) / 2), 70, &c);
    close(&e.n_sq, &lhs, 70, &c);
}
