//! The verification suite behind `verify` and the acceptance tests.
//!
//! Checks are grouped by the numbered acceptance criterion they belong to;
//! group 0 holds the remaining module invariants. Quick mode caps `N` at 10
//! and uses three points per grid axis. Checks of convergence rates need
//! `N` well past 10 to be meaningful, so they only run in full mode.

use crate::cache;
use crate::commands::{FIGURE_LAMBDAS, FIGURE_N};
use ggue_core::asymptotics::{
    assembled_expansion, expansion_coeffs, g0_inconsistent_form, gamma_det_identity_check, integrals_abc,
    leading_order_residuals, log_z_ggue_asymptotic, log_z_ggue_barnes, log_z_ggue_exact, log_z_lue_asymptotic,
    log_z_lue_barnes, log_z_lue_exact, next_order_residual, positivity_expansion,
};
use ggue_core::complex::Complex;
use ggue_core::equilibrium::{
    boundary_defects, density_eval, equilibrium_data, equilibrium_moment, equilibrium_moment_quadrature,
    resolvent_eval, resolvent_quadrature,
};
use ggue_core::opchain::{
    deformation_rhs, density_integral, linear_statistic, log_partition_certified, log_partition_derivative_fd,
    log_partition_heine, one_point_density, string_residual, RecurrenceTable,
};
use ggue_core::quad::QuadRule;
use ggue_core::specfun::{constants, log_barnes_g, log_gamma};
use ggue_core::weight::{moment_fullline, moment_table, WeightSpec};
use ggue_core::{Ctx, PrecisionContext, Rational, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

/// One verified statement: what was measured against which limit.
#[derive(Clone, Debug)]
pub struct Check {
    /// Acceptance criterion, or 0 for other module invariants.
    pub criterion: u8,
    pub name: String,
    pub measured: String,
    pub limit: String,
    pub pass: bool,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, measured: String, limit: String, pass: bool) -> Self {
        Check { criterion, name: name.into(), measured, limit, pass }
    }

    /// `10^value <= 10^limit`, both given as base-10 logarithms.
    fn log_at_most(criterion: u8, name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check::new(criterion, name, pow10(value), format!("<= {}", pow10(limit)), value <= limit)
    }

    fn in_band(criterion: u8, name: impl Into<String>, values: &[f64], lo: f64, hi: f64) -> Self {
        let shown: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
        let pass = values.iter().all(|v| *v >= lo && *v <= hi);
        Check::new(criterion, name, shown.join(", "), format!("in [{lo}, {hi}]"), pass)
    }

    fn holds(criterion: u8, name: impl Into<String>, measured: String, ok: bool) -> Self {
        Check::new(criterion, name, measured, String::from("holds"), ok)
    }

    fn failed(criterion: u8, name: impl Into<String>, error: impl fmt::Display) -> Self {
        Check::new(criterion, name, format!("error: {error}"), String::from("no error"), false)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        let group = if self.criterion == 0 { String::from("inv") } else { format!("c{}", self.criterion) };
        write!(f, "{tag} [{group}] {}: {} ({})", self.name, self.measured, self.limit)
    }
}

fn pow10(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        String::from("0")
    } else {
        format!("1e{v:.1}")
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

/// Largest margin `value - limit` (log10) over many samples, with the
/// sample that produced it.
struct Worst {
    criterion: u8,
    name: String,
    margin: f64,
    value: f64,
    limit: f64,
    at: String,
    error: Option<String>,
}

impl Worst {
    fn new(criterion: u8, name: impl Into<String>) -> Self {
        Worst {
            criterion,
            name: name.into(),
            margin: f64::NEG_INFINITY,
            value: f64::NEG_INFINITY,
            limit: 0.0,
            at: String::new(),
            error: None,
        }
    }

    fn add(&mut self, value: f64, limit: f64, at: impl FnOnce() -> String) {
        let margin = if value == f64::NEG_INFINITY { f64::NEG_INFINITY } else { value - limit };
        if margin > self.margin || self.at.is_empty() {
            self.margin = margin;
            self.value = value;
            self.limit = limit;
            self.at = at();
        }
    }

    fn fail(&mut self, at: String, e: impl fmt::Display) {
        if self.error.is_none() {
            self.error = Some(format!("{at}: {e}"));
        }
    }

    fn finish(self) -> Check {
        if let Some(e) = self.error {
            return Check::failed(self.criterion, self.name, e);
        }
        let pass = self.value <= self.limit;
        let measured = format!("{} at {}", pow10(self.value), self.at);
        Check::new(self.criterion, self.name, measured, format!("<= {}", pow10(self.limit)), pass)
    }
}

fn log10(x: &Real) -> f64 {
    x.log10_abs()
}

/// `log10(|a - b| / max(|b|, 1))`.
fn rel_log10(a: &Real, b: &Real, ctx: &Ctx) -> f64 {
    log10(&((a - b) / b.abs().max(ctx.one())))
}

fn spec(lambda: &Rational, s: &Rational, n: u32) -> WeightSpec {
    WeightSpec::new(lambda.clone(), s.clone(), n).expect("grid parameters are valid")
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_2013)
}

fn ratio(k: i64, d: i64) -> Rational {
    Rational::ratio(k, d)
}

/// The `(s, λ, N)` grid of the exact-identity checks.
pub struct Grid {
    pub s: Vec<Rational>,
    pub lambdas: Vec<Rational>,
    pub ns: Vec<u32>,
}

pub fn identity_grid(mode: Mode) -> Grid {
    match mode {
        Mode::Full => Grid {
            s: (1..=10).map(|k| ratio(k, 10)).collect(),
            lambdas: vec![ratio(-1, 2), ratio(0, 1), ratio(1, 1), ratio(5, 2)],
            ns: vec![2, 5, 10, 20],
        },
        Mode::Quick => Grid {
            s: vec![ratio(1, 10), ratio(1, 2), ratio(1, 1)],
            lambdas: vec![ratio(-1, 2), ratio(1, 1), ratio(5, 2)],
            ns: vec![2, 5, 10],
        },
    }
}

/// Certified table with indices up to `N + 1`, as the string equations at
/// `n = N` and the deformation formula need.
fn grid_table(spec: &WeightSpec, ctx: &Ctx) -> ggue_core::Result<RecurrenceTable> {
    cache::recurrence_table(spec, spec.big_n as usize + 1, ctx)
}

pub fn run(mode: Mode) -> Report {
    let mut report = Report::default();
    for k in 1..=9 {
        report.checks.extend(criterion(k, mode));
    }
    report.checks.extend(invariants(mode));
    report
}

pub fn criterion(k: u8, mode: Mode) -> Vec<Check> {
    match k {
        1 => figure1(mode),
        2 => expansion_constants(),
        3 => string_identities(mode),
        4 => deformation_routes(mode),
        5 => closed_forms(mode),
        6 => partition_asymptotics(mode),
        7 => assembly(),
        8 => equilibrium(mode),
        9 => recurrence_asymptotics(mode),
        _ => Vec::new(),
    }
}

// ---- criterion 1: exact versus asymptotic positivity ----

fn positivity_errors(lambda: &Rational, ns: &[u32], checks: &mut Vec<Check>, name: &str) -> Option<Vec<(u32, Real)>> {
    let mut out = Vec::new();
    for &n in ns {
        let ctx = cache::matrix_context(n);
        match cache::positivity(n, lambda, &ctx) {
            Ok(r) => {
                if !r.log_p_exact.is_negative() {
                    checks.push(Check::holds(1, format!("log P < 0, lambda={lambda} N={n}"), String::from("non-negative"), false));
                }
                out.push((n, r.abs_error));
            }
            Err(e) => {
                checks.push(Check::failed(1, format!("{name} lambda={lambda} N={n}"), e));
                return None;
            }
        }
    }
    Some(out)
}

fn figure1(mode: Mode) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = cache::matrix_context(2);
    for l in [ratio(0, 1), ratio(3, 2)] {
        match cache::positivity(1, &l, &c) {
            Ok(r) => checks.push(Check::log_at_most(
                1,
                format!("N=1 coin flip, lambda={l}"),
                log10(&(&r.log_p_exact + c.int(2).ln(&c))),
                -f64::from(c.target_digits()),
            )),
            Err(e) => checks.push(Check::failed(1, "N=1 coin flip", e)),
        }
    }
    match cache::positivity(2, &ratio(0, 1), &c) {
        Ok(r) => {
            let want = ((c.pi() - 2) / 16).ln(&c) - log_z_ggue_exact(2, &ratio(0, 1), &c).expect("closed form");
            checks.push(Check::log_at_most(
                1,
                "N=2 closed form log((pi-2)/16) - log Z2",
                rel_log10(&r.log_p_exact, &want, &c),
                -f64::from(c.target_digits()),
            ));
        }
        Err(e) => checks.push(Check::failed(1, "N=2 closed form", e)),
    }

    let ns: Vec<u32> = match mode {
        Mode::Quick => vec![4, 6, 8, 10],
        Mode::Full => (FIGURE_N.0..=FIGURE_N.1).step_by(FIGURE_N.2 as usize).collect(),
    };
    for l in FIGURE_LAMBDAS {
        let lambda = ratio(l, 1);
        let Some(errs) = positivity_errors(&lambda, &ns, &mut checks, "figure grid") else { continue };
        let logs: Vec<f64> = errs.iter().map(|(_, e)| log10(e)).collect();
        let monotone = logs.windows(2).all(|w| w[1] < w[0]);
        let shown: Vec<String> = errs.iter().zip(&logs).map(|((n, _), v)| format!("{n}:{v:.2}")).collect();
        checks.push(Check::holds(
            1,
            format!("log10 abs error decreases in N, lambda={lambda}"),
            shown.join(" "),
            monotone,
        ));
    }
    if mode == Mode::Quick {
        return checks;
    }

    for l in FIGURE_LAMBDAS {
        let lambda = ratio(l, 1);
        let Some(errs) = positivity_errors(&lambda, &[8, 16, 32], &mut checks, "1/N decay") else { continue };
        let r: Vec<f64> = errs.windows(2).map(|w| (&w[1].1 / &w[0].1).to_f64()).collect();
        checks.push(Check::in_band(1, format!("abs_error(2N)/abs_error(N), N=8,16, lambda={lambda}"), &r, 0.3, 0.7));
    }
    for l in FIGURE_LAMBDAS {
        let lambda = ratio(l, 1);
        let Some(errs) = positivity_errors(&lambda, &[16, 24, 32, 40], &mut checks, "N * remainder") else { continue };
        let scaled: Vec<f64> = errs.iter().map(|(n, e)| e.to_f64() * f64::from(*n)).collect();
        let hi = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let lo = scaled.iter().cloned().fold(f64::MAX, f64::min);
        let spread = hi / lo;
        checks.push(Check::new(
            1,
            format!("N * abs_error roughly constant over N=16..40, lambda={lambda}"),
            format!("max/min = {spread:.4}"),
            String::from("<= 1.5"),
            spread <= 1.5,
        ));
    }
    checks
}

// ---- criterion 2: the constants of the expansion ----

/// `ζ'(-1)` to 40 digits, as a published test vector.
const ZETA_PRIME_MINUS_ONE: &str = "-0.1654211437004509292139196602427806427640";

fn expansion_constants() -> Vec<Check> {
    let c = cache::context(PrecisionContext::new(120, 80, 0).expect("valid"));
    let mut checks = Vec::new();
    let k = match constants(&c) {
        Ok(k) => k,
        Err(e) => return vec![Check::failed(2, "constants", e)],
    };
    let ln2 = c.int(2).ln(&c);
    let ln3 = c.int(3).ln(&c);
    checks.push(Check::log_at_most(2, "c1 = log3/2", rel_log10(&k.c1, &(&ln3 / 2), &c), -30.0));
    checks.push(Check::log_at_most(2, "c1 printed 0.54930614", log10(&(&k.c1 - c.parse("0.54930614"))), -8.0));
    checks.push(Check::log_at_most(2, "c2 = -1/12", rel_log10(&k.c2, &c.ratio(-1, 12), &c), -30.0));
    let zeta = c.parse(ZETA_PRIME_MINUS_ONE);
    checks.push(Check::log_at_most(
        2,
        "zeta'(-1) from Glaisher relation vs test vector",
        rel_log10(&k.zeta_prime_neg1, &zeta, &c),
        -30.0,
    ));
    checks.push(Check::log_at_most(
        2,
        "Glaisher A printed 1.2824271291",
        log10(&(k.log_glaisher.exp(&c) - c.parse("1.2824271291"))),
        -10.0,
    ));
    let c3 = &ln3 / 8 - &ln2 / 6 + &zeta;
    checks.push(Check::log_at_most(2, "c3 = log3/8 - log2/6 + zeta'(-1)", rel_log10(&k.c3, &c3, &c), -30.0));
    match positivity_expansion(&ratio(0, 1), &c) {
        Ok(e) => {
            let worst = rel_log10(&e.n_sq, &-&k.c1, &c)
                .max(rel_log10(&e.log_n, &k.c2, &c))
                .max(rel_log10(&e.constant, &k.c3, &c))
                .max(log10(&e.n));
            checks.push(Check::log_at_most(2, "lambda=0 expansion reduces to -c1 N^2 + c2 log N + c3", worst, -30.0));
        }
        Err(e) => checks.push(Check::failed(2, "lambda=0 expansion", e)),
    }
    checks
}

// ---- criterion 3: string equations at finite N ----

/// String residuals for `n = 1..=N` against `10^{-(achieved-10)}`.
pub fn string_residual_check(rt: &RecurrenceTable, ctx: &Ctx) -> ggue_core::Result<(f64, f64)> {
    let mut worst = f64::NEG_INFINITY;
    for n in 1..=rt.spec.big_n as usize {
        let (r1, r2) = string_residual(rt, n, ctx)?;
        worst = worst.max(log10(&r1)).max(log10(&r2));
    }
    Ok((worst, -(f64::from(rt.achieved_digits) - 10.0)))
}

fn string_identities(mode: Mode) -> Vec<Check> {
    let grid = identity_grid(mode);
    let mut checks = Vec::new();
    for lambda in &grid.lambdas {
        for &n in &grid.ns {
            let ctx = cache::matrix_context(n);
            let mut res = Worst::new(3, format!("string residuals n<=N, lambda={lambda} N={n}"));
            let mut ratio_id = Worst::new(3, format!("beta_n h_(n-1) = h_n and beta_n > 0, lambda={lambda} N={n}"));
            for s in &grid.s {
                let sp = spec(lambda, s, n);
                let at = || format!("s={s}");
                match grid_table(&sp, &ctx) {
                    Ok(rt) => {
                        match string_residual_check(&rt, &ctx) {
                            Ok((v, lim)) => res.add(v, lim, at),
                            Err(e) => res.fail(at(), e),
                        }
                        let lim = -(f64::from(rt.achieved_digits) - 10.0);
                        for k in 1..=rt.n_max {
                            if !rt.beta[k].is_positive() {
                                ratio_id.fail(at(), format!("beta_{k} not positive"));
                            }
                            let via_h = (&rt.log_h[k] - &rt.log_h[k - 1]).exp(&ctx);
                            ratio_id.add(rel_log10(&rt.beta[k], &via_h, &ctx), lim, at);
                        }
                    }
                    Err(e) => {
                        res.fail(at(), &e);
                        ratio_id.fail(at(), e);
                    }
                }
            }
            checks.push(res.finish());
            checks.push(ratio_id.finish());
        }
    }
    checks
}

// ---- criterion 4: three routes to d log Z / ds ----

fn deformation_routes(mode: Mode) -> Vec<Check> {
    let grid = identity_grid(mode);
    let mut checks = Vec::new();
    for lambda in &grid.lambdas {
        for &n in &grid.ns {
            let ctx = cache::matrix_context(n);
            let limit = -f64::from(ctx.target_digits()) / 2.0;
            let mut w = Worst::new(4, format!("deformation formula = linear statistic = finite difference, lambda={lambda} N={n}"));
            for s in &grid.s {
                let sp = spec(lambda, s, n);
                let at = || format!("s={s}");
                let routes = grid_table(&sp, &ctx).and_then(|rt| {
                    let d = deformation_rhs(&rt, n as usize, &ctx)?;
                    let l = linear_statistic(&rt, n as usize, &ctx)?;
                    let f = log_partition_derivative_fd(&sp, n as usize, &ctx)?;
                    Ok((d, l, f))
                });
                match routes {
                    Ok((d, l, f)) => {
                        let rel = |a: &Real, b: &Real| log10(&((a - b) / b));
                        let v = rel(&l, &d).max(rel(&f, &d)).max(rel(&f, &l));
                        w.add(v, limit, at);
                    }
                    Err(e) => w.fail(at(), e),
                }
            }
            checks.push(w.finish());
        }
    }
    checks
}

// ---- criterion 5: closed forms against brute force ----

fn closed_forms(mode: Mode) -> Vec<Check> {
    let mut checks = Vec::new();
    let ns: Vec<u32> = match mode {
        Mode::Quick => vec![1, 5, 10],
        Mode::Full => (1..=12).collect(),
    };
    for lambda in [ratio(-1, 2), ratio(1, 2), ratio(3, 1)] {
        let mut w = Worst::new(5, format!("Laguerre closed form = moment route at s=0, lambda={lambda}"));
        for &n in &ns {
            let ctx = cache::matrix_context(n);
            let sp = spec(&lambda, &ratio(0, 1), n);
            let at = || format!("N={n}");
            match (log_partition_certified(&sp, n as usize, &ctx), log_z_lue_exact(n, &lambda, &ctx)) {
                (Ok((v, achieved)), Ok(exact)) => w.add(rel_log10(&v, &exact, &ctx), -(f64::from(achieved) - 3.0), at),
                (Err(e), _) | (_, Err(e)) => w.fail(at(), e),
            }
        }
        checks.push(w.finish());
    }
    for lambda in [ratio(-1, 2), ratio(0, 1), ratio(1, 1), ratio(5, 2)] {
        let mut w = Worst::new(5, format!("gGUE closed form = full-line Hankel determinant, lambda={lambda}"));
        for n in 1..=8u32 {
            let ctx = cache::matrix_context(n);
            let at = || format!("N={n}");
            let heine = |c: &Ctx| -> ggue_core::Result<Real> {
                let m: Vec<Real> =
                    (0..2 * n as usize - 1).map(|k| moment_fullline(k, &lambda, n, c)).collect::<Result<_, _>>()?;
                log_partition_heine(&m, n as usize, c)
            };
            match (heine(&ctx), heine(ctx.certification()), log_z_ggue_exact(n, &lambda, &ctx)) {
                (Ok(v), Ok(v_hi), Ok(exact)) => {
                    let achieved = (-rel_log10(&v, &v_hi, &ctx)).min(f64::from(ctx.digits()));
                    w.add(rel_log10(&v, &exact, &ctx), -(achieved - 3.0), at);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => w.fail(at(), e),
            }
        }
        checks.push(w.finish());
    }
    checks
}

// ---- criterion 6: partition-function expansions ----

fn partition_asymptotics(mode: Mode) -> Vec<Check> {
    if mode == Mode::Quick {
        return Vec::new();
    }
    let ctx = cache::matrix_context(2);
    let mut checks = Vec::new();
    for lambda in [ratio(0, 1), ratio(1, 1), ratio(5, 2)] {
        for (name, exact, asym) in [
            ("Laguerre", log_z_lue_exact as fn(u32, &Rational, &Ctx) -> ggue_core::Result<Real>, log_z_lue_asymptotic as fn(u32, &Rational, &Ctx) -> ggue_core::Result<Real>),
            ("gGUE", log_z_ggue_exact, log_z_ggue_asymptotic),
        ] {
            let errs: ggue_core::Result<Vec<Real>> =
                [10u32, 20, 40].iter().map(|&n| Ok((exact(n, &lambda, &ctx)? - asym(n, &lambda, &ctx)?).abs())).collect();
            match errs {
                Ok(e) => {
                    let r = [(&e[0] / &e[1]).to_f64(), (&e[1] / &e[2]).to_f64()];
                    checks.push(Check::in_band(6, format!("{name} expansion error ratio N=10,20,40, lambda={lambda}"), &r, 3.0, 5.0));
                }
                Err(e) => checks.push(Check::failed(6, format!("{name} expansion, lambda={lambda}"), e)),
            }
        }
    }
    checks
}

// ---- criterion 7: assembly of the expansion ----

fn assembly() -> Vec<Check> {
    let ctx = cache::matrix_context(2);
    let mut checks = Vec::new();
    for l in [0, 1, 2] {
        let lambda = ratio(l, 1);
        match (positivity_expansion(&lambda, &ctx), assembled_expansion(&lambda, &ctx)) {
            (Ok(a), Ok(b)) => {
                let names = ["N^2", "N", "log N", "constant"];
                for ((x, y), nm) in a.core_terms().iter().zip(b.core_terms().iter()).zip(names) {
                    checks.push(Check::log_at_most(
                        7,
                        format!("{nm} coefficient = integrals + Laguerre - gGUE, lambda={lambda}"),
                        log10(&(*x - *y)),
                        -25.0,
                    ));
                }
                checks.push(Check::log_at_most(7, format!("N log N terms cancel, lambda={lambda}"), log10(&b.n_log_n), -25.0));
            }
            (Err(e), _) | (_, Err(e)) => checks.push(Check::failed(7, format!("assembly lambda={lambda}"), e)),
        }
        match integrals_abc(&lambda, &ctx) {
            Ok(r) => {
                let v = r.closed.iter().zip(&r.quadrature).map(|(a, b)| rel_log10(b, a, &ctx)).fold(f64::NEG_INFINITY, f64::max);
                checks.push(Check::log_at_most(
                    7,
                    format!("s-integrals of A, B, C: quadrature = closed form, lambda={lambda}"),
                    v,
                    -f64::from(ctx.target_digits()) / 2.0,
                ));
            }
            Err(e) => checks.push(Check::failed(7, format!("s-integrals lambda={lambda}"), e)),
        }
    }
    checks
}

// ---- criterion 8: equilibrium measure ----

fn equilibrium(mode: Mode) -> Vec<Check> {
    let ctx = cache::matrix_context(2);
    let digits = f64::from(ctx.digits());
    let target = f64::from(ctx.target_digits());
    let mut checks = Vec::new();
    let mut rng = rng();
    let random_s: Vec<Rational> = (0..20).map(|_| ratio(rng.gen_range(1..=10_000), 10_000)).collect();

    let mut w = Worst::new(8, "mu_0 = 1 for 20 random s");
    for s in &random_s {
        match equilibrium_data(s, &ctx).and_then(|e| equilibrium_moment(0, &e, &ctx)) {
            Ok(m) => w.add(log10(&(m - 1)), -(digits - 10.0), || format!("s={s}")),
            Err(e) => w.fail(format!("s={s}"), e),
        }
    }
    checks.push(w.finish());

    let grid: Vec<Rational> = (0..50).map(|k| ratio(k, 49)).collect();
    let cs: Vec<Real> = grid.iter().map(|s| equilibrium_data(s, &ctx).expect("valid s").c).collect();
    let decreasing = cs.windows(2).all(|p| p[1] < p[0]);
    checks.push(Check::holds(8, "c(s) strictly decreasing on a 50-point grid", format!("c(0)={:.6}, c(1)={:.6}", cs[0].to_f64(), cs[49].to_f64()), decreasing));

    // the extra zero rises from -inf to -sqrt6/3 at s = 1; the printed
    // endpoint -2sqrt6/3 is the value of -c(1), not of the zero
    let zeros: Vec<Real> = grid
        .iter()
        .skip(1)
        .map(|s| {
            let e = equilibrium_data(s, &ctx).expect("valid s");
            -(&e.b / &e.a)
        })
        .collect();
    let sqrt6 = ctx.int(6).sqrt();
    let top = -(&sqrt6 / 3);
    let slack = ctx.tolerance(i64::from(ctx.target_digits()));
    let increasing = zeros.windows(2).all(|p| p[0] < p[1]);
    let below = zeros.iter().all(|z| *z <= &top + &slack);
    checks.push(Check::holds(
        8,
        "extra zero -b/a increases in s and stays <= -sqrt6/3 < 0 on a 50-point grid",
        format!("-b/a at s=1/49: {:.4}, at s=1: {:.6}", zeros[0].to_f64(), zeros[zeros.len() - 1].to_f64()),
        increasing && below,
    ));
    let printed = -(&sqrt6 * 2 / 3);
    let at_one = &zeros[zeros.len() - 1];
    checks.push(Check::holds(
        8,
        "printed endpoint -2sqrt6/3 is exceeded at s=1 (regression)",
        format!("-b/a = {:.6} > {:.6}", at_one.to_f64(), printed.to_f64()),
        *at_one > printed,
    ));

    let e0 = equilibrium_data(&ratio(0, 1), &ctx).expect("s = 0");
    match resolvent_eval(&Complex::from_real(ctx.int(-1)), &e0, &ctx) {
        Ok(w) => {
            let want = (ctx.one() - ctx.int(5).sqrt()) / 2;
            checks.push(Check::log_at_most(8, "resolvent at s=0, z=-1 equals (1-sqrt5)/2", log10(&(&w.re - want)).max(log10(&w.im)), -(digits - 10.0)));
        }
        Err(e) => checks.push(Check::failed(8, "resolvent at z=-1", e)),
    }

    let sample_s = match mode {
        Mode::Quick => vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)],
        Mode::Full => vec![ratio(0, 1), ratio(3, 10), ratio(1, 2), ratio(7, 10), ratio(1, 1)],
    };
    let mut mq = Worst::new(8, "mu_1, mu_2 Beta closed forms = quadrature");
    let mut rq = Worst::new(8, "resolvent = Cauchy transform quadrature at z=-1 and z=c+1");
    for s in &sample_s {
        let e = equilibrium_data(s, &ctx).expect("valid s");
        for k in 1..=2 {
            match (equilibrium_moment(k, &e, &ctx), equilibrium_moment_quadrature(k, &e, target as i64 + 10, &ctx)) {
                (Ok(a), Ok(b)) => mq.add(rel_log10(&b, &a, &ctx), -target, || format!("s={s} k={k}")),
                (Err(er), _) | (_, Err(er)) => mq.fail(format!("s={s}"), er),
            }
        }
        for z in [ctx.int(-1), &e.c + 1] {
            match (resolvent_eval(&Complex::from_real(z.clone()), &e, &ctx), resolvent_quadrature(&z, &e, target as i64 + 10, &ctx)) {
                (Ok(a), Ok(b)) => rq.add(rel_log10(&b, &a.re, &ctx), -target, || format!("s={s} z={:.4}", z.to_f64())),
                (Err(er), _) | (_, Err(er)) => rq.fail(format!("s={s}"), er),
            }
        }
    }
    checks.push(mq.finish());
    checks.push(rq.finish());

    // boundary values at two ε: defects must be O(ε) and shrink with ε
    let eps_big = -target / 4.0;
    let eps_small = -target / 2.0;
    for s in &sample_s {
        let e = equilibrium_data(s, &ctx).expect("valid s");
        let mut sup = [f64::NEG_INFINITY; 2];
        let mut psi_ok = true;
        let mut failure = None;
        for j in 1..=50 {
            let x = &e.c * j / 51;
            match density_eval(&x, &e, &ctx) {
                Ok(p) if p.is_negative() => psi_ok = false,
                Ok(_) => {}
                Err(er) => failure = Some(er.to_string()),
            }
            for (slot, le) in [eps_big, eps_small].iter().enumerate() {
                let eps = ctx.tolerance(-*le as i64);
                match boundary_defects(&x, &eps, &e, &ctx) {
                    Ok((jump, dens)) => sup[slot] = sup[slot].max(log10(&jump)).max(log10(&dens)),
                    Err(er) => failure = Some(er.to_string()),
                }
            }
        }
        if let Some(f) = failure {
            checks.push(Check::failed(8, format!("boundary values s={s}"), f));
            continue;
        }
        // O(ε) with a generous constant: 10^3 ε
        let ok = sup[0] <= eps_big + 3.0 && sup[1] <= eps_small + 3.0 && sup[1] < sup[0];
        checks.push(Check::new(
            8,
            format!("boundary values give psi and V' as eps -> 0, s={s}"),
            format!("sup defect {} at eps=1e{eps_big}, {} at eps=1e{eps_small}", pow10(sup[0]), pow10(sup[1])),
            String::from("<= 1e3 eps and shrinking"),
            ok,
        ));
        checks.push(Check::holds(8, format!("psi >= 0 on a 50-point grid, s={s}"), String::from("grid in (0,c)"), psi_ok));
    }
    checks
}

// ---- criterion 9: recurrence coefficients against f0 + f1/N ----

fn recurrence_asymptotics(mode: Mode) -> Vec<Check> {
    let mut checks = Vec::new();
    let ctx = cache::matrix_context(2);
    let target = f64::from(ctx.target_digits());
    let (one, zero) = (ratio(1, 1), ratio(0, 1));

    match (expansion_coeffs(&one, &zero, &one, &ctx), g0_inconsistent_form(&one, &one, &ctx)) {
        (Ok(e), Ok(bad)) => {
            let (r1, r2) = leading_order_residuals(&e.f0, &e.g0, &one, &one, &ctx);
            checks.push(Check::log_at_most(9, "g0 = f0^2/4 solves the leading-order system at q=s=1", log10(&r1).max(log10(&r2)), -(target - 10.0)));
            let (b1, b2) = leading_order_residuals(&e.f0, &bad, &one, &one, &ctx);
            let worst = log10(&b1).max(log10(&b2));
            checks.push(Check::new(
                9,
                "alternative g0 = (D+s-1)D/(72s^2) violates it at q=s=1 (regression)",
                pow10(worst),
                String::from(">= 1e-2"),
                worst >= -2.0,
            ));
            let roots_ok = [ctx.ratio(1, 2), ctx.ratio(1, 6)].iter().all(|g| {
                let f0sq = ctx.one() - g * 2;
                log10(&(g * &f0sq * 4 - (g * 2 - 1).square())) <= -(target - 10.0)
            });
            checks.push(Check::holds(9, "leading-order roots at q=s=1 are 1/2 and 1/6; continuity picks 1/6", format!("g0 = {:.12}", e.g0.to_f64()), roots_ok && log10(&(&e.g0 - ctx.ratio(1, 6))) <= -(target - 10.0)));
        }
        (Err(e), _) | (_, Err(e)) => checks.push(Check::failed(9, "g0 regression", e)),
    }

    let mut rng = rng();
    let mut w = Worst::new(9, "leading-order string identities, 50 random (q, lambda, s)");
    let mut lim_w = Worst::new(9, "s -> 0 limits (2q, q^2, lambda+1, q lambda)");
    for _ in 0..50 {
        let q = ratio(rng.gen_range(1..=2000), 1000);
        let l = ratio(rng.gen_range(-999..=5000), 1000);
        let s = ratio(rng.gen_range(0..=1000), 1000);
        let at = || format!("q={q} lambda={l} s={s}");
        match expansion_coeffs(&q, &l, &s, &ctx) {
            Ok(e) => {
                let (r1, r2) = leading_order_residuals(&e.f0, &e.g0, &q, &s, &ctx);
                w.add(log10(&r1).max(log10(&r2)), -(target - 10.0), at);
            }
            Err(er) => w.fail(at(), er),
        }
        match expansion_coeffs(&q, &l, &zero, &ctx) {
            Ok(e) => {
                let (qr, lr) = (q.to_real(&ctx), l.to_real(&ctx));
                let v = log10(&(&e.f0 - &qr * 2))
                    .max(log10(&(&e.g0 - qr.square())))
                    .max(log10(&(&e.f1 - &lr - 1)))
                    .max(log10(&(&e.g1 - &qr * &lr)));
                lim_w.add(v, -(target - 10.0), || format!("q={q} lambda={l}"));
            }
            Err(er) => lim_w.fail(at(), er),
        }
    }
    checks.push(w.finish());
    checks.push(lim_w.finish());

    for (l, s) in [(ratio(0, 1), ratio(1, 2)), (ratio(3, 2), ratio(1, 1)), (ratio(5, 2), ratio(1, 10))] {
        match (next_order_residual(&one, &l, &s, 1000, &ctx), next_order_residual(&one, &l, &s, 1_000_000, &ctx)) {
            (Ok(a), Ok(b)) => {
                let r = [(&a.0 / &b.0).abs().to_f64() / 1e6, (&a.1 / &b.1).abs().to_f64() / 1e6];
                checks.push(Check::in_band(9, format!("next-order balance scales as N^-2 (ratio / 1e6, N=1e3 vs 1e6), lambda={l} s={s}"), &r, 0.5, 2.0));
            }
            (Err(e), _) | (_, Err(e)) => checks.push(Check::failed(9, "next-order balance", e)),
        }
    }
    if mode == Mode::Quick {
        return checks;
    }

    for l in [ratio(0, 1), ratio(3, 2)] {
        for s in [ratio(3, 10), ratio(7, 10), ratio(1, 1)] {
            let mut a_err = Vec::new();
            let mut b_err = Vec::new();
            let mut failure = None;
            for n in [8u32, 16, 32] {
                let c = cache::matrix_context(n);
                let sp = spec(&l, &s, n);
                let r = cache::recurrence_table(&sp, n as usize, &c).and_then(|rt| {
                    let e = expansion_coeffs(&one, &l, &s, &c)?;
                    let inv = c.one() / i64::from(n);
                    let k = n as usize;
                    Ok(((&rt.alpha[k] - &e.f0 - &e.f1 * &inv).abs(), (&rt.beta[k] - &e.g0 - &e.g1 * &inv).abs()))
                });
                match r {
                    Ok((a, b)) => {
                        a_err.push(a);
                        b_err.push(b);
                    }
                    Err(e) => failure = Some(e),
                }
            }
            if let Some(e) = failure {
                checks.push(Check::failed(9, format!("recurrence asymptotics lambda={l} s={s}"), e));
                continue;
            }
            let ratios = |v: &[Real]| [(&v[0] / &v[1]).to_f64(), (&v[1] / &v[2]).to_f64()];
            checks.push(Check::in_band(9, format!("|alpha_N - f0 - f1/N| decay under doubling N=8,16,32, lambda={l} s={s}"), &ratios(&a_err), 3.0, 5.0));
            checks.push(Check::in_band(0, format!("|beta_N - g0 - g1/N| decay under doubling N=8,16,32, lambda={l} s={s}"), &ratios(&b_err), 3.0, 5.0));
        }
    }
    checks
}

// ---- remaining module invariants ----

pub fn invariants(mode: Mode) -> Vec<Check> {
    let ctx = cache::matrix_context(2);
    let target = f64::from(ctx.target_digits());
    let mut checks = Vec::new();
    let mut rng = rng();

    let count = if mode == Mode::Quick { 20 } else { 100 };
    let mut w = Worst::new(0, format!("log G(z+1) - log G(z) = log Gamma(z), {count} random z in (0.1, 50)"));
    for _ in 0..count {
        let z = ctx.ratio(rng.gen_range(100..=50_000), 1000);
        let at = || format!("z={:.3}", z.to_f64());
        match (log_barnes_g(&(&z + 1), &ctx), log_barnes_g(&z, &ctx), log_gamma(&z, &ctx)) {
            (Ok(a), Ok(b), Ok(g)) => w.add(log10(&(a - b - g)), -(target - 5.0), at),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => w.fail(at(), e),
        }
    }
    checks.push(w.finish());

    let mut w = Worst::new(0, "Barnes forms = Gamma products (Laguerre all N, gGUE even N)");
    for lambda in [ratio(-1, 2), ratio(0, 1), ratio(5, 2)] {
        for n in 1..=10u32 {
            let at = || format!("lambda={lambda} N={n}");
            match (log_z_lue_barnes(n, &lambda, &ctx), log_z_lue_exact(n, &lambda, &ctx)) {
                (Ok(a), Ok(b)) => w.add(rel_log10(&a, &b, &ctx), -(target - 2.0), at),
                (Err(e), _) | (_, Err(e)) => w.fail(at(), e),
            }
            if n % 2 == 0 {
                match (log_z_ggue_barnes(n, &lambda, &ctx), log_z_ggue_exact(n, &lambda, &ctx)) {
                    (Ok(a), Ok(b)) => w.add(rel_log10(&a, &b, &ctx), -(target - 2.0), at),
                    (Err(e), _) | (_, Err(e)) => w.fail(at(), e),
                }
            }
        }
    }
    checks.push(w.finish());

    let mut w = Worst::new(0, "det Gamma(z+i+j) = prod j! Gamma(z+j)");
    for z in [ctx.ratio(1, 2), ctx.one(), ctx.ratio(3, 2), ctx.int(3)] {
        for m in 1..=4 {
            match gamma_det_identity_check(&z, m, &ctx) {
                Ok(r) => w.add(log10(&r), -(target - 10.0), || format!("z={} M={m}", z.to_f64())),
                Err(e) => w.fail(format!("z={}", z.to_f64()), e),
            }
        }
    }
    checks.push(w.finish());

    // moments: integration by parts, log-convexity, s = 0 and s = 1 closed forms
    let mut ibp = Worst::new(0, "moment integration-by-parts residual");
    let mut convex = true;
    let mut ends = Worst::new(0, "moments at s=0 and s=1 match Gamma closed forms");
    let specs = [(ratio(1, 2), ratio(1, 2), 5u32), (ratio(-1, 2), ratio(1, 10), 10), (ratio(5, 2), ratio(0, 1), 10), (ratio(1, 1), ratio(1, 1), 10)];
    for (l, s, n) in &specs {
        let sp = spec(l, s, *n);
        let at = || format!("lambda={l} s={s} N={n}");
        match moment_table(&sp, 12, &ctx) {
            Ok(t) => {
                ibp.add(log10(&t.max_ibp_residual), -(target - 10.0), at);
                for k in 1..t.max_index() {
                    convex &= t.values[k].square() <= &t.values[k - 1] * &t.values[k + 1];
                }
                for (k, m) in t.values.iter().enumerate() {
                    // Gamma(a) / N^a, halved at s = 1 where the weight is Gaussian
                    let log_n = ctx.int(i64::from(*n)).ln(&ctx);
                    let gamma_over = |a: Real| (log_gamma(&a, &ctx).expect("positive") - &a * &log_n).exp(&ctx);
                    let a = l.to_real(&ctx) + 1 + k as i64;
                    let want = if s.is_zero() {
                        Some(gamma_over(a))
                    } else if *s == ratio(1, 1) {
                        Some(gamma_over(a / 2) / 2)
                    } else {
                        None
                    };
                    if let Some(wv) = want {
                        ends.add(rel_log10(m, &wv, &ctx), -(target - 10.0), at);
                    }
                }
            }
            Err(e) => ibp.fail(at(), e),
        }
    }
    checks.push(ibp.finish());
    checks.push(Check::holds(0, "moments log-convex: m_k^2 <= m_(k-1) m_(k+1)", String::from("k <= 11, 4 specs"), convex));
    checks.push(ends.finish());

    // Heine determinant against the Cholesky route
    let mut w = Worst::new(0, "Heine determinant = Cholesky route for log Z_N(s)");
    for (l, s, n) in [(ratio(1, 1), ratio(1, 2), 3u32), (ratio(0, 1), ratio(1, 1), 6), (ratio(5, 2), ratio(3, 10), 8)] {
        let c = cache::matrix_context(n);
        let sp = spec(&l, &s, n);
        let at = || format!("lambda={l} s={s} N={n}");
        let r = moment_table(&sp, 2 * n as usize, &c)
            .and_then(|t| Ok((log_partition_heine(&t.values, n as usize, &c)?, log_partition_certified(&sp, n as usize, &c)?)));
        match r {
            Ok((h, (v, achieved))) => w.add(rel_log10(&h, &v, &c), -(f64::from(achieved) - 10.0), at),
            Err(e) => w.fail(at(), e),
        }
    }
    checks.push(w.finish());

    // one-point density: nonnegative, integrates to N
    let mut pos = true;
    let mut mass = Worst::new(0, "one-point density integrates to N");
    let mut failure = None;
    for (l, s, n) in [(ratio(0, 1), ratio(1, 2), 5u32), (ratio(-1, 2), ratio(1, 10), 5), (ratio(5, 2), ratio(1, 1), 10)] {
        let c = cache::matrix_context(n);
        let sp = spec(&l, &s, n);
        match grid_table(&sp, &c) {
            Ok(rt) => {
                let edge = equilibrium_data(&s, &c).expect("valid s").c * 3;
                for j in 1..=100 {
                    let x = &edge * j / 100;
                    match one_point_density(&rt, &x, &c) {
                        Ok(v) if v.is_negative() => pos = false,
                        Ok(_) => {}
                        Err(e) => failure = Some(e.to_string()),
                    }
                }
                let rule = QuadRule::digits(&c, i64::from(c.digits()) - 15).with_abs_floor(c.one());
                match density_integral(&rt, &rule, &c, |_| c.one()) {
                    Ok(m) => mass.add(rel_log10(&m, &c.int(i64::from(n)), &c), -(target - 10.0), || format!("lambda={l} s={s} N={n}")),
                    Err(e) => mass.fail(format!("N={n}"), e),
                }
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }
    match failure {
        Some(f) => checks.push(Check::failed(0, "one-point density >= 0 on a 100-point grid", f)),
        None => checks.push(Check::holds(0, "one-point density >= 0 on a 100-point grid", String::from("3 specs"), pos)),
    }
    checks.push(mass.finish());
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_keeps_largest_margin() {
        let mut w = Worst::new(3, "x");
        w.add(-50.0, -40.0, || "a".into());
        w.add(-45.0, -40.0, || "b".into());
        w.add(f64::NEG_INFINITY, -40.0, || "c".into());
        let c = w.finish();
        assert!(c.pass && c.measured.contains("at b"));
        let mut w = Worst::new(3, "y");
        w.add(-30.0, -40.0, || "a".into());
        assert!(!w.finish().pass);
    }

    #[test]
    fn perturbed_beta_fails_string_check() {
        let ctx = cache::matrix_context(5);
        let sp = spec(&ratio(1, 1), &ratio(1, 2), 5);
        let mut rt = grid_table(&sp, &ctx).unwrap();
        let (v, lim) = string_residual_check(&rt, &ctx).unwrap();
        assert!(v <= lim);
        rt.beta[3] = &rt.beta[3] + ctx.tolerance(8);
        let (v, lim) = string_residual_check(&rt, &ctx).unwrap();
        assert!(v > lim && v > -9.0);
    }

    #[test]
    fn report_lines() {
        let r = Report { checks: vec![Check::log_at_most(2, "demo", -40.0, -30.0), Check::in_band(6, "band", &[4.0, 6.0], 3.0, 5.0)] };
        let text = r.render();
        assert!(text.starts_with("PASS [c2] demo"));
        assert!(text.contains("FAIL [c6] band"));
        assert!(!r.passed());
    }
}
