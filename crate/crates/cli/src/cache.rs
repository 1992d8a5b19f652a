//! Process-wide memo of the expensive pieces, so that the verification
//! suite and the commands share work. Contexts hold interior caches and are
//! kept per thread; computed tables are plain data and shared.

use ggue_core::opchain::{self, RecurrenceTable};
use ggue_core::positivity::{self, PositivityResult};
use ggue_core::weight::WeightSpec;
use ggue_core::{Ctx, PrecisionContext, Rational, Result};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::{Mutex, OnceLock};

thread_local! {
    static CONTEXTS: RefCell<HashMap<PrecisionContext, Rc<Ctx>>> = RefCell::new(HashMap::new());
}

type TableKey = (WeightSpec, usize, PrecisionContext);
type PositivityKey = (Rational, u32, PrecisionContext);

fn tables() -> &'static Mutex<HashMap<TableKey, RecurrenceTable>> {
    static T: OnceLock<Mutex<HashMap<TableKey, RecurrenceTable>>> = OnceLock::new();
    T.get_or_init(Default::default)
}

fn positivity_results() -> &'static Mutex<HashMap<PositivityKey, PositivityResult>> {
    static P: OnceLock<Mutex<HashMap<PositivityKey, PositivityResult>>> = OnceLock::new();
    P.get_or_init(Default::default)
}

pub fn context(pc: PrecisionContext) -> Rc<Ctx> {
    CONTEXTS.with(|m| m.borrow_mut().entry(pc).or_insert_with(|| Rc::new(Ctx::new(pc))).clone())
}

/// The default context for matrices up to size `n`.
pub fn matrix_context(n: u32) -> Rc<Ctx> {
    context(PrecisionContext::for_matrix_size(n))
}

pub fn recurrence_table(spec: &WeightSpec, n_max: usize, ctx: &Ctx) -> Result<RecurrenceTable> {
    let key = (spec.clone(), n_max, ctx.precision());
    if let Some(t) = tables().lock().expect("table cache").get(&key) {
        return Ok(t.clone());
    }
    let t = opchain::recurrence_table(spec, n_max, ctx)?;
    tables().lock().expect("table cache").insert(key, t.clone());
    Ok(t)
}

pub fn positivity(n: u32, lambda: &Rational, ctx: &Ctx) -> Result<PositivityResult> {
    let key = (lambda.clone(), n, ctx.precision());
    if let Some(r) = positivity_results().lock().expect("positivity cache").get(&key) {
        return Ok(r.clone());
    }
    let r = positivity::positivity(n, lambda, ctx)?;
    positivity_results().lock().expect("positivity cache").insert(key, r.clone());
    Ok(r)
}
