//! Table searches split into subtrees and run on a pool of threads.
//!
//! Every subtree contributes its canonical forms to its own slot; the slots
//! are merged into one sorted set afterwards, so the result does not depend
//! on the number of workers or on scheduling.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use extcalc_core::algebra::Alg;
use extcalc_core::ext1::{CanonicalForm, Ext1Problem};
use extcalc_core::schreier::{schreier_classes, SchreierClasses, SchreierProblem};
use extcalc_core::search::{Flow, Prefix, TableSearch};
use extcalc_core::{Limits, Result};

/// Decision depth at which searches are cut into tasks.
const SPLIT_DEPTH: usize = 3;

/// A search together with the map from its solutions to canonical forms.
pub trait FormSearch: Sync {
    fn search(&self) -> TableSearch;
    fn form_of(&self, tables: &[Vec<usize>]) -> Result<Option<CanonicalForm>>;
}

impl FormSearch for Ext1Problem {
    fn search(&self) -> TableSearch {
        Ext1Problem::search(self)
    }

    fn form_of(&self, tables: &[Vec<usize>]) -> Result<Option<CanonicalForm>> {
        Ext1Problem::form_of(self, tables)
    }
}

impl FormSearch for SchreierProblem {
    fn search(&self) -> TableSearch {
        SchreierProblem::search(self)
    }

    fn form_of(&self, tables: &[Vec<usize>]) -> Result<Option<CanonicalForm>> {
        SchreierProblem::form_of(self, tables)
    }
}

/// All canonical forms found by `problems`, sorted and deduplicated. On
/// failure the error of the first failing task (in task order) is returned.
pub fn collect_forms<P: FormSearch>(problems: &[P], workers: usize) -> Result<Vec<CanonicalForm>> {
    let mut tasks: Vec<(usize, Prefix)> = Vec::new();
    for (i, p) in problems.iter().enumerate() {
        tasks.extend(p.search().split(SPLIT_DEPTH)?.into_iter().map(|pre| (i, pre)));
    }
    let slots: Vec<Mutex<Option<Result<Vec<CanonicalForm>>>>> =
        tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let run = || loop {
        let t = next.fetch_add(1, Ordering::Relaxed);
        let Some((i, prefix)) = tasks.get(t) else { return };
        let out = run_task(&problems[*i], prefix);
        *slots[t].lock().expect("slot lock") = Some(out);
    };
    let workers = workers.clamp(1, tasks.len().max(1));
    if workers == 1 {
        run();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(run);
            }
        });
    }
    let mut forms = BTreeSet::new();
    for slot in slots {
        let out = slot.into_inner().expect("slot lock").expect("every task ran");
        forms.extend(out?);
    }
    Ok(forms.into_iter().collect())
}

fn run_task<P: FormSearch>(p: &P, prefix: &Prefix) -> Result<Vec<CanonicalForm>> {
    let mut forms = Vec::new();
    let mut err = None;
    p.search().run_from(prefix, |tables| match p.form_of(tables) {
        Ok(Some(f)) => {
            forms.push(f);
            Flow::Continue
        }
        Ok(None) => Flow::Continue,
        Err(e) => {
            err = Some(e);
            Flow::Stop
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(forms),
    }
}

/// Parallel counterpart of `enumerate_ext1` (and of its carrier variant).
pub fn enumerate_ext1(
    q: &Alg,
    k: &Alg,
    carriers: Option<&[usize]>,
    limits: &Limits,
    workers: usize,
) -> Result<Vec<CanonicalForm>> {
    collect_forms(&Ext1Problem::plan(q, k, carriers, limits)?, workers)
}

/// Parallel counterpart of `enumerate_schreier`.
pub fn enumerate_schreier(q: &Alg, k: &Alg, limits: &Limits, workers: usize) -> Result<SchreierClasses> {
    let problem = SchreierProblem::new(q, k, limits)?;
    let forms = collect_forms(std::slice::from_ref(&problem), workers)?;
    schreier_classes(q, k, forms)
}
