use std::path::Path;

use serde_json::json;

use extcalc_core::algebra::{Alg, VarietyPresentation};
use extcalc_core::long_exact::{
    pullback_reduce, splice, syzygy, ExtGroup, ExtnPlan, Resolution,
};

use super::{algebra, exactness_error, Settings};
use crate::error::{CliError, Result};
use crate::format::{read_json, to_value, ResolutionFile, SequenceFile, SesFile};
use crate::parallel;
use crate::report::Outcome;

fn module(ring: usize, name: &str) -> Result<Alg> {
    if ring == 0 {
        return Err(CliError::Usage("--ring must be positive".into()));
    }
    algebra(&VarietyPresentation::modules(ring), name)
}

fn load(path: &Path, s: &Settings) -> Result<extcalc_core::long_exact::ExactSequence> {
    read_json::<SequenceFile>(path)?.load(&s.limits)
}

pub fn validate(path: &Path, s: &Settings) -> Result<Outcome> {
    match load(path, s) {
        Ok(e) => {
            let sizes: Vec<usize> = e
                .maps()
                .iter()
                .map(|m| m.dom().size())
                .chain(std::iter::once(e.base().size()))
                .collect();
            Ok(Outcome::ok(json!({
                "exact": true,
                "length": e.len(),
                "sizes": sizes,
            })))
        }
        Err(err) if exactness_error(&err) => Ok(Outcome::failed(json!({
            "exact": false,
            "reason": err.to_string(),
        }))),
        Err(err) => Err(err),
    }
}

pub fn splice_files(a: &Path, b: &Path, s: &Settings) -> Result<Outcome> {
    let e = splice(&load(a, s)?, &load(b, s)?)?;
    Ok(Outcome::ok(to_value(&SequenceFile::of(&e))))
}

pub fn syzygy_of(ring: usize, q_name: &str, depth: usize) -> Result<Outcome> {
    let q = module(ring, q_name)?;
    let z = syzygy(&q)?;
    let res = Resolution::new(&q, depth)?;
    Ok(Outcome::ok(json!({
        "generators": z.generators,
        "rank": z.rank(),
        "ses": to_value(&SesFile::of(&z.ses())),
        "resolution": to_value(&ResolutionFile::of(&res)),
    })))
}

pub fn reduce(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load(path, s)?;
    let z = syzygy(e.base())?;
    let r = pullback_reduce(&e, &z)?;
    Ok(Outcome::ok(json!({
        "sequence": to_value(&SequenceFile::of(&r)),
        "syzygy": to_value(&SesFile::of(&z.ses())),
    })))
}

pub fn classes(ring: usize, k_name: &str, q_name: &str, n: usize, s: &Settings) -> Result<Outcome> {
    let (k, q) = (module(ring, k_name)?, module(ring, q_name)?);
    let plan = ExtnPlan::new(&q, &k, n)?;
    let forms = parallel::enumerate_ext1(plan.omega(), &k, None, &s.limits, s.workers)?;
    let realized = forms
        .iter()
        .map(|f| plan.realize(f))
        .collect::<extcalc_core::Result<Vec<_>>>()?;
    let merged = plan.merge(realized);
    let reps: Vec<_> = merged
        .classes
        .iter()
        .map(|c| {
            json!({
                "class": c.class.as_ref().map(|x| x.representative.clone()),
                "sequence": to_value(&SequenceFile::of(&c.sequence)),
            })
        })
        .collect();
    let count = merged.classes.len();
    Ok(Outcome::ok(json!({
        "degree": n,
        "classes": count,
        "summary": format!("{count} classes"),
        "complete": merged.complete,
        "oracle_order": merged.oracle_order,
        "representatives": reps,
    })))
}

pub fn oracle(ring: usize, k_name: &str, q_name: &str, n: usize) -> Result<Outcome> {
    let (k, q) = (module(ring, k_name)?, module(ring, q_name)?);
    let g = ExtGroup::new(&q, &k, n)?;
    let reps: Vec<Vec<usize>> = g.classes().into_iter().map(|c| c.representative).collect();
    Ok(Outcome::ok(json!({
        "degree": n,
        "order": g.order(),
        "classes": reps,
        "resolution": to_value(&ResolutionFile::of(g.resolution())),
    })))
}
