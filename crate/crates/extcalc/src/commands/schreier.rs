use std::path::Path;

use serde_json::json;

use extcalc_core::algebra::VarietyPresentation;
use extcalc_core::schreier::{
    are_equivalent_schreier, canonical_form_schreier, is_schreier, schreier_retract, SchreierCheck,
};
use extcalc_core::Error;

use super::{algebra, load_ses, Settings};
use crate::error::Result;
use crate::format::{to_value, FormFile};
use crate::parallel;
use crate::report::Outcome;

pub fn check(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(path, s)?;
    Ok(Outcome::ok(match is_schreier(&e)? {
        SchreierCheck::Schreier(d) => json!({
            "schreier": true,
            "section": d.section,
            "retraction": d.retraction,
        }),
        SchreierCheck::NotSchreier { fiber } => json!({ "schreier": false, "fiber": fiber }),
    }))
}

pub fn maps(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(path, s)?;
    let d = match is_schreier(&e)? {
        SchreierCheck::Schreier(d) => d,
        SchreierCheck::NotSchreier { fiber } => return Err(Error::NotSchreier { fiber }.into()),
    };
    let r = schreier_retract(&e, &d)?;
    Ok(Outcome::ok(json!({
        "section": d.section,
        "retraction": d.retraction,
        "phi": r.phi,
        "psi": r.psi,
    })))
}

pub fn canon(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(path, s)?;
    let f = canonical_form_schreier(&e)?;
    Ok(Outcome::ok(json!({ "form": to_value(&FormFile::of(&f, e.middle().variety())) })))
}

pub fn enumerate(k_name: &str, q_name: &str, s: &Settings) -> Result<Outcome> {
    let v = VarietyPresentation::monoids();
    let (k, q) = (algebra(&v, k_name)?, algebra(&v, q_name)?);
    let c = parallel::enumerate_schreier(&q, &k, &s.limits, s.workers)?;
    let forms: Vec<_> = c.forms.iter().map(|f| to_value(&FormFile::of(f, &v))).collect();
    Ok(Outcome::ok(json!({
        "K": k_name,
        "Q": q_name,
        "count": c.classes.len(),
        "summary": format!("{} classes", c.classes.len()),
        "classes": c.classes,
        "forms": forms,
    })))
}

pub fn equiv(a: &Path, b: &Path, s: &Settings) -> Result<Outcome> {
    let (e1, e2) = (load_ses(a, s)?, load_ses(b, s)?);
    let same = are_equivalent_schreier(&e1, &e2, &s.limits)?;
    Ok(Outcome::ok(json!({
        "equivalent": same,
        "verdict": if same { "equivalent" } else { "inequivalent" },
    })))
}
