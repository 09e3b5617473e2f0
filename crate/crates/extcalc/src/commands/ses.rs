use std::path::Path;

use serde_json::json;

use extcalc_core::ext1::{are_equivalent, canonical_form, is_central, pullback_ses, validate_ses};
use extcalc_core::Error;

use super::{algebra, load_ses, variety, Settings};
use crate::error::Result;
use crate::format::{read_json, to_value, FormFile, HomFile, SesFile};
use crate::parallel;
use crate::random::random_ses;
use crate::report::Outcome;

pub fn validate(path: &Path, s: &Settings) -> Result<Outcome> {
    let (k, q) = read_json::<SesFile>(path)?.maps(&s.limits)?;
    match validate_ses(&k, &q) {
        Ok(e) => Ok(Outcome::ok(json!({
            "exact": true,
            "sizes": [e.kernel_object().size(), e.middle().size(), e.base().size()],
        }))),
        Err(err @ Error::NotExact(_)) => Ok(Outcome::failed(json!({
            "exact": false,
            "reason": err.to_string(),
        }))),
        Err(err) => Err(err.into()),
    }
}

fn witness_of(e: &extcalc_core::ext1::ShortExactSeq) -> Result<extcalc_core::algebra::SemiAbelianWitness> {
    let v = e.middle().variety();
    Ok(v.witness()
        .ok_or_else(|| Error::MissingWitness(v.name().into()))?
        .clone())
}

pub fn canon(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(path, s)?;
    let f = canonical_form(&e, &witness_of(&e)?)?;
    Ok(Outcome::ok(json!({ "form": to_value(&FormFile::of(&f, e.middle().variety())) })))
}

pub fn equiv(a: &Path, b: &Path, s: &Settings) -> Result<Outcome> {
    let (e1, e2) = (load_ses(a, s)?, load_ses(b, s)?);
    let w = witness_of(&e1)?;
    let same = are_equivalent(&e1, &e2, &w)?;
    let codes = [canonical_form(&e1, &w)?, canonical_form(&e2, &w)?].map(|f| hex::encode(f.code));
    Ok(Outcome::ok(json!({
        "equivalent": same,
        "verdict": if same { "equivalent" } else { "inequivalent" },
        "codes": codes,
    })))
}

pub fn enumerate(
    variety_name: &str,
    k_name: &str,
    q_name: &str,
    carriers: Option<&[usize]>,
    s: &Settings,
) -> Result<Outcome> {
    let v = variety(variety_name)?;
    let (k, q) = (algebra(&v, k_name)?, algebra(&v, q_name)?);
    let forms = parallel::enumerate_ext1(&q, &k, carriers, &s.limits, s.workers)?;
    let files: Vec<_> = forms.iter().map(|f| to_value(&FormFile::of(f, &v))).collect();
    Ok(Outcome::ok(json!({
        "variety": v.name(),
        "K": k_name,
        "Q": q_name,
        "count": forms.len(),
        "summary": format!("{} classes", forms.len()),
        "forms": files,
    })))
}

pub fn central(path: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(path, s)?;
    Ok(Outcome::ok(json!({ "central": is_central(&e)? })))
}

pub fn pullback(ses: &Path, eta: &Path, s: &Settings) -> Result<Outcome> {
    let e = load_ses(ses, s)?;
    let eta = read_json::<HomFile>(eta)?.load(&s.limits)?;
    let p = pullback_ses(&e, &eta)?;
    Ok(Outcome::ok(to_value(&SesFile::of(&p))))
}

pub fn random(variety_name: &str, max_size: usize, s: &Settings) -> Result<Outcome> {
    let v = variety(variety_name)?;
    let e = random_ses(&mut s.rng(), &v, max_size)?;
    Ok(Outcome::ok(to_value(&SesFile::of(&e))))
}

