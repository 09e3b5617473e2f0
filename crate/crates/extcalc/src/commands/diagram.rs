use std::path::Path;

use serde_json::json;

use extcalc_core::double_ext::{
    decompose_3x3, double_syzygy, is_regular_pushout, reconstruct_3x3, reduce_2ext, validate_3x3,
    CellFailure, ThreeByThree,
};

use super::{variety, Settings};
use crate::error::Result;
use crate::format::{read_json, to_value, DecompositionFile, SesFile, ThreeByThreeFile};
use crate::random::random_3x3;
use crate::report::Outcome;

fn load(path: &Path, s: &Settings) -> Result<ThreeByThree> {
    read_json::<ThreeByThreeFile>(path)?.load(&s.limits)
}

fn describe(f: &CellFailure) -> String {
    match f {
        CellFailure::Row { index, error } => format!("row {index}: {error}"),
        CellFailure::Column { index, error } => format!("column {index}: {error}"),
        CellFailure::Square { row, col } => format!("square at ({row}, {col}) does not commute"),
    }
}

pub fn validate(path: &Path, s: &Settings) -> Result<Outcome> {
    let d = load(path, s)?;
    let r = validate_3x3(&d);
    let failures: Vec<String> = r.failures.iter().map(describe).collect();
    let body = json!({ "valid": r.is_valid(), "failures": failures });
    Ok(if r.is_valid() {
        Outcome::ok(body)
    } else {
        Outcome::failed(body)
    })
}

pub fn pushout(path: &Path, s: &Settings) -> Result<Outcome> {
    let d = load(path, s)?;
    Ok(Outcome::ok(json!({ "regular_pushout": is_regular_pushout(&d) })))
}

pub fn decompose(path: &Path, s: &Settings) -> Result<Outcome> {
    let d = load(path, s)?;
    let dec = decompose_3x3(&d)?;
    let roundtrip = reconstruct_3x3(&dec)? == d.normalized()?;
    Ok(Outcome::ok(json!({
        "decomposition": to_value(&DecompositionFile::of(&dec)),
        "roundtrip": roundtrip,
    })))
}

pub fn reduce(path: &Path, s: &Settings) -> Result<Outcome> {
    let d = load(path, s)?;
    let ds = double_syzygy(d.q())?;
    let e = reduce_2ext(&d, &ds)?;
    Ok(Outcome::ok(json!({
        "pullback_size": ds.pullback.size(),
        "ses": to_value(&SesFile::of(&e)),
    })))
}

pub fn random(variety_name: &str, max_total: usize, s: &Settings) -> Result<Outcome> {
    let v = variety(variety_name)?;
    let d = random_3x3(&mut s.rng(), &v, max_total)?;
    Ok(Outcome::ok(to_value(&ThreeByThreeFile::of(&d))))
}
