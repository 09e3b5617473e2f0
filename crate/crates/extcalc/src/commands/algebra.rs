use std::path::Path;

use serde_json::json;

use extcalc_core::algebra::{
    is_normal_epi, is_normal_mono, kernel, normal_image_factorization, verify_witness, Homomorphism,
};
use extcalc_core::Error;

use super::{algebra, variety, Settings};
use crate::error::Result;
use crate::format::{equation_text, read_json, to_value, AlgebraFile, HomFile};
use crate::report::Outcome;

/// Checks every defining equation; status 3 names the first violated instance.
pub fn validate(path: &Path, s: &Settings) -> Result<Outcome> {
    let a = read_json::<AlgebraFile>(path)?.load_unchecked()?;
    let v = a.variety();
    match a.check_equations(s.limits.max_carrier) {
        Ok(()) => Ok(Outcome::ok(json!({
            "valid": true,
            "variety": v.name(),
            "size": a.size(),
        }))),
        Err(Error::EquationViolated {
            equation,
            assignment,
            lhs,
            rhs,
        }) => Ok(Outcome::failed(json!({
            "valid": false,
            "variety": v.name(),
            "size": a.size(),
            "violation": {
                "equation": equation_text(v, &v.equations()[equation]),
                "assignment": assignment,
                "lhs": lhs,
                "rhs": rhs,
            },
        }))),
        Err(e) => Err(e.into()),
    }
}

/// Checks the variety's semi-abelian witness on the algebra.
pub fn witness(path: &Path, s: &Settings) -> Result<Outcome> {
    let a = read_json::<AlgebraFile>(path)?.load(&s.limits)?;
    let report = verify_witness(a.variety(), &a)?;
    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    let body = json!({
        "passed": report.passed(),
        "variety": a.variety().name(),
        "size": a.size(),
        "violations": violations,
    });
    Ok(if report.passed() {
        Outcome::ok(body)
    } else {
        Outcome::failed(body)
    })
}

/// Prints a built-in algebra in file form.
pub fn show(variety_name: &str, name: &str) -> Result<Outcome> {
    let a = algebra(&variety(variety_name)?, name)?;
    Ok(Outcome::ok(to_value(&AlgebraFile::of(&a))))
}

/// Properties of a map between two algebras.
pub fn hom(path: &Path, s: &Settings) -> Result<Outcome> {
    let file = read_json::<HomFile>(path)?;
    let f = Homomorphism::unchecked(file.dom.load(&s.limits)?, file.cod.load(&s.limits)?, file.map)?;
    if !f.is_homomorphism() {
        return Ok(Outcome::failed(json!({ "homomorphism": false })));
    }
    let ker: Vec<usize> = kernel(&f).map(|k| k.map().to_vec()).unwrap_or_default();
    Ok(Outcome::ok(json!({
        "homomorphism": true,
        "injective": f.is_injective(),
        "surjective": f.is_surjective(),
        "image": f.image(),
        "kernel": ker,
        "normal_mono": is_normal_mono(&f),
        "normal_epi": is_normal_epi(&f),
        "normal_image_factorization": normal_image_factorization(&f).is_some(),
    })))
}
