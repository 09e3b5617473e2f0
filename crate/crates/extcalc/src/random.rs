//! Random valid short exact sequences and 3×3 diagrams from small named
//! algebras, quotients by random congruences and random relabelings.

use rand::seq::SliceRandom;
use rand::Rng;

use extcalc_core::algebra::builtins::named;
use extcalc_core::algebra::{
    congruence_closure, kernel, quotient, Alg, Homomorphism, Variety, VarietyKind,
};
use extcalc_core::double_ext::ThreeByThree;
use extcalc_core::ext1::{validate_ses, ShortExactSeq};
use extcalc_core::Result;

/// Named algebras of `variety` with at most `max_size` elements used as
/// middle objects.
pub fn middles(variety: &Variety, max_size: usize) -> Vec<Alg> {
    let names: &[&str] = match variety.kind() {
        VarietyKind::Loop => &["Z2", "Z3", "Z4", "L5", "L6", "Z7", "Z2xL5", "L6xZ2", "Z3xL5", "L5xZ2"],
        VarietyKind::Module { .. } => &["Z2", "Z4", "Z2xZ2", "Z2xZ4", "Z4xZ4", "Z2xZ2xZ4"],
        _ => &[
            "Z2", "Z3", "Z4", "Klein", "Z6", "S3", "Z8", "D4", "Q8", "Z2xZ4", "Z2xZ2xZ2", "Z9",
            "Z3xZ3", "Z2xS3", "Z12", "Z2xD4", "Z4xZ4", "Z2xQ8", "Z16",
        ],
    };
    names
        .iter()
        .filter_map(|n| named(variety, n).ok())
        .filter(|a| a.size() <= max_size)
        .collect()
}

/// A permutation of `{0..n-1}` fixing `0`.
pub fn random_pointed_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    if n > 1 {
        p[1..].shuffle(rng);
    }
    p
}

/// The quotient of `x` by the congruence generated by `(g, 0)` for one or
/// two random elements `g`.
pub fn random_quotient(rng: &mut impl Rng, x: &Alg) -> Result<Homomorphism> {
    let gens = rng.gen_range(1..=2);
    let pairs: Vec<(usize, usize)> = (0..gens).map(|_| (rng.gen_range(0..x.size()), 0)).collect();
    let c = congruence_closure(x, &pairs)?;
    Ok(quotient(x, &c)?.1)
}

/// `ker q → X → X/θ` for a random `X` and congruence `θ`, with `X`
/// relabeled at random. Needs a variety where every surjection is a
/// cokernel (one with a semi-abelian witness).
pub fn random_ses(rng: &mut impl Rng, variety: &Variety, max_size: usize) -> Result<ShortExactSeq> {
    let pool = middles(variety, max_size);
    let x = pool.choose(rng).expect("nonempty pool").clone();
    let q = random_quotient(rng, &x)?;
    let e = validate_ses(&kernel(&q)?, &q)?;
    e.relabel(&random_pointed_permutation(rng, x.size()))
}

/// A valid 3×3 diagram built from two random quotients of a random `Y`,
/// relabeled object by object; retried until the nine carriers add up to at
/// most `max_total`.
pub fn random_3x3(rng: &mut impl Rng, variety: &Variety, max_total: usize) -> Result<ThreeByThree> {
    let pool = middles(variety, 16);
    loop {
        let y = pool.choose(rng).expect("nonempty pool").clone();
        let d = ThreeByThree::from_quotients(&random_quotient(rng, &y)?, &random_quotient(rng, &y)?)?;
        if d.total_size() > max_total {
            continue;
        }
        let perms: Vec<Vec<usize>> = (0..9)
            .map(|i| random_pointed_permutation(rng, d.object(i / 3, i % 3).size()))
            .collect();
        return d.relabel(&perms);
    }
}
