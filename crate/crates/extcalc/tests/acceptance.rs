//! The nine acceptance criteria, one PASS/FAIL line each.
//!
//! The lines go to stderr even when output is captured. The test fails if
//! any criterion does.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use extcalc::random::{random_3x3, random_pointed_permutation, random_ses};
use extcalc_core::algebra::builtins::{cyclic, named, small_catalogue};
use extcalc_core::algebra::{
    verify_witness, verify_witness_terms, Alg, SemiAbelianWitness, Variety, VarietyPresentation,
};
use extcalc_core::double_ext::{decompose_3x3, is_regular_pushout, reconstruct_3x3, validate_3x3};
use extcalc_core::ext1::{
    canonical_form, enumerate_ext1, pullback_ses, retract_maps, Section, ShortExactSeq,
};
use extcalc_core::long_exact::{
    classify_extn, ext_via_resolution, pullback_reduce, splice, syzygy, yoneda_class_of,
    ExactSequence,
};
use extcalc_core::schreier::{check_sp_characterisation, enumerate_schreier, is_schreier, SchreierCheck};
use extcalc_core::Limits;
use extcalc_oracles::{
    abelian_ext_order, associative_tables_up_to_iso, cyclic_table, exists_sp_data, find_ses_iso,
    group_extension_classes, maps_into_base, sequences_of,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("took {t:.1?}, budget {budget:?}"))
}

fn op_table<'a>(a: &'a Alg, name: &str) -> &'a [usize] {
    a.table(a.variety().op(name).expect("operation"))
}

/// 1. Witnesses on the catalogue, plus a broken one.
fn witness_suite() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for v in [
        VarietyPresentation::groups(),
        VarietyPresentation::abelian_groups(),
        VarietyPresentation::loops(),
        VarietyPresentation::modules(4),
    ] {
        let w = v.witness().expect("semi-abelian").clone();
        for (name, a) in small_catalogue(&v).into_iter().filter(|(_, a)| a.size() <= 8) {
            let r = verify_witness(&v, &a).map_err(e2s)?;
            ensure(r.passed(), || format!("{} {name}: {:?}", v.name(), r.violations))?;
            // β(0,…,0,y) = y, evaluated directly.
            for y in 0..a.size() {
                let mut args = vec![0; w.ell()];
                args.push(y);
                let got = a.eval_term(&w.beta, &args).map_err(e2s)?;
                ensure(got == y, || format!("{} {name}: beta(0, {y}) = {got}", v.name()))?;
            }
            checked += 1;
        }
    }
    let g = VarietyPresentation::groups();
    let broken = SemiAbelianWitness::parse(g.signature(), &["mul(y, inv(x))"], "mul(z, t)").map_err(e2s)?;
    let z3 = cyclic(&g, 3).map_err(e2s)?;
    let r = verify_witness_terms(&broken, &z3).map_err(e2s)?;
    let first = r.violations.first().ok_or("broken witness accepted on Z3")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{checked} algebras; broken witness rejected: {first}"))
}

fn random_section(rng: &mut impl Rng, e: &ShortExactSeq) -> Section {
    let fibers = e.fibers();
    let map = fibers
        .iter()
        .enumerate()
        .map(|(v, f)| if v == 0 { 0 } else { f[rng.gen_range(0..f.len())] })
        .collect();
    Section { map }
}

/// 2. The five retract identities on random sequences.
fn retract_roundtrip() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let varieties = [
        VarietyPresentation::groups(),
        VarietyPresentation::loops(),
        VarietyPresentation::modules(4),
    ];
    let mut failures = 0;
    for i in 0..500 {
        let v = &varieties[i % 3];
        let e = random_ses(&mut rng, v, 16).map_err(e2s)?;
        let s = random_section(&mut rng, &e);
        let r = retract_maps(&e, &s, v.witness().expect("witness")).map_err(e2s)?;
        if !r.failures(&e).is_empty() {
            failures += 1;
        }
    }
    ensure(failures == 0, || format!("{failures} of 500 sequences fail"))?;
    within(start, Duration::from_secs(10))?;
    Ok("500 sequences, 0 failures".into())
}

fn group(name: &str) -> Alg {
    named(&VarietyPresentation::groups(), name).expect("built-in group")
}

/// 3. Canonical-form equality against the isomorphism oracle.
fn canonical_soundness() -> Check {
    let start = Instant::now();
    let by_order: BTreeMap<usize, Vec<&str>> = [
        (1, vec!["0"]),
        (2, vec!["Z2"]),
        (3, vec!["Z3"]),
        (4, vec!["Z4", "Klein"]),
    ]
    .into_iter()
    .collect();
    let w = VarietyPresentation::groups().witness().expect("witness").clone();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pairs, mut seqs) = (0usize, 0usize);
    for (&nk, ks) in &by_order {
        for (&nq, qs) in &by_order {
            if nk * nq > 8 {
                continue;
            }
            for (kn, qn) in ks.iter().flat_map(|k| qs.iter().map(move |q| (*k, *q))) {
                let (k, q) = (group(kn), group(qn));
                let forms = enumerate_ext1(&q, &k, &Limits::default()).map_err(e2s)?;
                let mut all: Vec<ShortExactSeq> = Vec::new();
                for f in &forms {
                    let e = f.to_ses(&k, &q).map_err(e2s)?;
                    for _ in 0..2 {
                        let p = random_pointed_permutation(&mut rng, e.middle().size());
                        all.push(e.relabel(&p).map_err(e2s)?);
                    }
                    all.push(e);
                }
                let codes: Vec<Vec<u8>> = all
                    .iter()
                    .map(|e| canonical_form(e, &w).map(|f| f.code))
                    .collect::<Result<_, _>>()
                    .map_err(e2s)?;
                for i in 0..all.len() {
                    for j in 0..all.len() {
                        let same = codes[i] == codes[j];
                        let iso = find_ses_iso(&all[i], &all[j]).is_some();
                        ensure(same == iso, || {
                            format!("K={kn} Q={qn}: canonical {same}, oracle {iso} for #{i}, #{j}")
                        })?;
                        pairs += 1;
                    }
                }
                seqs += all.len();
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{seqs} sequences, {pairs} ordered pairs, 0 discrepancies"))
}

/// 4. Class counts against the cocycle and table oracles, and `K = 0`.
fn class_counts() -> Check {
    let lim = Limits::default();
    let ab = VarietyPresentation::abelian_groups();
    let z2 = cyclic(&ab, 2).map_err(e2s)?;
    let got = enumerate_ext1(&z2, &z2, &lim).map_err(e2s)?.len();
    let oracle = abelian_ext_order(2, &cyclic_table(2), 2, &cyclic_table(2));
    ensure(got == 2 && oracle == 2, || format!("abelian Z2,Z2: {got} vs oracle {oracle}"))?;

    let (z2, z3) = (group("Z2"), group("Z3"));
    let got = enumerate_ext1(&z2, &z3, &lim).map_err(e2s)?.len();
    let oracle = group_extension_classes(3, op_table(&z3, "mul"), 2, op_table(&z2, "mul"));
    ensure(got == 2 && oracle == 2, || format!("groups Z3,Z2: {got} vs oracle {oracle}"))?;

    let mut zero_cases = 0;
    let semi: [Variety; 4] = [
        VarietyPresentation::groups(),
        ab,
        VarietyPresentation::loops(),
        VarietyPresentation::modules(4),
    ];
    for v in &semi {
        let zero = named(v, "0").map_err(e2s)?;
        for qn in ["Z2", "Z3", "Z4"] {
            let Ok(q) = named(v, qn) else { continue };
            let n = enumerate_ext1(&q, &zero, &lim).map_err(e2s)?.len();
            ensure(n == 1, || format!("{} K=0 Q={qn}: {n} classes", v.name()))?;
            zero_cases += 1;
        }
    }
    let m = VarietyPresentation::monoids();
    let zero = named(&m, "0").map_err(e2s)?;
    for qn in ["Z2", "Z3", "semilattice2", "trunc3"] {
        let q = named(&m, qn).map_err(e2s)?;
        let n = enumerate_schreier(&q, &zero, &lim).map_err(e2s)?.classes.len();
        ensure(n == 1, || format!("monoids K=0 Q={qn}: {n} classes"))?;
        zero_cases += 1;
    }
    Ok(format!("abelian Z2,Z2 = 2; groups Z3,Z2 = 2; K=0 gives 1 in {zero_cases} cases"))
}

fn module_reps(v: &Variety, names: &[&str]) -> Result<BTreeMap<(usize, usize), Vec<ExactSequence>>, String> {
    let objs: Vec<Alg> = names.iter().map(|n| named(v, n)).collect::<Result<_, _>>().map_err(e2s)?;
    let mut out = BTreeMap::new();
    for (i, k) in objs.iter().enumerate() {
        for (j, q) in objs.iter().enumerate() {
            let forms = enumerate_ext1(q, k, &Limits::default()).map_err(e2s)?;
            let seqs = forms
                .iter()
                .map(|f| f.to_ses(k, q).map(|e| ExactSequence::from_ses(&e)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(e2s)?;
            out.insert((i, j), seqs);
        }
    }
    Ok(out)
}

/// 5. Reducing along the syzygy and splicing back keeps the Yoneda class.
fn syzygy_surjectivity() -> Check {
    let start = Instant::now();
    let v = VarietyPresentation::modules(4);
    let names = ["0", "Z2", "Z4", "Z2xZ2"];
    let reps = module_reps(&v, &names)?;
    let ends = 0..names.len();
    let mut long: Vec<ExactSequence> = Vec::new();
    for a in ends.clone() {
        for b in ends.clone() {
            for c in ends.clone() {
                for x in &reps[&(a, b)] {
                    for y in &reps[&(b, c)] {
                        let xy = splice(x, y).map_err(e2s)?;
                        for d in ends.clone() {
                            for z in &reps[&(c, d)] {
                                long.push(splice(&xy, z).map_err(e2s)?);
                            }
                        }
                        long.push(xy);
                    }
                }
            }
        }
    }
    let mut failures = Vec::new();
    for e in &long {
        let s = syzygy(e.base()).map_err(e2s)?;
        let r = pullback_reduce(e, &s).map_err(e2s)?;
        let back = splice(&r, &s.sequence()).map_err(e2s)?;
        if yoneda_class_of(&back).map_err(e2s)? != yoneda_class_of(e).map_err(e2s)? {
            failures.push(e.len());
        }
    }
    ensure(failures.is_empty(), || format!("{} of {} sequences change class", failures.len(), long.len()))?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} sequences of length 2 and 3, 0 failures", long.len()))
}

/// 6. `classify_extn` against the resolution.
fn ext_oracle() -> Check {
    let v = VarietyPresentation::modules(4);
    let z2 = cyclic(&v, 2).map_err(e2s)?;
    let mut found = Vec::new();
    for n in 1..=3 {
        let c = classify_extn(&z2, &z2, n, &Limits::default()).map_err(e2s)?;
        let g = ext_via_resolution(&z2, &z2, n).map_err(e2s)?;
        ensure(c.classes.len() == 2 && g.order() == 2, || {
            format!("n={n}: {} classes, oracle order {}", c.classes.len(), g.order())
        })?;
        let hit: BTreeSet<Vec<usize>> = c
            .classes
            .iter()
            .map(|r| yoneda_class_of(&r.sequence).map(|x| x.representative))
            .collect::<Result<_, _>>()
            .map_err(e2s)?;
        let all: BTreeSet<Vec<usize>> = g.classes().into_iter().map(|x| x.representative).collect();
        ensure(hit == all, || format!("n={n}: spliced representatives hit {hit:?} of {all:?}"))?;
        found.push(c.classes.len());
    }
    Ok(format!("classes for n=1,2,3: {found:?}, oracle order 2 each"))
}

/// 7. 3×3 decomposition roundtrips and the regular pushout.
fn three_by_three() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let varieties = [
        VarietyPresentation::groups(),
        VarietyPresentation::loops(),
        VarietyPresentation::modules(4),
    ];
    for i in 0..50 {
        let d = random_3x3(&mut rng, &varieties[i % 3], 64).map_err(e2s)?;
        ensure(validate_3x3(&d).is_valid(), || format!("diagram {i} is not valid"))?;
        let dec = decompose_3x3(&d).map_err(e2s)?;
        let back = reconstruct_3x3(&dec).map_err(e2s)?;
        ensure(back == d.normalized().map_err(e2s)?, || format!("diagram {i}: reconstruction differs"))?;
        ensure(decompose_3x3(&back).map_err(e2s)? == dec, || format!("diagram {i}: decomposition differs"))?;
        ensure(is_regular_pushout(&d), || format!("diagram {i}: not a regular pushout"))?;
    }
    Ok("50 diagrams, 0 failures".into())
}

/// 8. Schreier: definition against brute-force `(s, p)`, sizes, pullbacks,
///    the count for `ℤ/2, ℤ/2`.
fn schreier_suite() -> Check {
    let start = Instant::now();
    let m = VarietyPresentation::monoids();
    let small: Vec<(usize, Vec<usize>)> = (1..=3)
        .flat_map(|n| associative_tables_up_to_iso(n, false).into_iter().map(move |t| (n, t)))
        .collect();
    let (mut total, mut schreier, mut pullbacks) = (0, 0, 0);
    for n in 1..=6 {
        for t in associative_tables_up_to_iso(n, false) {
            let x = std::sync::Arc::new(
                extcalc_core::algebra::FiniteAlgebra::new(m.clone(), n, vec![vec![0], t]).map_err(e2s)?,
            );
            for e in sequences_of(&x).map_err(e2s)? {
                total += 1;
                let def = is_schreier(&e).map_err(e2s)?;
                let brute = exists_sp_data(&e);
                ensure(def.is_schreier() == brute, || {
                    format!("|X|={n}: definition {} vs (s,p) {brute}", def.is_schreier())
                })?;
                let SchreierCheck::Schreier(d) = def else { continue };
                schreier += 1;
                ensure(check_sp_characterisation(&e, &d).map_err(e2s)?, || {
                    format!("|X|={n}: transversal data fails the (s,p) identities")
                })?;
                let (nk, nq) = (e.kernel_object().size(), e.base().size());
                ensure(n == nk * nq, || format!("|X|={n} but |K||Q|={}", nk * nq))?;
                for (mq, qt) in &small {
                    for eta in maps_into_base(&e, *mq, qt).map_err(e2s)? {
                        let p = pullback_ses(&e, &eta).map_err(e2s)?;
                        ensure(is_schreier(&p).map_err(e2s)?.is_schreier(), || {
                            format!("|X|={n}: pullback along {:?} is not Schreier", eta.map())
                        })?;
                        pullbacks += 1;
                    }
                }
            }
        }
    }
    let z2 = named(&m, "Z2").map_err(e2s)?;
    let got = enumerate_schreier(&z2, &z2, &Limits::default()).map_err(e2s)?.classes.len();
    let g2 = group("Z2");
    let oracle = group_extension_classes(2, op_table(&g2, "mul"), 2, op_table(&g2, "mul"));
    ensure(got == 2 && oracle == 2, || format!("Z2,Z2: {got} Schreier classes, group oracle {oracle}"))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{total} sequences, {schreier} Schreier, {pullbacks} pullbacks; Z2,Z2 gives {got}"
    ))
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn cmd(parts: &[&str]) -> Vec<String> {
    parts.iter().map(|p| p.to_string()).collect()
}

/// Every subcommand with arguments that make it do real work.
fn cli_invocations() -> Vec<Vec<String>> {
    let d = data;
    vec![
        cmd(&["algebra", "validate", &d("s3.json")]),
        cmd(&["algebra", "validate", &d("bad_table.json")]),
        cmd(&["algebra", "witness", &d("s3.json")]),
        cmd(&["algebra", "show", "Q8"]),
        cmd(&["algebra", "hom", &d("id_z2.json")]),
        cmd(&["ses", "validate", &d("z4_over_z2.json")]),
        cmd(&["ses", "validate", &d("not_exact.json")]),
        cmd(&["ses", "canon", &d("z4_over_z2_relabeled.json")]),
        cmd(&["ses", "equiv", &d("z4_over_z2.json"), &d("klein_over_z2.json")]),
        cmd(&["ses", "enum", "--variety", "groups", "--K", "Z2", "--Q", "Klein"]),
        cmd(&["ses", "enum", "--variety", "loops", "--K", "Z2", "--Q", "Z3"]),
        cmd(&["ses", "central", &d("klein_over_z2.json")]),
        cmd(&["ses", "pullback", &d("z4_over_z2.json"), &d("id_z2.json")]),
        cmd(&["ses", "random", "--variety", "loops", "--seed", "9"]),
        cmd(&["ext", "validate", &d("mod_length2.json")]),
        cmd(&["ext", "splice", &d("mod_nonsplit.json"), &d("mod_length2.json")]),
        cmd(&["ext", "syzygy", "--ring", "4", "--Q", "Z2xZ2", "--depth", "3"]),
        cmd(&["ext", "reduce", &d("mod_length2.json")]),
        cmd(&["ext", "classes", "--ring", "4", "--K", "Z2", "--Q", "Z2", "--n", "3"]),
        cmd(&["ext", "oracle", "--ring", "4", "--K", "Z2", "--Q", "Z2xZ2", "--n", "2"]),
        cmd(&["threebythree", "validate", &d("diagram.json")]),
        cmd(&["threebythree", "pushout", &d("diagram.json")]),
        cmd(&["threebythree", "decompose", &d("diagram.json")]),
        cmd(&["threebythree", "reduce", &d("diagram_mod.json")]),
        cmd(&["threebythree", "random", "--variety", "groups", "--seed", "4"]),
        cmd(&["schreier", "check", &d("monoid_z4_over_z2.json")]),
        cmd(&["schreier", "maps", &d("monoid_z4_over_z2.json")]),
        cmd(&["schreier", "canon", &d("monoid_z4_over_z2.json")]),
        cmd(&["schreier", "enum", "--K", "Z2", "--Q", "Z3"]),
        cmd(&["schreier", "equiv", &d("monoid_z4_over_z2.json"), &d("monoid_z4_over_z2.json")]),
    ]
}

fn run_cli(args: &[String], workers: usize) -> Result<(Vec<u8>, Option<i32>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_extcalc"))
        .args(args)
        .args(["--workers", &workers.to_string()])
        .env_remove("EXTCALC_LIMITS")
        .output()
        .map_err(e2s)?;
    Ok((out.stdout, out.status.code()))
}

/// 9. Byte-identical reports across runs and worker counts.
fn determinism() -> Check {
    let cmds = cli_invocations();
    for args in &cmds {
        let first = run_cli(args, 1)?;
        ensure(!first.0.is_empty(), || format!("`{}` printed nothing", args.join(" ")))?;
        for workers in [1, 1, 4, 4, 4] {
            let again = run_cli(args, workers)?;
            ensure(again == first, || {
                format!("`{}` differs with --workers {workers}", args.join(" "))
            })?;
        }
    }
    Ok(format!("{} commands, 3 runs each at --workers 1 and 4", cmds.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("witness suite", witness_suite),
        ("retract roundtrip", retract_roundtrip),
        ("canonical form vs isomorphism oracle", canonical_soundness),
        ("class counts", class_counts),
        ("syzygy reduction keeps the Yoneda class", syzygy_surjectivity),
        ("Ext oracle agreement", ext_oracle),
        ("3x3 roundtrip", three_by_three),
        ("Schreier suite", schreier_suite),
        ("CLI determinism", determinism),
    ];
    // Straight to the stderr handle: libtest's capture only sees the print
    // macros, and these lines should show without `--nocapture`.
    let mut out = std::io::stderr().lock();
    let _ = writeln!(out);
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        match &r {
            Ok(detail) => {
                let _ = writeln!(out, "PASS {} {name} ({t:.2?}): {detail}", i + 1);
            }
            Err(why) => {
                let _ = writeln!(out, "FAIL {} {name} ({t:.2?}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
