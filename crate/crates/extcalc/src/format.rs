//! JSON file formats.
//!
//! * algebra: `{"variety": name-or-presentation, "size": n, "tables": {op: [..]}}`,
//!   or `{"variety": .., "name": "Z4"}` for a built-in algebra;
//! * homomorphism: `{"dom": algebra, "cod": algebra, "map": [..]}`;
//! * short exact sequence: `{"k": hom, "q": hom}`;
//! * exact sequence: `{"maps": [hom, ..]}`, longest map first;
//! * 3×3 diagram: `{"objects": [[algebra; 3]; 3], "rows": [[map; 2]; 3], "cols": [[map; 2]; 3]}`;
//! * canonical form: `{"ell", "subset", "tables", "kmap", "code"}` (code in hex).
//!
//! Tables are flat and row-major over argument tuples. Output keys are
//! sorted because reports go through `serde_json::Value`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use extcalc_core::algebra::builtins::named;
use extcalc_core::algebra::{
    same_algebra, Alg, Equation, FiniteAlgebra, Homomorphism, SemiAbelianWitness, Term, Variety,
    VarietyKind, VarietyPresentation,
};
use extcalc_core::double_ext::{Decomposition, ThreeByThree};
use extcalc_core::ext1::{validate_ses, CanonicalForm, ShortExactSeq};
use extcalc_core::long_exact::{validate_exact_sequence, ExactSequence, Matrix, Resolution};
use extcalc_core::{Error, Limits};

use crate::error::{CliError, Result};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

/// A variety by built-in name or spelled out.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum VarietySpec {
    Name(String),
    Inline(PresentationFile),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationFile {
    pub name: String,
    /// `[name, arity]` in order; the first must be the constant `0`.
    pub operations: Vec<(String, usize)>,
    pub equations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessFile {
    pub alphas: Vec<String>,
    pub beta: String,
}

impl VarietySpec {
    pub fn resolve(&self) -> Result<Variety> {
        match self {
            VarietySpec::Name(n) => Ok(VarietyPresentation::builtin(n)?),
            VarietySpec::Inline(p) => {
                let ops: Vec<(&str, usize)> =
                    p.operations.iter().map(|(n, a)| (n.as_str(), *a)).collect();
                let eqs: Vec<&str> = p.equations.iter().map(String::as_str).collect();
                let alphas: Vec<&str> = p
                    .witness
                    .iter()
                    .flat_map(|w| w.alphas.iter().map(String::as_str))
                    .collect();
                let witness = p.witness.as_ref().map(|w| (alphas.as_slice(), w.beta.as_str()));
                Ok(Arc::new(VarietyPresentation::parse(
                    p.name.as_str(),
                    VarietyKind::Custom,
                    &ops,
                    &eqs,
                    witness,
                )?))
            }
        }
    }

    pub fn of(v: &Variety) -> Self {
        if v.kind() != VarietyKind::Custom {
            return VarietySpec::Name(v.name().into());
        }
        let sig = v.signature();
        VarietySpec::Inline(PresentationFile {
            name: v.name().into(),
            operations: (0..sig.len()).map(|i| (sig.name(i).into(), sig.arity(i))).collect(),
            equations: v.equations().iter().map(|e| equation_text(v, e)).collect(),
            witness: v.witness().map(|w: &SemiAbelianWitness| {
                let betas: Vec<String> = (1..=w.ell())
                    .map(|i| format!("z{i}"))
                    .chain(std::iter::once("t".into()))
                    .collect();
                WitnessFile {
                    alphas: w.alphas.iter().map(|a| term_text(v, a, &|i| ["x", "y"][i].into())).collect(),
                    beta: term_text(v, &w.beta, &|i| betas[i].clone()),
                }
            }),
        })
    }
}

fn term_text(v: &Variety, t: &Term, name: &dyn Fn(usize) -> String) -> String {
    t.display(v.signature(), name).to_string()
}

/// `lhs = rhs` with variables named `x, y, z, u, w, s` and then `v6, v7, ..`.
pub fn equation_text(v: &Variety, e: &Equation) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "w", "s"];
    let name = |i: usize| NAMES.get(i).map_or_else(|| format!("v{i}"), |n| n.to_string());
    format!("{} = {}", term_text(v, &e.lhs, &name), term_text(v, &e.rhs, &name))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraFile {
    pub variety: VarietySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<BTreeMap<String, Vec<usize>>>,
}

impl AlgebraFile {
    /// Tables in signature order; the constant may be omitted.
    fn table_list(&self, v: &Variety) -> Result<(usize, Vec<Vec<usize>>)> {
        let size = self
            .size
            .ok_or_else(|| CliError::Usage("algebra needs `name` or `size` and `tables`".into()))?;
        let tables = self.tables.as_ref().ok_or_else(|| CliError::Usage("missing `tables`".into()))?;
        let sig = v.signature();
        if let Some(extra) = tables.keys().find(|k| sig.op_index(k).is_none()) {
            return Err(CliError::Usage(format!("unknown operation `{extra}`")));
        }
        let list = (0..sig.len())
            .map(|i| match tables.get(sig.name(i)) {
                Some(t) => Ok(t.clone()),
                None if sig.arity(i) == 0 => Ok(vec![0]),
                None => Err(CliError::Usage(format!("missing table for `{}`", sig.name(i)))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((size, list))
    }

    /// Builds the algebra, checking its equations within `limits`.
    pub fn load(&self, limits: &Limits) -> Result<Alg> {
        let v = self.variety.resolve()?;
        if let Some(n) = &self.name {
            return Ok(named(&v, n)?);
        }
        let (size, tables) = self.table_list(&v)?;
        Ok(Arc::new(FiniteAlgebra::with_limit(v, size, tables, limits.max_carrier)?))
    }

    /// Builds the algebra checking only table shapes.
    pub fn load_unchecked(&self) -> Result<Alg> {
        let v = self.variety.resolve()?;
        if let Some(n) = &self.name {
            return Ok(named(&v, n)?);
        }
        let (size, tables) = self.table_list(&v)?;
        Ok(Arc::new(FiniteAlgebra::unchecked(v, size, tables)?))
    }

    pub fn of(a: &Alg) -> Self {
        let sig = a.variety().signature();
        AlgebraFile {
            variety: VarietySpec::of(a.variety()),
            name: None,
            size: Some(a.size()),
            tables: Some((0..sig.len()).map(|i| (sig.name(i).into(), a.table(i).to_vec())).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomFile {
    pub dom: AlgebraFile,
    pub cod: AlgebraFile,
    pub map: Vec<usize>,
}

impl HomFile {
    pub fn load(&self, limits: &Limits) -> Result<Homomorphism> {
        Ok(Homomorphism::new(self.dom.load(limits)?, self.cod.load(limits)?, self.map.clone())?)
    }

    pub fn of(h: &Homomorphism) -> Self {
        HomFile {
            dom: AlgebraFile::of(h.dom()),
            cod: AlgebraFile::of(h.cod()),
            map: h.map().to_vec(),
        }
    }
}

/// Loads consecutive maps so that each codomain is the next domain.
fn load_chain(homs: &[&HomFile], limits: &Limits) -> Result<Vec<Homomorphism>> {
    let mut out: Vec<Homomorphism> = Vec::with_capacity(homs.len());
    for h in homs {
        let dom = match out.last() {
            Some(prev) => {
                let d = h.dom.load(limits)?;
                if !same_algebra(&d, prev.cod()) {
                    return Err(Error::ShapeMismatch("maps are not composable".into()).into());
                }
                prev.cod().clone()
            }
            None => h.dom.load(limits)?,
        };
        out.push(Homomorphism::new(dom, h.cod.load(limits)?, h.map.clone())?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SesFile {
    pub k: HomFile,
    pub q: HomFile,
}

impl SesFile {
    /// The two maps, sharing the middle object.
    pub fn maps(&self, limits: &Limits) -> Result<(Homomorphism, Homomorphism)> {
        let mut maps = load_chain(&[&self.k, &self.q], limits)?;
        let q = maps.pop().expect("two maps");
        Ok((maps.pop().expect("two maps"), q))
    }

    pub fn load(&self, limits: &Limits) -> Result<ShortExactSeq> {
        let (k, q) = self.maps(limits)?;
        Ok(validate_ses(&k, &q)?)
    }

    pub fn of(e: &ShortExactSeq) -> Self {
        SesFile {
            k: HomFile::of(e.k()),
            q: HomFile::of(e.q()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SequenceFile {
    pub maps: Vec<HomFile>,
}

impl SequenceFile {
    pub fn load(&self, limits: &Limits) -> Result<ExactSequence> {
        let refs: Vec<&HomFile> = self.maps.iter().collect();
        Ok(validate_exact_sequence(&load_chain(&refs, limits)?)?)
    }

    pub fn of(e: &ExactSequence) -> Self {
        SequenceFile {
            maps: e.maps().iter().map(HomFile::of).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ThreeByThreeFile {
    pub objects: Vec<Vec<AlgebraFile>>,
    pub rows: Vec<Vec<Vec<usize>>>,
    pub cols: Vec<Vec<Vec<usize>>>,
}

impl ThreeByThreeFile {
    pub fn load(&self, limits: &Limits) -> Result<ThreeByThree> {
        let shape = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Usage(format!("3x3 file: {what}")))
            }
        };
        shape(
            self.objects.len() == 3 && self.objects.iter().all(|r| r.len() == 3),
            "`objects` must be a 3x3 grid",
        )?;
        shape(
            self.rows.len() == 3 && self.rows.iter().all(|r| r.len() == 2),
            "`rows` must hold three pairs of maps",
        )?;
        shape(
            self.cols.len() == 3 && self.cols.iter().all(|c| c.len() == 2),
            "`cols` must hold three pairs of maps",
        )?;
        let obj = self
            .objects
            .iter()
            .map(|r| r.iter().map(|a| a.load(limits)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let hom = |d: &Alg, c: &Alg, m: &[usize]| Homomorphism::new(d.clone(), c.clone(), m.to_vec());
        let mut rows = Vec::with_capacity(3);
        for r in 0..3 {
            rows.push([
                hom(&obj[r][0], &obj[r][1], &self.rows[r][0])?,
                hom(&obj[r][1], &obj[r][2], &self.rows[r][1])?,
            ]);
        }
        let mut cols = Vec::with_capacity(3);
        for c in 0..3 {
            cols.push([
                hom(&obj[0][c], &obj[1][c], &self.cols[c][0])?,
                hom(&obj[1][c], &obj[2][c], &self.cols[c][1])?,
            ]);
        }
        let rows: [[Homomorphism; 2]; 3] = rows.try_into().expect("three rows");
        let cols: [[Homomorphism; 2]; 3] = cols.try_into().expect("three columns");
        Ok(ThreeByThree::new(rows, cols)?)
    }

    pub fn of(d: &ThreeByThree) -> Self {
        ThreeByThreeFile {
            objects: (0..3)
                .map(|r| (0..3).map(|c| AlgebraFile::of(d.object(r, c))).collect())
                .collect(),
            rows: d.rows().iter().map(|p| p.iter().map(|h| h.map().to_vec()).collect()).collect(),
            cols: d.cols().iter().map(|p| p.iter().map(|h| h.map().to_vec()).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionFile {
    pub x1: HomFile,
    pub x1p: HomFile,
    pub ses: SesFile,
}

impl DecompositionFile {
    pub fn of(d: &Decomposition) -> Self {
        DecompositionFile {
            x1: HomFile::of(&d.x1),
            x1p: HomFile::of(&d.x1p),
            ses: SesFile::of(&d.ses),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormFile {
    pub ell: usize,
    pub subset: Vec<usize>,
    pub tables: BTreeMap<String, Vec<usize>>,
    pub kmap: Vec<usize>,
    pub code: String,
}

impl FormFile {
    /// `v` names the tables.
    pub fn of(f: &CanonicalForm, v: &Variety) -> Self {
        let sig = v.signature();
        FormFile {
            ell: f.ell,
            subset: f.subset.clone(),
            tables: f
                .tables
                .iter()
                .enumerate()
                .map(|(i, t)| (sig.name(i).into(), t.clone()))
                .collect(),
            kmap: f.kmap.clone(),
            code: hex::encode(&f.code),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major; column `j` is the image of the `j`-th basis vector.
    pub entries: Vec<usize>,
}

/// Boundary matrices `d_1, d_2, ..` of a free resolution over `ℤ/m`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResolutionFile {
    pub modulus: usize,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<MatrixFile>,
}

impl ResolutionFile {
    pub fn of(r: &Resolution) -> Self {
        let to_file = |m: Matrix| MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries,
        };
        ResolutionFile {
            modulus: r.modulus(),
            ranks: (0..=r.depth()).map(|i| r.rank(i)).collect(),
            boundaries: (1..=r.depth()).map(|i| to_file(r.matrix(i))).collect(),
        }
    }
}

/// Serializes to a `Value` (sorted keys).
pub fn to_value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("file types serialize")
}
