use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::term::{parse_equation, parse_term, Signature, Term, VarScope};
use crate::{Error, Result};

/// Shared handle to a variety presentation.
pub type Variety = Arc<VarietyPresentation>;

/// Which of the shipped presentations a variety is, if any. Several
/// operations (centrality, syzygies, Schreier checks) are only defined for
/// particular kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarietyKind {
    Group,
    AbelianGroup,
    /// `ℤ/m`-modules, presented as abelian groups with scalar operations.
    Module { modulus: usize },
    Loop,
    Monoid,
    Custom,
}

impl VarietyKind {
    /// Kinds in which all fibers of a surjection have the size of its kernel,
    /// so extensions of `Q` by `K` live on exactly `|K|·|Q|` elements.
    pub fn is_fiber_uniform(self) -> bool {
        matches!(
            self,
            VarietyKind::Group
                | VarietyKind::AbelianGroup
                | VarietyKind::Module { .. }
                | VarietyKind::Loop
        )
    }
}

/// An identity `lhs = rhs`; variables are numbered `0..vars` across both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub vars: usize,
}

/// Binary terms `α_1..α_ℓ` and an `(ℓ+1)`-ary term `β` with
/// `α_i(x,x) = 0` and `β(α_1(x,y),…,α_ℓ(x,y),y) = x`.
///
/// `α_i` use variables `0` (x) and `1` (y); `β` uses `0..=ℓ`, the last one
/// being the distinguished argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemiAbelianWitness {
    pub alphas: Vec<Term>,
    pub beta: Term,
}

impl SemiAbelianWitness {
    pub fn ell(&self) -> usize {
        self.alphas.len()
    }

    /// Parses witness terms: `alphas` over the variables `x`, `y`; `beta`
    /// over `z1..zℓ, t` (`z` is accepted for `z1` when `ℓ = 1`).
    pub fn parse(sig: &Signature, alphas: &[&str], beta: &str) -> Result<Self> {
        let alphas = alphas
            .iter()
            .map(|a| parse_term(sig, a, &mut VarScope::Fixed(&["x", "y"])))
            .collect::<Result<Vec<_>>>()?;
        let ell = alphas.len();
        let names: Vec<String> = (1..=ell)
            .map(|i| format!("z{i}"))
            .chain(core::iter::once("t".into()))
            .collect();
        let mut refs: Vec<&str> = names.iter().map(String::as_str).collect();
        if ell == 1 && !beta.contains("z1") {
            refs[0] = "z";
        }
        let beta = parse_term(sig, beta, &mut VarScope::Fixed(&refs))?;
        Ok(SemiAbelianWitness { alphas, beta })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarietyPresentation {
    name: String,
    kind: VarietyKind,
    signature: Signature,
    equations: Vec<Equation>,
    witness: Option<SemiAbelianWitness>,
}

impl VarietyPresentation {
    pub fn new(
        name: impl Into<String>,
        kind: VarietyKind,
        signature: Signature,
        equations: Vec<(Term, Term)>,
        witness: Option<SemiAbelianWitness>,
    ) -> Result<Self> {
        let mut eqs = Vec::with_capacity(equations.len());
        for (i, (lhs, rhs)) in equations.into_iter().enumerate() {
            lhs.check(&signature)?;
            rhs.check(&signature)?;
            let mut seen = Vec::new();
            lhs.collect_vars(&mut seen);
            rhs.collect_vars(&mut seen);
            let vars = lhs.var_count().max(rhs.var_count());
            if seen.len() != vars {
                return Err(Error::InvalidPresentation(format!(
                    "equation {i} does not use contiguous variables 0..{vars}"
                )));
            }
            eqs.push(Equation { lhs, rhs, vars });
        }
        if let Some(w) = &witness {
            if w.alphas.is_empty() {
                return Err(Error::InvalidPresentation("witness needs ℓ ≥ 1".into()));
            }
            for a in &w.alphas {
                a.check(&signature)?;
                if a.var_count() > 2 {
                    return Err(Error::InvalidPresentation(
                        "α terms must be binary".into(),
                    ));
                }
            }
            w.beta.check(&signature)?;
            if w.beta.var_count() > w.ell() + 1 {
                return Err(Error::InvalidPresentation(format!(
                    "β must have arity ℓ+1 = {}",
                    w.ell() + 1
                )));
            }
        }
        Ok(VarietyPresentation {
            name: name.into(),
            kind,
            signature,
            equations: eqs,
            witness,
        })
    }

    /// Builds a presentation from equation strings (see [`parse_equation`]).
    pub fn parse(
        name: impl Into<String>,
        kind: VarietyKind,
        ops: &[(&str, usize)],
        equations: &[&str],
        witness: Option<(&[&str], &str)>,
    ) -> Result<Self> {
        let signature = Signature::new(ops.iter().copied())?;
        let eqs = equations
            .iter()
            .map(|e| parse_equation(&signature, e))
            .collect::<Result<Vec<_>>>()?;
        let witness = witness
            .map(|(a, b)| SemiAbelianWitness::parse(&signature, a, b))
            .transpose()?;
        Self::new(name, kind, signature, eqs, witness)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn witness(&self) -> Option<&SemiAbelianWitness> {
        self.witness.as_ref()
    }

    pub fn op(&self, name: &str) -> Option<usize> {
        self.signature.op_index(name)
    }

    pub fn require_op(&self, name: &str) -> Result<usize> {
        self.op(name).ok_or_else(|| {
            Error::UnsupportedVariety(format!("`{}` has no operation `{name}`", self.name))
        })
    }

    /// The same presentation with a different witness.
    pub fn with_witness(&self, witness: Option<SemiAbelianWitness>) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.kind,
            self.signature.clone(),
            self.equations
                .iter()
                .map(|e| (e.lhs.clone(), e.rhs.clone()))
                .collect(),
            witness,
        )
    }

    pub fn groups() -> Variety {
        Arc::new(
            Self::parse(
                "groups",
                VarietyKind::Group,
                &[("0", 0), ("mul", 2), ("inv", 1)],
                &[
                    "mul(mul(x, y), z) = mul(x, mul(y, z))",
                    "mul(0, x) = x",
                    "mul(x, 0) = x",
                    "mul(x, inv(x)) = 0",
                    "mul(inv(x), x) = 0",
                ],
                Some((&["mul(x, inv(y))"], "mul(z, t)")),
            )
            .expect("built-in presentation"),
        )
    }

    pub fn abelian_groups() -> Variety {
        Arc::new(
            Self::parse(
                "abelian_groups",
                VarietyKind::AbelianGroup,
                &[("0", 0), ("add", 2), ("neg", 1)],
                &ABELIAN_EQUATIONS,
                Some((&["add(x, neg(y))"], "add(z, t)")),
            )
            .expect("built-in presentation"),
        )
    }

    /// `ℤ/m`-modules: abelian groups with `m·x = 0` and unary scalar
    /// operations `s2 .. s{m-1}` (`s_r(x) = r·x`).
    pub fn modules(modulus: usize) -> Variety {
        assert!(modulus >= 1, "modulus must be positive");
        let mut ops: Vec<(String, usize)> = ["0", "add", "neg"]
            .iter()
            .zip([0, 2, 1])
            .map(|(n, a)| (n.to_string(), a))
            .collect();
        let mut eqs: Vec<String> = ABELIAN_EQUATIONS.iter().map(|s| s.to_string()).collect();
        for r in 2..modulus {
            ops.push((format!("s{r}"), 1));
            let prev = if r == 2 { "x".to_string() } else { format!("s{}(x)", r - 1) };
            eqs.push(format!("s{r}(x) = add({prev}, x)"));
        }
        eqs.push(match modulus {
            1 => "x = 0".to_string(),
            2 => "add(x, x) = 0".to_string(),
            m => format!("add(s{}(x), x) = 0", m - 1),
        });
        let op_refs: Vec<(&str, usize)> = ops.iter().map(|(n, a)| (n.as_str(), *a)).collect();
        let eq_refs: Vec<&str> = eqs.iter().map(String::as_str).collect();
        Arc::new(
            Self::parse(
                format!("Z{modulus}-modules"),
                VarietyKind::Module { modulus },
                &op_refs,
                &eq_refs,
                Some((&["add(x, neg(y))"], "add(z, t)")),
            )
            .expect("built-in presentation"),
        )
    }

    pub fn loops() -> Variety {
        Arc::new(
            Self::parse(
                "loops",
                VarietyKind::Loop,
                &[("0", 0), ("mul", 2), ("ldiv", 2), ("rdiv", 2)],
                &[
                    "mul(0, x) = x",
                    "mul(x, 0) = x",
                    "ldiv(x, mul(x, y)) = y",
                    "mul(x, ldiv(x, y)) = y",
                    "rdiv(mul(x, y), y) = x",
                    "mul(rdiv(x, y), y) = x",
                ],
                Some((&["rdiv(x, y)"], "mul(z, t)")),
            )
            .expect("built-in presentation"),
        )
    }

    /// Monoids, written additively. Not semi-abelian: no witness.
    pub fn monoids() -> Variety {
        Arc::new(
            Self::parse(
                "monoids",
                VarietyKind::Monoid,
                &[("0", 0), ("add", 2)],
                &[
                    "add(add(x, y), z) = add(x, add(y, z))",
                    "add(0, x) = x",
                    "add(x, 0) = x",
                ],
                None,
            )
            .expect("built-in presentation"),
        )
    }

    /// Looks up a shipped presentation: `groups`, `abelian_groups`, `loops`,
    /// `monoids`, `Z<m>-modules` or `modules:<m>`.
    pub fn builtin(name: &str) -> Result<Variety> {
        match name {
            "groups" => Ok(Self::groups()),
            "abelian_groups" => Ok(Self::abelian_groups()),
            "loops" => Ok(Self::loops()),
            "monoids" => Ok(Self::monoids()),
            _ => {
                let m = name
                    .strip_prefix("modules:")
                    .or_else(|| name.strip_prefix('Z').and_then(|r| r.strip_suffix("-modules")))
                    .and_then(|m| m.parse::<usize>().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| Error::UnknownName(format!("variety `{name}`")))?;
                Ok(Self::modules(m))
            }
        }
    }
}

const ABELIAN_EQUATIONS: [&str; 5] = [
    "add(add(x, y), z) = add(x, add(y, z))",
    "add(x, y) = add(y, x)",
    "add(0, x) = x",
    "add(x, 0) = x",
    "add(x, neg(x)) = 0",
];

/// Whether two handles denote the same presentation.
pub fn same_variety(a: &Variety, b: &Variety) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
