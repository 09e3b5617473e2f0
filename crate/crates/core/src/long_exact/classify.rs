use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::modules::{modulus_of, Syzygy};
use super::resolution::{CohomologyClass, ExtGroup, Resolution};
use super::sequence::{splice, ExactSequence};
use crate::algebra::{same_variety, Alg, VarietyKind};
use crate::ext1::{enumerate_ext1, CanonicalForm};
use crate::{Error, Limits, Result};

/// One representative per class found.
#[derive(Clone, Debug)]
pub struct ExtnClass {
    /// The Yoneda class (module varieties only).
    pub class: Option<CohomologyClass>,
    pub sequence: ExactSequence,
}

#[derive(Clone, Debug)]
pub struct ExtnClasses {
    pub degree: usize,
    /// Whether the list is known to contain every class exactly once.
    pub complete: bool,
    /// Order of `Ext^n(Q, K)` from the resolution, for module varieties.
    pub oracle_order: Option<usize>,
    pub classes: Vec<ExtnClass>,
}

/// The steps of [`classify_extn`] for `ℤ/m`-modules, exposed so the
/// `Ext^1(Ω^{n-1}(Q), K)` representatives can be realized independently.
#[derive(Clone, Debug)]
pub struct ExtnPlan {
    group: ExtGroup,
    k: Alg,
}

impl ExtnPlan {
    pub fn new(q: &Alg, k: &Alg, n: usize) -> Result<Self> {
        modulus_of(q)?;
        if n == 0 {
            return Err(Error::InvalidData("degree must be at least 1".into()));
        }
        let resolution = Resolution::new(q, n + 1)?;
        Ok(ExtnPlan {
            group: ExtGroup::from_resolution(resolution, k, n)?,
            k: k.clone(),
        })
    }

    pub fn group(&self) -> &ExtGroup {
        &self.group
    }

    /// `Ω^{n-1}(Q)`.
    pub fn omega(&self) -> &Alg {
        let n = self.group.degree();
        let res = self.group.resolution();
        if n == 1 {
            res.base()
        } else {
            res.level(n - 2).omega()
        }
    }

    /// Canonical forms of `Ext^1(Ω^{n-1}(Q), K)`.
    pub fn forms(&self, limits: &Limits) -> Result<Vec<CanonicalForm>> {
        enumerate_ext1(self.omega(), &self.k, limits)
    }

    /// The form spliced on top of the syzygies `Ω^{i+1} → P_i → Ω^i`, with
    /// its class.
    pub fn realize(&self, form: &CanonicalForm) -> Result<ExtnClass> {
        let n = self.group.degree();
        let res = self.group.resolution();
        let ses = form.to_ses(&self.k, self.omega())?;
        let mut seq = ExactSequence::from_ses(&ses);
        for i in (0..n - 1).rev() {
            let s: &Syzygy = res.level(i);
            seq = splice(&seq, &s.sequence())?;
        }
        let class = self.group.yoneda_class(&seq)?;
        Ok(ExtnClass {
            class: Some(class),
            sequence: seq,
        })
    }

    /// Keeps the first representative of each class, ordered by class.
    pub fn merge(&self, realized: impl IntoIterator<Item = ExtnClass>) -> ExtnClasses {
        let mut by_class = BTreeMap::new();
        for r in realized {
            let key = r.class.clone().expect("module classes");
            by_class.entry(key).or_insert(r);
        }
        ExtnClasses {
            degree: self.group.degree(),
            complete: true,
            oracle_order: Some(self.group.order()),
            classes: by_class.into_values().collect(),
        }
    }
}

/// Representatives of `Ext^n(Q, K)`.
///
/// For `ℤ/m`-modules: every class of `Ext^1(Ω^{n-1}(Q), K)` is spliced on
/// top of `n - 1` syzygies and the results are bucketed by Yoneda class.
/// Elsewhere only `n = 1` is available (canonical forms of one-step
/// extensions, complete); syzygies of other varieties are infinite.
pub fn classify_extn(q: &Alg, k: &Alg, n: usize, limits: &Limits) -> Result<ExtnClasses> {
    if !same_variety(q.variety(), k.variety()) {
        return Err(Error::VarietyMismatch);
    }
    if let VarietyKind::Module { .. } = q.variety().kind() {
        let plan = ExtnPlan::new(q, k, n)?;
        let realized = plan
            .forms(limits)?
            .iter()
            .map(|f| plan.realize(f))
            .collect::<Result<Vec<_>>>()?;
        return Ok(plan.merge(realized));
    }
    if n != 1 {
        return Err(Error::UnsupportedVariety(format!(
            "length-{n} classification needs syzygies, available for Z/m-modules only, not `{}`",
            q.variety().name()
        )));
    }
    let classes = enumerate_ext1(q, k, limits)?
        .iter()
        .map(|f| {
            Ok(ExtnClass {
                class: None,
                sequence: ExactSequence::from_ses(&f.to_ses(k, q)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtnClasses {
        degree: 1,
        complete: true,
        oracle_order: None,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtins::{cyclic, named};
    use crate::algebra::VarietyPresentation;

    #[test]
    fn z2_by_z2_over_z4() {
        let v = VarietyPresentation::modules(4);
        let z2 = cyclic(&v, 2).unwrap();
        for n in 1..=3 {
            let c = classify_extn(&z2, &z2, n, &Limits::default()).unwrap();
            assert_eq!(c.classes.len(), 2);
            assert_eq!(c.oracle_order, Some(2));
            assert!(c.classes.iter().all(|r| r.sequence.len() == n));
        }
    }

    #[test]
    fn free_base_has_one_class() {
        let v = VarietyPresentation::modules(4);
        let (z2, z4) = (cyclic(&v, 2).unwrap(), cyclic(&v, 4).unwrap());
        for n in 1..=2 {
            let c = classify_extn(&z4, &z2, n, &Limits::default()).unwrap();
            assert_eq!(c.classes.len(), 1);
        }
    }

    #[test]
    fn other_varieties() {
        let g = VarietyPresentation::groups();
        let (z2, z3) = (cyclic(&g, 2).unwrap(), cyclic(&g, 3).unwrap());
        assert_eq!(classify_extn(&z2, &z3, 1, &Limits::default()).unwrap().classes.len(), 2);
        assert!(matches!(
            classify_extn(&z2, &z3, 2, &Limits::default()),
            Err(Error::UnsupportedVariety(_))
        ));
        let zero = named(&g, "0").unwrap();
        assert_eq!(classify_extn(&z2, &zero, 1, &Limits::default()).unwrap().classes.len(), 1);
    }
}
