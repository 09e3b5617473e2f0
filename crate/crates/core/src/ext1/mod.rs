//! One-step extensions: short exact sequences, the retract embedding into
//! `K^ℓ × Q`, canonical forms and enumeration.

pub(crate) mod canonical;
pub(crate) mod enumerate;
mod morphism;
mod retract;
mod ses;

pub use canonical::{are_equivalent, canonical_form, canonical_form_with, CanonicalForm};
pub use enumerate::{enumerate_ext1, enumerate_ext1_with_carriers, Ext1Problem};
pub use morphism::{find_morphism, MorphismKind};
pub use retract::{retract_maps, RetractFailure, RetractPair};
pub use ses::{is_central, pullback_ses, sections_of, validate_ses, Section, Sections, ShortExactSeq};
