//! Exact sequences of length `n`, splicing, syzygies of `ℤ/m`-modules and
//! the reduction of an `(n+1)`-step sequence to an `n`-step one over the
//! syzygy, with a resolution-based computation of `Ext^n` to check against.

mod classify;
mod modules;
mod reduce;
mod resolution;
mod sequence;

pub use classify::{classify_extn, ExtnClass, ExtnClasses, ExtnPlan};
pub use modules::{
    additive_order, combination, coordinates, free_map, free_module, greedy_generators,
    modulus_of, scalar, syzygy, syzygy_with, Syzygy,
};
pub use reduce::pullback_reduce;
pub use resolution::{
    ext_via_resolution, yoneda_class_of, CohomologyClass, ExtGroup, Matrix, Resolution,
    MAX_COCHAINS,
};
pub use sequence::{splice, validate_exact_sequence, ExactSequence};
