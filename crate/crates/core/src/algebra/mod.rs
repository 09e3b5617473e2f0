//! Finite algebras over equational presentations and the basic constructions
//! on them.

pub mod builtins;
mod congruence;
mod construct;
mod finite;
mod hom;
mod term;
mod variety;
mod witness;

pub use congruence::{congruence_closure, quotient, Congruence, UnionFind};
pub use construct::{
    cokernel, fiber_product, image_factorization, is_normal_epi, is_normal_mono, kernel,
    normal_image_factorization, pairing, power, product, product_many, subalgebra,
    generated_subalgebra, MixedRadix, Product,
};
pub use finite::{for_each_tuple, table_index, Alg, FiniteAlgebra};
pub(crate) use finite::invert_permutation;
pub use hom::{same_algebra, Homomorphism};
pub use term::{parse_equation, parse_term, OpSymbol, Signature, Term, VarScope, ZERO};
pub use variety::{
    same_variety, Equation, SemiAbelianWitness, Variety, VarietyKind, VarietyPresentation,
};
pub use witness::{alpha_tables, verify_witness, verify_witness_terms, WitnessReport, WitnessViolation};
