//! Extensions of finite algebras in equationally presented varieties.
//!
//! The crate works with finite algebras given by operation tables over the
//! carrier `{0..n-1}` (element `0` is always the constant) and builds on them:
//!
//! * [`algebra`]: signatures, terms, varieties, homomorphisms, congruence
//!   closure, kernels, cokernels and semi-abelian witness verification;
//! * [`ext1`]: short exact sequences, the retract embedding into `K^ℓ × Q`,
//!   canonical forms and enumeration of one-step extensions;
//! * [`long_exact`]: exact sequences of length `n`, splicing, syzygies over
//!   `ℤ/m`-modules, pullback reduction and a resolution-based `Ext` oracle;
//! * [`double_ext`]: 3×3 diagrams, their decomposition and the double syzygy;
//! * [`schreier`]: Schreier extensions of monoids.
//!
//! Everything here is pure computation over immutable values and needs only
//! `alloc`. File formats, the command-line front end and multi-threaded
//! enumeration live in the `extcalc` crate.

#![cfg_attr(not(test), no_std)]
#![warn(clippy::std_instead_of_alloc)]
#![warn(clippy::std_instead_of_core)]

extern crate alloc;

pub mod algebra;
pub mod double_ext;
mod error;
pub mod ext1;
pub mod long_exact;
pub mod schreier;
pub mod search;

pub use error::{Error, ExactnessFailure, Result};

/// Resource bounds shared by the search procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier on which exhaustive work (equation checks, table
    /// search, `K^ℓ × Q` embeddings) is attempted.
    pub max_carrier: usize,
    /// Upper bound on backtracking nodes for a single search.
    pub max_nodes: u64,
}

impl Limits {
    pub const DEFAULT_MAX_CARRIER: usize = 64;
    pub const DEFAULT_MAX_NODES: u64 = 20_000_000;
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: Self::DEFAULT_MAX_CARRIER,
            max_nodes: Self::DEFAULT_MAX_NODES,
        }
    }
}
