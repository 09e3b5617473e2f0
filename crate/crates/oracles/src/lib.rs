//! Reference computations for cross-checking `extcalc-core`.
//!
//! Everything here is deliberately naive: plain loops over all tables,
//! functions or bijections, written without the core search engine, the
//! retract embedding or canonical forms. The core crate is used only for its
//! data types and for building quotients.

pub mod cocycle;
pub mod extensions;
pub mod iso;
pub mod monoid;
pub mod tables;

pub use cocycle::{abelian_ext_order, cyclic_table};
pub use extensions::group_extension_classes;
pub use iso::find_ses_iso;
pub use monoid::{exists_sp_data, maps_into_base, monoid_sequences, sequences_of};
pub use tables::{
    associative_tables, associative_tables_up_to_iso, homomorphisms, is_least_relabeling,
    pointed_permutations,
};
