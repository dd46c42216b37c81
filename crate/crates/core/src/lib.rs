//! Structured sets over atoms, interpretations between theories, and
//! exhaustive checks of definitional equivalence and bi-interpretability on
//! small finite models.

pub mod atomize;
pub mod exec;
pub mod formulas;
pub mod gen;
pub mod group;
pub mod hf;
pub mod interp;
pub mod report;
pub mod structured;
pub mod suite;
pub mod theories;

pub use hf::{AtomId, Hf, HfError, ValueStore};
