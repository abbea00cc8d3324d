//! Basic intuitionistic conditional logic: formulas, finite Kripke semantics,
//! a Hilbert-style proof kernel with a checked corpus of derivations, syntactic
//! translations, and first-order Kripke sheaves.

pub mod calculus;
pub mod fosem;
pub mod models;
pub mod syntax;
pub mod translate;
