//! Finitely generated abelian groups, exactly, and a small symbolic calculus
//! for the infinite groups that appear as field invariants.

mod concrete;
mod expr;
mod extension;
mod hom;
pub mod matrix;

pub use concrete::{biproduct, coprime_part, homology, is_exact_at, ConcreteGroup, ConcreteHom, Homology, Lattice, Subquotient, Witnessed};
pub use expr::{instantiate, Bindings, GroupExpr, Symbol};
pub use extension::{extension_resolve, ExtensionProblem, ExtensionRule, Resolution};
pub use hom::{GroupHom, HomRule, SymbolicResult};
pub use matrix::{snf, IntMatrix};
