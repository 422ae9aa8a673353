//! Serre-type spectral sequences of the classifying-space instances, and the
//! solver that reads off an unknown base from a known total space.

mod checks;
mod field;
mod kb;
mod sb;
mod solver;

pub use checks::{invert_n_check, vanishing_region_check, InvertReport, VanishingReport};
pub use field::FieldModel;
pub use kb::{Deduction, DistinguishedClass, Fact, KnowledgeBase, Rule};
pub use sb::{build_sb_ss, ch2_severi_brauer, BrauerData, Ch2Report, SbInstance};
pub use solver::{build_bbgm_ss, build_bpgl_ss, edge_parts, solve_unknowns, EdgeParts, Instance, SerreSS, SolveWindow};
