//! Reassembling an abutment from its `E_∞` graded pieces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::page::Slot;
use crate::abgroup::{extension_resolve, ExtensionProblem, GroupExpr, Resolution};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Abutment {
    Resolved(GroupExpr),
    /// An extension step has no forced answer; later steps are not attempted.
    Ambiguous(ExtensionProblem),
    /// Some graded piece is unknown.
    Undetermined(String),
}

impl Abutment {
    pub fn group(&self) -> Option<&GroupExpr> {
        match self {
            Abutment::Resolved(g) => Some(g),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiltrationReport {
    pub p: i64,
    pub q: i64,
    /// `(s, E_∞^{p,q,s})`, increasing in `s`; `s` lowest is the bottom of the filtration.
    pub pieces: Vec<(i64, Slot)>,
    /// `F_{s-1} ⊂ F_s ->> E_∞^s` for each step taken.
    pub steps: Vec<(ExtensionProblem, Resolution)>,
    pub exhaustive: bool,
    pub hausdorff: bool,
    pub complete: bool,
    pub abutment: Abutment,
    /// Whether a declared abutment was compared and matched.
    pub declared_match: Option<bool>,
}

/// Builds the extension chain from the bottom of the filtration upwards and
/// compares with `declared` when given. A finite filtration is exhaustive,
/// Hausdorff and complete.
pub fn assemble_filtration(p: i64, q: i64, pieces: &[(i64, Slot)], declared: Option<&GroupExpr>) -> Result<FiltrationReport> {
    let mut pieces = pieces.to_vec();
    pieces.sort_by_key(|(s, _)| *s);
    let mut steps = Vec::new();
    let abutment = match pieces.iter().find_map(|(s, e)| matches!(e, Slot::Unknown(_)).then_some(*s)) {
        Some(s) => Abutment::Undetermined(format!("E_∞ at s = {s} is unknown")),
        None => {
            let mut acc = GroupExpr::Zero;
            let mut out = None;
            for (_, e) in &pieces {
                let problem = ExtensionProblem::new(acc.clone(), e.known().expect("checked").clone());
                let res = extension_resolve(&problem);
                steps.push((problem.clone(), res.clone()));
                match res {
                    Resolution::Resolved { group, .. } => acc = group,
                    Resolution::Ambiguous(pr) => {
                        out = Some(Abutment::Ambiguous(pr));
                        break;
                    }
                }
            }
            out.unwrap_or(Abutment::Resolved(acc))
        }
    };
    let declared_match = match declared {
        None => None,
        Some(d) => Some(check_declared(p, q, &pieces, &abutment, &d.normalized())?),
    };
    Ok(FiltrationReport { p, q, pieces, steps, exhaustive: true, hausdorff: true, complete: true, abutment, declared_match })
}

fn check_declared(p: i64, q: i64, pieces: &[(i64, Slot)], abutment: &Abutment, declared: &GroupExpr) -> Result<bool> {
    let mismatch = || Error::Inconsistent(format!("graded pieces at ({p},{q}) cannot assemble to {declared}"));
    if let Abutment::Resolved(g) = abutment {
        if g == declared {
            return Ok(true);
        }
        if g.is_concrete() && declared.is_concrete() {
            return Err(mismatch());
        }
    }
    let concrete: Option<Vec<_>> = pieces.iter().map(|(_, e)| e.known().and_then(GroupExpr::as_concrete)).collect();
    let (Some(parts), Some(d)) = (concrete, declared.as_concrete()) else {
        return Ok(false);
    };
    let rank: usize = parts.iter().map(|g| g.free_rank()).sum();
    let torsion: BigUint = parts.iter().map(|g| g.torsion_order()).fold(BigUint::one(), |a, b| a * b);
    // Any extension has the summed rank; a free quotient may absorb torsion
    // but never create it.
    let ok = d.free_rank() == rank && if rank == 0 { d.torsion_order() == torsion } else { (&torsion % d.torsion_order()) == BigUint::from(0u32) };
    if !ok {
        return Err(mismatch());
    }
    Ok(matches!(abutment, Abutment::Resolved(_)))
}
