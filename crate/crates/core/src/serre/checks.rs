use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::field::FieldModel;
use super::kb::KnowledgeBase;
use super::solver::SolveWindow;
use crate::abgroup::GroupExpr;
use crate::couple::Slot;
use crate::gradedalg::{Generator, RingPresentation};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VanishingReport {
    pub n: u32,
    pub checked: usize,
    pub nonzero: Vec<((i64, i64), GroupExpr)>,
    pub undecided: Vec<((i64, i64), String)>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.nonzero.is_empty() && self.undecided.is_empty()
    }
}

/// Every bidegree of the window with `p ≥ 3q + 1` must be known to vanish.
pub fn vanishing_region_check(kb: &KnowledgeBase, n: u32, window: &SolveWindow) -> VanishingReport {
    let mut report = VanishingReport { n, checked: 0, nonzero: Vec::new(), undecided: Vec::new() };
    for q in 0..=window.q_max {
        for p in window.p.0.max(3 * q + 1)..=window.p.1 {
            report.checked += 1;
            match kb.slot(p, q) {
                Slot::Known(g) if g.is_zero() => {}
                Slot::Known(g) => report.nonzero.push(((p, q), g)),
                Slot::Unknown(why) => report.undecided.push(((p, q), why)),
            }
        }
    }
    report
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvertReport {
    pub n: u32,
    pub checked: usize,
    /// `(bidegree, solved value with n inverted, expected)`.
    pub mismatches: Vec<((i64, i64), GroupExpr, GroupExpr)>,
    pub undecided: Vec<((i64, i64), String)>,
}

impl InvertReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.mismatches.is_empty() && self.undecided.is_empty()
    }
}

/// With `n` inverted the base should look like `H^{**}(k)[c_2, …, c_n]`.
pub fn invert_n_check(kb: &KnowledgeBase, n: u32, field: &FieldModel, window: &SolveWindow) -> InvertReport {
    let gens = (2..=n as i64).map(|i| Generator::new(&alloc::format!("c{i}"), i, 2 * i)).collect();
    let ring = RingPresentation::new(0u32, gens).expect("polynomial ring");
    let away = BigUint::from(n);
    let mut report = InvertReport { n, checked: 0, mismatches: Vec::new(), undecided: Vec::new() };
    for q in 0..=window.q_max {
        for p in window.p.0..=window.p.1 {
            report.checked += 1;
            let expected = GroupExpr::sum(ring.module_basis(p, q, |a, b| field.group(a, b).localize_away(&away)).into_iter().map(|(_, g)| g));
            match kb.slot(p, q) {
                Slot::Known(g) => {
                    let got = g.localize_away(&away).normalized();
                    if got != expected {
                        report.mismatches.push(((p, q), got, expected));
                    }
                }
                Slot::Unknown(why) => report.undecided.push(((p, q), why)),
            }
        }
    }
    report
}
