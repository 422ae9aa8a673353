use alloc::vec::Vec;

use super::ring::{Monomial, RingElement, RingPresentation};
use crate::couple::{Point, Window};

/// Products on a page given by a graded ring whose generators are placed at
/// page positions: generator `i` sits at `(p_i, q_i, s_i)` where `(q_i)[p_i]`
/// is its ring degree and `s_i = filtration[i]`.
#[derive(Clone, Debug)]
pub struct PagePairing {
    pub ring: RingPresentation,
    pub filtration: Vec<i64>,
}

impl PagePairing {
    pub fn place(&self, m: &Monomial) -> Point {
        let d = self.ring.degree(m);
        let s = self.filtration.iter().zip(&m.0).map(|(s, e)| s * *e as i64).sum();
        (d.p, d.q, s)
    }

    /// Basis monomials placed inside `window`.
    pub fn basis(&self, window: &Window) -> Vec<Monomial> {
        let mut out = Vec::new();
        for q in window.q.0..=window.q.1 {
            for p in window.p.0..=window.p.1 {
                out.extend(self.ring.basis(p, q).into_iter().filter(|m| window.contains(self.place(m))));
            }
        }
        out
    }

    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.ring.mul(x, y)
    }
}

/// Extends a map given on monomials linearly.
pub fn apply_linear(ring: &RingPresentation, x: &RingElement, d: &impl Fn(&Monomial) -> RingElement) -> RingElement {
    let mut out = RingElement::zero();
    for (m, c) in x.terms() {
        out = ring.add(&out, &ring.scale(&d(m), c.clone()));
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LeibnizReport {
    pub pairs_checked: usize,
    /// Pairs `(a, b)` with `d(ab) ≠ d(a)b + (-1)^{|a|} a d(b)`.
    pub violations: Vec<(Monomial, Monomial)>,
    /// Generators whose image does not sit at `(p+1, q, s-r)`.
    pub misplaced: Vec<Monomial>,
}

impl LeibnizReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.misplaced.is_empty()
    }
}

/// Exhaustive check of the Leibniz rule for `d_r` over all basis pairs whose
/// product stays in `window`.
pub fn leibniz_check(pairing: &PagePairing, r: i64, window: &Window, d: impl Fn(&Monomial) -> RingElement) -> LeibnizReport {
    let ring = &pairing.ring;
    let basis = pairing.basis(window);
    let mut report = LeibnizReport::default();
    for m in &basis {
        let (p, q, s) = pairing.place(m);
        if d(m).terms().any(|(t, _)| pairing.place(t) != (p + 1, q, s - r)) {
            report.misplaced.push(m.clone());
        }
    }
    for a in &basis {
        for b in &basis {
            let (neg, ab) = ring.mul_monomials(a, b);
            if !window.contains(pairing.place(&ab)) {
                continue;
            }
            report.pairs_checked += 1;
            let one = |m: &Monomial| ring.term(1, m.clone());
            let mut lhs = apply_linear(ring, &ring.term(if neg { -1 } else { 1 }, ab.clone()), &d);
            let ea = one(a);
            let eb = one(b);
            let mut second = ring.mul(&ea, &d(b));
            if ring.degree(a).p.rem_euclid(2) == 1 {
                second = ring.scale(&second, -1);
            }
            let rhs = ring.add(&ring.mul(&d(a), &eb), &second);
            lhs = ring.sub(&lhs, &rhs);
            if !lhs.is_zero() {
                report.violations.push((a.clone(), b.clone()));
            }
        }
    }
    report
}
