//! The spectral sequence of a Severi–Brauer variety over the Čech object
//! `X_A` of a central simple algebra, and the resulting `CH²`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};

use super::field::FieldModel;
use super::kb::{Deduction, KnowledgeBase, Rule};
use crate::abgroup::{ExtensionProblem, GroupExpr, GroupHom, HomRule, IntMatrix, Resolution, Symbol};
use crate::couple::{assemble_filtration, einfty, Abutment, Beyond, Point, Slot, TriPage, Window};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BrauerData {
    /// Degree of the algebra.
    pub n: u32,
    /// Order of `[A]` in the Brauer group.
    pub order: u32,
    pub ker2: GroupExpr,
    pub ker3: GroupExpr,
    /// Multiplication by `[A]` from `k*` to `ker_3`.
    pub mul_a: GroupHom,
    /// Coordinates of `[A]` in `ker_2`, when `ker_2` is concrete.
    pub class: Option<Vec<i64>>,
}

impl BrauerData {
    /// Everything symbolic.
    pub fn symbolic(n: u32, order: u32) -> Self {
        let ker3 = GroupExpr::symbol(Symbol::brauer_kernel(3));
        BrauerData {
            n,
            order,
            ker2: GroupExpr::symbol(Symbol::brauer_kernel(2)),
            ker3: ker3.clone(),
            mul_a: GroupHom::new(GroupExpr::symbol(Symbol::units()), ker3, HomRule::Named("mulA".into())),
            class: None,
        }
    }

    /// A matrix algebra: `[A] = 0`.
    pub fn split(n: u32) -> Self {
        BrauerData {
            n,
            order: 1,
            ker2: GroupExpr::Zero,
            ker3: GroupExpr::Zero,
            mul_a: GroupHom::zero(GroupExpr::symbol(Symbol::units()), GroupExpr::Zero),
            class: None,
        }
    }

    pub fn is_split(&self) -> bool {
        self.order == 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.n < 2 {
            return bad(format!("degree {} must be at least 2", self.n));
        }
        if self.order == 0 || !self.n.is_multiple_of(self.order) {
            return bad(format!("order {} of [A] must divide the degree {}", self.order, self.n));
        }
        if self.is_split() && !(self.ker2.is_zero() && self.ker3.is_zero() && self.mul_a.is_evidently_zero()) {
            return bad("a split algebra has ker_2 = ker_3 = 0 and [A] = 0".into());
        }
        if self.mul_a.source != GroupExpr::symbol(Symbol::units()) || self.mul_a.target != self.ker3.normalized() {
            return bad(format!("multiplication by [A] must run from K to {}", self.ker3));
        }
        if let Some(c) = &self.class {
            let Some(g) = self.ker2.as_concrete() else {
                return bad("coordinates of [A] need a concrete ker_2".into());
            };
            if c.len() != g.generator_count() {
                return bad(format!("[A] has {} coordinates, ker_2 has {} generators", c.len(), g.generator_count()));
            }
        }
        Ok(())
    }

    /// `H^{p,q}(X_A)`: the field below the diagonal, zero just above it,
    /// `ker_{q+1}` two above, and otherwise an opaque group killed by `n`.
    pub fn xa(&self, field: &FieldModel, p: i64, q: i64) -> GroupExpr {
        if q < 0 {
            return GroupExpr::Zero;
        }
        if q == 0 {
            return if p == 0 { GroupExpr::z() } else { GroupExpr::Zero };
        }
        if p <= q {
            return field.group(p, q);
        }
        if p == q + 1 || self.is_split() {
            return GroupExpr::Zero;
        }
        if p == q + 2 {
            return match q {
                1 => self.ker2.clone(),
                2 => self.ker3.clone(),
                _ => GroupExpr::symbol(Symbol::brauer_kernel(q + 1)),
            };
        }
        GroupExpr::torsion(GroupExpr::symbol(Symbol::new(format!("XA({p},{q})"))), BigUint::from(self.n))
    }

    /// `s·[A]` on `H^{a,b}(X_A)`, where known.
    fn d1(&self, field: &FieldModel, (a, b): (i64, i64), s: i64) -> Option<GroupHom> {
        let src = self.xa(field, a, b);
        let tgt = self.xa(field, a + 3, b + 1);
        if self.is_split() || s % self.order as i64 == 0 || src.is_zero() || tgt.is_zero() {
            return Some(GroupHom::zero(src, tgt));
        }
        match (a, b) {
            (1, 1) => Some(match self.mul_a.to_concrete() {
                Ok(c) => GroupHom::from_concrete(&c.scaled(&BigInt::from(s))),
                Err(_) => self.mul_a.scaled(s),
            }),
            (0, 0) => match (&self.class, self.ker2.as_concrete()) {
                (Some(c), Some(g)) => {
                    let col: Vec<BigInt> = c.iter().map(|x| BigInt::from(*x) * s).collect();
                    let h = crate::abgroup::ConcreteHom::new(crate::abgroup::ConcreteGroup::free(1), g.clone(), IntMatrix::from_columns(g.generator_count(), &[col])).ok()?;
                    Some(GroupHom::from_concrete(&h))
                }
                _ => Some(GroupHom::new(src, tgt, HomRule::ClassProduct { class: "[A]".into(), multiple: BigInt::from(s) })),
            },
            _ => None,
        }
    }
}

/// `E_1^{p,q,s} = H^{p-2s,q-s}(X_A)` for `0 ≤ s ≤ n-1`, with `d_1 = s·[A]`.
#[derive(Clone, Debug)]
pub struct SbInstance {
    pub data: BrauerData,
    pub field: FieldModel,
    pub page: TriPage,
    /// The seeded values of `H^{**}(X_A)` feeding the page.
    pub kb: KnowledgeBase,
}

pub fn build_sb_ss(data: BrauerData, field: FieldModel, p: (i64, i64), q: (i64, i64)) -> Result<SbInstance> {
    data.validate()?;
    if p.0 > p.1 || q.0 > q.1 {
        return Err(Error::InvalidInstance(format!("empty window p in {p:?}, q in {q:?}")));
    }
    let top = data.n as i64 - 1;
    let mut kb = KnowledgeBase::new(format!("X_A, deg {} order {}", data.n, data.order));
    let mut page = TriPage::new(1, Window::new(p, q, (0, top), Beyond::Unknown));
    for qq in q.0..=q.1 {
        for pp in p.0..=p.1 {
            for s in 0..=top {
                let (a, b) = (pp - 2 * s, qq - s);
                let g = data.xa(&field, a, b);
                if b >= 0 {
                    kb.settle(a, b, Deduction::new(Rule::Seed, format!("H^{{{a},{b}}}(X_A)"), g.clone()).input("given", g.clone()))?;
                }
                let at: Point = (pp, qq, s);
                page.set_entry(at, g);
                if s >= 1 {
                    if let Some(d) = data.d1(&field, (a, b), s) {
                        page.set_differential(at, d);
                    }
                }
            }
        }
    }
    Ok(SbInstance { data, field, page, kb })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ch2Report {
    /// `(s, E_∞^{4,2,s}, page at which it settles)`.
    pub pieces: Vec<(i64, Slot, u32)>,
    /// The bottom piece `E_∞^{4,2,0}`.
    pub sub: Slot,
    /// What the pieces with `s ≥ 1` assemble to.
    pub quot: Abutment,
    pub resolution: Option<Resolution>,
    pub group: Abutment,
    /// `0 → sub → CH² → quot → 0`, with the cokernel of `[A]` spelled out.
    pub sequence: String,
}

/// `CH²(SB(A)) = H^{4,2}`, from the `(4,2)` column of the page.
pub fn ch2_severi_brauer(data: &BrauerData, field: &FieldModel) -> Result<Ch2Report> {
    let inst = build_sb_ss(data.clone(), field.clone(), (2, 6), (2, 2))?;
    let top = data.n as i64 - 1;
    let region: Vec<Point> = (0..=top).map(|s| (4, 2, s)).collect();
    let stable = einfty(&inst.page, &region)?;
    let pieces: Vec<(i64, Slot, u32)> = region.iter().map(|x| (x.2, stable[x].value.clone(), stable[x].at_page)).collect();
    let slots: Vec<(i64, Slot)> = pieces.iter().map(|(s, v, _)| (*s, v.clone())).collect();
    let group = assemble_filtration(4, 2, &slots, None)?.abutment;
    let sub = slots[0].1.clone();
    let quot = assemble_filtration(4, 2, &slots[1..], None)?.abutment;
    let resolution = match (&sub, &quot) {
        (Slot::Known(a), Abutment::Resolved(b)) => Some(crate::abgroup::extension_resolve(&ExtensionProblem::new(a.clone(), b.clone()))),
        _ => None,
    };
    let coker_name = match &data.mul_a.rule {
        HomRule::Named(name) => Some(format!("coker({name})")),
        _ => None,
    };
    let describe_sub = match &sub {
        Slot::Known(GroupExpr::Symbol(s)) if Some(s.name().to_string()) == coker_name => format!("coker({} → {})", data.mul_a.source, data.mul_a.target),
        other => other.to_string(),
    };
    let describe_quot = match &quot {
        Abutment::Resolved(g) => g.to_string(),
        _ => "?".into(),
    };
    let sequence = format!("0 → {describe_sub} → CH² → {describe_quot} → 0");
    Ok(Ch2Report { pieces, sub, quot, resolution, group, sequence })
}
