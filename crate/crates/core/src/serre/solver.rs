//! Instances with an unknown base and a known abutment, and the solver that
//! recovers the base weight by weight.
//!
//! In weight `q` the page splits into the row `s = 0`, which is the unknown
//! `X(p) = H^{p,q}(base)`, and the rows `s ≥ 1`, built from lower weights.
//! Writing `R_p` for what the rows `s ≥ 1` converge to, the abutment sits in
//! a long exact sequence `R_{p-1} → X(p) → A(p) → R_p → X(p+1)`, whose
//! maps `A(p) → R_p` are given by the restriction facts of the instance.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::field::FieldModel;
use super::kb::{Deduction, DistinguishedClass, KnowledgeBase, Rule};
use crate::abgroup::{biproduct, extension_resolve, ConcreteHom, ExtensionProblem, GroupExpr, GroupHom, HomRule, IntMatrix, Resolution};
use crate::couple::{assemble_filtration, page_turn, Abutment, Beyond, Differential, FiltrationReport, Point, Slot, TriPage, Window};
use crate::error::{Error, Result};
use crate::gradedalg::{Generator, LeibnizReport, Monomial, PagePairing, RingElement, RingPresentation};

/// Bidegrees `p.0 ≤ p ≤ p.1`, `0 ≤ q ≤ q_max`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SolveWindow {
    pub p: (i64, i64),
    pub q_max: i64,
}

impl SolveWindow {
    pub fn new(p: (i64, i64), q_max: i64) -> Result<Self> {
        if p.0 > p.1 || q_max < 0 {
            return Err(Error::InvalidInstance(format!("empty window p in {p:?}, q ≤ {q_max}")));
        }
        Ok(SolveWindow { p, q_max })
    }

    /// The `p`-range solved in weight `q`; lower weights feed higher ones
    /// and get a wider range.
    pub fn lane(&self, q: i64) -> (i64, i64) {
        let margin = 4 * (self.q_max - q);
        (self.p.0 - margin, self.p.1 + margin)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Instance {
    /// Base `BPGL_n`, fibre `BG_m`, total space `BGL_n`.
    Bpgl { n: u32 },
    /// Base `BBG_m`, total space `EBG_m`, a point.
    Bbgm,
}

impl Instance {
    pub fn name(&self) -> String {
        match self {
            Instance::Bpgl { n } => format!("BPGL_{n}"),
            Instance::Bbgm => "BBG_m".into(),
        }
    }

    fn total_space(&self) -> String {
        match self {
            Instance::Bpgl { n } => format!("BGL_{n}"),
            Instance::Bbgm => "EBG_m".into(),
        }
    }

    pub fn ring(&self) -> RingPresentation {
        match self {
            Instance::Bpgl { n } => RingPresentation::chern(*n as usize),
            Instance::Bbgm => RingPresentation::new(0u32, Vec::new()).expect("empty presentation"),
        }
    }

    /// Name of the class `d_1(1) ∈ H^{3,1}`.
    pub fn class_name(&self) -> &'static str {
        match self {
            Instance::Bpgl { .. } => "x",
            Instance::Bbgm => "χ",
        }
    }

    /// Restriction facts: `(monomial, multiple of c^weight)`.
    fn restriction_pack(&self) -> Vec<(&'static str, BigInt)> {
        match self {
            Instance::Bpgl { n } => {
                let n = BigInt::from(*n);
                vec![("c1", n.clone()), ("c1^2", &n * &n), ("c2", &n * (&n - 1) / 2)]
            }
            Instance::Bbgm => Vec::new(),
        }
    }
}

/// A spectral sequence `E_1^{p,q,s} = H^{p-2s,q-s}(base) ⇒ H^{p,q}(total)`
/// with the total space's cohomology a free module over `H^{**}(k)`.
#[derive(Clone, Debug)]
pub struct SerreSS {
    pub instance: Instance,
    pub field: FieldModel,
    pub window: SolveWindow,
    pub ring: RingPresentation,
    /// `E_1` on the window, read from the knowledge base it was built with.
    pub page: TriPage,
}

pub fn build_bpgl_ss(n: u32, field: FieldModel, window: SolveWindow) -> Result<(SerreSS, KnowledgeBase)> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("n = {n} must be at least 2")));
    }
    build(Instance::Bpgl { n }, field, window)
}

pub fn build_bbgm_ss(field: FieldModel, window: SolveWindow) -> Result<(SerreSS, KnowledgeBase)> {
    build(Instance::Bbgm, field, window)
}

fn build(instance: Instance, field: FieldModel, window: SolveWindow) -> Result<(SerreSS, KnowledgeBase)> {
    let ring = instance.ring();
    let mut kb = KnowledgeBase::new(instance.name());
    for (name, k) in instance.restriction_pack() {
        let m = parse_monomial(&ring, name)?;
        let w = ring.degree(&m).q;
        kb.add_restriction(format!("{name} ↦ {k}·c^{w}"), GroupHom::multiply(GroupExpr::z(), k));
    }
    let mut ss = SerreSS { instance, field, window, ring, page: TriPage::new(1, Window::new(window.p, (0, 0), (0, 0), Beyond::Unknown)) };
    ss.page = ss.page_from(&kb);
    Ok((ss, kb))
}

fn parse_monomial(ring: &RingPresentation, name: &str) -> Result<Monomial> {
    let mut powers = Vec::new();
    for part in name.split('*') {
        let (g, e) = part.split_once('^').map_or((part, 1), |(g, e)| (g, e.parse().unwrap_or(1)));
        powers.push((g, e));
    }
    ring.monomial(&powers)
}

fn scale_hom(d: &GroupHom, s: i64) -> GroupHom {
    match d.to_concrete() {
        Ok(c) => GroupHom::from_concrete(&c.scaled(&BigInt::from(s))),
        Err(_) => d.scaled(s),
    }
}

impl SerreSS {
    pub fn abutment_basis(&self, p: i64, q: i64) -> Vec<(Monomial, GroupExpr)> {
        self.ring.module_basis(p, q, |a, b| self.field.group(a, b))
    }

    /// `H^{p,q}` of the total space.
    pub fn abutment(&self, p: i64, q: i64) -> GroupExpr {
        GroupExpr::sum(self.abutment_basis(p, q).into_iter().map(|(_, g)| g))
    }

    /// `E_1` with entries and `d_1 = s·(d_1 at s = 1)` taken from `kb`. The
    /// window is widened by `q_max + 1` in `p` on both sides so that every
    /// `d_r` reaching the original window starts inside the page.
    pub fn page_from(&self, kb: &KnowledgeBase) -> TriPage {
        let w = self.window;
        let margin = w.q_max + 1;
        let p = (w.p.0 - margin, w.p.1 + margin);
        let mut page = TriPage::new(1, Window::new(p, (0, w.q_max), (0, w.q_max), Beyond::Unknown));
        for q in 0..=w.q_max {
            for pp in p.0..=p.1 {
                for s in 0..=q {
                    fill_entry(&mut page, kb, (pp, q, s));
                }
            }
        }
        page
    }

    /// The `E_∞` pieces of the solved page reassembled and compared with the
    /// abutment in every bidegree of the window.
    pub fn verify_abutment(&self, kb: &KnowledgeBase) -> Result<Vec<FiltrationReport>> {
        let mut page = self.page_from(kb);
        while (page.r as i64) <= self.window.q_max {
            page = page_turn(&page)?;
        }
        let mut out = Vec::new();
        for q in 0..=self.window.q_max {
            for p in self.window.p.0..=self.window.p.1 {
                let pieces: Vec<(i64, Slot)> = (0..=q).map(|s| (s, page.entry((p, q, s)))).collect();
                out.push(assemble_filtration(p, q, &pieces, Some(&self.abutment(p, q)))?);
            }
        }
        Ok(out)
    }

    /// The product structure on `E_1`: `c` in filtration 1 and the class
    /// `x` of order `n`, with `d_1(c^s x^i) = s c^{s-1} x^{i+1}`, or
    /// `(s+1)` in place of `s` when `perturbed`.
    pub fn leibniz(&self, window: &Window, perturbed: bool) -> Result<LeibnizReport> {
        let Instance::Bpgl { n } = self.instance else {
            return Err(Error::InvalidInstance("the product check is set up for BPGL_n".into()));
        };
        let ring = RingPresentation::new(0u32, vec![Generator::new("c", 1, 2), Generator::new("x", 1, 3).of_order(BigUint::from(n))])?;
        let pairing = PagePairing { ring: ring.clone(), filtration: vec![1, 0] };
        let d = |m: &Monomial| {
            let (s, i) = (m.exponent(0), m.exponent(1));
            if s == 0 {
                return RingElement::zero();
            }
            let k = if perturbed { s + 1 } else { s };
            ring.term(k as i64, Monomial(vec![s - 1, i + 1]))
        };
        Ok(crate::gradedalg::leibniz_check(&pairing, 1, window, d))
    }
}

fn fill_entry(page: &mut TriPage, kb: &KnowledgeBase, (p, q, s): Point) {
    match kb.slot(p - 2 * s, q - s) {
        Slot::Known(g) => page.set_entry((p, q, s), g),
        Slot::Unknown(why) => page.set_unknown((p, q, s), why),
    }
    if s >= 1 {
        if let Some(d) = kb.product((p - 2 * s, q - s)) {
            page.set_differential((p, q, s), scale_hom(d, s));
        }
    }
}

/// Kernel and cokernel of a map given on the summands of its source.
#[derive(Clone, Debug)]
pub struct EdgeParts {
    pub kernel: GroupExpr,
    pub cokernel: GroupExpr,
    /// Target onto cokernel, when expressible.
    pub projection: Option<GroupHom>,
}

/// `components[i]` is the map on the `i`-th summand of the source; all share
/// one target. Decided when everything is concrete, or when at most one
/// component is not evidently zero.
pub fn edge_parts(components: &[GroupHom]) -> Result<Option<EdgeParts>> {
    let Some(first) = components.first() else {
        return Ok(None);
    };
    let target = first.target.clone();
    if components.iter().any(|c| c.target != target) {
        return Err(Error::ShapeMismatch("edge components with different targets".into()));
    }
    let concrete: Option<Vec<ConcreteHom>> = components.iter().map(|c| c.to_concrete().ok()).collect();
    if let Some(parts) = concrete {
        let sources: Vec<_> = parts.iter().map(|h| h.source().clone()).collect();
        let (sum, _, proj) = biproduct(&sources);
        let t = parts[0].target().clone();
        let mut m = IntMatrix::zeros(t.generator_count(), sum.generator_count());
        for (h, pr) in parts.iter().zip(&proj) {
            let piece = h.matrix().mul(pr.matrix());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let v = &m[(i, j)] + &piece[(i, j)];
                    m[(i, j)] = v;
                }
            }
        }
        let edge = ConcreteHom::new(sum, t, m)?;
        let coker = edge.cokernel();
        return Ok(Some(EdgeParts {
            kernel: edge.kernel().group.into(),
            cokernel: coker.group.into(),
            projection: Some(GroupHom::from_concrete(&coker.map)),
        }));
    }
    let live: Vec<usize> = (0..components.len()).filter(|&i| !components[i].is_evidently_zero()).collect();
    let rest = |skip: Option<usize>| GroupExpr::sum(components.iter().enumerate().filter(|(i, _)| Some(*i) != skip).map(|(_, c)| c.source.clone()));
    match live.as_slice() {
        [] => Ok(Some(EdgeParts { kernel: rest(None), cokernel: target.clone(), projection: Some(GroupHom::identity(target)) })),
        [i] => {
            let f = &components[*i];
            let r = f.symb_apply()?;
            let (Some(k), Some(c)) = (r.kernel, r.cokernel) else {
                return Ok(None);
            };
            let projection = match &f.rule {
                _ if c.is_zero() => Some(GroupHom::zero(target.clone(), GroupExpr::Zero)),
                _ if c == target => Some(GroupHom::identity(target.clone())),
                HomRule::MultiplyBy(_) => Some(GroupHom::new(target.clone(), c.clone(), HomRule::CanonicalProjection)),
                _ => None,
            };
            Ok(Some(EdgeParts { kernel: GroupExpr::sum([rest(Some(*i)), k]), cokernel: c, projection }))
        }
        _ => Ok(None),
    }
}

/// What is known about `R_p` in one weight.
#[derive(Clone, Debug)]
struct Quotient {
    value: Slot,
    /// The filtration degree of the only nonzero graded piece.
    single: Option<i64>,
}

struct Lane<'a> {
    ss: &'a SerreSS,
    q: i64,
    lo: i64,
    hi: i64,
    /// Pages of the rows `s ≥ 1`, from `E_1` to `E_∞`.
    pages: Vec<TriPage>,
    quotients: alloc::collections::BTreeMap<i64, Quotient>,
    edges: alloc::collections::BTreeMap<i64, Option<Vec<GroupHom>>>,
}

fn e(name: &str, r: u32, (p, q, s): Point) -> String {
    format!("{name}_{r}^{{{p},{q},{s}}}")
}

impl<'a> Lane<'a> {
    fn new(ss: &'a SerreSS, kb: &mut KnowledgeBase, q: i64) -> Result<Self> {
        let (lo, hi) = ss.window.lane(q);
        let mut lane = Lane { ss, q, lo, hi, pages: Vec::new(), quotients: Default::default(), edges: Default::default() };
        if q >= 1 {
            let mut page = TriPage::new(1, Window::new((lo - 3, hi + 2), (q, q), (1, q), Beyond::Unknown));
            for p in lo - 3..=hi + 2 {
                for s in 1..=q {
                    fill_entry(&mut page, kb, (p, q, s));
                }
            }
            lane.pages.push(page);
            while (lane.pages.last().expect("nonempty").r as i64) < q {
                let next = page_turn(lane.pages.last().expect("nonempty"))?;
                lane.pages.push(next);
            }
            lane.log_homology(kb);
        }
        for p in lo - 1..=hi {
            let r = lane.quotient(kb, p)?;
            lane.quotients.insert(p, r);
        }
        for p in lo - 1..=hi {
            let edge = lane.edge(p)?;
            lane.edges.insert(p, edge);
        }
        Ok(lane)
    }

    fn log_homology(&self, kb: &mut KnowledgeBase) {
        for w in self.pages.windows(2) {
            let (cur, next) = (&w[0], &w[1]);
            for x in cur.points() {
                if !(self.lo - 1..=self.hi).contains(&x.0) {
                    continue;
                }
                let (Slot::Known(g), Slot::Known(h)) = (cur.entry(x), next.entry(x)) else {
                    continue;
                };
                let incoming = cur.differential(cur.source_of(x));
                let outgoing = cur.differential(x);
                if g.is_zero() || (incoming.is_zero() && outgoing.is_zero()) {
                    continue;
                }
                let mut d = Deduction::new(Rule::Homology, e("E", next.r, x), h).input(e("E", cur.r, x), g);
                if let Differential::Known(f) = &incoming {
                    d = d.map(f.clone());
                }
                match &outgoing {
                    Differential::Known(f) => d = d.map(f.clone()),
                    Differential::Unknown(_) => {
                        if let Slot::Known(t) = cur.entry(cur.target_of(x)) {
                            d = d.input(e("E", cur.r, cur.target_of(x)), t);
                        }
                    }
                }
                kb.record(d);
            }
        }
    }

    fn label(&self, p: i64) -> String {
        format!("R^{{{p},{}}}", self.q)
    }

    fn quotient(&self, kb: &mut KnowledgeBase, p: i64) -> Result<Quotient> {
        let q = self.q;
        let Some(first) = self.pages.first() else {
            return Ok(Quotient { value: Slot::Known(GroupExpr::Zero), single: None });
        };
        let e1: Vec<(i64, Slot)> = (1..=q).map(|s| (s, first.entry((p, q, s)))).collect();
        if e1.iter().all(|(_, x)| x.is_zero()) {
            let mut d = Deduction::new(Rule::SupportVanishing, self.label(p), GroupExpr::Zero);
            for (s, x) in &e1 {
                d = d.input(e("E", 1, (p, q, *s)), x.known().cloned().unwrap_or(GroupExpr::Zero));
            }
            kb.record(d);
            return Ok(Quotient { value: Slot::Known(GroupExpr::Zero), single: None });
        }
        let last = self.pages.last().expect("nonempty");
        let pieces: Vec<(i64, Slot)> = (1..=q).map(|s| (s, last.entry((p, q, s)))).collect();
        let report = assemble_filtration(p, q, &pieces, None)?;
        let value = match report.abutment {
            Abutment::Resolved(g) => {
                let mut d = Deduction::new(Rule::Abutment, self.label(p), g.clone());
                for (s, x) in &pieces {
                    d = d.input(e("E", last.r, (p, q, *s)), x.known().expect("resolved").clone());
                }
                kb.record(d);
                Slot::Known(g)
            }
            Abutment::Ambiguous(pr) => Slot::Unknown(format!("ambiguous extension {pr}")),
            Abutment::Undetermined(why) => Slot::Unknown(why),
        };
        let nonzero: Vec<i64> = pieces.iter().filter(|(_, x)| !x.is_zero()).map(|(s, _)| *s).collect();
        let single = match nonzero.as_slice() {
            [s] => Some(*s),
            _ => None,
        };
        Ok(Quotient { value, single })
    }

    fn differentials_at(&self, x: Point) -> Vec<(u32, Differential, Differential)> {
        self.pages.iter().map(|pg| (pg.r, pg.differential(pg.source_of(x)), pg.differential(x))).collect()
    }

    /// `E_∞ ↪ E_1` at `x`, when only `d_1` leaves it.
    fn inclusion_into_e1(&self, x: Point) -> Option<GroupHom> {
        let mut out = None;
        for (r, incoming, outgoing) in self.differentials_at(x) {
            if !incoming.is_zero() {
                return None;
            }
            if outgoing.is_zero() {
                continue;
            }
            if r != 1 {
                return None;
            }
            let c = outgoing.known()?.to_concrete().ok()?;
            out = Some(GroupHom::from_concrete(&c.kernel().map));
        }
        Some(out.unwrap_or_else(|| GroupHom::identity(self.pages[0].entry(x).known().cloned().unwrap_or(GroupExpr::Zero))))
    }

    /// `E_1 ↠ E_∞` at `x`, when only `d_1` arrives.
    fn projection_from_e1(&self, x: Point) -> Option<GroupHom> {
        let mut out = None;
        for (r, incoming, outgoing) in self.differentials_at(x) {
            if !outgoing.is_zero() {
                return None;
            }
            if incoming.is_zero() {
                continue;
            }
            if r != 1 {
                return None;
            }
            let c = incoming.known()?.to_concrete().ok()?;
            out = Some(GroupHom::from_concrete(&c.cokernel().map));
        }
        Some(out.unwrap_or_else(|| GroupHom::identity(self.pages[0].entry(x).known().cloned().unwrap_or(GroupExpr::Zero))))
    }

    /// The map `A(p) → R_p` on each summand of `A(p)`.
    fn edge(&self, p: i64) -> Result<Option<Vec<GroupHom>>> {
        let q = self.q;
        let Slot::Known(target) = self.quotients[&p].value.clone() else {
            return Ok(None);
        };
        let basis = self.ss.abutment_basis(p, q);
        if basis.is_empty() {
            return Ok(Some(vec![GroupHom::zero(GroupExpr::Zero, target)]));
        }
        let pack = self.ss.instance.restriction_pack();
        let mut out = Vec::new();
        for (m, c) in basis {
            let j = self.ss.ring.degree(&m).q;
            // Classes pulled back from the base die in the quotient.
            if j == 0 || target.is_zero() {
                out.push(GroupHom::zero(c, target.clone()));
                continue;
            }
            let name = self.ss.ring.show_monomial(&m);
            let Some((_, k)) = pack.iter().find(|(n, _)| *n == name) else {
                return Ok(None);
            };
            if self.quotients[&p].single != Some(j) {
                return Ok(None);
            }
            let x = (p, q, j);
            if self.pages[0].entry(x) != Slot::Known(c.clone()) {
                return Ok(None);
            }
            let Some(incl) = self.inclusion_into_e1(x) else {
                return Ok(None);
            };
            if incl.rule == HomRule::Identity {
                out.push(GroupHom::new(c.clone(), target.clone(), HomRule::MultiplyBy(k.clone())));
                continue;
            }
            let (Ok(incl), Some(cc)) = (incl.to_concrete(), c.as_concrete()) else {
                return Ok(None);
            };
            let mut cols = Vec::new();
            for i in 0..cc.generator_count() {
                let mut v = vec![BigInt::zero(); cc.generator_count()];
                v[i] = k.clone();
                let lift = incl.preimage_of(&v).ok_or_else(|| Error::Inconsistent(format!("{name} does not restrict into E_∞^{{{p},{q},{j}}}")))?;
                cols.push(lift);
            }
            let h = ConcreteHom::new(cc, incl.source().clone(), IntMatrix::from_columns(incl.source().generator_count(), &cols))?;
            out.push(GroupHom::from_concrete(&h));
        }
        Ok(Some(out))
    }

    fn restriction_name(&self, p: i64) -> String {
        format!("H^{{{p},{}}}({}) → {}", self.q, self.ss.instance.total_space(), self.label(p))
    }

    /// Solves `X(p)` and, from it, `d_1` into `X(p)`.
    fn settle(&self, kb: &mut KnowledgeBase, p: i64) -> Result<()> {
        let q = self.q;
        let target = format!("H^{{{p},{q}}}");
        let parts = |edge: &Option<Vec<GroupHom>>| -> Result<Option<EdgeParts>> {
            match edge {
                Some(c) => edge_parts(c),
                None => Ok(None),
            }
        };
        let before = parts(&self.edges[&(p - 1)])?;
        let after = parts(&self.edges[&p])?;
        let (Some(before), Some(after)) = (before, after) else {
            kb.leave_open(p, q, "restriction map not determined");
            return Ok(());
        };
        let coker_name = format!("coker({})", self.restriction_name(p - 1));
        let ker_name = format!("ker({})", self.restriction_name(p));
        let mut d = Deduction::new(Rule::RestrictionCokernel, coker_name.clone(), before.cokernel.clone());
        for m in self.edges[&(p - 1)].iter().flatten() {
            d = d.map(m.clone());
        }
        kb.record(d);
        let mut d = Deduction::new(Rule::RestrictionKernel, ker_name.clone(), after.kernel.clone());
        for m in self.edges[&p].iter().flatten() {
            d = d.map(m.clone());
        }
        kb.record(d);
        let problem = ExtensionProblem::new(before.cokernel.clone(), after.kernel.clone());
        let (x, rule) = match extension_resolve(&problem) {
            Resolution::Resolved { group, rule } => (group, rule),
            Resolution::Ambiguous(pr) => {
                kb.leave_open(p, q, format!("ambiguous extension {pr}"));
                return Ok(());
            }
        };
        kb.settle(p, q, Deduction::new(Rule::Extension, target, x.clone()).input(coker_name, problem.sub.clone()).input(ker_name, problem.quot.clone()))?;
        if q == 0 {
            return Ok(());
        }
        // d_1 from E_1^{p-1,q,1} = H^{p-3,q-1} into the bottom row.
        let src_at = (p - 3, q - 1);
        let Slot::Known(src) = kb.slot(src_at.0, src_at.1) else {
            return Ok(());
        };
        let d1 = if src.is_zero() || x.is_zero() {
            Some(GroupHom::zero(src, x.clone()))
        } else {
            self.connecting(p, &before, &problem, &x, rule)
        };
        if let Some(d1) = d1 {
            let label = format!("d_1 on H^{{{},{}}}", src_at.0, src_at.1);
            kb.record(Deduction::new(Rule::Connecting, label, d1.target.clone()).map(d1.clone()));
            kb.set_product(src_at, d1);
        }
        Ok(())
    }

    fn connecting(&self, p: i64, before: &EdgeParts, problem: &ExtensionProblem, x: &GroupExpr, rule: crate::abgroup::ExtensionRule) -> Option<GroupHom> {
        let r = &self.quotients[&(p - 1)];
        if r.single != Some(1) {
            return None;
        }
        let onto_piece = self.projection_from_e1((p - 1, self.q, 1))?;
        let onto_coker = before.projection.clone()?;
        let into_x = if problem.quot.is_zero() {
            GroupHom::identity(x.clone())
        } else {
            use crate::abgroup::ExtensionRule::*;
            match rule {
                FreeQuotient | CoprimeOrders => match (problem.sub.as_concrete(), problem.quot.as_concrete()) {
                    (Some(a), Some(b)) => {
                        let (_, inj, _) = biproduct(&[a, b]);
                        GroupHom::from_concrete(&inj[0])
                    }
                    _ => GroupHom::new(problem.sub.clone(), x.clone(), HomRule::CanonicalInclusion),
                },
                TrivialEnd => return None,
            }
        };
        compose(&[onto_piece, onto_coker, into_x])
    }
}

/// Left-to-right composite, multiplied out when every part is concrete.
fn compose(parts: &[GroupHom]) -> Option<GroupHom> {
    let parts: Vec<&GroupHom> = parts.iter().filter(|h| h.rule != HomRule::Identity).collect();
    let (Some(first), Some(last)) = (parts.first(), parts.last()) else {
        return None;
    };
    if let Some(c) = parts.iter().map(|h| h.to_concrete().ok()).collect::<Option<Vec<_>>>() {
        let mut acc = c[0].clone();
        for h in &c[1..] {
            acc = acc.then(h).ok()?;
        }
        return Some(GroupHom::from_concrete(&acc));
    }
    if parts.len() == 1 {
        return Some((*first).clone());
    }
    Some(GroupHom::new(first.source.clone(), last.target.clone(), HomRule::Composite(parts.into_iter().cloned().collect())))
}

/// Order of `d(1)` for `d` out of `Z`; `0` when infinite.
fn order_of_image(d: &GroupHom) -> Option<BigUint> {
    let c = d.to_concrete().ok()?;
    if c.source().generator_count() != 1 || c.source().free_rank() != 1 {
        return None;
    }
    Some(c.image().group.order().unwrap_or_else(BigUint::zero))
}

/// Weight by weight, solves every bidegree of the window it can decide and
/// leaves the rest open.
pub fn solve_unknowns(ss: &SerreSS, mut kb: KnowledgeBase) -> Result<KnowledgeBase> {
    for q in 0..=ss.window.q_max {
        let lane = Lane::new(ss, &mut kb, q)?;
        for p in lane.lo..=lane.hi {
            lane.settle(&mut kb, p)?;
        }
        if q == 1 {
            if let Some(order) = kb.product((0, 0)).and_then(order_of_image) {
                kb.add_class(DistinguishedClass { name: ss.instance.class_name().to_string(), at: (3, 1), order });
            }
        }
        if q == 2 {
            annotate_weight_two(ss, &mut kb);
        }
    }
    Ok(kb)
}

/// Which combination of Chern classes carries the free part of `H^{4,2}`.
fn annotate_weight_two(ss: &SerreSS, kb: &mut KnowledgeBase) {
    let Instance::Bpgl { n } = ss.instance else {
        return;
    };
    let n = BigInt::from(n);
    let (a, b) = (&n * &n, &n * (&n - 1) / 2);
    let g = a.gcd(&b);
    let ring = &ss.ring;
    let (Ok(c11), Ok(c2)) = (ring.monomial(&[("c1", 2)]), ring.monomial(&[("c2", 1)])) else {
        return;
    };
    let kernel = ring.add(&ring.term(&b / &g, c11), &ring.term(-(&a / &g), c2));
    kb.note(format!("H^{{4,2}}: the free summand maps to {} in H^{{4,2}}({})", ring.show(&kernel), ss.instance.total_space()));
    kb.note(format!("H^{{4,2}}: the restriction image has index {g} in E_1^{{4,2,2}} = Z"));
}
