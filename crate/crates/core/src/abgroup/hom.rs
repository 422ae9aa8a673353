//! Homomorphisms between group expressions, with a closed set of symbolic
//! rewriting rules for their kernels, cokernels and images.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::concrete::{biproduct, ConcreteGroup, ConcreteHom};
use super::expr::{instantiate, Bindings, GroupExpr, Symbol};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HomRule {
    Zero,
    Identity,
    /// Multiplication by `n`. Between different concrete groups with the same
    /// number of generators it sends generator `i` to `n` times generator `i`.
    MultiplyBy(BigInt),
    /// Matrix on canonical generators (`target x source`).
    Matrix(IntMatrix),
    /// `G -> G/nG`, or projection of a direct sum onto some of its summands.
    CanonicalProjection,
    /// `G[n] -> G`, or inclusion of some summands into a direct sum.
    CanonicalInclusion,
    /// Maps applied left to right.
    Composite(Vec<GroupHom>),
    /// Multiplication by `multiple` times a named cohomology class whose value
    /// is not part of the data (e.g. the Brauer class).
    ClassProduct { class: String, multiple: BigInt },
    /// A map known only by name; its kernel and cokernel are opaque symbols.
    Named(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: GroupExpr,
    pub target: GroupExpr,
    pub rule: HomRule,
}

/// Whatever `symb_apply` could determine.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymbolicResult {
    pub kernel: Option<GroupExpr>,
    pub cokernel: Option<GroupExpr>,
    pub image: Option<GroupExpr>,
}

impl SymbolicResult {
    fn full(kernel: GroupExpr, cokernel: GroupExpr, image: GroupExpr) -> Self {
        SymbolicResult { kernel: Some(kernel), cokernel: Some(cokernel), image: Some(image) }
    }

    pub fn kernel(&self) -> Result<&GroupExpr> {
        self.kernel.as_ref().ok_or_else(|| Error::NoRule("kernel".into()))
    }

    pub fn cokernel(&self) -> Result<&GroupExpr> {
        self.cokernel.as_ref().ok_or_else(|| Error::NoRule("cokernel".into()))
    }

    pub fn image(&self) -> Result<&GroupExpr> {
        self.image.as_ref().ok_or_else(|| Error::NoRule("image".into()))
    }
}

impl GroupHom {
    pub fn new(source: GroupExpr, target: GroupExpr, rule: HomRule) -> Self {
        GroupHom { source: source.normalized(), target: target.normalized(), rule }
    }

    pub fn zero(source: GroupExpr, target: GroupExpr) -> Self {
        GroupHom::new(source, target, HomRule::Zero)
    }

    pub fn identity(g: GroupExpr) -> Self {
        GroupHom::new(g.clone(), g, HomRule::Identity)
    }

    pub fn multiply(g: GroupExpr, n: impl Into<BigInt>) -> Self {
        GroupHom::new(g.clone(), g, HomRule::MultiplyBy(n.into()))
    }

    pub fn from_concrete(h: &ConcreteHom) -> Self {
        GroupHom::new(h.source().into(), h.target().into(), HomRule::Matrix(h.matrix().clone()))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> GroupHom {
        let mut parts = match &self.rule {
            HomRule::Composite(p) => p.clone(),
            _ => alloc::vec![self.clone()],
        };
        match &next.rule {
            HomRule::Composite(p) => parts.extend(p.iter().cloned()),
            _ => parts.push(next.clone()),
        }
        GroupHom::new(self.source.clone(), next.target.clone(), HomRule::Composite(parts))
    }

    /// `n` times this map.
    pub fn scaled(&self, n: impl Into<BigInt>) -> GroupHom {
        let n = n.into();
        match &self.rule {
            HomRule::Zero => self.clone(),
            HomRule::ClassProduct { class, multiple } => GroupHom::new(
                self.source.clone(),
                self.target.clone(),
                HomRule::ClassProduct { class: class.clone(), multiple: multiple * &n },
            ),
            HomRule::MultiplyBy(m) => GroupHom::new(self.source.clone(), self.target.clone(), HomRule::MultiplyBy(m * &n)),
            _ if n.is_zero() => GroupHom::zero(self.source.clone(), self.target.clone()),
            _ if n.is_one() => self.clone(),
            _ => self.then(&GroupHom::multiply(self.target.clone(), n)),
        }
    }

    /// `true` when the rule says the map is zero without instantiation.
    pub fn is_evidently_zero(&self) -> bool {
        if self.source.is_zero() || self.target.is_zero() {
            return true;
        }
        match &self.rule {
            HomRule::Zero => true,
            HomRule::MultiplyBy(n) => n.is_zero(),
            HomRule::Matrix(m) => self.to_concrete().map(|h| h.is_zero()).unwrap_or(m.is_zero()),
            HomRule::ClassProduct { multiple, .. } => multiple.is_zero(),
            HomRule::Composite(parts) => parts.iter().any(GroupHom::is_evidently_zero),
            _ => false,
        }
    }

    /// The map on canonical groups, when both ends are concrete.
    pub fn to_concrete(&self) -> Result<ConcreteHom> {
        self.instantiate(&Bindings::new())
    }

    /// Substitutes concrete groups for every symbol and builds the map.
    pub fn instantiate(&self, bindings: &Bindings) -> Result<ConcreteHom> {
        let s = instantiate(&self.source, bindings)?;
        let t = instantiate(&self.target, bindings)?;
        match &self.rule {
            HomRule::Zero => Ok(ConcreteHom::zero(&s, &t)),
            HomRule::Identity => {
                if s != t {
                    return Err(Error::ShapeMismatch(format!("identity between {s} and {t}")));
                }
                Ok(ConcreteHom::identity(&s))
            }
            HomRule::MultiplyBy(n) => {
                if s.generator_count() != t.generator_count() {
                    return Err(Error::ShapeMismatch(format!("multiplication between {s} and {t}")));
                }
                ConcreteHom::new(s.clone(), t, IntMatrix::scalar(s.generator_count(), n))
            }
            HomRule::Matrix(m) => ConcreteHom::new(s, t, m.clone()),
            HomRule::CanonicalProjection => concrete_projection(&s, &t).or_else(|e| summand_map(&self.source, &self.target, bindings, true).ok_or(e)),
            HomRule::CanonicalInclusion => concrete_inclusion(&s, &t).or_else(|e| summand_map(&self.target, &self.source, bindings, false).ok_or(e)),
            HomRule::Composite(parts) => {
                let mut acc: Option<ConcreteHom> = None;
                for p in parts {
                    let h = p.instantiate(bindings)?;
                    acc = Some(match acc {
                        None => h,
                        Some(a) => a.then(&h)?,
                    });
                }
                acc.ok_or_else(|| Error::ShapeMismatch("empty composite".into()))
            }
            HomRule::ClassProduct { multiple, .. } if multiple.is_zero() => Ok(ConcreteHom::zero(&s, &t)),
            HomRule::ClassProduct { class, .. } => Err(Error::NotConcrete(format!("value of class {class} is not bound"))),
            HomRule::Named(name) => Err(Error::NotConcrete(format!("map {name} has no concrete value"))),
        }
    }

    /// Kernel, cokernel and image by rewriting. Parts that no rule reaches are
    /// `None`; if nothing is reachable the result is `NoRule`.
    pub fn symb_apply(&self) -> Result<SymbolicResult> {
        let r = self.symb_apply_partial()?;
        if r.kernel.is_none() && r.cokernel.is_none() && r.image.is_none() {
            return Err(Error::NoRule(format!("{self:?}")));
        }
        Ok(r)
    }

    fn symb_apply_partial(&self) -> Result<SymbolicResult> {
        let (s, t) = (&self.source, &self.target);
        if self.is_evidently_zero() {
            return Ok(SymbolicResult::full(s.clone(), t.clone(), GroupExpr::Zero));
        }
        if s.is_concrete() && t.is_concrete() {
            if let Ok(h) = self.to_concrete() {
                return Ok(SymbolicResult::full(h.kernel().group.into(), h.cokernel().group.into(), h.image().group.into()));
            }
        }
        Ok(match &self.rule {
            HomRule::Zero => unreachable!("handled above"),
            HomRule::Identity => {
                if s != t {
                    return Err(Error::ShapeMismatch(format!("identity between {s} and {t}")));
                }
                SymbolicResult::full(GroupExpr::Zero, GroupExpr::Zero, s.clone())
            }
            HomRule::MultiplyBy(n) => {
                if s != t {
                    return Err(Error::ShapeMismatch(format!("multiplication by {n} between {s} and {t}")));
                }
                multiply_rule(s, n)
            }
            HomRule::Matrix(_) => return Err(Error::NotConcrete(format!("matrix between {s} and {t}"))),
            HomRule::CanonicalProjection => projection_rule(s, t)?,
            HomRule::CanonicalInclusion => inclusion_rule(s, t)?,
            HomRule::Composite(parts) => composite_rule(parts)?,
            HomRule::ClassProduct { .. } => {
                // Any map from a free group into a torsion group has kernel of full rank.
                let mut r = SymbolicResult::default();
                if let (GroupExpr::Free(k), true) = (s, t.is_torsion()) {
                    r.kernel = Some(GroupExpr::Free(*k));
                }
                r
            }
            HomRule::Named(name) => SymbolicResult {
                kernel: Some(GroupExpr::symbol(Symbol::new(format!("ker({name})")))),
                cokernel: Some(GroupExpr::symbol(Symbol::new(format!("coker({name})")))),
                image: Some(GroupExpr::symbol(Symbol::new(format!("im({name})")))),
            },
        })
    }
}

fn multiply_rule(g: &GroupExpr, n: &BigInt) -> SymbolicResult {
    if n.is_zero() {
        return SymbolicResult::full(g.clone(), g.clone(), GroupExpr::Zero);
    }
    let m: BigUint = n.magnitude().clone();
    if m.is_one() {
        return SymbolicResult::full(GroupExpr::Zero, GroupExpr::Zero, g.clone());
    }
    let (concrete, symbolic) = g.split_concrete();
    let h = ConcreteHom::multiply(&concrete, n);
    let mut kernel = alloc::vec![GroupExpr::from(h.kernel().group)];
    let mut coker = alloc::vec![GroupExpr::from(h.cokernel().group)];
    let mut image = Some(alloc::vec![GroupExpr::from(h.image().group)]);
    for part in symbolic {
        kernel.push(GroupExpr::torsion(part.clone(), m.clone()));
        coker.push(GroupExpr::quotient(part.clone(), m.clone()));
        // nG is only expressible when n kills the summand or is prime to its exponent.
        let killed = GroupExpr::quotient(part.clone(), m.clone()) == part;
        let unit = GroupExpr::quotient(part.clone(), m.clone()).is_zero() && GroupExpr::torsion(part.clone(), m.clone()).is_zero();
        match (&mut image, killed, unit) {
            (Some(v), true, _) => v.push(GroupExpr::Zero),
            (Some(v), _, true) => v.push(part),
            _ => image = None,
        }
    }
    SymbolicResult {
        kernel: Some(GroupExpr::sum(kernel)),
        cokernel: Some(GroupExpr::sum(coker)),
        image: image.map(GroupExpr::sum),
    }
}

/// Removes `part` (as a multiset of summands) from `whole`, if it occurs.
fn complement(whole: &GroupExpr, part: &GroupExpr) -> Option<GroupExpr> {
    let mut rest = whole.summands();
    for p in part.summands() {
        let i = rest.iter().position(|x| *x == p)?;
        rest.remove(i);
    }
    Some(GroupExpr::sum(rest))
}

fn quotient_exponent(s: &GroupExpr, t: &GroupExpr) -> Option<BigUint> {
    match t {
        GroupExpr::Quotient(inner, n) if **inner == *s => Some(n.clone()),
        _ => None,
    }
}

fn projection_rule(s: &GroupExpr, t: &GroupExpr) -> Result<SymbolicResult> {
    if let Some(rest) = complement(s, t) {
        return Ok(SymbolicResult::full(rest, GroupExpr::Zero, t.clone()));
    }
    if quotient_exponent(s, t).is_some() {
        return Ok(SymbolicResult { kernel: None, cokernel: Some(GroupExpr::Zero), image: Some(t.clone()) });
    }
    Err(Error::ShapeMismatch(format!("{t} is not a canonical quotient of {s}")))
}

fn inclusion_rule(s: &GroupExpr, t: &GroupExpr) -> Result<SymbolicResult> {
    if let Some(rest) = complement(t, s) {
        return Ok(SymbolicResult::full(GroupExpr::Zero, rest, s.clone()));
    }
    if matches!(s, GroupExpr::Torsion(inner, _) if **inner == *t) {
        return Ok(SymbolicResult { kernel: Some(GroupExpr::Zero), cokernel: None, image: Some(s.clone()) });
    }
    Err(Error::ShapeMismatch(format!("{s} is not a canonical subgroup of {t}")))
}

fn composite_rule(parts: &[GroupHom]) -> Result<SymbolicResult> {
    let Some((first, rest)) = parts.split_first() else {
        return Err(Error::ShapeMismatch("empty composite".into()));
    };
    let mut acc = first.symb_apply_partial()?;
    for g in rest {
        let rg = g.symb_apply_partial()?;
        let g_injective = rg.kernel.as_ref().is_some_and(GroupExpr::is_zero);
        let f_surjective = acc.cokernel.as_ref().is_some_and(GroupExpr::is_zero);
        let kernel = if g_injective { acc.kernel.clone() } else { None };
        let (cokernel, image) = if f_surjective { (rg.cokernel.clone(), rg.image.clone()) } else { (None, None) };
        let image = match (image, g_injective) {
            (Some(i), _) => Some(i),
            (None, true) => acc.image.clone(),
            _ => None,
        };
        acc = SymbolicResult { kernel, cokernel, image };
    }
    Ok(acc)
}

fn concrete_projection(s: &ConcreteGroup, t: &ConcreteGroup) -> Result<ConcreteHom> {
    if s == t {
        return Ok(ConcreteHom::identity(s));
    }
    if t.is_trivial() {
        return Ok(ConcreteHom::zero(s, t));
    }
    let exponent = t.invariant_factors().last().cloned().unwrap_or_else(BigUint::zero);
    if t.free_rank() == 0 && !exponent.is_zero() {
        let c = ConcreteHom::multiply(s, &BigInt::from(exponent)).cokernel();
        if c.group == *t {
            return Ok(c.map);
        }
    }
    if s.generator_count() == t.generator_count() {
        if let Ok(h) = ConcreteHom::new(s.clone(), t.clone(), IntMatrix::identity(s.generator_count())) {
            if h.is_surjective() {
                return Ok(h);
            }
        }
    }
    Err(Error::ShapeMismatch(format!("{t} is not a canonical quotient of {s}")))
}

/// Projection of `whole` onto (or inclusion of) the summands making up `part`,
/// matched the same way as `complement`.
fn summand_map(whole: &GroupExpr, part: &GroupExpr, bindings: &Bindings, project: bool) -> Option<ConcreteHom> {
    let mut free: Vec<(usize, GroupExpr)> = whole.summands().into_iter().enumerate().collect();
    let mut picks = Vec::new();
    for p in part.summands() {
        let i = free.iter().position(|(_, x)| *x == p)?;
        picks.push(free.remove(i).0);
    }
    let concrete = |e: &GroupExpr| -> Option<Vec<ConcreteGroup>> { e.summands().iter().map(|x| instantiate(x, bindings).ok()).collect() };
    let (w, w_inj, w_proj) = biproduct(&concrete(whole)?);
    let (p, p_inj, p_proj) = biproduct(&concrete(part)?);
    let mut m = IntMatrix::zeros(0, 0);
    for (k, &i) in picks.iter().enumerate() {
        let piece = if project { w_proj[i].then(&p_inj[k]) } else { p_proj[k].then(&w_inj[i]) }.ok()?;
        m = if m.rows() == 0 { piece.matrix().clone() } else { m.add(piece.matrix()) };
    }
    let (s, t) = if project { (w, p) } else { (p, w) };
    if picks.is_empty() {
        return Some(ConcreteHom::zero(&s, &t));
    }
    ConcreteHom::new(s, t, m).ok()
}

fn concrete_inclusion(s: &ConcreteGroup, t: &ConcreteGroup) -> Result<ConcreteHom> {
    if s == t {
        return Ok(ConcreteHom::identity(s));
    }
    if s.is_trivial() {
        return Ok(ConcreteHom::zero(s, t));
    }
    let exponent = s.invariant_factors().last().cloned().unwrap_or_else(BigUint::zero);
    if s.free_rank() == 0 && !exponent.is_zero() {
        let k = ConcreteHom::multiply(t, &BigInt::from(exponent)).kernel();
        if k.group == *s {
            return Ok(k.map);
        }
    }
    Err(Error::ShapeMismatch(format!("{s} is not a canonical subgroup of {t}")))
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{}--> {}", self.source, self.rule, self.target)
    }
}

impl fmt::Display for HomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomRule::Zero => f.write_str("0"),
            HomRule::Identity => f.write_str("id"),
            HomRule::MultiplyBy(n) => write!(f, "·{n}"),
            HomRule::Matrix(m) => write!(f, "{m:?}"),
            HomRule::CanonicalProjection => f.write_str("proj"),
            HomRule::CanonicalInclusion => f.write_str("incl"),
            HomRule::Composite(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ; ")?;
                    }
                    write!(f, "{}", p.rule)?;
                }
                Ok(())
            }
            HomRule::ClassProduct { class, multiple } => write!(f, "·{multiple}{class}"),
            HomRule::Named(name) => f.write_str(name),
        }
    }
}
