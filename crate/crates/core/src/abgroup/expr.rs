//! Symbolic group expressions.
//!
//! Expressions are kept in normal form: direct sums are flattened, the
//! concrete part is folded into a single invariant-factor chain, and the
//! symbolic summands are sorted. Equality of normal forms is syntactic.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::concrete::{coprime_part, ConcreteGroup};
use crate::error::{Error, Result};

/// Name of an opaque group from the field vocabulary, e.g. `K` for `k*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    /// `k*`, the units of the base field.
    pub fn units() -> Self {
        Symbol::new("K")
    }

    /// Milnor K-group `K^M_q(k)`.
    pub fn milnor(q: i64) -> Self {
        Symbol(format!("KM{q}"))
    }

    /// `ker_p` for a central simple algebra.
    pub fn brauer_kernel(p: i64) -> Self {
        Symbol(format!("KER{p}"))
    }

    /// Opaque field cohomology `H^{p,q}(k)`.
    pub fn field(p: i64, q: i64) -> Self {
        Symbol(format!("H({p},{q})"))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupExpr {
    Zero,
    Free(usize),
    Cyclic(BigUint),
    Symbol(Symbol),
    /// `G / nG`
    Quotient(Box<GroupExpr>, BigUint),
    /// `G[n] = {g : ng = 0}`
    Torsion(Box<GroupExpr>, BigUint),
    DirectSum(Vec<GroupExpr>),
}

impl GroupExpr {
    pub fn z() -> Self {
        GroupExpr::Free(1)
    }

    pub fn free(r: usize) -> Self {
        GroupExpr::Free(r).normalized()
    }

    pub fn cyclic(m: impl Into<BigUint>) -> Self {
        GroupExpr::Cyclic(m.into()).normalized()
    }

    pub fn symbol(s: Symbol) -> Self {
        GroupExpr::Symbol(s)
    }

    pub fn named(name: &str) -> Self {
        GroupExpr::Symbol(Symbol::new(name))
    }

    pub fn quotient(g: GroupExpr, n: impl Into<BigUint>) -> Self {
        GroupExpr::Quotient(Box::new(g), n.into()).normalized()
    }

    pub fn torsion(g: GroupExpr, n: impl Into<BigUint>) -> Self {
        GroupExpr::Torsion(Box::new(g), n.into()).normalized()
    }

    pub fn sum(parts: impl IntoIterator<Item = GroupExpr>) -> Self {
        GroupExpr::DirectSum(parts.into_iter().collect()).normalized()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GroupExpr::Zero)
    }

    /// Normal form of the expression.
    pub fn normalized(&self) -> GroupExpr {
        match self {
            GroupExpr::Zero => GroupExpr::Zero,
            GroupExpr::Free(0) => GroupExpr::Zero,
            GroupExpr::Free(r) => GroupExpr::Free(*r),
            GroupExpr::Cyclic(m) => Self::from_concrete(&ConcreteGroup::cyclic(m.clone())),
            GroupExpr::Symbol(s) => GroupExpr::Symbol(s.clone()),
            GroupExpr::Quotient(g, n) => quotient_nf(g.normalized(), n),
            GroupExpr::Torsion(g, n) => torsion_nf(g.normalized(), n),
            GroupExpr::DirectSum(parts) => assemble(parts.iter().map(GroupExpr::normalized)),
        }
    }

    pub fn from_concrete(g: &ConcreteGroup) -> GroupExpr {
        let mut parts: Vec<GroupExpr> = g.invariant_factors().iter().map(|d| GroupExpr::Cyclic(d.clone())).collect();
        if g.free_rank() > 0 {
            parts.push(GroupExpr::Free(g.free_rank()));
        }
        match parts.len() {
            0 => GroupExpr::Zero,
            1 => parts.pop().expect("one part"),
            _ => GroupExpr::DirectSum(parts),
        }
    }

    /// The canonical group, when the normal form has no symbolic part.
    pub fn as_concrete(&self) -> Option<ConcreteGroup> {
        match self.normalized() {
            GroupExpr::Zero => Some(ConcreteGroup::trivial()),
            GroupExpr::Free(r) => Some(ConcreteGroup::free(r)),
            GroupExpr::Cyclic(m) => Some(ConcreteGroup::cyclic(m)),
            GroupExpr::DirectSum(parts) => parts.iter().try_fold(ConcreteGroup::trivial(), |acc, p| match p {
                GroupExpr::Free(r) => Some(acc.direct_sum(&ConcreteGroup::free(*r))),
                GroupExpr::Cyclic(m) => Some(acc.direct_sum(&ConcreteGroup::cyclic(m.clone()))),
                _ => None,
            }),
            _ => None,
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.as_concrete().is_some()
    }

    /// Top-level summands of the normal form (a single summand for non-sums).
    pub fn summands(&self) -> Vec<GroupExpr> {
        match self.normalized() {
            GroupExpr::Zero => Vec::new(),
            GroupExpr::DirectSum(parts) => parts,
            other => alloc::vec![other],
        }
    }

    /// Splits the normal form into its concrete part and its symbolic summands.
    pub fn split_concrete(&self) -> (ConcreteGroup, Vec<GroupExpr>) {
        let mut concrete = ConcreteGroup::trivial();
        let mut symbolic = Vec::new();
        for s in self.summands() {
            match s.as_concrete() {
                Some(c) => concrete = concrete.direct_sum(&c),
                None => symbolic.push(s),
            }
        }
        (concrete, symbolic)
    }

    /// Every symbol occurring in the expression.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            GroupExpr::Symbol(s) => out.push(s.clone()),
            GroupExpr::Quotient(g, _) | GroupExpr::Torsion(g, _) => g.collect_symbols(out),
            GroupExpr::DirectSum(parts) => parts.iter().for_each(|p| p.collect_symbols(out)),
            _ => {}
        }
    }

    /// `true` when the expression is syntactically a torsion group: finite
    /// concrete parts, quotients and torsion subgroups by `n > 0`, and the
    /// `KER*` symbols, which are torsion by declaration.
    pub fn is_torsion(&self) -> bool {
        match self {
            GroupExpr::Zero | GroupExpr::Cyclic(_) => true,
            GroupExpr::Free(r) => *r == 0,
            GroupExpr::Symbol(s) => s.name().starts_with("KER"),
            GroupExpr::Quotient(g, n) | GroupExpr::Torsion(g, n) => !n.is_zero() || g.is_torsion(),
            GroupExpr::DirectSum(parts) => parts.iter().all(GroupExpr::is_torsion),
        }
    }

    /// Free rank when the expression is free of symbols.
    pub fn rank(&self) -> Option<usize> {
        self.as_concrete().map(|c| c.free_rank())
    }

    /// Tensor with `Z[1/n]`: every summand killed by a power of `n` vanishes,
    /// concrete torsion loses its `n`-primary part, bare symbols are kept.
    pub fn localize_away(&self, n: &BigUint) -> GroupExpr {
        let (concrete, symbolic) = self.split_concrete();
        let mut parts = alloc::vec![GroupExpr::from_concrete(&concrete.localize_away(n))];
        for s in symbolic {
            parts.push(localize_summand(&s, n));
        }
        GroupExpr::sum(parts)
    }
}

fn localize_summand(s: &GroupExpr, n: &BigUint) -> GroupExpr {
    match s {
        GroupExpr::Quotient(g, m) | GroupExpr::Torsion(g, m) => {
            let keep = coprime_part(m, n);
            if keep.is_one() {
                GroupExpr::Zero
            } else if &keep == m {
                s.clone()
            } else {
                let inner = localize_summand(g, n);
                match s {
                    GroupExpr::Quotient(..) => GroupExpr::quotient(inner, keep),
                    _ => GroupExpr::torsion(inner, keep),
                }
            }
        }
        GroupExpr::DirectSum(parts) => GroupExpr::sum(parts.iter().map(|p| localize_summand(p, n))),
        other => other.clone(),
    }
}

fn quotient_nf(g: GroupExpr, n: &BigUint) -> GroupExpr {
    if n.is_one() {
        return GroupExpr::Zero;
    }
    if n.is_zero() {
        return g;
    }
    match g {
        GroupExpr::Zero => GroupExpr::Zero,
        GroupExpr::Free(r) => {
            GroupExpr::from_concrete(&ConcreteGroup::from_cyclic_orders(0, core::iter::repeat_n(n.clone(), r)))
        }
        GroupExpr::Cyclic(m) => GroupExpr::from_concrete(&ConcreteGroup::cyclic(m.gcd(n))),
        GroupExpr::DirectSum(parts) => assemble(parts.into_iter().map(|p| quotient_nf(p, n))),
        GroupExpr::Quotient(h, m) => quotient_nf(*h, &m.gcd(n)),
        GroupExpr::Torsion(h, m) => {
            // mG = 0 implies nG = gcd(m, n)G.
            let g = m.gcd(n);
            if g.is_one() {
                GroupExpr::Zero
            } else if g == m {
                GroupExpr::Torsion(h, m)
            } else {
                GroupExpr::Quotient(Box::new(GroupExpr::Torsion(h, m)), g)
            }
        }
        s @ GroupExpr::Symbol(_) => GroupExpr::Quotient(Box::new(s), n.clone()),
    }
}

fn torsion_nf(g: GroupExpr, n: &BigUint) -> GroupExpr {
    if n.is_one() {
        return GroupExpr::Zero;
    }
    if n.is_zero() {
        return g;
    }
    match g {
        GroupExpr::Zero | GroupExpr::Free(_) => GroupExpr::Zero,
        GroupExpr::Cyclic(m) => GroupExpr::from_concrete(&ConcreteGroup::cyclic(m.gcd(n))),
        GroupExpr::DirectSum(parts) => assemble(parts.into_iter().map(|p| torsion_nf(p, n))),
        GroupExpr::Torsion(h, m) => torsion_nf(*h, &m.gcd(n)),
        GroupExpr::Quotient(h, m) => {
            // mG = 0 implies G[n] = G[gcd(m, n)].
            let g = m.gcd(n);
            if g.is_one() {
                GroupExpr::Zero
            } else if g == m {
                GroupExpr::Quotient(h, m)
            } else {
                GroupExpr::Torsion(Box::new(GroupExpr::Quotient(h, m)), g)
            }
        }
        s @ GroupExpr::Symbol(_) => GroupExpr::Torsion(Box::new(s), n.clone()),
    }
}

/// Direct sum of already-normalised parts.
fn assemble(parts: impl Iterator<Item = GroupExpr>) -> GroupExpr {
    let mut free = 0usize;
    let mut orders = Vec::new();
    let mut symbolic = Vec::new();
    let mut stack: Vec<GroupExpr> = parts.collect();
    while let Some(p) = stack.pop() {
        match p {
            GroupExpr::Zero => {}
            GroupExpr::Free(r) => free += r,
            GroupExpr::Cyclic(m) => orders.push(m),
            GroupExpr::DirectSum(inner) => stack.extend(inner),
            other => symbolic.push(other),
        }
    }
    symbolic.sort();
    let concrete = ConcreteGroup::from_cyclic_orders(free, orders);
    let mut out = GroupExpr::from_concrete(&concrete).summands_raw();
    out.extend(symbolic);
    match out.len() {
        0 => GroupExpr::Zero,
        1 => out.pop().expect("one summand"),
        _ => GroupExpr::DirectSum(out),
    }
}

impl GroupExpr {
    fn summands_raw(self) -> Vec<GroupExpr> {
        match self {
            GroupExpr::Zero => Vec::new(),
            GroupExpr::DirectSum(p) => p,
            other => alloc::vec![other],
        }
    }
}

impl From<ConcreteGroup> for GroupExpr {
    fn from(g: ConcreteGroup) -> Self {
        GroupExpr::from_concrete(&g)
    }
}

impl From<&ConcreteGroup> for GroupExpr {
    fn from(g: &ConcreteGroup) -> Self {
        GroupExpr::from_concrete(g)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Zero => f.write_str("0"),
            GroupExpr::Free(1) => f.write_str("Z"),
            GroupExpr::Free(r) => write!(f, "Z^{r}"),
            GroupExpr::Cyclic(m) => write!(f, "Z/{m}"),
            GroupExpr::Symbol(s) => write!(f, "{s}"),
            GroupExpr::Quotient(g, n) => {
                write_atom(f, g)?;
                write!(f, "/{n}")
            }
            GroupExpr::Torsion(g, n) => {
                write_atom(f, g)?;
                write!(f, "[{n}]")
            }
            GroupExpr::DirectSum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊕ ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, g: &GroupExpr) -> fmt::Result {
    match g {
        GroupExpr::DirectSum(_) | GroupExpr::Free(_) | GroupExpr::Cyclic(_) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

impl fmt::Debug for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the display syntax: `0`, `Z`, `Z^3`, `Z/6`, symbol names such as
/// `K` or `H(1,2)`, postfix `/n` (quotient) and `[n]` (torsion), parentheses,
/// and `⊕` or `+` for direct sums. The result is normalised.
impl FromStr for GroupExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { chars: s.chars().collect(), pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("trailing input at offset {} in `{s}`", p.pos)));
        }
        Ok(e.normalized())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<GroupExpr> {
        let mut parts = alloc::vec![self.postfix()?];
        while self.eat('⊕') || self.eat('+') {
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { GroupExpr::DirectSum(parts) })
    }

    fn postfix(&mut self) -> Result<GroupExpr> {
        let mut e = self.atom()?;
        loop {
            if self.eat('/') {
                let n = self.number()?;
                e = GroupExpr::Quotient(Box::new(e), n);
            } else if self.eat('[') {
                let n = self.number()?;
                if !self.eat(']') {
                    return Err(Error::Parse("expected `]`".into()));
                }
                e = GroupExpr::Torsion(Box::new(e), n);
            } else {
                return Ok(e);
            }
        }
    }

    fn number(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        BigUint::from_str(&digits).map_err(|_| Error::Parse(format!("expected a number at offset {start}")))
    }

    fn atom(&mut self) -> Result<GroupExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(GroupExpr::Zero)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    self.pos += 1;
                }
                let mut name: String = self.chars[start..self.pos].iter().collect();
                if name == "Z" {
                    if self.eat('^') {
                        let r = self.number()?;
                        let r: usize = r.to_string().parse().map_err(|_| Error::Parse("rank too large".into()))?;
                        return Ok(GroupExpr::Free(r));
                    }
                    return Ok(GroupExpr::Free(1));
                }
                // Indexed names such as H(1,2) keep their argument list.
                if self.chars.get(self.pos) == Some(&'(') {
                    let close = self.chars[self.pos..]
                        .iter()
                        .position(|c| *c == ')')
                        .ok_or_else(|| Error::Parse("unclosed symbol index".into()))?;
                    let args: String = self.chars[self.pos..self.pos + close + 1].iter().collect();
                    if !args[1..args.len() - 1].chars().all(|c| c.is_ascii_alphanumeric() || c == ',' || c == '-' || c == '_') {
                        return Err(Error::Parse(format!("bad symbol index `{args}`")));
                    }
                    name.push_str(&args);
                    self.pos += close + 1;
                }
                Ok(GroupExpr::Symbol(Symbol(name)))
            }
            other => Err(Error::Parse(format!("unexpected {:?} at offset {}", other, self.pos))),
        }
    }
}

/// Binding of symbols to concrete groups, used by `instantiate`.
pub type Bindings = BTreeMap<Symbol, ConcreteGroup>;

/// Substitutes concrete groups for every symbol and evaluates quotients and
/// torsion subgroups through explicit kernel/cokernel computations.
pub fn instantiate(e: &GroupExpr, bindings: &Bindings) -> Result<ConcreteGroup> {
    match e {
        GroupExpr::Zero => Ok(ConcreteGroup::trivial()),
        GroupExpr::Free(r) => Ok(ConcreteGroup::free(*r)),
        GroupExpr::Cyclic(m) => Ok(ConcreteGroup::cyclic(m.clone())),
        GroupExpr::Symbol(s) => bindings.get(s).cloned().ok_or_else(|| Error::UnboundSymbol(s.name().to_owned())),
        GroupExpr::Quotient(g, n) => Ok(instantiate(g, bindings)?.quotient_by(n)),
        GroupExpr::Torsion(g, n) => Ok(instantiate(g, bindings)?.torsion_by(n)),
        GroupExpr::DirectSum(parts) => parts
            .iter()
            .try_fold(ConcreteGroup::trivial(), |acc, p| Ok(acc.direct_sum(&instantiate(p, bindings)?))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> GroupExpr {
        GroupExpr::symbol(Symbol::units())
    }

    fn parse(s: &str) -> GroupExpr {
        s.parse().unwrap()
    }

    #[test]
    fn normal_form_rules() {
        assert_eq!(GroupExpr::cyclic(1u32), GroupExpr::Zero);
        assert_eq!(GroupExpr::quotient(GroupExpr::Zero, 5u32), GroupExpr::Zero);
        assert_eq!(GroupExpr::torsion(GroupExpr::Zero, 5u32), GroupExpr::Zero);
        assert_eq!(GroupExpr::sum([]), GroupExpr::Zero);
        assert_eq!(GroupExpr::sum([GroupExpr::cyclic(2u32), GroupExpr::cyclic(3u32)]), GroupExpr::cyclic(6u32));
        assert_eq!(GroupExpr::sum([k(), GroupExpr::Zero, GroupExpr::z()]), GroupExpr::sum([GroupExpr::z(), k()]));
        assert_eq!(GroupExpr::quotient(GroupExpr::quotient(k(), 6u32), 4u32), GroupExpr::quotient(k(), 2u32));
        assert_eq!(GroupExpr::torsion(GroupExpr::quotient(k(), 3u32), 6u32), GroupExpr::quotient(k(), 3u32));
        assert_eq!(GroupExpr::torsion(GroupExpr::quotient(k(), 3u32), 2u32), GroupExpr::Zero);
        assert_eq!(GroupExpr::quotient(GroupExpr::free(2), 3u32), parse("Z/3 ⊕ Z/3"));
        assert_eq!(GroupExpr::torsion(GroupExpr::z(), 3u32), GroupExpr::Zero);
    }

    #[test]
    fn display_and_parse() {
        let e = GroupExpr::sum([GroupExpr::quotient(k(), 3u32), GroupExpr::z()]);
        assert_eq!(e.to_string(), "Z ⊕ K/3");
        assert_eq!(parse("K/3 + Z"), e);
        assert_eq!(parse("K[4]").to_string(), "K[4]");
        assert_eq!(parse("H(-1,2) ⊕ KM2").symbols(), alloc::vec![Symbol::field(-1, 2), Symbol::milnor(2)]);
        assert_eq!(parse("Z/4 ⊕ Z/2 ⊕ Z^2").to_string(), "Z/2 ⊕ Z/4 ⊕ Z^2");
        assert!("Z/".parse::<GroupExpr>().is_err());
        assert!("(K".parse::<GroupExpr>().is_err());
    }

    #[test]
    fn instantiate_examples() {
        let mut b = Bindings::new();
        b.insert(Symbol::units(), ConcreteGroup::from_cyclic_orders(1, [BigUint::from(8u32)]));
        assert_eq!(instantiate(&GroupExpr::quotient(k(), 3u32), &b).unwrap(), ConcreteGroup::cyclic(3u32));
        b.insert(Symbol::units(), ConcreteGroup::cyclic(8u32));
        assert_eq!(instantiate(&GroupExpr::torsion(k(), 4u32), &b).unwrap(), ConcreteGroup::cyclic(4u32));
        assert_eq!(instantiate(&GroupExpr::DirectSum(Vec::new()), &b).unwrap(), ConcreteGroup::trivial());
        assert!(matches!(instantiate(&GroupExpr::named("KM2"), &b), Err(Error::UnboundSymbol(_))));
    }

    #[test]
    fn localization() {
        let n = BigUint::from(6u32);
        assert_eq!(parse("K/6 ⊕ Z").localize_away(&n), GroupExpr::z());
        assert_eq!(parse("Z/10").localize_away(&n), GroupExpr::cyclic(5u32));
        assert_eq!(parse("K[3]").localize_away(&n), GroupExpr::Zero);
        assert_eq!(parse("KM2").localize_away(&n), parse("KM2"));
    }
}
