use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use super::solver::edge_parts;
use crate::abgroup::{extension_resolve, ExtensionProblem, GroupExpr, GroupHom};
use crate::couple::{assemble_filtration, homology_at, Abutment, Differential, Slot};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Rule {
    /// Given data.
    Seed,
    /// Every contributing entry is zero.
    SupportVanishing,
    /// `ker d / im d` on a page.
    Homology,
    /// Graded pieces assembled into the cohomology of a filtration quotient.
    Abutment,
    /// Kernel of a restriction map.
    RestrictionKernel,
    /// Cokernel of a restriction map.
    RestrictionCokernel,
    Extension,
    /// A `d_1` read off from the connecting map of the long exact sequence.
    Connecting,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Seed => "seed",
            Rule::SupportVanishing => "support-vanishing",
            Rule::Homology => "homology",
            Rule::Abutment => "abutment",
            Rule::RestrictionKernel => "restriction-kernel",
            Rule::RestrictionCokernel => "restriction-cokernel",
            Rule::Extension => "extension",
            Rule::Connecting => "connecting",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Deduction {
    pub rule: Rule,
    pub target: String,
    pub inputs: Vec<(String, GroupExpr)>,
    pub maps: Vec<GroupHom>,
    pub conclusion: GroupExpr,
}

impl fmt::Display for Deduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = {}", self.rule, self.target, self.conclusion)?;
        if !self.inputs.is_empty() {
            f.write_str(" from ")?;
            for (i, (name, g)) in self.inputs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{name} = {g}")?;
            }
        }
        for m in &self.maps {
            write!(f, "; {} -{}-> {}", m.source, m.rule, m.target)?;
        }
        Ok(())
    }
}

impl Deduction {
    pub fn new(rule: Rule, target: impl Into<String>, conclusion: GroupExpr) -> Self {
        Deduction { rule, target: target.into(), inputs: Vec::new(), maps: Vec::new(), conclusion: conclusion.normalized() }
    }

    pub fn input(mut self, name: impl Into<String>, g: GroupExpr) -> Self {
        self.inputs.push((name.into(), g));
        self
    }

    pub fn map(mut self, m: GroupHom) -> Self {
        self.maps.push(m);
        self
    }

    /// Re-executes the rule and compares with the logged conclusion.
    pub fn replay(&self) -> Result<()> {
        let got = self.recompute()?;
        if got.normalized() == self.conclusion {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("{} replays to {got}, logged {}", self.target, self.conclusion)))
        }
    }

    fn recompute(&self) -> Result<GroupExpr> {
        let input = |i: usize| self.inputs.get(i).map(|x| &x.1).ok_or_else(|| Error::InvalidInstance(format!("{}: missing input {i}", self.target)));
        let undecided = || Error::NoRule(format!("{} no longer decided", self.target));
        match self.rule {
            Rule::Seed => Ok(input(0)?.clone()),
            Rule::SupportVanishing => {
                if self.inputs.iter().all(|(_, g)| g.is_zero()) {
                    Ok(GroupExpr::Zero)
                } else {
                    Err(Error::Inconsistent(format!("{}: support is not zero", self.target)))
                }
            }
            Rule::Homology => {
                let entry = input(0)?;
                let target = match self.inputs.get(1) {
                    Some((_, t)) => Slot::Known(t.clone()),
                    None => Slot::Unknown("not logged".into()),
                };
                let incoming = self.maps.first().map_or(Differential::Unknown("not logged".into()), |m| Differential::Known(m.clone()));
                let outgoing = self.maps.get(1).map_or(Differential::Unknown("not logged".into()), |m| Differential::Known(m.clone()));
                homology_at((0, 0, 0), entry, &incoming, &outgoing, &target)?.ok_or_else(undecided)
            }
            Rule::Abutment => {
                let pieces: Vec<(i64, Slot)> = self.inputs.iter().enumerate().map(|(i, (_, g))| (i as i64, Slot::Known(g.clone()))).collect();
                match assemble_filtration(0, 0, &pieces, None)?.abutment {
                    Abutment::Resolved(g) => Ok(g),
                    _ => Err(undecided()),
                }
            }
            Rule::RestrictionKernel | Rule::RestrictionCokernel => {
                let parts = edge_parts(&self.maps)?.ok_or_else(undecided)?;
                Ok(if self.rule == Rule::RestrictionKernel { parts.kernel } else { parts.cokernel })
            }
            Rule::Extension => {
                let problem = ExtensionProblem::new(input(0)?.clone(), input(1)?.clone());
                extension_resolve(&problem).group().cloned().ok_or_else(undecided)
            }
            Rule::Connecting => {
                let d = self.maps.first().ok_or_else(undecided)?;
                if d.source.is_concrete() && d.target.is_concrete() {
                    d.to_concrete()?;
                }
                Ok(d.target.clone())
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fact {
    pub value: Slot,
    /// Index of the deduction that settled the value.
    pub provenance: Option<usize>,
}

/// A named generator of a cyclic summand; order `0` means infinite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistinguishedClass {
    pub name: String,
    pub at: (i64, i64),
    pub order: BigUint,
}

/// Partial knowledge of `H^{p,q}` of the base space, with a deduction log.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KnowledgeBase {
    pub instance: String,
    facts: BTreeMap<(i64, i64), Fact>,
    classes: Vec<DistinguishedClass>,
    restrictions: Vec<(String, GroupHom)>,
    /// `d_1`-generating products `H^{a,b} → H^{a+3,b+1}`.
    products: BTreeMap<(i64, i64), GroupHom>,
    log: Vec<Deduction>,
    notes: Vec<String>,
}

impl KnowledgeBase {
    pub fn new(instance: impl Into<String>) -> Self {
        KnowledgeBase { instance: instance.into(), ..Default::default() }
    }

    /// Appends to the log without touching any fact.
    pub fn record(&mut self, d: Deduction) -> usize {
        self.log.push(d);
        self.log.len() - 1
    }

    /// Settles `(p,q)` by `d`. Facts only move from unknown to known; a
    /// different known value is a hard error.
    pub fn settle(&mut self, p: i64, q: i64, d: Deduction) -> Result<()> {
        let value = d.conclusion.clone();
        if let Some(Fact { value: Slot::Known(old), .. }) = self.facts.get(&(p, q)) {
            if *old != value {
                return Err(Error::Inconsistent(format!("H^{{{p},{q}}}: {old} versus {value} from {}", d.rule)));
            }
            return Ok(());
        }
        let i = self.record(d);
        self.facts.insert((p, q), Fact { value: Slot::Known(value), provenance: Some(i) });
        Ok(())
    }

    /// Marks `(p,q)` as undecided unless already known.
    pub fn leave_open(&mut self, p: i64, q: i64, why: impl Into<String>) {
        self.facts.entry((p, q)).or_insert(Fact { value: Slot::Unknown(why.into()), provenance: None });
    }

    /// The value at `(p,q)`; negative weight is zero, anything never
    /// visited is unknown.
    pub fn slot(&self, p: i64, q: i64) -> Slot {
        if q < 0 {
            return Slot::Known(GroupExpr::Zero);
        }
        self.facts.get(&(p, q)).map_or_else(|| Slot::Unknown("outside the solved range".into()), |f| f.value.clone())
    }

    pub fn fact(&self, p: i64, q: i64) -> Option<&Fact> {
        self.facts.get(&(p, q))
    }

    pub fn facts(&self) -> impl Iterator<Item = (&(i64, i64), &Fact)> {
        self.facts.iter()
    }

    pub fn log(&self) -> &[Deduction] {
        &self.log
    }

    pub fn add_class(&mut self, c: DistinguishedClass) {
        if !self.classes.contains(&c) {
            self.classes.push(c);
        }
    }

    pub fn classes(&self) -> &[DistinguishedClass] {
        &self.classes
    }

    pub fn add_restriction(&mut self, name: impl Into<String>, h: GroupHom) {
        self.restrictions.push((name.into(), h));
    }

    pub fn restrictions(&self) -> &[(String, GroupHom)] {
        &self.restrictions
    }

    pub fn set_product(&mut self, at: (i64, i64), h: GroupHom) {
        self.products.insert(at, h);
    }

    pub fn product(&self, at: (i64, i64)) -> Option<&GroupHom> {
        self.products.get(&at)
    }

    pub fn products(&self) -> &BTreeMap<(i64, i64), GroupHom> {
        &self.products
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Replays every logged deduction; returns how many were checked.
    pub fn replay(&self) -> Result<usize> {
        for d in &self.log {
            d.replay()?;
        }
        Ok(self.log.len())
    }

    /// Undecided slots, in order.
    pub fn open_slots(&self) -> Vec<((i64, i64), String)> {
        self.facts
            .iter()
            .filter_map(|(k, f)| match &f.value {
                Slot::Unknown(why) => Some((*k, why.clone())),
                Slot::Known(_) => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conflicting_facts_are_rejected() {
        let mut kb = KnowledgeBase::new("test");
        kb.leave_open(1, 1, "later");
        kb.settle(1, 1, Deduction::new(Rule::Seed, "H^{1,1}", GroupExpr::cyclic(2u32)).input("given", GroupExpr::cyclic(2u32))).unwrap();
        kb.settle(1, 1, Deduction::new(Rule::Seed, "H^{1,1}", GroupExpr::cyclic(2u32)).input("given", GroupExpr::cyclic(2u32))).unwrap();
        let bad = kb.settle(1, 1, Deduction::new(Rule::Seed, "H^{1,1}", GroupExpr::z()));
        assert!(matches!(bad, Err(Error::Inconsistent(_))));
        kb.leave_open(1, 1, "ignored");
        assert_eq!(kb.slot(1, 1), Slot::Known(GroupExpr::cyclic(2u32)));
        assert_eq!(kb.log().len(), 1);
        assert_eq!(kb.replay().unwrap(), 1);
    }

    #[test]
    fn replay_catches_tampering() {
        let d = Deduction::new(Rule::Extension, "H", GroupExpr::cyclic(6u32)).input("sub", GroupExpr::cyclic(2u32)).input("quot", GroupExpr::cyclic(3u32));
        d.replay().unwrap();
        let bad = Deduction::new(Rule::Extension, "H", GroupExpr::cyclic(5u32)).input("sub", GroupExpr::cyclic(2u32)).input("quot", GroupExpr::cyclic(3u32));
        assert!(bad.replay().is_err());
    }
}
