//! Conservative resolution of extension problems `0 -> sub -> ? -> quot -> 0`.

use core::fmt;

use num_integer::Integer;
use num_traits::One;

use super::expr::GroupExpr;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionProblem {
    pub sub: GroupExpr,
    pub quot: GroupExpr,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtensionRule {
    /// One end is zero.
    TrivialEnd,
    /// The quotient is free, so the sequence splits.
    FreeQuotient,
    /// Finite ends of coprime orders.
    CoprimeOrders,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Resolution {
    Resolved { group: GroupExpr, rule: ExtensionRule },
    Ambiguous(ExtensionProblem),
}

impl Resolution {
    pub fn group(&self) -> Option<&GroupExpr> {
        match self {
            Resolution::Resolved { group, .. } => Some(group),
            Resolution::Ambiguous(_) => None,
        }
    }
}

impl ExtensionProblem {
    pub fn new(sub: GroupExpr, quot: GroupExpr) -> Self {
        ExtensionProblem { sub: sub.normalized(), quot: quot.normalized() }
    }
}

impl fmt::Display for ExtensionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 → {} → ? → {} → 0", self.sub, self.quot)
    }
}

impl fmt::Display for ExtensionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionRule::TrivialEnd => "trivial end",
            ExtensionRule::FreeQuotient => "free quotient splits",
            ExtensionRule::CoprimeOrders => "coprime orders",
        })
    }
}

pub fn extension_resolve(p: &ExtensionProblem) -> Resolution {
    let sub = p.sub.normalized();
    let quot = p.quot.normalized();
    if sub.is_zero() {
        return Resolution::Resolved { group: quot, rule: ExtensionRule::TrivialEnd };
    }
    if quot.is_zero() {
        return Resolution::Resolved { group: sub, rule: ExtensionRule::TrivialEnd };
    }
    if matches!(quot, GroupExpr::Free(_)) {
        return Resolution::Resolved { group: GroupExpr::sum([sub, quot]), rule: ExtensionRule::FreeQuotient };
    }
    if let (Some(a), Some(b)) = (sub.as_concrete(), quot.as_concrete()) {
        if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
            if oa.gcd(&ob).is_one() {
                return Resolution::Resolved { group: GroupExpr::sum([sub, quot]), rule: ExtensionRule::CoprimeOrders };
            }
        }
    }
    Resolution::Ambiguous(ExtensionProblem { sub, quot })
}
