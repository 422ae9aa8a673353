use alloc::collections::BTreeMap;

use num_bigint::BigUint;

use crate::abgroup::{GroupExpr, Symbol};

/// Motivic cohomology `H^{p,q}(k)` of the base field, as far as it is known.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FieldModel {
    /// `k` contains a primitive `n`-th root of unity.
    pub root_of_unity: bool,
    /// Values replacing the declared ones.
    pub overrides: BTreeMap<(i64, i64), GroupExpr>,
}

impl FieldModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Z` in `(0,0)`, `K` in `(1,1)`, `KM_q` on the diagonal, zero above the
    /// diagonal and in negative weight, zero off `(0,0)` in weight 0 and off
    /// `(1,1)` in weight 1, opaque elsewhere.
    pub fn group(&self, p: i64, q: i64) -> GroupExpr {
        if q < 0 || p > q {
            return GroupExpr::Zero;
        }
        if let Some(g) = self.overrides.get(&(p, q)) {
            return g.clone();
        }
        match (p, q) {
            (0, 0) => GroupExpr::z(),
            (_, 0) => GroupExpr::Zero,
            (1, 1) => GroupExpr::symbol(Symbol::units()),
            (_, 1) => GroupExpr::Zero,
            _ if p == q => GroupExpr::symbol(Symbol::milnor(q)),
            _ => GroupExpr::symbol(Symbol::field(p, q)),
        }
    }

    /// `μ_n = k*[n]`.
    pub fn roots_of_unity(&self, n: u32) -> GroupExpr {
        GroupExpr::torsion(GroupExpr::symbol(Symbol::units()), BigUint::from(n))
    }

    /// `k*/n`.
    pub fn units_mod(&self, n: u32) -> GroupExpr {
        GroupExpr::quotient(GroupExpr::symbol(Symbol::units()), BigUint::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn declared_values() {
        let f = FieldModel::new();
        assert_eq!(f.group(0, 0), GroupExpr::z());
        assert_eq!(f.group(1, 1).to_string(), "K");
        assert_eq!(f.group(2, 2).to_string(), "KM2");
        assert_eq!(f.group(1, 2).to_string(), "H(1,2)");
        assert!(f.group(3, 2).is_zero());
        assert!(f.group(0, -1).is_zero());
        assert!(f.group(-1, 0).is_zero());
    }
}
