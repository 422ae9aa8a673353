use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sseq_core::abgroup::{extension_resolve, instantiate, snf, ConcreteGroup, ExtensionProblem, GroupExpr, IntMatrix, Resolution};
use sseq_core::testkit;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k×k minors.
fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in subsets(m.rows(), k) {
        for cols in subsets(m.cols(), k) {
            let minor = m.select_rows(&rows).select_columns(&cols).determinant();
            g = g.gcd(&minor);
        }
    }
    g
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Order statistics of `⊕ Z/m_i`, enumerated.
fn profile_of_orders(orders: &[u64]) -> BTreeMap<u64, usize> {
    let mut elems: Vec<u64> = vec![1];
    for &m in orders {
        elems = elems.iter().flat_map(|&o| (0..m).map(move |c| o.lcm(&(m / c.gcd(&m))))).collect();
    }
    let mut out = BTreeMap::new();
    for o in elems {
        *out.entry(o).or_default() += 1;
    }
    out
}

fn profile(g: &ConcreteGroup) -> BTreeMap<u64, usize> {
    let orders: Vec<u64> = g.invariant_factors().iter().map(|d| d.to_u64().unwrap()).collect();
    profile_of_orders(&orders)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(300) })]

    #[test]
    fn smith_form_matches_determinantal_divisors(rows in small_matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let (u, d, v) = snf(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        prop_assert!(u.determinant().abs().is_one());
        prop_assert!(v.determinant().abs().is_one());
        let k_max = m.rows().min(m.cols());
        let diag: Vec<BigInt> = (0..k_max).map(|i| d.row(i)[i].clone()).collect();
        for i in 0..k_max {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(d.row(i)[j].is_zero());
                }
            }
            prop_assert!(!diag[i].is_negative());
            if i + 1 < k_max && !diag[i + 1].is_zero() {
                prop_assert!((&diag[i + 1] % &diag[i]).is_zero());
            }
        }
        let mut running = BigInt::one();
        for k in 1..=k_max {
            running *= &diag[k - 1];
            prop_assert_eq!(running.clone(), determinantal_divisor(&m, k));
        }
    }

    #[test]
    fn canonical_form_keeps_the_group(orders in prop::collection::vec(1u64..=12, 0..4)) {
        let g = ConcreteGroup::from_cyclic_orders(0, orders.iter().map(|&m| BigUint::from(m)));
        prop_assert_eq!(profile(&g), profile_of_orders(&orders));
        let factors = g.invariant_factors();
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn coprime_extensions_split(a in prop::collection::vec(1u64..=9, 0..3), b in prop::collection::vec(1u64..=9, 0..3)) {
        let sub = ConcreteGroup::from_cyclic_orders(0, a.iter().map(|&m| BigUint::from(m)));
        let quot = ConcreteGroup::from_cyclic_orders(0, b.iter().map(|&m| BigUint::from(m)));
        let res = extension_resolve(&ExtensionProblem::new((&sub).into(), (&quot).into()));
        let coprime = sub.torsion_order().gcd(&quot.torsion_order()).is_one();
        match res {
            Resolution::Resolved { group, .. } => {
                let g = group.as_concrete().unwrap();
                prop_assert_eq!(g.order(), Some(sub.torsion_order() * quot.torsion_order()));
                prop_assert_eq!(g, sub.direct_sum(&quot));
            }
            Resolution::Ambiguous(_) => prop_assert!(!coprime && !sub.is_trivial() && !quot.is_trivial()),
        }
    }

    #[test]
    fn free_quotients_split(a in prop::collection::vec(1u64..=9, 0..3), free in 1usize..3, sub_free in 0usize..2) {
        let sub = ConcreteGroup::from_cyclic_orders(sub_free, a.iter().map(|&m| BigUint::from(m)));
        let quot = ConcreteGroup::free(free);
        let res = extension_resolve(&ExtensionProblem::new((&sub).into(), (&quot).into()));
        prop_assert_eq!(res.group().and_then(GroupExpr::as_concrete), Some(sub.direct_sum(&quot)));
    }
}

#[test]
fn symbolic_rules_commute_with_instantiation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut cases, mut decided) = (0, 0);
    for _ in 0..600 {
        let (h, bindings) = testkit::symbolic_case(&mut rng);
        cases += 1;
        let concrete = match h.instantiate(&bindings) {
            Ok(c) => c,
            Err(_) => {
                // Merged concrete summands hide the shape; the rules must refuse it too.
                assert!(h.symb_apply().is_err(), "{h:?}");
                continue;
            }
        };
        let Ok(res) = h.symb_apply() else { continue };
        let claims = [(res.kernel, concrete.kernel().group), (res.cokernel, concrete.cokernel().group), (res.image, concrete.image().group)];
        for (claim, truth) in claims {
            if let Some(e) = claim {
                assert_eq!(instantiate(&e, &bindings).unwrap(), truth, "{h:?}");
                decided += 1;
            }
        }
    }
    assert!(cases >= 500);
    assert!(decided >= 900, "only {decided} claims decided");
}

#[test]
fn projection_onto_repeated_summands_stays_small() {
    use sseq_core::abgroup::{Bindings, GroupHom, HomRule, Symbol};
    let a = GroupExpr::symbol(Symbol::new("A"));
    let b = GroupExpr::symbol(Symbol::new("B"));
    let z8 = GroupExpr::cyclic(8u32);
    let source = GroupExpr::sum([z8.clone(), a.clone(), a.clone(), b.clone(), b.clone()]);
    let target = GroupExpr::sum([z8, a, b]);
    let h = GroupHom::new(source, target, HomRule::CanonicalProjection);
    let mut bindings = Bindings::new();
    bindings.insert(Symbol::new("A"), ConcreteGroup::cyclic(28u32));
    bindings.insert(Symbol::new("B"), ConcreteGroup::from_cyclic_orders(0, [5u32.into(), 5u32.into()]));
    let c = h.instantiate(&bindings).unwrap();
    let order = |g: &ConcreteGroup| g.order().unwrap();
    assert_eq!(order(&c.kernel().group), BigUint::from(28u32 * 25));
    assert!(c.cokernel().group.is_trivial());
    assert_eq!(profile(&c.image().group), profile_of_orders(&[8, 28, 5, 5]));
    for m in c.kernel().map.matrix().columns().iter().flatten() {
        assert!(m.bits() < 64, "entry {m} blew up");
    }
}
