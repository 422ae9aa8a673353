//! Random inputs for property tests.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::abgroup::{ConcreteGroup, ConcreteHom, GroupExpr, GroupHom, HomRule, IntMatrix, Symbol};
use crate::abgroup::Bindings;
use crate::couple::{Beyond, FilteredComplex, TriPage, Window};

/// A group with at most `max_free` free generators and torsion of order at
/// most `max_order`.
pub fn group<R: Rng>(rng: &mut R, max_order: u32, max_free: usize) -> ConcreteGroup {
    let mut orders = Vec::new();
    let mut total = 1u32;
    for _ in 0..3 {
        let m = rng.gen_range(2..=8u32);
        if total * m <= max_order && rng.gen_bool(0.5) {
            total *= m;
            orders.push(BigUint::from(m));
        }
    }
    ConcreteGroup::from_cyclic_orders(rng.gen_range(0..=max_free), orders)
}

pub fn finite_group<R: Rng>(rng: &mut R, max_order: u32) -> ConcreteGroup {
    group(rng, max_order, 0)
}

/// A uniformly chosen small well-defined homomorphism.
pub fn hom<R: Rng>(rng: &mut R, s: &ConcreteGroup, t: &ConcreteGroup) -> ConcreteHom {
    let mut m = IntMatrix::zeros(t.generator_count(), s.generator_count());
    for i in 0..t.generator_count() {
        for j in 0..s.generator_count() {
            let (di, dj) = (t.generator_order(i), s.generator_order(j));
            // Generator j has order dj, so its image needs dj·m ≡ 0 mod di.
            let step = if di == BigInt::from(0) {
                if dj == BigInt::from(0) { BigInt::from(1) } else { BigInt::from(0) }
            } else {
                &di / di.gcd(&dj)
            };
            m[(i, j)] = step * rng.gen_range(-3..=3);
        }
    }
    ConcreteHom::new(s.clone(), t.clone(), m).expect("entries respect the relations")
}

/// A map out of `f.target()` that kills the image of `f`.
pub fn after<R: Rng>(rng: &mut R, f: &ConcreteHom, t: &ConcreteGroup) -> ConcreteHom {
    let coker = f.cokernel();
    let h = hom(rng, &coker.group, t);
    coker.map.then(&h).expect("composable")
}

/// A page with finite entries of order at most `max_order`, `Beyond::Zero`,
/// and differentials composing to zero.
pub fn page<R: Rng>(rng: &mut R, r: u32, window: Window, max_order: u32) -> TriPage {
    let window = Window { beyond: Beyond::Zero, ..window };
    let mut page = TriPage::new(r, window);
    let mut groups = alloc::collections::BTreeMap::new();
    for x in window.points() {
        let g = if rng.gen_bool(0.2) { ConcreteGroup::trivial() } else { finite_group(rng, max_order) };
        page.set_entry(x, GroupExpr::from(&g));
        groups.insert(x, g);
    }
    let mut maps: alloc::collections::BTreeMap<_, ConcreteHom> = alloc::collections::BTreeMap::new();
    let mut order: Vec<_> = window.points().collect();
    order.sort_by_key(|x| (x.0, x.1, x.2));
    for x in order {
        let y = page.target_of(x);
        let Some(ty) = groups.get(&y) else { continue };
        let sx = &groups[&x];
        let d = match maps.get(&page.source_of(x)) {
            Some(prev) if rng.gen_bool(0.9) => after(rng, prev, ty),
            Some(_) => ConcreteHom::zero(sx, ty),
            None => hom(rng, sx, ty),
        };
        page.set_differential(x, GroupHom::from_concrete(&d));
        maps.insert(x, d);
    }
    page
}

/// A filtered cochain complex of free groups in degrees `0..=top` with
/// filtration levels in `0..=max_level`, made from elementary pieces
/// `Z -k-> Z` and `Z` and mixed by filtration-preserving changes of basis.
pub fn filtered_complex<R: Rng>(rng: &mut R, top: usize, max_level: i64, max_order: u32) -> FilteredComplex {
    let mut levels: Vec<Vec<i64>> = vec![Vec::new(); top + 1];
    let mut edges: Vec<(usize, usize, usize, i64)> = Vec::new();
    let mut torsion = vec![1u32; top + 1];
    for t in 0..=top {
        for _ in 0..rng.gen_range(0..=2) {
            levels[t].push(rng.gen_range(0..=max_level));
        }
        if t < top {
            for _ in 0..rng.gen_range(0..=2) {
                let lu = rng.gen_range(0..=max_level);
                let lv = rng.gen_range(0..=lu);
                let k = rng.gen_range(1..=6u32);
                if torsion[t + 1] * k > max_order {
                    continue;
                }
                torsion[t + 1] *= k;
                levels[t].push(lu);
                levels[t + 1].push(lv);
                edges.push((t, levels[t].len() - 1, levels[t + 1].len() - 1, k as i64));
            }
        }
    }
    let mut d: Vec<IntMatrix> = (0..=top).map(|t| IntMatrix::zeros(levels.get(t + 1).map_or(0, Vec::len), levels[t].len())).collect();
    for (t, u, v, k) in edges {
        d[t][(v, u)] = BigInt::from(k);
    }
    // Shuffle basis order, then mix by P d P^{-1} with P filtration-preserving.
    let mut perms: Vec<Vec<usize>> = levels.iter().map(|l| (0..l.len()).collect()).collect();
    for p in &mut perms {
        p.shuffle(rng);
    }
    let permuted_levels: Vec<Vec<i64>> = levels.iter().zip(&perms).map(|(l, p)| p.iter().map(|&i| l[i]).collect()).collect();
    let mut mixes = Vec::new();
    for l in &permuted_levels {
        let n = l.len();
        let mut p = IntMatrix::identity(n);
        let mut inv = IntMatrix::identity(n);
        for _ in 0..rng.gen_range(0..=3) {
            if n < 2 {
                break;
            }
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j || l[i] > l[j] {
                continue;
            }
            let c = BigInt::from(rng.gen_range(-2..=2));
            // Column j picks up c times column i: e_j ↦ e_j + c e_i.
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = c.clone();
            let mut e_inv = IntMatrix::identity(n);
            e_inv[(i, j)] = -c;
            p = p.mul(&e);
            inv = e_inv.mul(&inv);
        }
        mixes.push((p, inv));
    }
    let mut cob = Vec::new();
    for t in 0..=top {
        let src = &perms[t];
        let rows = levels.get(t + 1).map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows, src.len());
        if t < top {
            let dst = &perms[t + 1];
            for (a, &i) in dst.iter().enumerate() {
                for (b, &j) in src.iter().enumerate() {
                    m[(a, b)] = d[t][(i, j)].clone();
                }
            }
            m = mixes[t + 1].0.mul(&m).mul(&mixes[t].1);
        }
        cob.push(m);
    }
    FilteredComplex::new(0, permuted_levels, cob).expect("pieces respect the filtration")
}

/// A random homomorphism with a rule `symb_apply` may know, and bindings
/// making it concrete.
pub fn symbolic_case<R: Rng>(rng: &mut R) -> (GroupHom, Bindings) {
    let mut bindings = Bindings::new();
    let names = ["A", "B"];
    for n in names {
        bindings.insert(Symbol::new(n), group(rng, 32, 1));
    }
    let sym = |i: usize| GroupExpr::symbol(Symbol::new(names[i]));
    let base = |rng: &mut R| -> GroupExpr {
        let mut parts = vec![sym(rng.gen_range(0..2))];
        if rng.gen_bool(0.5) {
            parts.push(GroupExpr::from(&finite_group(rng, 8)));
        }
        if rng.gen_bool(0.3) {
            parts.push(sym(rng.gen_range(0..2)));
        }
        GroupExpr::sum(parts)
    };
    let n = BigUint::from(rng.gen_range(0..=6u32));
    let g = base(rng);
    let h = match rng.gen_range(0..7) {
        0 => GroupHom::multiply(g, BigInt::from(n)),
        1 => GroupHom::new(g.clone(), GroupExpr::quotient(g, n), HomRule::CanonicalProjection),
        2 => GroupHom::new(GroupExpr::torsion(g.clone(), n), g, HomRule::CanonicalInclusion),
        3 => {
            let extra = base(rng);
            GroupHom::new(GroupExpr::sum([g.clone(), extra]), g, HomRule::CanonicalProjection)
        }
        4 => {
            let extra = base(rng);
            GroupHom::new(g.clone(), GroupExpr::sum([g, extra]), HomRule::CanonicalInclusion)
        }
        5 => {
            let q = GroupExpr::quotient(g.clone(), n);
            let extra = base(rng);
            let p = GroupHom::new(g, q.clone(), HomRule::CanonicalProjection);
            let i = GroupHom::new(q.clone(), GroupExpr::sum([q, extra]), HomRule::CanonicalInclusion);
            p.then(&i)
        }
        _ => GroupHom::zero(g, base(rng)),
    };
    (h, bindings)
}

/// Brute-force references that only enumerate elements; nothing here goes
/// through Smith normal form.
pub mod oracle {
    use alloc::collections::{BTreeMap, BTreeSet};
    use alloc::vec;
    use alloc::vec::Vec;

    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{ToPrimitive, Zero};

    use crate::abgroup::{ConcreteGroup, ConcreteHom};

    fn generator_orders(g: &ConcreteGroup) -> Vec<i64> {
        (0..g.generator_count()).map(|i| g.generator_order(i).to_i64().expect("small group")).collect()
    }

    /// Every element of a finite group in its canonical coordinates.
    pub fn elements(g: &ConcreteGroup) -> Vec<Vec<BigInt>> {
        let orders = generator_orders(g);
        assert!(orders.iter().all(|&d| d > 0), "finite groups only");
        let mut out = vec![Vec::new()];
        for d in orders {
            out = out.into_iter().flat_map(|v: Vec<BigInt>| (0..d).map(move |c| [v.clone(), vec![BigInt::from(c)]].concat())).collect();
        }
        out
    }

    /// `order -> number of elements of that order`; this determines a
    /// finite abelian group up to isomorphism.
    pub fn order_profile(g: &ConcreteGroup) -> BTreeMap<i64, usize> {
        let orders = generator_orders(g);
        let mut out = BTreeMap::new();
        for x in elements(g) {
            let mut m = 1i64;
            for (c, d) in x.iter().zip(&orders) {
                let c = c.to_i64().unwrap();
                m = m.lcm(&(d / c.gcd(d)));
            }
            *out.entry(m).or_default() += 1;
        }
        out
    }

    /// Order profile of `ker g / im f`, by listing cosets.
    pub fn homology_profile(f: &ConcreteHom, g: &ConcreteHom) -> BTreeMap<i64, usize> {
        let b = f.target();
        let image: BTreeSet<Vec<BigInt>> = elements(f.source()).iter().map(|a| f.apply(a)).collect();
        let kernel: Vec<Vec<BigInt>> = elements(b).into_iter().filter(|x| g.apply(x).iter().all(Zero::is_zero)).collect();
        let mut out = BTreeMap::new();
        for y in &kernel {
            let mut m = 1i64;
            while !image.contains(&b.reduce(&y.iter().map(|c| c * m).collect::<Vec<_>>())) {
                m += 1;
            }
            *out.entry(m).or_default() += 1;
        }
        for v in out.values_mut() {
            *v /= image.len();
        }
        out
    }
}
