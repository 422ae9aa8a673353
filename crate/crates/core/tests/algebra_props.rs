use std::time::Instant;

use proptest::prelude::*;

use sseq_core::couple::Bidegree;
use sseq_core::gradedalg::{Generator, Monomial, RingElement, RingPresentation};
use sseq_core::steenrod::{ClassKind, CpMupRing};

/// Partitions of `q` into parts of size at most `n`.
fn partitions(q: usize, n: usize) -> usize {
    let mut ways = vec![0usize; q + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=q {
            ways[total] += ways[total - part];
        }
    }
    ways[q]
}

#[test]
fn chern_ring_poincare_series() {
    for n in 1..=5 {
        let ring = RingPresentation::chern(n);
        for q in 0..=9i64 {
            assert_eq!(ring.basis(2 * q, q).len(), partitions(q as usize, n), "n={n} q={q}");
            assert!(ring.basis(2 * q + 1, q).is_empty());
            assert!(ring.basis(2 * q, q + 1).is_empty());
        }
    }
}

fn mixed_ring() -> RingPresentation {
    RingPresentation::new(
        0u32,
        vec![
            Generator::new("e", 1, 1).exterior(),
            Generator::new("c", 1, 2),
            Generator::new("x", 1, 3).of_order(6u32),
            Generator::new("f", 2, 3).exterior(),
        ],
    )
    .unwrap()
}

fn monomial(len: usize, cap: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=cap, len)
}

fn element(ring: &RingPresentation) -> impl Strategy<Value = RingElement> {
    let ring = ring.clone();
    let n = ring.generators().len();
    prop::collection::vec((-4i64..=4, monomial(n, 2)), 0..4).prop_map(move |terms| {
        terms.into_iter().fold(RingElement::zero(), |acc, (c, e)| {
            let m = Monomial(e.iter().enumerate().map(|(i, &k)| if ring.generators()[i].exterior { k.min(1) } else { k }).collect());
            ring.add(&acc, &ring.term(c, m))
        })
    })
}

fn mup_monomial() -> impl Strategy<Value = Vec<(&'static str, u32)>> {
    (0u32..=1, 0u32..=3, 0u32..=1, 0u32..=3, 0u32..=1, 0u32..=3)
        .prop_map(|(l, t, a, u, b, v)| vec![("λ", l), ("τ", t), ("a", a), ("u", u), ("b", b), ("v", v)])
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn products_are_associative(x in element(&mixed_ring()), y in element(&mixed_ring()), z in element(&mixed_ring())) {
        let r = mixed_ring();
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
    }

    #[test]
    fn products_commute_up_to_sign(a in monomial(4, 2), b in monomial(4, 2)) {
        let r = mixed_ring();
        let x = r.term(1, Monomial(a));
        let y = r.term(1, Monomial(b));
        let px = r.homogeneous_degree(&x).unwrap().map_or(0, |d| d.p);
        let py = r.homogeneous_degree(&y).unwrap().map_or(0, |d| d.p);
        let sign = if px * py % 2 == 1 { -1 } else { 1 };
        prop_assert_eq!(r.mul(&x, &y), r.scale(&r.mul(&y, &x), sign));
    }

    #[test]
    fn bockstein_squares_to_zero_and_is_a_derivation(p in prop::sample::select(vec![3u32, 5, 7]), x in mup_monomial(), y in mup_monomial()) {
        let r = CpMupRing::new(p).unwrap();
        let x = r.element(1, &x).unwrap();
        let y = r.element(1, &y).unwrap();
        let ring = r.ring();
        prop_assert!(r.bockstein(&r.bockstein(&x)).is_zero());
        let Some(dx) = ring.homogeneous_degree(&x).unwrap() else { return Ok(()) };
        let sign = if dx.p % 2 == 1 { -1 } else { 1 };
        let rhs = ring.add(&ring.mul(&r.bockstein(&x), &y), &ring.scale(&ring.mul(&x, &r.bockstein(&y)), sign));
        prop_assert_eq!(r.bockstein(&ring.mul(&x, &y)), rhs);
    }

    #[test]
    fn total_power_is_multiplicative(p in prop::sample::select(vec![3u32, 5]), x in mup_monomial(), y in mup_monomial()) {
        let r = CpMupRing::new(p).unwrap();
        let x = r.element(1, &x).unwrap();
        let y = r.element(1, &y).unwrap();
        let ring = r.ring();
        prop_assert_eq!(r.total_power(&ring.mul(&x, &y)), ring.mul(&r.total_power(&x), &r.total_power(&y)));
        // P^0 is the identity and P^i vanishes above half the degree.
        prop_assert_eq!(r.power_component(&x, 0).unwrap(), x.clone());
        if let Some(d) = ring.homogeneous_degree(&x).unwrap() {
            prop_assert!(r.power_component(&x, (d.p / 2 + 1) as u64).unwrap().is_zero());
        }
    }
}

#[test]
fn torsion_classes_match_their_closed_forms() {
    let start = Instant::now();
    for p in [3u32, 5] {
        let r = CpMupRing::new(p).unwrap();
        let ring = r.ring();
        for k in 0..=2u32 {
            let n = p.pow(k + 1);
            let e = |pw: &[(&str, u32)]| r.element(1, pw).unwrap();
            let z = ring.sub(&e(&[("λ", 1), ("τ", n), ("u", n), ("b", 1)]), &e(&[("λ", 1), ("τ", n), ("a", 1), ("v", n)]));
            let y = ring.sub(&e(&[("λ", 1), ("τ", n), ("u", n), ("v", 1)]), &e(&[("λ", 1), ("τ", n), ("u", 1), ("v", n)]));
            let upsilon = ring.mul(&e(&[("τ", 1)]), &y);
            let n = n as i64;
            let expected = [
                (ClassKind::Z, z, Bidegree::new(n, 2 * n + 1)),
                (ClassKind::Y, y, Bidegree::new(n, 2 * n + 2)),
                (ClassKind::Upsilon, upsilon, Bidegree::new(n + 1, 2 * n + 2)),
            ];
            for (kind, element, degree) in expected {
                let c = r.torsion_class_image(kind, k, 1000).unwrap();
                assert_eq!(c.element, element, "{kind} p={p} k={k}");
                assert_eq!(c.degree, degree, "{kind} p={p} k={k}");
                assert!(c.certificate.passed());
                assert!(r.restrict(&c.element, &["a", "u"]).unwrap().is_zero());
                assert!(r.restrict(&c.element, &["b", "v"]).unwrap().is_zero());
            }
        }
    }
    eprintln!("closed forms checked in {:?}", start.elapsed());
}
