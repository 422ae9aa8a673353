use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sseq_core::abgroup::{ConcreteGroup, ConcreteHom};
use sseq_core::couple::{assemble_filtration, einfty, page_turn, Abutment, Beyond, Differential, Slot, TriPage, Window};
use sseq_core::testkit;
use sseq_core::testkit::oracle::{homology_profile, order_profile};

fn as_hom(d: &Differential, source: &ConcreteGroup, target: &ConcreteGroup) -> ConcreteHom {
    match d {
        Differential::Known(h) if h.is_evidently_zero() => ConcreteHom::zero(source, target),
        Differential::Known(h) => h.to_concrete().unwrap(),
        Differential::Unknown(_) => panic!("random pages are fully known"),
    }
}

fn concrete(slot: &Slot) -> ConcreteGroup {
    slot.known().and_then(|g| g.as_concrete()).expect("concrete entry")
}

#[test]
fn page_turn_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for case in 0..220 {
        let r = 1 + case % 3;
        let w = Window::new((0, 3), (0, 1), (0, 3), Beyond::Zero);
        let page = testkit::page(&mut rng, r, w, 64);
        let next = page_turn(&page).unwrap();
        for x in w.points() {
            let e = concrete(&page.entry(x));
            let src = page.source_of(x);
            let tgt = page.target_of(x);
            let f = as_hom(&page.differential(src), &concrete(&page.entry(src)), &e);
            let g = as_hom(&page.differential(x), &e, &concrete(&page.entry(tgt)));
            let want = homology_profile(&f, &g);
            let got = order_profile(&concrete(&next.entry(x)));
            assert_eq!(got, want, "case {case} at {x:?}");
        }
        checked += 1;
    }
    assert!(checked >= 200);
}

#[test]
fn derived_couples_stay_exact_and_match_the_filtration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..220 {
        let fc = testkit::filtered_complex(&mut rng, 3, 3, 64);
        let mut c = fc.to_couple();
        let (s_lo, s_hi) = c.s_range;
        for r in 1..=(s_hi - s_lo + 2) as u32 {
            assert!(c.exactness_violations().unwrap().is_empty(), "case {case} page {r}");
            for s in s_lo..=s_hi {
                for t in c.t_range.0..=c.t_range.1 {
                    let got = c.e_at(s, t).as_concrete().unwrap();
                    assert_eq!(got, fc.e_r(r, s, t), "case {case}: E_{r}^{{{s},{t}}}");
                }
            }
            c = c.derive().unwrap();
        }
    }
}

#[test]
fn towers_reassemble_to_their_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut resolved = 0;
    for case in 0..200 {
        let fc = testkit::filtered_complex(&mut rng, 3, 3, 64);
        let mut c = fc.to_couple();
        let (s_lo, s_hi) = c.s_range;
        // Past this page every d_r leaves the tower.
        while c.page <= (s_hi - s_lo + 1) as u32 {
            c = c.derive().unwrap();
        }
        let page = TriPage::from_couples([(0, &c)]).unwrap();
        for t in c.t_range.0..=c.t_range.1 {
            let region: Vec<_> = (s_lo..=s_hi).map(|s| (t, 0, s)).collect();
            let stable = einfty(&page, &region).unwrap();
            let pieces: Vec<(i64, Slot)> = region.iter().map(|x| (x.2, stable[x].value.clone())).collect();
            let total = fc.cohomology(t).group().clone();
            let report = assemble_filtration(t, 0, &pieces, Some(&total.clone().into())).unwrap();
            let parts: Vec<ConcreteGroup> = pieces.iter().map(|(_, g)| concrete(g)).collect();
            assert_eq!(parts.iter().map(|g| g.free_rank()).sum::<usize>(), total.free_rank(), "case {case} t {t}");
            if let Abutment::Resolved(g) = &report.abutment {
                assert_eq!(g.as_concrete().unwrap(), total, "case {case} t {t}");
                resolved += 1;
            }
            if total.free_rank() == 0 {
                let product = parts.iter().map(|g| g.torsion_order()).product::<num_bigint::BigUint>();
                assert_eq!(product, total.torsion_order());
            }
        }
    }
    assert!(resolved > 200);
}
