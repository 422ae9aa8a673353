//! Exact couples `D -i-> D -j-> E -k-> D` and their derived couples.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bidegree::Slice;
use crate::abgroup::{biproduct, homology, is_exact_at, ConcreteGroup, ConcreteHom, GroupExpr, GroupHom, HomRule, IntMatrix};
use crate::error::{Error, Result};

/// Bigraded exact couple on a finite `(s, t)` box.
///
/// `i: D^{s,t} -> D^{s+1,t}`, `j: D^{s,t} -> E^{s-r,t+1}`,
/// `k: E^{s,t} -> D^{s,t}`, where `r` is the page. Outside the box `E` is
/// zero, `D^{s,t}` is zero above the box and equals `D^{s_lo,t}` below it
/// (the filtration is bounded below), with `i` the identity there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCouple {
    pub page: u32,
    pub s_range: (i64, i64),
    pub t_range: (i64, i64),
    pub d: BTreeMap<(i64, i64), GroupExpr>,
    pub e: BTreeMap<(i64, i64), GroupExpr>,
    pub i: BTreeMap<(i64, i64), GroupHom>,
    pub j: BTreeMap<(i64, i64), GroupHom>,
    pub k: BTreeMap<(i64, i64), GroupHom>,
}

impl ExactCouple {
    pub fn empty(s_range: (i64, i64), t_range: (i64, i64)) -> Self {
        ExactCouple {
            page: 1,
            s_range,
            t_range,
            d: BTreeMap::new(),
            e: BTreeMap::new(),
            i: BTreeMap::new(),
            j: BTreeMap::new(),
            k: BTreeMap::new(),
        }
    }

    fn in_t(&self, t: i64) -> bool {
        (self.t_range.0..=self.t_range.1).contains(&t)
    }

    fn in_s(&self, s: i64) -> bool {
        (self.s_range.0..=self.s_range.1).contains(&s)
    }

    pub fn d_at(&self, s: i64, t: i64) -> GroupExpr {
        if !self.in_t(t) || s > self.s_range.1 {
            return GroupExpr::Zero;
        }
        let s = s.max(self.s_range.0);
        self.d.get(&(s, t)).cloned().unwrap_or(GroupExpr::Zero)
    }

    pub fn e_at(&self, s: i64, t: i64) -> GroupExpr {
        if !self.in_t(t) || !self.in_s(s) {
            return GroupExpr::Zero;
        }
        self.e.get(&(s, t)).cloned().unwrap_or(GroupExpr::Zero)
    }

    pub fn i_at(&self, s: i64, t: i64) -> GroupHom {
        if self.in_t(t) && s < self.s_range.0 {
            return GroupHom::identity(self.d_at(s, t));
        }
        self.i.get(&(s, t)).cloned().unwrap_or_else(|| GroupHom::zero(self.d_at(s, t), self.d_at(s + 1, t)))
    }

    pub fn j_at(&self, s: i64, t: i64) -> GroupHom {
        let r = self.page as i64;
        match self.j.get(&(s, t)) {
            Some(h) if self.in_s(s) => h.clone(),
            _ => GroupHom::zero(self.d_at(s, t), self.e_at(s - r, t + 1)),
        }
    }

    pub fn k_at(&self, s: i64, t: i64) -> GroupHom {
        self.k.get(&(s, t)).cloned().unwrap_or_else(|| GroupHom::zero(self.e_at(s, t), self.d_at(s, t)))
    }

    /// `d_r = j ∘ k : E^{s,t} -> E^{s-r,t+1}`.
    pub fn differential(&self, s: i64, t: i64) -> GroupHom {
        let k = self.k_at(s, t);
        let j = self.j_at(s, t);
        if k.is_evidently_zero() || j.is_evidently_zero() {
            return GroupHom::zero(k.source, j.target);
        }
        match (k.to_concrete(), j.to_concrete()) {
            (Ok(a), Ok(b)) => GroupHom::from_concrete(&a.then(&b).expect("composable")),
            _ => k.then(&j),
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.d.values().chain(self.e.values()).all(GroupExpr::is_concrete)
    }

    fn positions(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.s_range.0..=self.s_range.1).flat_map(move |s| (self.t_range.0..=self.t_range.1).map(move |t| (s, t)))
    }

    /// Checks exactness at every vertex of the box. Returns the violations.
    pub fn exactness_violations(&self) -> Result<Vec<String>> {
        let r = self.page as i64;
        let mut bad = Vec::new();
        for (s, t) in self.positions() {
            let checks = [
                ("D (im k = ker i)", self.k_at(s, t), self.i_at(s, t)),
                ("D (im i = ker j)", self.i_at(s - 1, t), self.j_at(s, t)),
                ("E (im j = ker k)", self.j_at(s + r, t - 1), self.k_at(s, t)),
            ];
            for (label, f, g) in checks {
                let f = f.to_concrete()?;
                let g = g.to_concrete()?;
                if !is_exact_at(&f, &g)? {
                    bad.push(format!("{label} at (s,t)=({s},{t})"));
                }
            }
        }
        Ok(bad)
    }

    /// The derived couple: `D' = im i`, `E' = ker(jk)/im(jk)`.
    pub fn derive(&self) -> Result<ExactCouple> {
        if self.is_concrete() {
            self.derive_concrete()
        } else {
            self.derive_symbolic()
        }
    }

    fn derive_symbolic(&self) -> Result<ExactCouple> {
        for (s, t) in self.positions() {
            if !self.j_at(s, t).is_evidently_zero() {
                return Err(Error::NoRule(format!("derived couple with a symbolic nonzero j at ({s},{t})")));
            }
            let i = self.i_at(s, t);
            let onto = i.target.is_zero() || i.symb_apply().ok().and_then(|r| r.cokernel).is_some_and(|c| c.is_zero());
            if !onto {
                return Err(Error::NoRule(format!("image of a symbolic i at ({s},{t})")));
            }
        }
        let mut c = self.clone();
        c.page += 1;
        let r = c.page as i64;
        for (s, t) in self.positions() {
            c.j.insert((s, t), GroupHom::zero(c.d_at(s, t), c.e_at(s - r, t + 1)));
        }
        Ok(c)
    }

    fn derive_concrete(&self) -> Result<ExactCouple> {
        let r = self.page as i64;
        let ch = |h: GroupHom| h.to_concrete();
        // D' as a subgroup of D, with its inclusion.
        let mut dsub: BTreeMap<(i64, i64), ConcreteHom> = BTreeMap::new();
        // E' as ker(d)/im(d): inclusion of ker(d) into E and projection onto E'.
        let mut esub: BTreeMap<(i64, i64), (ConcreteHom, ConcreteHom)> = BTreeMap::new();
        for (s, t) in self.positions() {
            let incl = if s == self.s_range.0 {
                ConcreteHom::identity(&self.d_at(s, t).as_concrete().expect("concrete couple"))
            } else {
                ch(self.i_at(s - 1, t))?.image().map
            };
            dsub.insert((s, t), incl);
            let h = homology(&ch(self.differential(s + r, t - 1))?, &ch(self.differential(s, t))?)
                .map_err(|e| match e {
                    Error::DifferentialMismatch(_) => Error::DifferentialMismatch(format!("d∘d at (s,t)=({s},{t})")),
                    e => e,
                })?;
            esub.insert((s, t), (h.cycles, h.projection));
        }

        let zero = ConcreteGroup::trivial();
        let dgroup = |s: i64, t: i64| dsub.get(&(s, t)).map_or(zero.clone(), |h| h.source().clone());
        let egroup = |s: i64, t: i64| esub.get(&(s, t)).map_or(zero.clone(), |(_, p)| p.target().clone());
        let lift = |incl: &ConcreteHom, y: &[BigInt], what: &str| {
            incl.preimage_of(y).ok_or_else(|| Error::Inconsistent(format!("{what} does not lie in the expected subgroup")))
        };

        let mut out = ExactCouple::empty(self.s_range, self.t_range);
        out.page = self.page + 1;
        for (s, t) in self.positions() {
            let incl = &dsub[&(s, t)];
            let (kappa, proj) = &esub[&(s, t)];
            let dg = dgroup(s, t);
            let eg = egroup(s, t);
            out.d.insert((s, t), (&dg).into());
            out.e.insert((s, t), (&eg).into());

            // i' is the restriction of i.
            let i = ch(self.i_at(s, t))?;
            let dn = dgroup(s + 1, t);
            let mut cols = Vec::new();
            for g in 0..dg.generator_count() {
                let y = i.apply(&incl.apply(&unit(dg.generator_count(), g)));
                cols.push(match dsub.get(&(s + 1, t)) {
                    Some(next) => lift(next, &y, "i of an i-image")?,
                    None => Vec::new(),
                });
            }
            let ip = ConcreteHom::new(dg.clone(), dn.clone(), IntMatrix::from_columns(dn.generator_count(), &cols))?;
            out.i.insert((s, t), GroupHom::from_concrete(&ip));

            // k'[e] = k(e), which lies in im i by exactness.
            let k = ch(self.k_at(s, t))?;
            let mut cols = Vec::new();
            for g in 0..eg.generator_count() {
                let rep = proj.preimage_of(&unit(eg.generator_count(), g)).expect("projection is onto");
                let y = k.apply(&kappa.apply(&rep));
                cols.push(lift(incl, &y, "k of a d-cycle")?);
            }
            let kp = ConcreteHom::new(eg.clone(), dg.clone(), IntMatrix::from_columns(dg.generator_count(), &cols))?;
            out.k.insert((s, t), GroupHom::from_concrete(&kp));

            // j'(i(a)) = [j(a)].
            let (ts, tt) = (s - r - 1, t + 1);
            let tg = egroup(ts, tt);
            let mut cols = Vec::new();
            for g in 0..dg.generator_count() {
                let y = incl.apply(&unit(dg.generator_count(), g));
                let col = if s - 1 < self.s_range.0 || tg.is_trivial() {
                    alloc::vec![BigInt::zero(); tg.generator_count()]
                } else {
                    let a = ch(self.i_at(s - 1, t))?.preimage_of(&y).ok_or_else(|| Error::Inconsistent("D' element outside im i".into()))?;
                    let e = ch(self.j_at(s - 1, t))?.apply(&a);
                    let (tk, tp) = &esub[&(ts, tt)];
                    tp.apply(&lift(tk, &e, "j of a lift")?)
                };
                cols.push(col);
            }
            let jp = ConcreteHom::new(dg.clone(), tg.clone(), IntMatrix::from_columns(tg.generator_count(), &cols))?;
            out.j.insert((s, t), GroupHom::from_concrete(&jp));
        }
        Ok(out)
    }
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = alloc::vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// The exact couple of a Postnikov tower whose layers are shifted copies of
/// the base, read in motivic weight `q` over degrees `t_range`. Layer `s` is
/// slice `s`; `E^{s,t} = (base(t - p_s, q - q_s))^{multiplicity}` and the
/// tower is taken split, so `D^{s,t} = ⊕_{s' >= s} E^{s',t}` and `j = 0`.
pub fn couple_from_tower(slices: &[Slice], base: impl Fn(i64, i64) -> GroupExpr, q: i64, t_range: (i64, i64)) -> Result<ExactCouple> {
    for w in slices.windows(2) {
        if w[0].weight >= w[1].weight {
            return Err(Error::NonMonotoneWeights(format!("{} is not below {}", w[0].weight, w[1].weight)));
        }
    }
    if slices.is_empty() {
        return Err(Error::InvalidInstance("a tower needs at least one slice".into()));
    }
    let top = slices.len() as i64 - 1;
    let mut c = ExactCouple::empty((0, top), t_range);
    for t in t_range.0..=t_range.1 {
        let layer = |s: usize| {
            let sl = &slices[s];
            GroupExpr::sum(core::iter::repeat_n(base(t - sl.weight.p, q - sl.weight.q), sl.multiplicity))
        };
        let mut above = GroupExpr::Zero;
        for s in (0..=top).rev() {
            let e = layer(s as usize);
            let d = GroupExpr::sum([e.clone(), above.clone()]);
            let (k, i) = match (e.as_concrete(), above.as_concrete()) {
                (Some(ec), Some(ac)) => {
                    let (_, inj, proj) = biproduct(&[ec, ac]);
                    (GroupHom::from_concrete(&inj[0]), GroupHom::from_concrete(&proj[1]))
                }
                _ => (
                    GroupHom::new(e.clone(), d.clone(), HomRule::CanonicalInclusion),
                    GroupHom::new(d.clone(), above.clone(), HomRule::CanonicalProjection),
                ),
            };
            c.e.insert((s, t), e.clone());
            c.d.insert((s, t), d.clone());
            c.k.insert((s, t), k);
            c.i.insert((s, t), i);
            c.j.insert((s, t), GroupHom::zero(d.clone(), c.e_at(s - 1, t + 1)));
            above = d;
        }
    }
    // j targets were filled before every E existed; rebuild them.
    for ((s, t), d) in c.d.clone() {
        c.j.insert((s, t), GroupHom::zero(d, c.e_at(s - 1, t + 1)));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::super::filtered::FilteredComplex;
    use super::*;
    use alloc::vec;

    fn point(p: i64, q: i64) -> GroupExpr {
        if (p, q) == (0, 0) {
            GroupExpr::z()
        } else {
            GroupExpr::Zero
        }
    }

    #[test]
    fn one_slice_tower() {
        let c = couple_from_tower(&[Slice::new(0, 0, 1)], point, 0, (-1, 2)).unwrap();
        assert_eq!(c.e_at(0, 0), GroupExpr::z());
        assert_eq!(c.e_at(0, 1), GroupExpr::Zero);
        assert!(c.exactness_violations().unwrap().is_empty());
    }

    #[test]
    fn projective_space_slices() {
        let slices: Vec<Slice> = (0..5).map(|j| Slice::new(j, 2 * j, 1)).collect();
        for q in 0..5 {
            let c = couple_from_tower(&slices, point, q, (0, 10)).unwrap();
            for s in 0..5 {
                for t in 0..=10 {
                    let expected = if s == q && t == 2 * s { GroupExpr::z() } else { GroupExpr::Zero };
                    assert_eq!(c.e_at(s, t), expected, "q={q} s={s} t={t}");
                }
            }
            assert!(c.exactness_violations().unwrap().is_empty());
            let d = c.derive().unwrap();
            assert_eq!(d.e, c.e);
        }
    }

    #[test]
    fn weights_must_increase() {
        let r = couple_from_tower(&[Slice::new(1, 2, 1), Slice::new(1, 2, 1)], point, 0, (0, 1));
        assert!(matches!(r, Err(Error::NonMonotoneWeights(_))));
    }

    #[test]
    fn derivation_kills_an_isomorphism() {
        // E_1^{2,1,1} = Z --d_1 iso--> E_1^{3,1,0} = Z, as in the weight-one
        // lane for the classifying space of BG_m.
        let fc = FilteredComplex::new(2, vec![vec![1], vec![0]], vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::zeros(0, 1)]).unwrap();
        let c = fc.to_couple();
        assert!(c.exactness_violations().unwrap().is_empty());
        assert_eq!(c.e_at(1, 2), GroupExpr::z());
        assert_eq!(c.e_at(0, 3), GroupExpr::z());
        let d = c.derive().unwrap();
        assert!(d.exactness_violations().unwrap().is_empty());
        assert_eq!(d.e_at(1, 2), GroupExpr::Zero);
        assert_eq!(d.e_at(0, 3), GroupExpr::Zero);
    }
}
