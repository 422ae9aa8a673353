//! Concrete towers: cochain complexes of free abelian groups with an
//! increasing filtration by subcomplexes spanned by basis elements.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::exact::ExactCouple;
use crate::abgroup::{ConcreteGroup, GroupExpr, GroupHom, IntMatrix, Lattice, Subquotient};
use crate::error::{Error, Result};

/// `C^t = Z^{n_t}` for `t` in `t_lo..t_lo + levels.len()`, zero elsewhere.
/// Basis element `b` of `C^t` lies in `F_s` iff `levels[t][b] <= s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    t_lo: i64,
    levels: Vec<Vec<i64>>,
    coboundary: Vec<IntMatrix>,
}

impl FilteredComplex {
    /// `coboundary[k]` is `C^{t_lo+k} -> C^{t_lo+k+1}`; the last one must have
    /// zero rows.
    pub fn new(t_lo: i64, levels: Vec<Vec<i64>>, coboundary: Vec<IntMatrix>) -> Result<Self> {
        if levels.len() != coboundary.len() {
            return Err(Error::DimensionMismatch("one coboundary per degree".into()));
        }
        for (k, d) in coboundary.iter().enumerate() {
            let rows = levels.get(k + 1).map_or(0, Vec::len);
            if d.cols() != levels[k].len() || d.rows() != rows {
                return Err(Error::DimensionMismatch(format!("coboundary in degree {} has the wrong shape", t_lo + k as i64)));
            }
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if !d[(i, j)].is_zero() && levels[k + 1][i] > levels[k][j] {
                        return Err(Error::Inconsistent(format!("coboundary in degree {} raises filtration", t_lo + k as i64)));
                    }
                }
            }
            if k + 1 < coboundary.len() && !coboundary[k + 1].mul(d).is_zero() {
                return Err(Error::DifferentialMismatch(format!("degree {}", t_lo + k as i64)));
            }
        }
        Ok(FilteredComplex { t_lo, levels, coboundary })
    }

    pub fn t_range(&self) -> (i64, i64) {
        (self.t_lo, self.t_lo + self.levels.len() as i64 - 1)
    }

    /// Smallest and largest filtration level in use.
    pub fn s_range(&self) -> (i64, i64) {
        let all = self.levels.iter().flatten();
        let lo = all.clone().min().copied().unwrap_or(0);
        let hi = all.max().copied().unwrap_or(0);
        (lo, hi)
    }

    fn index(&self, t: i64) -> Option<usize> {
        let k = t - self.t_lo;
        (k >= 0 && (k as usize) < self.levels.len()).then_some(k as usize)
    }

    pub fn dim(&self, t: i64) -> usize {
        self.index(t).map_or(0, |k| self.levels[k].len())
    }

    pub fn levels(&self, t: i64) -> &[i64] {
        self.index(t).map_or(&[], |k| &self.levels[k])
    }

    /// `C^t -> C^{t+1}`.
    pub fn coboundary(&self, t: i64) -> IntMatrix {
        match self.index(t) {
            Some(k) => self.coboundary[k].clone(),
            None => IntMatrix::zeros(self.dim(t + 1), self.dim(t)),
        }
    }

    /// `F_s C^t`.
    pub fn filtration(&self, t: i64, s: i64) -> Lattice {
        let axes: Vec<usize> = self.levels(t).iter().enumerate().filter(|(_, l)| **l <= s).map(|(i, _)| i).collect();
        Lattice::coordinate(self.dim(t), &axes)
    }

    fn cocycles(&self, t: i64) -> Lattice {
        Lattice::full(self.dim(t)).preimage(&self.coboundary(t), &Lattice::zero(self.dim(t + 1)))
    }

    fn coboundaries(&self, t: i64) -> Lattice {
        Lattice::full(self.dim(t - 1)).image(&self.coboundary(t - 1))
    }

    /// `H^t(C)` computed directly.
    pub fn cohomology(&self, t: i64) -> Subquotient {
        Subquotient::new(self.cocycles(t), self.coboundaries(t)).expect("boundaries are cycles")
    }

    /// `H^t(C / F_{s-1})`.
    pub fn quotient_cohomology(&self, s: i64, t: i64) -> Subquotient {
        let below = self.filtration(t, s - 1);
        let num = Lattice::full(self.dim(t)).preimage(&self.coboundary(t), &self.filtration(t + 1, s - 1));
        Subquotient::new(num, below.sum(&self.coboundaries(t))).expect("relations are relative cycles")
    }

    /// `H^t(F_s / F_{s-1})`.
    pub fn layer_cohomology(&self, s: i64, t: i64) -> Subquotient {
        let below = self.filtration(t, s - 1);
        let num = self.filtration(t, s).preimage(&self.coboundary(t), &self.filtration(t + 1, s - 1));
        let den = below.sum(&self.filtration(t - 1, s).image(&self.coboundary(t - 1)));
        Subquotient::new(num, den).expect("relations are relative cycles")
    }

    /// `E_r^{s,t}` from the classical formula
    /// `(Z_r + F_{s-1}) / (B_r + F_{s-1})`, with
    /// `Z_r = {x in F_s : dx in F_{s-r}}` and `B_r = d{y in F_{s+r-1} : dy in F_s}`.
    pub fn e_r(&self, r: u32, s: i64, t: i64) -> ConcreteGroup {
        let r = r as i64;
        let below = self.filtration(t, s - 1);
        let z = self.filtration(t, s).preimage(&self.coboundary(t), &self.filtration(t + 1, s - r));
        let y = self.filtration(t - 1, s + r - 1).preimage(&self.coboundary(t - 1), &self.filtration(t, s));
        let b = y.image(&self.coboundary(t - 1));
        Subquotient::new(z.sum(&below), b.sum(&below)).expect("B_r lies in Z_r").group().clone()
    }

    /// Graded pieces `F^s H^t / F^{s-1} H^t` of the induced filtration on
    /// `H^t(C)`, for `s` over the filtration range.
    pub fn abutment_pieces(&self, t: i64) -> Vec<(i64, ConcreteGroup)> {
        let (lo, hi) = self.s_range();
        let cycles = self.cocycles(t);
        let bounds = self.coboundaries(t);
        let step = |s: i64| {
            let meet = cycles.preimage(&IntMatrix::identity(self.dim(t)), &self.filtration(t, s));
            meet.sum(&bounds)
        };
        (lo..=hi).map(|s| (s, Subquotient::new(step(s), step(s - 1)).expect("filtration is increasing").group().clone())).collect()
    }

    /// The exact couple `D^{s,t} = H^t(C/F_{s-1})`, `E^{s,t} = H^t(F_s/F_{s-1})`.
    pub fn to_couple(&self) -> ExactCouple {
        let (s_lo, s_hi) = self.s_range();
        let (t_lo, t_hi) = self.t_range();
        let mut c = ExactCouple::empty((s_lo, s_hi), (t_lo, t_hi));
        for t in t_lo..=t_hi {
            let d: Vec<Subquotient> = (s_lo..=s_hi + 1).map(|s| self.quotient_cohomology(s, t)).collect();
            let d_next: Vec<Subquotient> = (s_lo - 1..=s_hi).map(|s| self.layer_cohomology(s, t + 1)).collect();
            for s in s_lo..=s_hi {
                let ds = &d[(s - s_lo) as usize];
                let es = self.layer_cohomology(s, t);
                let id = IntMatrix::identity(self.dim(t));
                let i = ds.induced(&d[(s - s_lo + 1) as usize], &id).expect("projection of quotient complexes");
                let k = es.induced(ds, &id).expect("inclusion of the layer");
                let target = &d_next[(s - 1 - (s_lo - 1)) as usize];
                let j = ds.induced(target, &self.coboundary(t)).expect("connecting map");
                c.d.insert((s, t), ds.group().into());
                c.e.insert((s, t), es.group().into());
                c.i.insert((s, t), GroupHom::from_concrete(&i));
                c.k.insert((s, t), GroupHom::from_concrete(&k));
                let mut j = GroupHom::from_concrete(&j);
                if s - 1 < s_lo || t + 1 > t_hi {
                    j = GroupHom::zero(j.source.clone(), GroupExpr::Zero);
                }
                c.j.insert((s, t), j);
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// `Z -> Z` by `m`, source at level 1, target at level 0.
    fn elementary(m: i64) -> FilteredComplex {
        FilteredComplex::new(0, vec![vec![1], vec![0]], vec![IntMatrix::from_rows(&[vec![m]]), IntMatrix::zeros(0, 1)]).unwrap()
    }

    #[test]
    fn pages_of_an_elementary_complex() {
        let c = elementary(3);
        assert_eq!(c.e_r(1, 1, 0), ConcreteGroup::free(1));
        assert_eq!(c.e_r(1, 0, 1), ConcreteGroup::free(1));
        assert_eq!(c.e_r(2, 1, 0), ConcreteGroup::trivial());
        assert_eq!(c.e_r(2, 0, 1), ConcreteGroup::cyclic(3u32));
        assert_eq!(c.cohomology(1).group(), &ConcreteGroup::cyclic(3u32));
        let pieces = c.abutment_pieces(1);
        assert_eq!(pieces, vec![(0, ConcreteGroup::cyclic(3u32)), (1, ConcreteGroup::trivial())]);
    }

    #[test]
    fn filtration_must_be_preserved() {
        let bad = FilteredComplex::new(0, vec![vec![0], vec![1]], vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::zeros(0, 1)]);
        assert!(matches!(bad, Err(Error::Inconsistent(_))));
    }
}
