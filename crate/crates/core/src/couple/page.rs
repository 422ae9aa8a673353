//! Trigraded pages `E_r^{p,q,s}` with differentials `(p,q,s) -> (p+1,q,s-r)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::exact::ExactCouple;
use crate::abgroup::{homology, GroupExpr, GroupHom};
use crate::error::{Error, Result};

pub type Point = (i64, i64, i64);

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Slot {
    Known(GroupExpr),
    Unknown(String),
}

impl Slot {
    pub fn known(&self) -> Option<&GroupExpr> {
        match self {
            Slot::Known(g) => Some(g),
            Slot::Unknown(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.known().is_some_and(GroupExpr::is_zero)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Known(g) => write!(f, "{g}"),
            Slot::Unknown(_) => f.write_str("?"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Differential {
    Known(GroupHom),
    Unknown(String),
}

impl Differential {
    pub fn known(&self) -> Option<&GroupHom> {
        match self {
            Differential::Known(h) => Some(h),
            Differential::Unknown(_) => None,
        }
    }

    /// `true` for a known map that is evidently zero.
    pub fn is_zero(&self) -> bool {
        self.known().is_some_and(GroupHom::is_evidently_zero)
    }
}

/// What lies beyond the `p`/`q` bounds of a window.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Beyond {
    /// The page is finite: everything outside is zero.
    Zero,
    /// Nothing is known outside.
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Window {
    pub p: (i64, i64),
    pub q: (i64, i64),
    /// Filtration range; entries outside it are zero.
    pub s: (i64, i64),
    pub beyond: Beyond,
}

impl Window {
    pub fn new(p: (i64, i64), q: (i64, i64), s: (i64, i64), beyond: Beyond) -> Self {
        Window { p, q, s, beyond }
    }

    pub fn contains(&self, (p, q, s): Point) -> bool {
        (self.p.0..=self.p.1).contains(&p) && (self.q.0..=self.q.1).contains(&q) && (self.s.0..=self.s.1).contains(&s)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (self.q.0..=self.q.1).flat_map(move |q| (self.p.0..=self.p.1).flat_map(move |p| (self.s.0..=self.s.1).map(move |s| (p, q, s))))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriPage {
    pub r: u32,
    pub window: Window,
    entries: BTreeMap<Point, Slot>,
    differentials: BTreeMap<Point, Differential>,
}

impl TriPage {
    pub fn new(r: u32, window: Window) -> Self {
        TriPage { r, window, entries: BTreeMap::new(), differentials: BTreeMap::new() }
    }

    pub fn set_entry(&mut self, at: Point, g: GroupExpr) {
        self.entries.insert(at, Slot::Known(g.normalized()));
    }

    pub fn set_unknown(&mut self, at: Point, why: impl Into<String>) {
        self.entries.insert(at, Slot::Unknown(why.into()));
    }

    /// Installs `d_r` leaving `at`.
    pub fn set_differential(&mut self, at: Point, d: GroupHom) {
        self.differentials.insert(at, Differential::Known(d));
    }

    pub fn target_of(&self, (p, q, s): Point) -> Point {
        (p + 1, q, s - self.r as i64)
    }

    pub fn source_of(&self, (p, q, s): Point) -> Point {
        (p - 1, q, s + self.r as i64)
    }

    pub fn entry(&self, at: Point) -> Slot {
        let (p, q, s) = at;
        if !(self.window.s.0..=self.window.s.1).contains(&s) {
            return Slot::Known(GroupExpr::Zero);
        }
        let inside = (self.window.p.0..=self.window.p.1).contains(&p) && (self.window.q.0..=self.window.q.1).contains(&q);
        if !inside {
            return match self.window.beyond {
                Beyond::Zero => Slot::Known(GroupExpr::Zero),
                Beyond::Unknown => Slot::Unknown("outside window".into()),
            };
        }
        self.entries.get(&at).cloned().unwrap_or(Slot::Known(GroupExpr::Zero))
    }

    /// `d_r` leaving `at`. Forced to zero when either end is zero.
    pub fn differential(&self, at: Point) -> Differential {
        let src = self.entry(at);
        let tgt = self.entry(self.target_of(at));
        if let (Slot::Known(a), Slot::Known(b)) = (&src, &tgt) {
            if a.is_zero() || b.is_zero() {
                return Differential::Known(GroupHom::zero(a.clone(), b.clone()));
            }
        }
        if src.is_zero() || tgt.is_zero() {
            return Differential::Known(GroupHom::zero(GroupExpr::Zero, GroupExpr::Zero));
        }
        match self.differentials.get(&at) {
            Some(d) => d.clone(),
            None => Differential::Unknown("not determined".into()),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.window.points()
    }

    /// Nonzero or unknown entries inside the window.
    pub fn support(&self) -> Vec<(Point, Slot)> {
        self.points().map(|x| (x, self.entry(x))).filter(|(_, e)| !e.is_zero()).collect()
    }

    /// `true` if every differential touching the window is zero.
    pub fn is_degenerate(&self) -> bool {
        self.points().all(|x| self.differential(x).is_zero())
    }

    /// The spectral sequence of a couple indexed by `(s, t)`, read as the
    /// lane of weight `q` with `p = t`. Several lanes may be merged.
    pub fn from_couples<'a>(lanes: impl IntoIterator<Item = (i64, &'a ExactCouple)>) -> Result<TriPage> {
        let lanes: Vec<(i64, &ExactCouple)> = lanes.into_iter().collect();
        let first = lanes.first().ok_or_else(|| Error::InvalidInstance("no lanes".into()))?.1;
        let qs: BTreeSet<i64> = lanes.iter().map(|(q, _)| *q).collect();
        if qs.len() != lanes.len() {
            return Err(Error::InvalidInstance("duplicate weight lane".into()));
        }
        let mut p_range = first.t_range;
        let mut s_range = first.s_range;
        for (_, c) in &lanes {
            if c.page != first.page {
                return Err(Error::InvalidInstance("lanes on different pages".into()));
            }
            p_range = (p_range.0.min(c.t_range.0), p_range.1.max(c.t_range.1));
            s_range = (s_range.0.min(c.s_range.0), s_range.1.max(c.s_range.1));
        }
        let q_range = (*qs.first().unwrap(), *qs.last().unwrap());
        let mut page = TriPage::new(first.page, Window::new(p_range, q_range, s_range, Beyond::Zero));
        for (q, c) in lanes {
            for s in c.s_range.0..=c.s_range.1 {
                for t in c.t_range.0..=c.t_range.1 {
                    page.set_entry((t, q, s), c.e_at(s, t));
                    page.set_differential((t, q, s), c.differential(s, t));
                }
            }
        }
        Ok(page)
    }
}

/// `ker(out) / im(in)` at one entry, or `None` when the maps do not decide it.
fn entry_homology(at: Point, entry: &GroupExpr, incoming: &Differential, outgoing: &Differential) -> Result<Option<GroupExpr>> {
    match (incoming, outgoing) {
        (Differential::Known(f), Differential::Known(g)) => {
            let zero_in;
            let zero_out;
            let f = if f.is_evidently_zero() {
                zero_in = GroupHom::zero(GroupExpr::Zero, entry.clone());
                &zero_in
            } else {
                f
            };
            let g = if g.is_evidently_zero() {
                zero_out = GroupHom::zero(entry.clone(), GroupExpr::Zero);
                &zero_out
            } else {
                g
            };
            if let (Ok(fc), Ok(gc)) = (f.to_concrete(), g.to_concrete()) {
                let h = homology(&fc, &gc).map_err(|e| match e {
                    Error::DifferentialMismatch(_) => Error::DifferentialMismatch(format!("d∘d ≠ 0 through {at:?}")),
                    e => e,
                })?;
                return Ok(Some(h.group.into()));
            }
            match (f.is_evidently_zero(), g.is_evidently_zero()) {
                (true, true) => Ok(Some(entry.clone())),
                (true, false) => Ok(g.symb_apply().ok().and_then(|r| r.kernel)),
                (false, true) => Ok(f.symb_apply().ok().and_then(|r| r.cokernel)),
                (false, false) => {
                    let ker = g.symb_apply().ok().and_then(|r| r.kernel);
                    let coker = f.symb_apply().ok().and_then(|r| r.cokernel);
                    if ker.as_ref().is_some_and(GroupExpr::is_zero) || coker.as_ref().is_some_and(GroupExpr::is_zero) {
                        Ok(Some(GroupExpr::Zero))
                    } else {
                        Ok(None)
                    }
                }
            }
        }
        _ => Ok(None),
    }
}

/// `E_{r+1} = ker d_r / im d_r`. Differentials on the new page are zero
/// where forced and unknown otherwise.
pub fn page_turn(page: &TriPage) -> Result<TriPage> {
    let mut next = TriPage::new(page.r + 1, page.window);
    for x in page.points() {
        let e = page.entry(x);
        let Slot::Known(g) = &e else {
            next.entries.insert(x, e.clone());
            continue;
        };
        if g.is_zero() {
            continue;
        }
        let incoming = page.differential(page.source_of(x));
        let outgoing = page.differential(x);
        match homology_at(x, g, &incoming, &outgoing, &page.entry(page.target_of(x)))? {
            Some(h) => next.set_entry(x, h),
            None => next.set_unknown(x, format!("homology at {x:?} on page {}", page.r)),
        }
    }
    Ok(next)
}

/// The next-page value of one entry, or `None` when the maps do not decide it.
/// `target` is the entry the outgoing map lands in.
pub fn homology_at(at: Point, entry: &GroupExpr, incoming: &Differential, outgoing: &Differential, target: &Slot) -> Result<Option<GroupExpr>> {
    Ok(match entry_homology(at, entry, incoming, outgoing)? {
        Some(h) => Some(h),
        None => free_into_torsion(entry, incoming, target),
    })
}

/// With no incoming map, the kernel of any map from `Z^r` to a torsion group
/// has finite index, hence is `Z^r` again.
fn free_into_torsion(entry: &GroupExpr, incoming: &Differential, target: &Slot) -> Option<GroupExpr> {
    let target_torsion = target.known().is_some_and(GroupExpr::is_torsion);
    (matches!(entry, GroupExpr::Free(_)) && incoming.is_zero() && target_torsion).then(|| entry.clone())
}

/// The `E_∞` value of one entry and the page on which it is reached.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stable {
    pub value: Slot,
    pub at_page: u32,
}

/// Turns pages until every differential touching `region` is forced to be
/// zero. Fails with `WindowTooSmall` if such a differential leaves the
/// window of a page whose outside is unknown.
pub fn einfty(page: &TriPage, region: &[Point]) -> Result<BTreeMap<Point, Stable>> {
    let w = page.window;
    // From this page on every differential leaves the filtration range.
    let r_max = (w.s.1 - w.s.0 + 1).max(1) as u32;
    let mut last_active: BTreeMap<Point, u32> = BTreeMap::new();
    let mut cur = page.clone();
    loop {
        for &x in region {
            let ends = [cur.source_of(x), cur.target_of(x)];
            let moves = [cur.differential(cur.source_of(x)), cur.differential(x)];
            for (end, d) in ends.iter().zip(&moves) {
                if d.is_zero() {
                    continue;
                }
                if !w.contains(*end) && w.beyond == Beyond::Unknown && (w.s.0..=w.s.1).contains(&end.2) {
                    return Err(Error::WindowTooSmall(format!("d_{} at {x:?} reaches {end:?}", cur.r)));
                }
                last_active.insert(x, cur.r);
            }
        }
        if cur.r >= r_max {
            break;
        }
        cur = page_turn(&cur)?;
    }
    Ok(region
        .iter()
        .map(|&x| (x, Stable { value: cur.entry(x), at_page: last_active.get(&x).map_or(page.r, |r| r + 1) }))
        .collect())
}
