use core::cmp::Ordering;
use core::fmt;

/// A Tate weight `(q)[p]`: motivic weight `q`, topological degree `p`.
///
/// Ordered by weight first, then degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Bidegree {
    pub q: i64,
    pub p: i64,
}

impl Bidegree {
    pub const fn new(q: i64, p: i64) -> Self {
        Bidegree { q, p }
    }
}

impl Ord for Bidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.p).cmp(&(other.q, other.p))
    }
}

impl PartialOrd for Bidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})[{}]", self.q, self.p)
    }
}

/// One layer of a Postnikov tower: `multiplicity` copies of the base shifted
/// by `weight`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Slice {
    pub weight: Bidegree,
    pub multiplicity: usize,
}

impl Slice {
    pub const fn new(q: i64, p: i64, multiplicity: usize) -> Self {
        Slice { weight: Bidegree::new(q, p), multiplicity }
    }
}
