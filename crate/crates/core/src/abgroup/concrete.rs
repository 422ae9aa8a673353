//! Finitely generated abelian groups in canonical form, homomorphisms between
//! them, and subquotients of free lattices.
//!
//! A [`ConcreteGroup`] `Z/d_1 + ... + Z/d_m + Z^r` has `m + r` canonical
//! generators: the torsion generators first, in chain order, then the free
//! ones. Element coordinates are vectors over those generators, with torsion
//! coordinates reduced into `0..d_i`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{kernel_basis, smith, solve, IntMatrix, SmithDecomposition};
use crate::error::{Error, Result};

/// Canonical form: free rank plus an invariant-factor chain `d_1 | d_2 | ...`,
/// every factor at least 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ConcreteGroup {
    free_rank: usize,
    invariant_factors: Vec<BigUint>,
}

impl ConcreteGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        ConcreteGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// `Z/m`; `m = 0` gives `Z` and `m = 1` the trivial group.
    pub fn cyclic(m: impl Into<BigUint>) -> Self {
        Self::from_cyclic_orders(0, [m.into()])
    }

    /// Canonical form of `Z^free + Z/m_1 + Z/m_2 + ...` for arbitrary orders.
    /// Orders `0` contribute free summands and orders `1` vanish.
    pub fn from_cyclic_orders(free: usize, orders: impl IntoIterator<Item = BigUint>) -> Self {
        let mut free_rank = free;
        let mut finite = Vec::new();
        for m in orders {
            if m.is_zero() {
                free_rank += 1;
            } else if !m.is_one() {
                finite.push(m);
            }
        }
        ConcreteGroup { free_rank, invariant_factors: invariant_chain(&finite) }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    /// Number of canonical generators.
    pub fn generator_count(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().fold(BigUint::one(), |acc, d| acc * d)
    }

    /// Relation order of generator `i`: `d_i` for torsion generators, `0` for
    /// free generators.
    pub fn generator_order(&self, i: usize) -> BigInt {
        match self.invariant_factors.get(i) {
            Some(d) => BigInt::from(d.clone()),
            None => BigInt::zero(),
        }
    }

    /// Reduce a coordinate vector into canonical range.
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.generator_count(), "coordinate length mismatch");
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let d = self.generator_order(i);
                if d.is_zero() { c.clone() } else { c.mod_floor(&d) }
            })
            .collect()
    }

    /// Direct sum, re-canonicalised.
    pub fn direct_sum(&self, other: &ConcreteGroup) -> ConcreteGroup {
        ConcreteGroup::from_cyclic_orders(
            self.free_rank + other.free_rank,
            self.invariant_factors.iter().chain(&other.invariant_factors).cloned(),
        )
    }

    /// Relation lattice of the canonical presentation, as a square diagonal matrix.
    pub(crate) fn relation_matrix(&self) -> IntMatrix {
        let g = self.generator_count();
        let diag: Vec<BigInt> = (0..g).map(|i| self.generator_order(i)).collect();
        IntMatrix::diagonal(g, g, &diag)
    }

    /// The canonical presentation viewed as a subquotient of `Z^g`.
    pub fn as_subquotient(&self) -> Subquotient {
        let g = self.generator_count();
        let num = Lattice::full(g);
        let den = Lattice::from_generators(g, &self.relation_matrix());
        let presentation = Presentation {
            group: self.clone(),
            to_coords: IntMatrix::identity(g),
            reps: IntMatrix::identity(g),
            d: (0..g).map(|i| self.generator_order(i)).collect(),
        };
        Subquotient { num, den, presentation }
    }

    /// `G / nG`, computed as the cokernel of multiplication by `n`.
    pub fn quotient_by(&self, n: &BigUint) -> ConcreteGroup {
        ConcreteHom::multiply(self, &BigInt::from(n.clone())).cokernel().group
    }

    /// `G[n] = {g : ng = 0}`, computed as the kernel of multiplication by `n`.
    pub fn torsion_by(&self, n: &BigUint) -> ConcreteGroup {
        ConcreteHom::multiply(self, &BigInt::from(n.clone())).kernel().group
    }

    /// Kills every prime dividing `n` (tensoring with `Z[1/n]`).
    pub fn localize_away(&self, n: &BigUint) -> ConcreteGroup {
        let orders = self.invariant_factors.iter().map(|d| coprime_part(d, n));
        ConcreteGroup::from_cyclic_orders(self.free_rank, orders)
    }
}

/// Direct sum of `parts` with its canonical injections and projections.
pub fn biproduct(parts: &[ConcreteGroup]) -> (ConcreteGroup, Vec<ConcreteHom>, Vec<ConcreteHom>) {
    let sizes: Vec<usize> = parts.iter().map(ConcreteGroup::generator_count).collect();
    let total: usize = sizes.iter().sum();
    let mut rel = IntMatrix::zeros(total, total);
    let mut offset = 0;
    for (g, &n) in parts.iter().zip(&sizes) {
        for i in 0..n {
            rel[(offset + i, offset + i)] = g.generator_order(i);
        }
        offset += n;
    }
    let sum = Subquotient::new(Lattice::full(total), Lattice::from_generators(total, &rel)).expect("relations are a sublattice");
    let mut inj = Vec::new();
    let mut proj = Vec::new();
    let mut offset = 0;
    for (g, &n) in parts.iter().zip(&sizes) {
        let mut e = IntMatrix::zeros(total, n);
        for i in 0..n {
            e[(offset + i, i)] = BigInt::one();
        }
        let part = g.as_subquotient();
        inj.push(part.induced(&sum, &e).expect("summand injection"));
        proj.push(sum.induced(&part, &e.transpose()).expect("summand projection"));
        offset += n;
    }
    (sum.group().clone(), inj, proj)
}

/// Largest divisor of `d` coprime to `n`.
pub fn coprime_part(d: &BigUint, n: &BigUint) -> BigUint {
    let mut d = d.clone();
    if n.is_zero() {
        return BigUint::one();
    }
    loop {
        let g = d.gcd(n);
        if g.is_one() {
            return d;
        }
        d /= g;
    }
}

/// Invariant-factor chain of a direct sum of finite cyclic groups.
fn invariant_chain(orders: &[BigUint]) -> Vec<BigUint> {
    if orders.is_empty() {
        return Vec::new();
    }
    let diag: Vec<BigInt> = orders.iter().map(|m| BigInt::from(m.clone())).collect();
    let s = smith(&IntMatrix::diagonal(diag.len(), diag.len(), &diag));
    s.invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_biguint().expect("Smith factors are positive"))
        .collect()
}

impl fmt::Display for ConcreteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        for d in &self.invariant_factors {
            if !first {
                write!(f, " ⊕ ")?;
            }
            first = false;
            write!(f, "Z/{d}")?;
        }
        if self.free_rank > 0 {
            if !first {
                write!(f, " ⊕ ")?;
            }
            if self.free_rank == 1 { write!(f, "Z")? } else { write!(f, "Z^{}", self.free_rank)? }
        }
        Ok(())
    }
}

impl fmt::Debug for ConcreteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A full-rank-basis sublattice of `Z^ambient`.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    smith: SmithDecomposition,
}

impl Lattice {
    pub fn full(ambient: usize) -> Self {
        Self::with_basis(IntMatrix::identity(ambient))
    }

    pub fn zero(ambient: usize) -> Self {
        Self::with_basis(IntMatrix::zeros(ambient, 0))
    }

    /// The lattice spanned by the columns of `gens`.
    pub fn from_generators(ambient: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.rows(), ambient, "generator dimension mismatch");
        let s = smith(gens);
        let cols: Vec<Vec<BigInt>> = (0..s.rank)
            .map(|i| s.u_inv.column(i).into_iter().map(|x| x * &s.d[(i, i)]).collect())
            .collect();
        Self::with_basis(IntMatrix::from_columns(ambient, &cols))
    }

    /// Coordinate sublattice spanned by the chosen unit vectors.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Self {
        let cols: Vec<Vec<BigInt>> = axes
            .iter()
            .map(|&a| (0..ambient).map(|i| if i == a { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::with_basis(IntMatrix::from_columns(ambient, &cols))
    }

    fn with_basis(basis: IntMatrix) -> Self {
        let smith = smith(&basis);
        debug_assert_eq!(smith.rank, basis.cols(), "lattice basis must be independent");
        Lattice { ambient: basis.rows(), basis, smith }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `x` in this lattice's basis, if `x` lies in the lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        super::matrix::solve_with(&self.smith, self.rank(), x)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(self.ambient, &self.basis.hcat(&other.basis))
    }

    /// Image of this lattice under `f`.
    pub fn image(&self, f: &IntMatrix) -> Lattice {
        Lattice::from_generators(f.rows(), &f.mul(&self.basis))
    }

    /// `{x in self : f x in target}`.
    pub fn preimage(&self, f: &IntMatrix, target: &Lattice) -> Lattice {
        let fb = f.mul(&self.basis);
        let system = fb.hcat(&target.basis.neg());
        let ker = kernel_basis(&system);
        let k = self.rank();
        let rows: Vec<usize> = (0..k).collect();
        let c = ker.select_rows(&rows);
        Lattice::from_generators(self.ambient, &self.basis.mul(&c))
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }
}

/// Canonical coordinates of a subquotient.
#[derive(Clone, Debug)]
struct Presentation {
    group: ConcreteGroup,
    /// Rows map numerator-basis coordinates to canonical coordinates.
    to_coords: IntMatrix,
    /// Columns are ambient representatives of the canonical generators.
    reps: IntMatrix,
    /// Relation order per canonical generator (`0` for free).
    d: Vec<BigInt>,
}

/// `num / den` for lattices `den ⊆ num ⊆ Z^ambient`, with its canonical form.
#[derive(Clone, Debug)]
pub struct Subquotient {
    num: Lattice,
    den: Lattice,
    presentation: Presentation,
}

impl Subquotient {
    pub fn new(num: Lattice, den: Lattice) -> Result<Self> {
        if num.ambient() != den.ambient() || !num.contains_lattice(&den) {
            return Err(Error::DimensionMismatch("subquotient denominator is not contained in numerator".into()));
        }
        // Denominator basis expressed in numerator coordinates.
        let c_cols: Vec<Vec<BigInt>> = den
            .basis()
            .columns()
            .iter()
            .map(|col| num.coords(col).expect("den ⊆ num"))
            .collect();
        let k = num.rank();
        let c = IntMatrix::from_columns(k, &c_cols);
        let s = smith(&c);
        let mut keep = Vec::new();
        let mut d = Vec::new();
        for i in 0..k {
            let di = if i < s.rank { s.d[(i, i)].clone() } else { BigInt::zero() };
            if !di.is_one() {
                keep.push(i);
                d.push(di);
            }
        }
        let torsion: Vec<BigUint> = d.iter().filter(|x| !x.is_zero()).map(|x| x.magnitude().clone()).collect();
        let free = d.iter().filter(|x| x.is_zero()).count();
        let group = ConcreteGroup { free_rank: free, invariant_factors: torsion };
        let to_coords = s.u.select_rows(&keep);
        let reps = num.basis().mul(&s.u_inv.select_columns(&keep));
        let presentation = Presentation { group, to_coords, reps, d };
        Ok(Subquotient { num, den, presentation })
    }

    pub fn group(&self) -> &ConcreteGroup {
        &self.presentation.group
    }

    pub fn numerator(&self) -> &Lattice {
        &self.num
    }

    pub fn denominator(&self) -> &Lattice {
        &self.den
    }

    pub fn ambient(&self) -> usize {
        self.num.ambient()
    }

    /// Canonical coordinates of an ambient vector lying in the numerator.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.num.coords(x)?;
        let y = self.presentation.to_coords.mul_vec(&c);
        Some(
            y.into_iter()
                .zip(&self.presentation.d)
                .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) })
                .collect(),
        )
    }

    /// Ambient representatives of the canonical generators, as columns.
    pub fn generator_reps(&self) -> &IntMatrix {
        &self.presentation.reps
    }

    /// Homomorphism of canonical forms induced by an ambient matrix `f`.
    /// Fails if `f` does not carry numerator into numerator and denominator
    /// into denominator.
    pub fn induced(&self, target: &Subquotient, f: &IntMatrix) -> Result<ConcreteHom> {
        if f.cols() != self.ambient() || f.rows() != target.ambient() {
            return Err(Error::DimensionMismatch("induced map has wrong ambient shape".into()));
        }
        if !target.den.contains_lattice(&self.den.image(f)) {
            return Err(Error::IllDefinedMap("ambient map does not preserve relations".into()));
        }
        let cols: Vec<Vec<BigInt>> = self
            .generator_reps()
            .columns()
            .iter()
            .map(|r| target.coords(&f.mul_vec(r)).ok_or_else(|| Error::IllDefinedMap("image leaves the target numerator".into())))
            .collect::<Result<_>>()?;
        ConcreteHom::new(self.group().clone(), target.group().clone(), IntMatrix::from_columns(target.group().generator_count(), &cols))
    }
}

/// A homomorphism between canonical groups, as a matrix acting on
/// canonical coordinates (`target generators x source generators`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConcreteHom {
    source: ConcreteGroup,
    target: ConcreteGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for ConcreteHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --{:?}--> {}", self.source, self.matrix, self.target)
    }
}

/// Kernel, cokernel or image together with its witness map.
#[derive(Clone, Debug)]
pub struct Witnessed {
    pub group: ConcreteGroup,
    /// Inclusion into the source (kernel), into the target (image), or the
    /// projection from the target (cokernel).
    pub map: ConcreteHom,
}

impl ConcreteHom {
    pub fn new(source: ConcreteGroup, target: ConcreteGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "matrix is {}x{} but groups have {} -> {} generators",
                matrix.rows(),
                matrix.cols(),
                source.generator_count(),
                target.generator_count()
            )));
        }
        let mut m = matrix;
        for i in 0..m.rows() {
            let d = target.generator_order(i);
            if !d.is_zero() {
                for j in 0..m.cols() {
                    m[(i, j)] = m[(i, j)].mod_floor(&d);
                }
            }
        }
        // Well-definedness: d_j * (column j) must vanish in the target.
        for j in 0..source.generator_count() {
            let dj = source.generator_order(j);
            if dj.is_zero() {
                continue;
            }
            for i in 0..m.rows() {
                let v = &m[(i, j)] * &dj;
                let di = target.generator_order(i);
                let vanishes = if di.is_zero() { v.is_zero() } else { v.is_multiple_of(&di) };
                if !vanishes {
                    return Err(Error::IllDefinedMap(alloc::format!("generator {j} of order {dj} does not map to an element of compatible order")));
                }
            }
        }
        Ok(ConcreteHom { source, target, matrix: m })
    }

    pub fn zero(source: &ConcreteGroup, target: &ConcreteGroup) -> Self {
        let m = IntMatrix::zeros(target.generator_count(), source.generator_count());
        ConcreteHom { source: source.clone(), target: target.clone(), matrix: m }
    }

    pub fn identity(g: &ConcreteGroup) -> Self {
        ConcreteHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generator_count()) }
    }

    /// Multiplication by `n` on `g`.
    pub fn multiply(g: &ConcreteGroup, n: &BigInt) -> Self {
        ConcreteHom::new(g.clone(), g.clone(), IntMatrix::scalar(g.generator_count(), n)).expect("multiplication is well defined")
    }

    pub fn source(&self) -> &ConcreteGroup {
        &self.source
    }

    pub fn target(&self) -> &ConcreteGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ConcreteHom) -> Result<ConcreteHom> {
        if self.target != other.source {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        ConcreteHom::new(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix))
    }

    pub fn scaled(&self, n: &BigInt) -> ConcreteHom {
        let m = IntMatrix::scalar(self.target.generator_count(), n).mul(&self.matrix);
        ConcreteHom::new(self.source.clone(), self.target.clone(), m).expect("scaling preserves well-definedness")
    }

    fn source_sq(&self) -> Subquotient {
        self.source.as_subquotient()
    }

    fn target_sq(&self) -> Subquotient {
        self.target.as_subquotient()
    }

    /// Kernel as a subquotient of the source's ambient lattice.
    pub fn kernel_subquotient(&self) -> Subquotient {
        let s = self.source_sq();
        let t = self.target_sq();
        let num = s.num.preimage(&self.matrix, &t.den);
        Subquotient::new(num, s.den.clone()).expect("relations lie in the kernel")
    }

    /// Image as a subquotient of the target's ambient lattice.
    pub fn image_subquotient(&self) -> Subquotient {
        let s = self.source_sq();
        let t = self.target_sq();
        let num = s.num.image(&self.matrix).sum(&t.den);
        Subquotient::new(num, t.den.clone()).expect("relations lie in the image lattice")
    }

    pub fn kernel(&self) -> Witnessed {
        let k = self.kernel_subquotient();
        let map = k.induced(&self.source_sq(), &IntMatrix::identity(self.source.generator_count())).expect("inclusion");
        Witnessed { group: k.group().clone(), map }
    }

    pub fn image(&self) -> Witnessed {
        let im = self.image_subquotient();
        let map = im.induced(&self.target_sq(), &IntMatrix::identity(self.target.generator_count())).expect("inclusion");
        Witnessed { group: im.group().clone(), map }
    }

    pub fn cokernel(&self) -> Witnessed {
        let t = self.target_sq();
        let s = self.source_sq();
        let den = s.num.image(&self.matrix).sum(&t.den);
        let c = Subquotient::new(t.num.clone(), den).expect("image ⊆ target");
        let map = t.induced(&c, &IntMatrix::identity(self.target.generator_count())).expect("projection");
        Witnessed { group: c.group().clone(), map }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }

    /// Some `x` with `self(x) = y`, if `y` is in the image.
    pub fn preimage_of(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let rel = self.target.relation_matrix();
        let system = self.matrix.hcat(&rel);
        let z = solve(&system, y)?;
        Some(self.source.reduce(&z[..self.source.generator_count()]))
    }
}

/// `true` when `f: A -> B`, `g: B -> C` satisfy `im f = ker g`.
pub fn is_exact_at(f: &ConcreteHom, g: &ConcreteHom) -> Result<bool> {
    if f.target() != g.source() {
        return Err(Error::DimensionMismatch("exactness check on non-composable maps".into()));
    }
    if !f.then(g)?.is_zero() {
        return Ok(false);
    }
    let ker = g.kernel();
    for col in ker.map.matrix().columns() {
        if f.preimage_of(&col).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ker g / im f` for `A -f-> B -g-> C` with `g f = 0`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub group: ConcreteGroup,
    /// Inclusion of `ker g` into `B`.
    pub cycles: ConcreteHom,
    /// Projection of `ker g` onto the homology.
    pub projection: ConcreteHom,
}

pub fn homology(f: &ConcreteHom, g: &ConcreteHom) -> Result<Homology> {
    if f.target() != g.source() {
        return Err(Error::DimensionMismatch("homology of non-composable maps".into()));
    }
    if !f.then(g)?.is_zero() {
        return Err(Error::DifferentialMismatch(alloc::format!("composite {f:?} then {g:?} is nonzero")));
    }
    let ker = g.kernel();
    let cols: Vec<Vec<BigInt>> = f.matrix().columns().iter().map(|c| ker.map.preimage_of(&f.target().reduce(c)).expect("im f lies in ker g")).collect();
    let into = ConcreteHom::new(f.source().clone(), ker.group.clone(), IntMatrix::from_columns(ker.group.generator_count(), &cols))?;
    let coker = into.cokernel();
    Ok(Homology { group: coker.group, cycles: ker.map, projection: coker.map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::Signed;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cyc(m: u32) -> ConcreteGroup {
        ConcreteGroup::cyclic(BigUint::from(m))
    }

    #[test]
    fn canonical_forms() {
        let g = ConcreteGroup::from_cyclic_orders(1, [2u32, 3, 4].map(BigUint::from));
        assert_eq!(g.invariant_factors(), &[BigUint::from(2u32), BigUint::from(12u32)]);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(cyc(1), ConcreteGroup::trivial());
        assert_eq!(cyc(0), ConcreteGroup::free(1));
        assert_eq!(cyc(2).direct_sum(&cyc(3)), cyc(6));
    }

    #[test]
    fn cokernel_of_multiplication_on_z() {
        let h = ConcreteHom::multiply(&ConcreteGroup::free(1), &big(5));
        assert_eq!(h.cokernel().group, cyc(5));
        assert!(h.kernel().group.is_trivial());
    }

    #[test]
    fn kernel_of_doubling_on_z6() {
        // Elements x of Z/6 with 2x = 0: {0, 3}.
        let h = ConcreteHom::multiply(&cyc(6), &big(2));
        let k = h.kernel();
        assert_eq!(k.group, cyc(2));
        // The inclusion witness sends the generator to 3.
        assert_eq!(k.map.apply(&[big(1)]), vec![big(3)]);
    }

    #[test]
    fn image_of_diag_2_3() {
        let z2 = ConcreteGroup::free(2);
        let h = ConcreteHom::new(z2.clone(), z2.clone(), IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap();
        let im = h.image();
        assert_eq!(im.group, ConcreteGroup::free(2));
        assert_eq!(im.map.matrix().determinant().abs(), big(6));
        assert_eq!(h.cokernel().group, cyc(6));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // Z/2 -> Z, 1 -> 1 is not a homomorphism.
        let e = ConcreteHom::new(cyc(2), ConcreteGroup::free(1), IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(e, Err(Error::IllDefinedMap(_))));
        let e = ConcreteHom::new(cyc(2), cyc(3), IntMatrix::from_rows(&[vec![1, 0]]));
        assert!(matches!(e, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn z_to_zn_by_two() {
        for n in 2u32..10 {
            let h = ConcreteHom::new(ConcreteGroup::free(1), cyc(n), IntMatrix::from_rows(&[vec![2]])).unwrap();
            let g = n.gcd(&2);
            assert_eq!(h.cokernel().group, cyc(g));
            assert_eq!(h.image().group, cyc(n / g));
            assert_eq!(h.kernel().group, ConcreteGroup::free(1));
        }
    }

    #[test]
    fn quotient_and_torsion_helpers() {
        let g = ConcreteGroup::from_cyclic_orders(1, [BigUint::from(8u32)]);
        assert_eq!(g.quotient_by(&BigUint::from(3u32)), cyc(3));
        assert_eq!(cyc(8).torsion_by(&BigUint::from(4u32)), cyc(4));
        assert_eq!(g.localize_away(&BigUint::from(6u32)), ConcreteGroup::free(1));
        assert_eq!(cyc(12).localize_away(&BigUint::from(2u32)), cyc(3));
    }

    #[test]
    fn exactness_of_short_sequence() {
        // 0 -> Z --2--> Z --> Z/2 -> 0
        let z = ConcreteGroup::free(1);
        let f = ConcreteHom::multiply(&z, &big(2));
        let g = ConcreteHom::new(z.clone(), cyc(2), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(is_exact_at(&f, &g).unwrap());
        let f3 = ConcreteHom::multiply(&z, &big(4));
        assert!(!is_exact_at(&f3, &g).unwrap());
    }

    #[test]
    fn subquotient_coordinates() {
        // 2Z / 6Z ≅ Z/3 inside Z.
        let num = Lattice::from_generators(1, &IntMatrix::from_rows(&[vec![2]]));
        let den = Lattice::from_generators(1, &IntMatrix::from_rows(&[vec![6]]));
        let sq = Subquotient::new(num, den).unwrap();
        assert_eq!(sq.group(), &cyc(3));
        assert!(sq.coords(&[big(3)]).is_none());
        assert_eq!(sq.coords(&[big(6)]).unwrap(), vec![big(0)]);
    }
}
