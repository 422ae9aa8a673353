use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abgroup::GroupExpr;
use crate::couple::Bidegree;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: Bidegree,
    /// Additive order of the generator; every monomial containing it has
    /// coefficients modulo this.
    pub order: Option<BigUint>,
    /// Coefficient-ring symbol (such as `τ` or `λ`): not part of a basis.
    pub scalar: bool,
    /// Declared to square to zero.
    pub exterior: bool,
}

impl Generator {
    pub fn new(name: &str, q: i64, p: i64) -> Self {
        Generator { name: name.into(), degree: Bidegree::new(q, p), order: None, scalar: false, exterior: false }
    }

    pub fn scalar(name: &str, q: i64, p: i64) -> Self {
        Generator { scalar: true, ..Generator::new(name, q, p) }
    }

    pub fn exterior(mut self) -> Self {
        self.exterior = true;
        self
    }

    pub fn of_order(mut self, n: impl Into<BigUint>) -> Self {
        self.order = Some(n.into());
        self
    }

    fn is_odd(&self) -> bool {
        self.degree.p.rem_euclid(2) == 1
    }
}

/// Exponent vector indexed like the generators of the presentation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

/// Finite sum of integer multiples of monomials, kept in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A graded-commutative ring: polynomial on even generators, with odd
/// generators anticommuting. The sign of a swap depends only on the
/// topological degrees `p`. Over `Z` the square of an odd generator is
/// 2-torsion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingPresentation {
    /// `0` for `Z`, otherwise `Z/m`.
    modulus: BigUint,
    generators: Vec<Generator>,
}

impl RingPresentation {
    pub fn new(modulus: impl Into<BigUint>, generators: Vec<Generator>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !g.scalar && g.degree.p <= 0 {
                return Err(Error::InvalidInstance(format!("basis generator {} needs positive degree", g.name)));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidInstance(format!("generator {} declared twice", g.name)));
            }
        }
        Ok(RingPresentation { modulus: modulus.into(), generators })
    }

    /// `Z[c_1, ..., c_n]` with `c_i` in `(i)[2i]`.
    pub fn chern(n: usize) -> Self {
        let gens = (1..=n as i64).map(|i| Generator::new(&format!("c{i}"), i, 2 * i)).collect();
        RingPresentation::new(0u32, gens).expect("valid")
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn unit_monomial(&self) -> Monomial {
        Monomial(alloc::vec![0; self.generators.len()])
    }

    pub fn monomial(&self, powers: &[(&str, u32)]) -> Result<Monomial> {
        let mut m = self.unit_monomial();
        for (name, e) in powers {
            let i = self.index_of(name).ok_or_else(|| Error::UnboundSymbol((*name).to_string()))?;
            m.0[i] += e;
        }
        Ok(m)
    }

    pub fn one(&self) -> RingElement {
        self.term(BigInt::one(), self.unit_monomial())
    }

    pub fn generator(&self, name: &str) -> Result<RingElement> {
        Ok(self.term(BigInt::one(), self.monomial(&[(name, 1)])?))
    }

    /// `c · m`, reduced.
    pub fn term(&self, c: impl Into<BigInt>, m: Monomial) -> RingElement {
        let mut x = RingElement::zero();
        self.add_term(&mut x, m, c.into());
        x
    }

    pub fn degree(&self, m: &Monomial) -> Bidegree {
        let mut d = Bidegree::new(0, 0);
        for (g, e) in self.generators.iter().zip(&m.0) {
            d.q += g.degree.q * *e as i64;
            d.p += g.degree.p * *e as i64;
        }
        d
    }

    /// The bidegree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, x: &RingElement) -> Result<Option<Bidegree>> {
        let mut degs = x.terms.keys().map(|m| self.degree(m));
        let Some(first) = degs.next() else { return Ok(None) };
        if degs.any(|d| d != first) {
            return Err(Error::NonHomogeneous);
        }
        Ok(Some(first))
    }

    /// Modulus for the coefficient of `m`; `0` means integral.
    pub fn coefficient_modulus(&self, m: &Monomial) -> BigUint {
        let mut md = self.modulus.clone();
        for (g, e) in self.generators.iter().zip(&m.0) {
            if *e == 0 {
                continue;
            }
            if let Some(o) = &g.order {
                md = md.gcd(o);
            }
            if g.is_odd() && *e >= 2 {
                md = md.gcd(&BigUint::from(2u32));
            }
        }
        md
    }

    fn vanishes(&self, m: &Monomial) -> bool {
        self.generators.iter().zip(&m.0).any(|(g, e)| g.exterior && *e >= 2)
    }

    fn add_term(&self, x: &mut RingElement, m: Monomial, c: BigInt) {
        if self.vanishes(&m) {
            return;
        }
        let md = self.coefficient_modulus(&m);
        let entry = x.terms.entry(m).or_default();
        *entry += c;
        if !md.is_zero() {
            *entry = entry.mod_floor(&BigInt::from(md));
        }
        if entry.is_zero() {
            x.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let mut out = x.clone();
        for (m, c) in &y.terms {
            self.add_term(&mut out, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, x: &RingElement, c: impl Into<BigInt>) -> RingElement {
        let c = c.into();
        let mut out = RingElement::zero();
        for (m, v) in &x.terms {
            self.add_term(&mut out, m.clone(), v * &c);
        }
        out
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add(x, &self.scale(y, -1))
    }

    /// Sign of `a · b` after sorting generators into index order.
    fn swap_sign(&self, a: &Monomial, b: &Monomial) -> bool {
        let mut odd = false;
        for (j, gj) in self.generators.iter().enumerate() {
            let dj = gj.degree.p * b.exponent(j) as i64;
            if dj.rem_euclid(2) == 0 {
                continue;
            }
            for (i, gi) in self.generators.iter().enumerate().skip(j + 1) {
                if (gi.degree.p * a.exponent(i) as i64).rem_euclid(2) == 1 {
                    odd = !odd;
                }
            }
        }
        odd
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> (bool, Monomial) {
        let m = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        (self.swap_sign(a, b), m)
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let (neg, m) = self.mul_monomials(a, b);
                let c = ca * cb;
                self.add_term(&mut out, m, if neg { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, x: &RingElement, mut e: u64) -> RingElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Basis monomials in bidegree `(p, q)`, scalars excluded.
    pub fn basis(&self, p: i64, q: i64) -> Vec<Monomial> {
        let idx: Vec<usize> = (0..self.generators.len()).filter(|&i| !self.generators[i].scalar).collect();
        let mut out = Vec::new();
        let mut cur = self.unit_monomial();
        self.enumerate(&idx, 0, p, Some(q), &mut cur, &mut out);
        out.sort();
        out
    }

    /// Basis monomials of topological degree `p`, any weight.
    pub fn basis_in_degree(&self, p: i64) -> Vec<Monomial> {
        let idx: Vec<usize> = (0..self.generators.len()).filter(|&i| !self.generators[i].scalar).collect();
        let mut out = Vec::new();
        let mut cur = self.unit_monomial();
        self.enumerate(&idx, 0, p, None, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, idx: &[usize], k: usize, p: i64, q: Option<i64>, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k == idx.len() {
            if p == 0 && q.is_none_or(|q| q == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let g = &self.generators[idx[k]];
        let max = if g.exterior { 1 } else { (p / g.degree.p).max(0) as u32 };
        for e in 0..=max {
            let (rp, rq) = (p - g.degree.p * e as i64, q.map(|q| q - g.degree.q * e as i64));
            if rp < 0 {
                break;
            }
            cur.0[idx[k]] = e;
            self.enumerate(idx, k + 1, rp, rq, cur, out);
        }
        cur.0[idx[k]] = 0;
    }

    /// Summands `H^{p-|m|, q-w(m)}(k) · m` of the module over a coefficient
    /// ring given degree-wise; zero summands are dropped.
    pub fn module_basis(&self, p: i64, q: i64, coefficients: impl Fn(i64, i64) -> GroupExpr) -> Vec<(Monomial, GroupExpr)> {
        let mut out = Vec::new();
        for dp in 0..=p.max(0) {
            for m in self.basis_in_degree(dp) {
                let d = self.degree(&m);
                let c = coefficients(p - d.p, q - d.q).normalized();
                if !c.is_zero() {
                    out.push((m, c));
                }
            }
        }
        out.sort_by(|a, b| self.degree(&a.0).cmp(&self.degree(&b.0)).then(a.0.cmp(&b.0)));
        out
    }

    pub fn show_monomial(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (g, e) in self.generators.iter().zip(&m.0) {
            match e {
                0 => {}
                1 => s.push_str(&g.name),
                e => s.push_str(&format!("{}^{}", g.name, e)),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Terms listed with even generators leading, largest exponents first;
    /// residues are shown in the symmetric range, e.g. `u^3b - av^3`.
    pub fn show(&self, x: &RingElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let order: Vec<usize> = (0..self.generators.len()).filter(|&i| !self.generators[i].is_odd()).chain((0..self.generators.len()).filter(|&i| self.generators[i].is_odd())).collect();
        let mut terms: Vec<(&Monomial, BigInt)> = x.terms.iter().map(|(m, c)| (m, self.symmetric(m, c))).collect();
        terms.sort_by(|(a, _), (b, _)| {
            let ka: Vec<u32> = order.iter().map(|&i| a.exponent(i)).collect();
            let kb: Vec<u32> = order.iter().map(|&i| b.exponent(i)).collect();
            kb.cmp(&ka)
        });
        let mut s = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let mono = self.show_monomial(m);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() || mono == "1" {
                s.push_str(&mag.to_string());
                if mono == "1" {
                    continue;
                }
            }
            s.push_str(&mono);
        }
        s
    }

    fn symmetric(&self, m: &Monomial, c: &BigInt) -> BigInt {
        let md = BigInt::from(self.coefficient_modulus(m));
        if !md.is_zero() && c * 2 > md {
            c - md
        } else {
            c.clone()
        }
    }
}

/// `p_i q_j = q_i p_j` for all pairs.
pub fn collinear_check(weights: &[Bidegree]) -> bool {
    weights.iter().all(|a| weights.iter().all(|b| a.p * b.q == a.q * b.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn exterior_ring() -> RingPresentation {
        RingPresentation::new(3u32, vec![Generator::new("a", 0, 1).exterior(), Generator::new("b", 0, 1).exterior(), Generator::new("u", 0, 2)]).unwrap()
    }

    #[test]
    fn odd_signs() {
        let r = exterior_ring();
        let a = r.generator("a").unwrap();
        let b = r.generator("b").unwrap();
        assert!(r.mul(&a, &a).is_zero());
        let ab = r.mul(&a, &b);
        assert_eq!(r.mul(&b, &a), r.scale(&ab, -1));
        assert_eq!(r.show(&ab), "ab");
    }

    #[test]
    fn chern_square() {
        let r = RingPresentation::chern(2);
        let s = r.add(&r.generator("c1").unwrap(), &r.generator("c2").unwrap());
        let sq = r.mul(&s, &s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coefficient(&r.monomial(&[("c1", 1), ("c2", 1)]).unwrap()), BigInt::from(2));
        assert_eq!(r.basis(4, 2).len(), 2);
        assert_eq!(r.basis(2, 1), vec![r.monomial(&[("c1", 1)]).unwrap()]);
    }

    #[test]
    fn odd_square_is_two_torsion_over_z() {
        let r = RingPresentation::new(0u32, vec![Generator::new("x", 1, 3).of_order(6u32)]).unwrap();
        let x = r.generator("x").unwrap();
        assert_eq!(r.show(&r.mul(&x, &x)), "x^2");
        assert!(r.scale(&r.mul(&x, &x), 2).is_zero());
        assert!(r.scale(&x, 6).is_zero());
    }

    #[test]
    fn collinearity() {
        let ws: Vec<Bidegree> = (0..=5).map(|j| Bidegree::new(j, 2 * j)).collect();
        assert!(collinear_check(&ws));
        assert!(!collinear_check(&[Bidegree::new(0, 0), Bidegree::new(1, 2), Bidegree::new(1, 3)]));
        assert!(collinear_check(&[Bidegree::new(0, 0)]));
    }
}
