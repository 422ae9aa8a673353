//! Bockstein and power operations on `H^{**}(k, Z/p)[a, b, u, v] / (a², b²)`
//! and the torsion classes they produce.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::couple::Bidegree;
use crate::gradedalg::{apply_linear, Generator, Monomial, RingElement, RingPresentation};
use crate::error::{Error, Result};

const LAMBDA: usize = 0;
const TAU: usize = 1;
const A: usize = 2;
const U: usize = 3;
const B: usize = 4;
const V: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassKind {
    Z,
    Y,
    Upsilon,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Z => "z",
            ClassKind::Y => "y",
            ClassKind::Upsilon => "upsilon",
        })
    }
}

impl core::str::FromStr for ClassKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(ClassKind::Z),
            "y" => Ok(ClassKind::Y),
            "upsilon" | "υ" => Ok(ClassKind::Upsilon),
            _ => Err(Error::Parse(format!("unknown class kind {s}"))),
        }
    }
}

/// Evidence that a class is nonzero and not killed by powers of `τ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub nonzero: bool,
    /// `τ^m x ≠ 0` checked for every `m` up to this bound.
    pub tau_checked_to: u32,
    pub tau_free: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.nonzero && self.tau_free
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionClass {
    pub kind: ClassKind,
    pub prime: u32,
    pub k: u32,
    pub element: RingElement,
    pub degree: Bidegree,
    pub certificate: Certificate,
}

/// `Z/p[λ, τ][a, b, u, v] / (a², b²)` with `λ` a nonzero scalar.
#[derive(Clone, Debug)]
pub struct CpMupRing {
    p: u32,
    ring: RingPresentation,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl CpMupRing {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidInstance(format!("{p} is not an odd prime")));
        }
        let ring = RingPresentation::new(
            p,
            alloc::vec![
                Generator::scalar("λ", 0, 0),
                Generator::scalar("τ", 1, 0),
                Generator::new("a", 0, 1).exterior(),
                Generator::new("u", 0, 2),
                Generator::new("b", 0, 1).exterior(),
                Generator::new("v", 0, 2),
            ],
        )?;
        Ok(CpMupRing { p, ring })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn element(&self, c: i64, powers: &[(&str, u32)]) -> Result<RingElement> {
        Ok(self.ring.term(c, self.ring.monomial(powers)?))
    }

    pub fn show(&self, x: &RingElement) -> String {
        self.ring.show(x)
    }

    fn single(&self, i: usize, e: u32) -> RingElement {
        let mut m = self.ring.unit_monomial();
        m.0[i] = e;
        self.ring.term(1, m)
    }

    /// `β` on a monomial, as a graded derivation with `β(a) = u`, `β(b) = v`.
    fn bockstein_monomial(&self, m: &Monomial) -> RingElement {
        let mut out = RingElement::zero();
        for (i, image) in [(A, U), (B, V)] {
            if m.exponent(i) == 0 {
                continue;
            }
            let mut prefix = self.ring.unit_monomial();
            let mut suffix = m.clone();
            for j in 0..i {
                prefix.0[j] = m.0[j];
                suffix.0[j] = 0;
            }
            suffix.0[i] = 0;
            let prefix_deg = self.ring.degree(&prefix).p;
            let mut t = self.ring.mul(&self.ring.term(1, prefix), &self.single(image, 1));
            t = self.ring.mul(&t, &self.ring.term(1, suffix));
            if prefix_deg.rem_euclid(2) == 1 {
                t = self.ring.scale(&t, -1);
            }
            out = self.ring.add(&out, &t);
        }
        out
    }

    pub fn bockstein(&self, x: &RingElement) -> RingElement {
        apply_linear(&self.ring, x, &|m| self.bockstein_monomial(m))
    }

    fn total_power_monomial(&self, m: &Monomial) -> RingElement {
        let p = self.p;
        let mut out = self.ring.one();
        for (i, e) in m.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let image = match i {
                U | V => self.ring.add(&self.single(i, 1), &self.ring.mul(&self.single(TAU, p - 1), &self.single(i, p))),
                _ => self.single(i, 1),
            };
            out = self.ring.mul(&out, &self.ring.pow(&image, *e as u64));
        }
        out
    }

    /// The multiplicative total operation `P = Σ P^i`.
    pub fn total_power(&self, x: &RingElement) -> RingElement {
        apply_linear(&self.ring, x, &|m| self.total_power_monomial(m))
    }

    /// `P^i(x)`: the part of `P(x)` raised by `(i(p-1))[2i(p-1)]`.
    pub fn power_component(&self, x: &RingElement, i: u64) -> Result<RingElement> {
        let Some(d) = self.ring.homogeneous_degree(x)? else {
            return Ok(RingElement::zero());
        };
        let shift = i as i64 * (self.p as i64 - 1);
        let want = Bidegree::new(d.q + shift, d.p + 2 * shift);
        let px = self.total_power(x);
        let mut out = RingElement::zero();
        for (m, c) in px.terms() {
            if self.ring.degree(m) == want {
                out = self.ring.add(&out, &self.ring.term(c.clone(), m.clone()));
            }
        }
        Ok(out)
    }

    /// Sets the named generators to zero.
    pub fn restrict(&self, x: &RingElement, killed: &[&str]) -> Result<RingElement> {
        let idx: Vec<usize> = killed.iter().map(|n| self.ring.index_of(n).ok_or_else(|| Error::UnboundSymbol((*n).into()))).collect::<Result<_>>()?;
        let mut out = RingElement::zero();
        for (m, c) in x.terms() {
            if idx.iter().all(|&i| m.exponent(i) == 0) {
                out = self.ring.add(&out, &self.ring.term(c.clone(), m.clone()));
            }
        }
        Ok(out)
    }

    /// The seed `λτab`.
    pub fn seed(&self) -> RingElement {
        let mut m = self.ring.unit_monomial();
        m.0[LAMBDA] = 1;
        m.0[TAU] = 1;
        m.0[A] = 1;
        m.0[B] = 1;
        self.ring.term(1, m)
    }

    /// `τ^m x ≠ 0` for all `m ≤ bound`.
    pub fn certify(&self, x: &RingElement, bound: u32) -> Certificate {
        let nonzero = !x.is_zero();
        let tau_free = nonzero && (0..=bound).all(|m| !self.ring.mul(&self.single(TAU, m), x).is_zero());
        Certificate { nonzero, tau_checked_to: bound, tau_free }
    }

    /// Image of `z_{p,k} = P^{p^k} ⋯ P^p P^1 β(λτab)`, of `y = β z`, or of
    /// `υ = τ β z`, refusing classes above `max_degree`.
    pub fn torsion_class_image(&self, kind: ClassKind, k: u32, max_degree: i64) -> Result<TorsionClass> {
        let p = self.p as i64;
        let top = p.checked_pow(k + 1).ok_or_else(|| Error::OutOfWindow(format!("p^{} overflows", k + 1)))?;
        let degree = 2 * top + if kind == ClassKind::Z { 1 } else { 2 };
        if degree > max_degree {
            return Err(Error::OutOfWindow(format!("{kind}_{{{p},{k}}} lives in degree {degree}, above {max_degree}")));
        }
        let mut z = self.bockstein(&self.seed());
        let mut step = 1u64;
        for _ in 0..=k {
            z = self.power_component(&z, step)?;
            step *= self.p as u64;
        }
        let element = match kind {
            ClassKind::Z => z,
            ClassKind::Y => self.bockstein(&z),
            ClassKind::Upsilon => self.ring.mul(&self.single(TAU, 1), &self.bockstein(&z)),
        };
        let degree = self.ring.homogeneous_degree(&element)?.ok_or_else(|| Error::Inconsistent(format!("{kind}_{{{p},{k}}} vanished")))?;
        let certificate = self.certify(&element, top as u32);
        Ok(TorsionClass { kind, prime: self.p, k, element, degree, certificate })
    }

    /// `λτ^N(u^N b − a v^N)`, `λτ^N(u^N v − u v^N)` or `τ` times the latter,
    /// with `N = p^{k+1}`.
    pub fn closed_form(&self, kind: ClassKind, k: u32) -> RingElement {
        let n = self.p.pow(k + 1);
        let r = &self.ring;
        let lt = r.mul(&self.single(LAMBDA, 1), &self.single(TAU, n));
        let diff = |x: RingElement, y: RingElement| r.mul(&lt, &r.sub(&x, &y));
        match kind {
            ClassKind::Z => diff(r.mul(&self.single(U, n), &self.single(B, 1)), r.mul(&self.single(A, 1), &self.single(V, n))),
            ClassKind::Y => diff(r.mul(&self.single(U, n), &self.single(V, 1)), r.mul(&self.single(U, 1), &self.single(V, n))),
            ClassKind::Upsilon => r.mul(&self.single(TAU, 1), &self.closed_form(ClassKind::Y, k)),
        }
    }
}
