//! Small finite fields GF(p^e) with q = p^e ≤ 256, backed by full lookup tables.
//!
//! Elements are stored in their canonical integer encoding: the base-p digits
//! of the integer are the polynomial coefficients (lowest degree first), so for
//! a prime field the encoding is just the residue.

use std::fmt;
use std::sync::Arc;

use super::AlgebraError;

/// Largest supported field order.
pub const MAX_ORDER: usize = 256;

/// An element of some [`FieldSpec`], in canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElem(u8);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw encoding without checking it against any field.
    #[inline]
    pub const fn from_raw(v: u8) -> Self {
        FieldElem(v)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

struct Tables {
    p: u32,
    e: u32,
    /// Reduction polynomial, lowest coefficient first, monic, length e + 1.
    /// For prime fields this is `[0, 1]` (the polynomial x) and is never used.
    poly: Vec<u32>,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A finite field GF(p^e). Cheap to clone; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.poly == other.0.poly)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{}; poly={:?})", self.0.p, self.0.e, self.poly_high_first())
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

/// Default reduction polynomials (Conway polynomials), lowest coefficient first.
fn default_poly(p: u32, e: u32) -> Option<&'static [u32]> {
    let poly: &'static [u32] = match (p, e) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (3, 5) => &[1, 2, 0, 0, 0, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 2) => &[3, 6, 1],
        (11, 2) => &[2, 7, 1],
        (13, 2) => &[2, 12, 1],
        _ => return None,
    };
    Some(poly)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as usize {
        return None;
    }
    let q = q as u32;
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

// Polynomials over GF(p), lowest coefficient first, trimmed of trailing zeros.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for low in 0..count {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_mod(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut v: usize, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as usize) as u32);
        v /= p as usize;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> usize {
    coeffs.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

impl FieldSpec {
    /// The field of order `q`, using the built-in reduction polynomial when q is
    /// not prime.
    pub fn new(q: usize) -> Result<Self, AlgebraError> {
        let (p, e) = prime_power(q).ok_or(AlgebraError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(AlgebraError::FieldTooLarge(q));
        }
        if e == 1 {
            return Self::build(p, 1, vec![0, 1]);
        }
        let poly = default_poly(p, e).ok_or(AlgebraError::NoDefaultPolynomial(q))?;
        Self::build(p, e, poly.to_vec())
    }

    /// GF(p) for a prime p.
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Self::new(p as usize)
    }

    /// GF(p^e) with an explicit monic reduction polynomial, lowest coefficient
    /// first (`poly.len() == e + 1`).
    pub fn with_poly(p: u32, e: u32, poly: &[u32]) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if e == 0 {
            return Err(AlgebraError::BadPolynomial("extension degree must be at least 1".into()));
        }
        let q =
            (p as usize).checked_pow(e).filter(|&q| q <= MAX_ORDER).ok_or(AlgebraError::FieldTooLarge(usize::MAX))?;
        if e == 1 {
            return Self::new(q);
        }
        if poly.len() != e as usize + 1 {
            return Err(AlgebraError::BadPolynomial(format!("expected {} coefficients, got {}", e + 1, poly.len())));
        }
        if poly.iter().any(|&c| c >= p) {
            return Err(AlgebraError::BadPolynomial(format!("coefficient out of range for p = {p}")));
        }
        if poly[e as usize] != 1 {
            return Err(AlgebraError::BadPolynomial("polynomial is not monic".into()));
        }
        Self::build(p, e, poly.to_vec())
    }

    fn build(p: u32, e: u32, poly: Vec<u32>) -> Result<Self, AlgebraError> {
        let q = (p as usize).pow(e);
        if e > 1 && !is_irreducible(&poly, p) {
            return Err(AlgebraError::BadPolynomial(format!("{poly:?} is reducible over GF({p})")));
        }
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        let elems: Vec<Vec<u32>> = (0..q).map(|v| digits(v, p, e as usize)).collect();
        for a in 0..q {
            let na: Vec<u32> = elems[a].iter().map(|&c| (p - c) % p).collect();
            neg[a] = undigits(&na, p) as u8;
            for b in 0..q {
                let s: Vec<u32> = elems[a].iter().zip(&elems[b]).map(|(&x, &y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as u8;
                let prod = if e == 1 {
                    vec![(a * b % q) as u32]
                } else {
                    poly_mod(&poly_mul(&trim(elems[a].clone()), &trim(elems[b].clone()), p), &poly, p)
                };
                mul[a * q + b] = undigits(&prod, p) as u8;
            }
        }
        for a in 1..q {
            let b = (1..q).find(|&b| mul[a * q + b] == 1).expect("nonzero element of a field has an inverse");
            inv[a] = b as u8;
        }
        Ok(FieldSpec(Arc::new(Tables { p, e, poly, q, add, mul, neg, inv })))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Reduction polynomial, highest coefficient first (`c_e ... c_0`).
    pub fn poly_high_first(&self) -> Vec<u32> {
        self.0.poly.iter().rev().copied().collect()
    }

    /// Checks an encoding and wraps it.
    pub fn elem(&self, v: u32) -> Result<FieldElem, AlgebraError> {
        if (v as usize) < self.0.q {
            Ok(FieldElem(v as u8))
        } else {
            Err(AlgebraError::NotInField { value: v, order: self.0.q })
        }
    }

    #[inline]
    pub fn contains(&self, a: FieldElem) -> bool {
        a.index() < self.0.q
    }

    /// All elements in canonical encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(|v| FieldElem(v as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.0.add[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.0.mul[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.0.neg[a.index()])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (!a.is_zero()).then(|| FieldElem(self.0.inv[a.index()]))
    }

    pub fn pow(&self, a: FieldElem, exp: u32) -> FieldElem {
        (0..exp).fold(FieldElem::ONE, |acc, _| self.mul(acc, a))
    }
}

/// Checked single field operation. `b` is required for the binary operations
/// and ignored for `Inv` and `Neg`.
pub fn field_arith(
    field: &FieldSpec,
    op: FieldOp,
    a: FieldElem,
    b: Option<FieldElem>,
) -> Result<FieldElem, AlgebraError> {
    let check = |x: FieldElem| {
        if field.contains(x) {
            Ok(x)
        } else {
            Err(AlgebraError::NotInField { value: x.value() as u32, order: field.order() })
        }
    };
    let a = check(a)?;
    let rhs = || b.ok_or(AlgebraError::MissingOperand).and_then(check);
    Ok(match op {
        FieldOp::Add => field.add(a, rhs()?),
        FieldOp::Sub => field.sub(a, rhs()?),
        FieldOp::Mul => field.mul(a, rhs()?),
        FieldOp::Neg => field.neg(a),
        FieldOp::Inv => field.inv(a).ok_or(AlgebraError::ZeroInverse)?,
    })
}
