//! Finite fields F_q, q = p^k, with table-driven arithmetic.
//!
//! Elements are stored as their canonical index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 x + ...` is the reduced representative modulo the field's
//! fixed irreducible polynomial. The modulus is the lexicographically first monic
//! irreducible of degree k over F_p (ordered by this same integer encoding).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::FqPoly;
use crate::error::{Error, Result};

/// Largest supported field order (log/exp tables are O(q)).
pub const MAX_Q: u64 = 1 << 22;
const ADD_TABLE_LIMIT: u32 = 1024;

/// An element of some [`Field`], identified by its canonical index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Coset of `a` in F_q^x / (F_q^x)^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SquareClass {
    Trivial,
    NonSquare,
}

impl SquareClass {
    pub fn mul(self, other: SquareClass) -> SquareClass {
        if self == other {
            SquareClass::Trivial
        } else {
            SquareClass::NonSquare
        }
    }

    pub fn is_trivial(self) -> bool {
        self == SquareClass::Trivial
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Trivial => write!(f, "square"),
            SquareClass::NonSquare => write!(f, "non-square"),
        }
    }
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    add: Option<Vec<u32>>,
    /// Index of the primitive element used for the log/exp tables.
    generator: u32,
}

/// The finite field F_q. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// Returns `(p, k)` with `q = p^k`, or an error if q is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = smallest_prime_factor(q);
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    if r != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, k))
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Raw digit-vector arithmetic in F_p[x]/(modulus), used only while building tables.
fn raw_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus.iter().take(k).enumerate() {
            let idx = deg - k + i;
            let sub = (c * m as u64) % p as u64;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|c| c as u32).collect()
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn decode(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push(v % p);
        v /= p;
    }
    d
}

impl Field {
    /// F_q for a prime power q.
    pub fn new(q: u64) -> Result<Field> {
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q));
        }
        let (p, k) = prime_power(q)?;
        Self::with_degree(p, k)
    }

    pub fn with_degree(p: u32, k: u32) -> Result<Field> {
        let q64 = (p as u64).checked_pow(k).ok_or(Error::FieldTooLarge(u64::MAX))?;
        if q64 > MAX_Q {
            return Err(Error::FieldTooLarge(q64));
        }
        if prime_power(p as u64)? != (p, 1) {
            return Err(Error::NotPrimePower(p as u64));
        }
        if k == 1 {
            return Ok(Self::build(p, 1, vec![0, 1]));
        }
        let base = Self::build(p, 1, vec![0, 1]);
        let q = q64 as u32;
        // monic degree-k polynomials, enumerated by the integer encoding of the low coefficients
        for c in 0..q {
            let mut coeffs: Vec<Fq> = decode(c, p, k).into_iter().map(Fq).collect();
            if coeffs[0].is_zero() {
                continue;
            }
            coeffs.push(Fq::ONE);
            let f = FqPoly::from_coeffs(coeffs);
            if f.is_irreducible(&base) {
                let modulus = f.coeffs().iter().map(|c| c.0).collect();
                return Ok(Self::build(p, k, modulus));
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(k);
        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let d = decode(v, p, k);
                encode(&d.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p)
            })
            .collect();
        // primitive element search
        let order = (q - 1) as u64;
        let factors = distinct_prime_factors(order);
        let mut generator = 0;
        let mut exp = Vec::new();
        if q == 2 {
            generator = 1;
            exp = vec![1];
        } else {
            for cand in 2..q {
                let d = decode(cand, p, k);
                let mut table = Vec::with_capacity(order as usize);
                let mut cur = decode(1, p, k);
                for _ in 0..order {
                    table.push(encode(&cur, p));
                    cur = raw_mul(&cur, &d, &modulus, p);
                }
                if factors.iter().all(|&r| table[(order / r) as usize] != 1) {
                    generator = cand;
                    exp = table;
                    break;
                }
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let mut exp2 = exp.clone();
        exp2.extend_from_slice(&exp);
        let mut inv = vec![0u32; q as usize];
        for v in 1..q {
            let l = log[v as usize] as u64;
            inv[v as usize] = exp[((order - l) % order) as usize];
        }
        let add = if k > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = decode(a, p, k);
                for b in 0..q {
                    let db = decode(b, p, k);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = encode(&s, p);
                }
            }
            Some(t)
        } else {
            None
        };
        Field(Arc::new(FieldInner { p, k, q, modulus, neg, inv, log, exp: exp2, add, generator }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn is_odd(&self) -> bool {
        self.0.p != 2
    }
    /// Coefficients (low to high) of the defining polynomial over F_p.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Human-readable modulus, e.g. `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        let terms: Vec<String> = self
            .0
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        terms.join(" + ")
    }
    pub fn primitive_element(&self) -> Fq {
        Fq(self.0.generator)
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }
    pub fn one(&self) -> Fq {
        Fq::ONE
    }
    pub fn elem(&self, index: u32) -> Fq {
        assert!(index < self.0.q, "element index out of range");
        Fq(index)
    }
    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.0.p as i64) as u32)
    }
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }
    pub fn digits(&self, a: Fq) -> Vec<u32> {
        decode(a.0, self.0.p, self.0.k)
    }
    pub fn from_digits(&self, d: &[u32]) -> Result<Fq> {
        if d.len() != self.0.k as usize || d.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!("bad digit vector {d:?}")));
        }
        Ok(Fq(encode(d, self.0.p)))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let f = &*self.0;
        if f.k == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= f.p { s - f.p } else { s });
        }
        if let Some(t) = &f.add {
            return Fq(t[(a.0 * f.q + b.0) as usize]);
        }
        let da = decode(a.0, f.p, f.k);
        let db = decode(b.0, f.p, f.k);
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % f.p).collect();
        Fq(encode(&s, f.p))
    }
    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let f = &*self.0;
        if f.k == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % f.p as u64) as u32);
        }
        Fq(f.exp[(f.log[a.0 as usize] + f.log[b.0 as usize]) as usize])
    }
    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(!a.is_zero(), "inverse of zero");
        Fq(self.0.inv[a.0 as usize])
    }
    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let order = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Fq(self.0.exp[((l * (e % order)) % order) as usize])
    }
    /// Discrete log to the base of [`Field::primitive_element`].
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn is_square(&self, a: Fq) -> bool {
        if a.is_zero() || !self.is_odd() {
            return true;
        }
        self.0.log[a.0 as usize] % 2 == 0
    }

    /// Square class via the Euler criterion a^((q-1)/2) = 1.
    pub fn square_class(&self, a: Fq) -> Result<SquareClass> {
        if a.is_zero() {
            return Err(Error::ZeroInSquareClass);
        }
        if !self.is_odd() {
            return Ok(SquareClass::Trivial);
        }
        let e = (self.0.q as u64 - 1) / 2;
        Ok(if self.pow(a, e) == Fq::ONE { SquareClass::Trivial } else { SquareClass::NonSquare })
    }

    /// A fixed non-square (odd q only).
    pub fn non_square(&self) -> Option<Fq> {
        self.is_odd().then(|| self.primitive_element())
    }

    /// Square root, if one exists.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return Some(a);
        }
        let order = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        if !self.is_odd() {
            // squaring is a bijection; halve the log modulo the odd group order
            let half = (l as u64 * ((order as u64 + 1) / 2)) % order as u64;
            return Some(Fq(self.0.exp[half as usize]));
        }
        (l % 2 == 0).then(|| Fq(self.0.exp[(l / 2) as usize]))
    }

    /// Canonical text encoding of an element: plain integer for prime fields,
    /// comma-joined base-p digits (constant term first) otherwise.
    pub fn format_elem(&self, a: Fq) -> String {
        if self.0.k == 1 {
            a.0.to_string()
        } else {
            self.digits(a).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        if self.0.k == 1 {
            let v: i64 = s.parse().map_err(|_| Error::Parse(format!("bad element {s:?}")))?;
            return Ok(self.from_int(v));
        }
        let digits: std::result::Result<Vec<u32>, _> = s.split(',').map(|d| d.trim().parse::<u32>()).collect();
        let digits = digits.map_err(|_| Error::Parse(format!("bad element {s:?}")))?;
        self.from_digits(&digits)
    }
}
