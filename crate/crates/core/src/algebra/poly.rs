//! Dense univariate polynomials over F_q and their factorization.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{distinct_prime_factors, Field, Fq};
use crate::error::{Error, Result};

/// Seed for the equal-degree splitting; factorization output does not depend on it.
const EDF_SEED: u64 = 0x5eed_0f_f00d;

/// Polynomial with coefficients listed from the constant term upwards.
/// Trailing zeros are never stored, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqPoly {
    coeffs: Vec<Fq>,
}

impl FqPoly {
    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> FqPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    /// Builds a polynomial over the prime subfield from integer coefficients.
    pub fn from_ints(field: &Field, ints: &[i64]) -> FqPoly {
        FqPoly::from_coeffs(ints.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn zero() -> FqPoly {
        FqPoly { coeffs: Vec::new() }
    }
    pub fn one() -> FqPoly {
        FqPoly { coeffs: vec![Fq::ONE] }
    }
    pub fn constant(c: Fq) -> FqPoly {
        FqPoly::from_coeffs(vec![c])
    }
    pub fn x() -> FqPoly {
        FqPoly { coeffs: vec![Fq::ZERO, Fq::ONE] }
    }
    /// `t - a`.
    pub fn linear(field: &Field, a: Fq) -> FqPoly {
        FqPoly::from_coeffs(vec![field.neg(a), Fq::ONE])
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fq::ONE
    }
    /// Degree; the zero polynomial reports 0 (check [`FqPoly::is_zero`] where it matters).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }
    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    pub fn add(&self, other: &FqPoly, f: &Field) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        FqPoly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }
    pub fn sub(&self, other: &FqPoly, f: &Field) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        FqPoly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }
    pub fn scale(&self, c: Fq, f: &Field) -> FqPoly {
        FqPoly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }
    pub fn mul(&self, other: &FqPoly, f: &Field) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FqPoly::from_coeffs(out)
    }
    pub fn pow(&self, e: usize, f: &Field) -> FqPoly {
        let mut acc = FqPoly::one();
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    pub fn monic(&self, f: &Field) -> FqPoly {
        if self.is_zero() {
            return FqPoly::zero();
        }
        self.scale(f.inv(self.leading()), f)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &FqPoly, f: &Field) -> (FqPoly, FqPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (FqPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = d.coeffs.len();
        let inv_lead = f.inv(d.leading());
        let mut quot = vec![Fq::ZERO; rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dl - 1], inv_lead);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dc));
            }
        }
        (FqPoly::from_coeffs(quot), FqPoly::from_coeffs(rem))
    }
    pub fn rem(&self, d: &FqPoly, f: &Field) -> FqPoly {
        self.div_rem(d, f).1
    }
    /// Exact quotient; debug-asserts divisibility.
    pub fn div_exact(&self, d: &FqPoly, f: &Field) -> FqPoly {
        let (q, r) = self.div_rem(d, f);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }
    pub fn divides(&self, other: &FqPoly, f: &Field) -> bool {
        other.rem(self, f).is_zero()
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &FqPoly, f: &Field) -> FqPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: &Field) -> FqPoly {
        FqPoly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect(),
        )
    }

    pub fn eval(&self, x: Fq, f: &Field) -> Fq {
        self.coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m` for a (possibly huge) exponent given as u128.
    pub fn pow_mod(&self, mut e: u128, m: &FqPoly, f: &Field) -> FqPoly {
        let mut base = self.rem(m, f);
        let mut acc = FqPoly::one().rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            base = base.mul(&base, f).rem(m, f);
            e >>= 1;
        }
        acc
    }

    /// Monic reciprocal f* = f(0)^{-1} t^deg f(1/t): the roots are inverted.
    pub fn reciprocal(&self, f: &Field) -> Result<FqPoly> {
        if self.coeff(0).is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let rev: Vec<Fq> = self.coeffs.iter().rev().copied().collect();
        Ok(FqPoly::from_coeffs(rev).monic(f))
    }

    pub fn is_self_reciprocal(&self, f: &Field) -> bool {
        self.reciprocal(f).map(|r| &r == self).unwrap_or(false)
    }

    /// Monic polynomial whose roots are `-1/a` for the roots `a` of `self`.
    pub fn twist(&self, f: &Field) -> Result<FqPoly> {
        if !f.is_odd() {
            return Err(Error::OddCharacteristicRequired);
        }
        if !self.is_irreducible(f) {
            return Err(Error::NotIrreducible);
        }
        self.twist_unchecked(f)
    }

    /// Twist without the irreducibility check; valid for any f with f(0) != 0.
    pub(crate) fn twist_unchecked(&self, f: &Field) -> Result<FqPoly> {
        // f(-t) has roots -a; its reciprocal has roots -1/a
        let neg = FqPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { f.neg(c) } else { c })
                .collect(),
        );
        neg.reciprocal(f)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &Field) -> bool {
        if self.is_zero() || self.degree() == 0 {
            return false;
        }
        let m = self.monic(f);
        let n = m.degree();
        if n == 1 {
            return true;
        }
        let q = f.q() as u128;
        let x = FqPoly::x();
        // x^{q^i} mod m for i = 1..n
        let mut powers = Vec::with_capacity(n);
        let mut cur = x.clone();
        for _ in 0..n {
            cur = cur.pow_mod(q, &m, f);
            powers.push(cur.clone());
        }
        if powers[n - 1] != x.rem(&m, f) {
            return false;
        }
        for r in distinct_prime_factors(n as u64) {
            let i = n / r as usize;
            let g = powers[i - 1].sub(&x, f).gcd(&m, f);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Factorization of a monic polynomial of positive degree into monic
    /// irreducibles with multiplicities, sorted by [`FqPoly::total_cmp`].
    pub fn factorize(&self, f: &Field) -> Vec<(FqPoly, usize)> {
        assert!(!self.is_zero() && self.degree() >= 1, "factorize needs a non-constant polynomial");
        let m = self.monic(f);
        let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
        let mut out: Vec<(FqPoly, usize)> = Vec::new();
        for (sqf, mult) in squarefree(&m, f) {
            for (g, d) in distinct_degree(&sqf, f) {
                for irr in equal_degree(&g, d, f, &mut rng) {
                    out.push((irr, mult));
                }
            }
        }
        // merge equal factors (squarefree parts are coprime, so this only sorts)
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut merged: Vec<(FqPoly, usize)> = Vec::new();
        for (p, e) in out {
            match merged.last_mut() {
                Some((lp, le)) if *lp == p => *le += e,
                _ => merged.push((p, e)),
            }
        }
        merged
    }

    /// Total order used for deterministic tie-breaking: degree first, then
    /// coefficients from the constant term upwards.
    pub fn total_cmp(&self, other: &FqPoly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    pub fn display(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format_elem(c);
            let cs = if f.k() > 1 { format!("({cs})") } else { cs };
            terms.push(match i {
                0 => cs,
                1 if c == Fq::ONE => "t".into(),
                1 => format!("{cs}t"),
                _ if c == Fq::ONE => format!("t^{i}"),
                _ => format!("{cs}t^{i}"),
            });
        }
        terms.join(" + ")
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.0.to_string()).collect();
        write!(f, "[{}]", c.join(","))
    }
}

fn pth_root(g: &FqPoly, f: &Field) -> FqPoly {
    let p = f.p() as usize;
    let e = (f.q() / f.p()) as u64;
    let coeffs = g.coeffs().iter().step_by(p).map(|&c| f.pow(c, e)).collect();
    FqPoly::from_coeffs(coeffs)
}

/// Squarefree decomposition of a monic polynomial: pairs (squarefree part, multiplicity).
fn squarefree(m: &FqPoly, f: &Field) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    let d = m.derivative(f);
    if d.is_zero() {
        for (g, e) in squarefree(&pth_root(m, f), f) {
            out.push((g, e * f.p() as usize));
        }
        return out;
    }
    let mut c = m.gcd(&d, f);
    let mut w = m.div_exact(&c, f);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let z = w.div_exact(&y, f);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, f);
    }
    if !c.is_one() {
        for (g, e) in squarefree(&pth_root(&c, f), f) {
            out.push((g, e * f.p() as usize));
        }
    }
    out
}

fn distinct_degree(m: &FqPoly, f: &Field) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    let x = FqPoly::x();
    let mut rest = m.clone();
    let mut h = x.clone();
    let mut i = 1;
    while rest.degree() >= 2 * i {
        h = h.pow_mod(f.q() as u128, &rest, f);
        let g = rest.gcd(&h.sub(&x, f), f);
        if !g.is_one() {
            rest = rest.div_exact(&g, f);
            h = h.rem(&rest, f);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree() > 0 {
        let d = rest.degree();
        out.push((rest, d));
    }
    out
}

fn equal_degree(g: &FqPoly, d: usize, f: &Field, rng: &mut ChaCha8Rng) -> Vec<FqPoly> {
    let n = g.degree();
    if n == d {
        return vec![g.clone()];
    }
    loop {
        let a = FqPoly::from_coeffs((0..n).map(|_| Fq(rng.gen_range(0..f.q()))).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = if f.is_odd() {
            // a^((q^d - 1)/2) = prod_i (a^((q-1)/2))^(q^i)
            let c = a.pow_mod(((f.q() - 1) / 2) as u128, g, f);
            let mut acc = FqPoly::one();
            let mut cur = c;
            for _ in 0..d {
                acc = acc.mul(&cur, f).rem(g, f);
                cur = cur.pow_mod(f.q() as u128, g, f);
            }
            acc.sub(&FqPoly::one(), f)
        } else {
            // absolute trace to F_2 of the degree-d extension
            let mut acc = FqPoly::zero();
            let mut cur = a.rem(g, f);
            for _ in 0..(f.k() as usize * d) {
                acc = acc.add(&cur, f);
                cur = cur.mul(&cur, f).rem(g, f);
            }
            acc
        };
        let u = g.gcd(&b, f);
        if u.degree() > 0 && u.degree() < n {
            let v = g.div_exact(&u, f);
            let mut out = equal_degree(&u, d, f, rng);
            out.extend(equal_degree(&v, d, f, rng));
            return out;
        }
    }
}

/// Every monic irreducible of the given degree (brute force; small q and degree only).
pub fn monic_irreducibles(f: &Field, degree: usize) -> Vec<FqPoly> {
    let q = f.q() as u64;
    let count = q.pow(degree as u32);
    let mut out = Vec::new();
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut r = idx;
        for _ in 0..degree {
            coeffs.push(Fq((r % q) as u32));
            r /= q;
        }
        coeffs.push(Fq::ONE);
        let p = FqPoly::from_coeffs(coeffs);
        if p.is_irreducible(f) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn reciprocal_examples() {
        let f5 = f(5);
        let p = FqPoly::from_ints(&f5, &[-2, 1]);
        assert_eq!(p.reciprocal(&f5).unwrap(), FqPoly::from_ints(&f5, &[-3, 1]));
        let f3 = f(3);
        let p = FqPoly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(p.reciprocal(&f3).unwrap(), p);
        assert_eq!(FqPoly::from_ints(&f3, &[0, 1]).reciprocal(&f3), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn twist_examples() {
        let f3 = f(3);
        let tm1 = FqPoly::from_ints(&f3, &[-1, 1]);
        let tp1 = FqPoly::from_ints(&f3, &[1, 1]);
        assert_eq!(tm1.twist(&f3).unwrap(), tp1);
        assert_eq!(tp1.twist(&f3).unwrap(), tm1);
        let reducible = FqPoly::from_ints(&f3, &[-1, 0, 1]);
        assert_eq!(reducible.twist(&f3), Err(Error::NotIrreducible));
        assert_eq!(tm1.twist(&f(4)), Err(Error::OddCharacteristicRequired));
    }

    #[test]
    fn factorize_examples() {
        let f3 = f(3);
        let p = FqPoly::from_ints(&f3, &[-1, 0, 1]);
        let fac = p.factorize(&f3);
        assert_eq!(
            fac,
            vec![(FqPoly::from_ints(&f3, &[1, 1]), 1), (FqPoly::from_ints(&f3, &[2, 1]), 1)]
        );
        let p = FqPoly::from_ints(&f3, &[1, 0, 1]);
        assert_eq!(p.factorize(&f3), vec![(p.clone(), 1)]);
    }

    #[test]
    fn factorize_inseparable_powers() {
        for q in [2u64, 3, 4, 9] {
            let fl = f(q);
            let a = FqPoly::from_ints(&fl, &[1, 1]);
            let p = a.pow(fl.p() as usize * 2 + 1, &fl);
            assert_eq!(p.factorize(&fl), vec![(a.clone(), fl.p() as usize * 2 + 1)]);
        }
    }

    #[test]
    fn irreducible_counts() {
        // number of monic irreducibles of degree n over F_q (necklace formula)
        assert_eq!(monic_irreducibles(&f(2), 4).len(), 3);
        assert_eq!(monic_irreducibles(&f(3), 3).len(), 8);
        assert_eq!(monic_irreducibles(&f(4), 2).len(), 6);
        assert_eq!(monic_irreducibles(&f(9), 2).len(), 36);
    }

    #[test]
    fn phi9_irreducible_over_f2() {
        let f2 = f(2);
        let phi9 = FqPoly::from_ints(&f2, &[1, 0, 0, 1, 0, 0, 1]);
        assert!(phi9.is_irreducible(&f2));
        assert_eq!(phi9.factorize(&f2), vec![(phi9.clone(), 1)]);
        assert!(phi9.is_self_reciprocal(&f2));
    }
}
