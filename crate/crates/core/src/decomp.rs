//! Orthogonal decomposition of the space of an isometry into indecomposable
//! g-invariant blocks, with block typing.
//!
//! The space splits first into primary components ker f(g)^N. A component
//! with f ≠ f* is paired with the one for f*; inside a pair, blocks
//! F[g]u ⊕ F[g]w are cut out with u of maximal height and w pairing
//! nondegenerately with the socle of F[g]u. A self-reciprocal component is
//! peeled one block at a time: a nondegenerate cyclic subspace of maximal
//! height when one exists, otherwise a bicyclic block F[g]x ⊕ F[g]y with
//! both summands totally singular.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_ops, Field, Fq, FqMatrix, FqPoly, SquareClass, Vector};
use crate::error::{Error, Result};
use crate::forms::QuadSpace;
use crate::ogroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    /// Bicyclic, eigenvalue 1 (odd q).
    T1minus,
    /// Bicyclic, eigenvalue −1 (odd q).
    T1plus,
    /// Cyclic, divisor (t − 1)^e with e odd.
    T2minus,
    /// Cyclic, divisor (t + 1)^e with e odd.
    T2plus,
    /// Cyclic, f self-reciprocal and f ≠ t ± 1.
    T2star,
    /// U ⊕ W with divisors f^e and (f*)^e, f ≠ f*.
    T3,
    /// Characteristic 2, cyclic with self-reciprocal f.
    C2cyclic,
    /// Characteristic 2, bicyclic unipotent.
    C2bicyclic,
}

impl BlockType {
    pub fn label(self) -> &'static str {
        match self {
            BlockType::T1minus => "1-",
            BlockType::T1plus => "1+",
            BlockType::T2minus => "2-",
            BlockType::T2plus => "2+",
            BlockType::T2star => "2*",
            BlockType::T3 => "3",
            BlockType::C2cyclic => "cyclic",
            BlockType::C2bicyclic => "bicyclic",
        }
    }
    pub fn is_bicyclic(self) -> bool {
        matches!(self, BlockType::T1minus | BlockType::T1plus | BlockType::C2bicyclic)
    }
    pub fn is_cyclic(self) -> bool {
        matches!(self, BlockType::T2minus | BlockType::T2plus | BlockType::T2star | BlockType::C2cyclic)
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct Block {
    /// Basis in ambient coordinates. For bicyclic and type-3 blocks the first
    /// half spans U and the second half spans W.
    pub basis: Vec<Vector>,
    /// Form restricted to the block, in basis coordinates.
    pub space: QuadSpace,
    /// g restricted to the block, in basis coordinates.
    pub action: FqMatrix,
    pub kind: BlockType,
    /// Elementary divisor f^e of g on the block (on each summand when bicyclic, on U for type 3).
    pub divisor: (FqPoly, usize),
    /// Divisor (f*)^e on W for type-3 blocks.
    pub partner: Option<(FqPoly, usize)>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Elementary divisors of g on the block, with multiplicity.
    pub fn elementary_divisors(&self) -> Vec<(FqPoly, usize)> {
        match (&self.partner, self.kind.is_bicyclic()) {
            (Some(p), _) => vec![self.divisor.clone(), p.clone()],
            (None, true) => vec![self.divisor.clone(), self.divisor.clone()],
            (None, false) => vec![self.divisor.clone()],
        }
    }

    /// Whether g acts with eigenvalue 1 only.
    pub fn is_unipotent(&self, f: &Field) -> bool {
        self.partner.is_none() && self.divisor.0 == FqPoly::linear(f, Fq::ONE)
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    /// The decomposed isometry.
    pub g: FqMatrix,
}

impl Decomposition {
    pub fn elementary_divisors(&self) -> Vec<(FqPoly, usize)> {
        let mut all: Vec<_> = self.blocks.iter().flat_map(|b| b.elementary_divisors()).collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all
    }
}

/// Vectors searched exhaustively when the subspace has at most this many.
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const RANDOM_ATTEMPTS: usize = 20_000;
const SEARCH_SEED: u64 = 0xdec0_3b05;

pub fn decompose(space: &QuadSpace, g: &FqMatrix) -> Result<Decomposition> {
    let f = space.field();
    let n = space.dim();
    if !space.is_isometry(g) {
        return Err(Error::NotAnIsometry);
    }
    let mut factors: Vec<(FqPoly, usize)> = g.char_poly(f).factorize(f);
    // descending in (deg f, coefficients)
    factors.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut blocks = Vec::new();
    let mut done: Vec<FqPoly> = Vec::new();
    for (poly, mult) in &factors {
        if done.contains(poly) {
            continue;
        }
        let star = poly.reciprocal(f)?;
        let comp = primary_component(g, poly, *mult, f);
        if &star == poly {
            done.push(poly.clone());
            split_self_reciprocal(space, g, poly, comp, &mut blocks)?;
        } else {
            let star_mult = factors.iter().find(|(p, _)| p == &star).map(|(_, m)| *m).ok_or_else(|| {
                Error::DecompositionFailure("reciprocal factor missing from characteristic polynomial".into())
            })?;
            let comp_star = primary_component(g, &star, star_mult, f);
            done.push(poly.clone());
            done.push(star.clone());
            split_pair(space, g, poly, &star, comp, comp_star, &mut blocks)?;
        }
    }
    let total: usize = blocks.iter().map(|b| b.dim()).sum();
    if total != n {
        return Err(Error::DecompositionFailure(format!("blocks cover {total} of {n} dimensions")));
    }
    Ok(Decomposition { blocks, g: g.clone() })
}

fn primary_component(g: &FqMatrix, poly: &FqPoly, mult: usize, f: &Field) -> Vec<Vector> {
    g.eval_poly(poly, f).pow(mult as u64, f).kernel(f)
}

/// Smallest e with a^e v = 0 (a nilpotent on the relevant component).
fn height(a: &FqMatrix, v: &[Fq], f: &Field) -> usize {
    let mut w = v.to_vec();
    let mut e = 0;
    while !vec_ops::is_zero(&w) {
        w = a.mul_vec(&w, f);
        e += 1;
    }
    e
}

/// v, gv, g²v, … up to the first linear dependence.
fn krylov(g: &FqMatrix, v: &[Fq], f: &Field) -> Vec<Vector> {
    let n = v.len();
    let mut out: Vec<Vector> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        let mut trial = out.clone();
        trial.push(cur.clone());
        if FqMatrix::from_cols(n, &trial).rank(f) < trial.len() {
            return out;
        }
        out = trial;
        cur = g.mul_vec(&cur, f);
    }
}

fn combine(basis: &[Vector], coeffs: &[Fq], f: &Field) -> Vector {
    let mut v = vec![Fq::ZERO; basis[0].len()];
    for (b, &c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            v = vec_ops::axpy(&v, c, b, f);
        }
    }
    v
}

/// First vector of span(basis) accepted by `pred`, in graded order: basis
/// vectors, then b_i + c·b_j, then either every vector (small spans) or a
/// fixed pseudo-random sequence.
fn search_span(basis: &[Vector], f: &Field, mut pred: impl FnMut(&Vector) -> bool) -> Option<Vector> {
    let k = basis.len();
    if k == 0 {
        return None;
    }
    for b in basis {
        if pred(b) {
            return Some(b.clone());
        }
    }
    let nonzero: Vec<Fq> = f.elements().filter(|c| !c.is_zero()).collect();
    for i in 0..k {
        for j in i + 1..k {
            for &c in &nonzero {
                let v = vec_ops::axpy(&basis[i], c, &basis[j], f);
                if pred(&v) {
                    return Some(v);
                }
            }
        }
    }
    let q = f.q() as u64;
    let total = (q as f64).powi(k as i32);
    if total <= EXHAUSTIVE_LIMIT as f64 {
        for idx in 1..q.pow(k as u32) {
            let mut rest = idx;
            let coeffs: Vec<Fq> = (0..k)
                .map(|_| {
                    let c = Fq((rest % q) as u32);
                    rest /= q;
                    c
                })
                .collect();
            let v = combine(basis, &coeffs, f);
            if pred(&v) {
                return Some(v);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..RANDOM_ATTEMPTS {
        let coeffs: Vec<Fq> = (0..k).map(|_| f.elem(rng.gen_range(0..f.q()))).collect();
        let v = combine(basis, &coeffs, f);
        if pred(&v) {
            return Some(v);
        }
    }
    None
}

/// Basis of span(m) ∩ span(x)^⊥.
fn complement(space: &QuadSpace, m: &[Vector], x: &[Vector]) -> Vec<Vector> {
    let f = space.field();
    if x.is_empty() {
        return m.to_vec();
    }
    let rows: Vec<Vector> = x.iter().map(|xv| m.iter().map(|mv| space.bilinear(xv, mv)).collect()).collect();
    FqMatrix::from_rows(&rows).kernel(f).iter().map(|c| combine(m, c, f)).collect()
}

fn is_nondegenerate_span(space: &QuadSpace, basis: &[Vector]) -> bool {
    let f = space.field();
    let k = basis.len();
    let mut gram = FqMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = space.bilinear(&basis[i], &basis[j]);
        }
    }
    !gram.det(f).is_zero()
}

fn make_block(
    space: &QuadSpace,
    g: &FqMatrix,
    basis: Vec<Vector>,
    kind: BlockType,
    divisor: (FqPoly, usize),
    partner: Option<(FqPoly, usize)>,
) -> Result<Block> {
    let f = space.field();
    let n = space.dim();
    let p = FqMatrix::from_cols(n, &basis);
    let k = basis.len();
    let mut action = FqMatrix::zeros(k, k);
    for (j, b) in basis.iter().enumerate() {
        let gb = g.mul_vec(b, f);
        let c = p
            .solve(&gb, f)
            .ok_or_else(|| Error::DecompositionFailure("block is not g-invariant".into()))?;
        for i in 0..k {
            action[(i, j)] = c[i];
        }
    }
    let restricted = space.restrict(&basis)?;
    Ok(Block { basis, space: restricted, action, kind, divisor, partner })
}

fn split_pair(
    space: &QuadSpace,
    g: &FqMatrix,
    poly: &FqPoly,
    star: &FqPoly,
    mut u_space: Vec<Vector>,
    mut w_space: Vec<Vector>,
    blocks: &mut Vec<Block>,
) -> Result<()> {
    let f = space.field();
    let a = g.eval_poly(poly, f);
    while !u_space.is_empty() {
        let e = u_space.iter().map(|v| height(&a, v, f)).max().unwrap();
        let u = search_span(&u_space, f, |v| height(&a, v, f) == e).expect("a basis vector has maximal height");
        let cu = krylov(g, &u, f);
        let socle_gen = a.pow((e - 1) as u64, f).mul_vec(&u, f);
        let socle = krylov(g, &socle_gen, f);
        let w = search_span(&w_space, f, |w| socle.iter().any(|s| !space.bilinear(s, w).is_zero()))
            .ok_or_else(|| Error::DecompositionFailure("no partner for a type-3 summand".into()))?;
        let cw = krylov(g, &w, f);
        if cw.len() != cu.len() {
            return Err(Error::DecompositionFailure("type-3 summands of unequal dimension".into()));
        }
        let mut basis = cu.clone();
        basis.extend(cw.iter().cloned());
        if !is_nondegenerate_span(space, &basis) {
            return Err(Error::DecompositionFailure("type-3 block is degenerate".into()));
        }
        u_space = complement(space, &u_space, &cw);
        w_space = complement(space, &w_space, &cu);
        blocks.push(make_block(space, g, basis, BlockType::T3, (poly.clone(), e), Some((star.clone(), e)))?);
    }
    if !w_space.is_empty() {
        return Err(Error::DecompositionFailure("unpaired reciprocal component".into()));
    }
    Ok(())
}

fn split_self_reciprocal(space: &QuadSpace, g: &FqMatrix, poly: &FqPoly, mut m: Vec<Vector>, blocks: &mut Vec<Block>) -> Result<()> {
    let f = space.field();
    let a = g.eval_poly(poly, f);
    let minus_one = FqPoly::linear(f, Fq::ONE);
    let plus_one = FqPoly::linear(f, f.neg(Fq::ONE));
    let linear = poly == &minus_one || poly == &plus_one;
    while !m.is_empty() {
        let e = m.iter().map(|v| height(&a, v, f)).max().unwrap();
        let force_bicyclic = linear && ((f.is_odd() && e % 2 == 0) || (!f.is_odd() && e % 2 == 1));
        let mut cyclic = None;
        if !force_bicyclic {
            cyclic = search_span(&m, f, |v| {
                height(&a, v, f) == e && {
                    let c = krylov(g, v, f);
                    is_nondegenerate_span(space, &c)
                }
            });
        }
        let (basis, kind) = if let Some(v) = cyclic {
            let kind = if !f.is_odd() {
                BlockType::C2cyclic
            } else if poly == &minus_one {
                BlockType::T2minus
            } else if poly == &plus_one {
                BlockType::T2plus
            } else {
                BlockType::T2star
            };
            (krylov(g, &v, f), kind)
        } else if linear {
            let kind = if !f.is_odd() {
                BlockType::C2bicyclic
            } else if poly == &minus_one {
                BlockType::T1minus
            } else {
                BlockType::T1plus
            };
            let basis = match bicyclic_block(space, g, &a, e, &m) {
                Err(_) if !f.is_odd() => paired_block(space, g, &a, e, &m)?,
                r => r?,
            };
            (basis, kind)
        } else {
            return Err(Error::DecompositionFailure(format!("no nondegenerate cyclic summand for {}", poly.display(f))));
        };
        m = complement(space, &m, &basis);
        blocks.push(make_block(space, g, basis, kind, (poly.clone(), e), None)?);
    }
    Ok(())
}

/// Whether F[g]x (given as its Krylov basis) is totally singular.
fn totally_singular(space: &QuadSpace, cyc: &[Vector]) -> bool {
    let x = &cyc[0];
    space.q_value(x).is_zero() && cyc.iter().skip(1).all(|gx| space.bilinear(gx, x).is_zero())
}

/// Basis of F[g]x ⊕ F[g]y with both summands totally singular of height e.
fn bicyclic_block(space: &QuadSpace, g: &FqMatrix, a: &FqMatrix, e: usize, m: &[Vector]) -> Result<Vec<Vector>> {
    let f = space.field();
    let x = search_span(m, f, |v| height(a, v, f) == e && totally_singular(space, &krylov(g, v, f)))
        .ok_or_else(|| Error::DecompositionFailure("no totally singular cyclic summand of maximal height".into()))?;
    let cx = krylov(g, &x, f);
    let k = cx.len();
    let socle = krylov(g, &a.pow((e - 1) as u64, f).mul_vec(&x, f), f);
    let mut result = None;
    search_span(m, f, |y| {
        if socle.iter().all(|s| space.bilinear(s, y).is_zero()) {
            return false;
        }
        // y' = y + Σ β_j g^j x; impose Q(y') = 0 and B(g^i y', y') = 0 for 1 ≤ i < k
        let gy: Vec<Vector> = {
            let mut out = vec![y.clone()];
            for _ in 1..k {
                out.push(g.mul_vec(out.last().unwrap(), f));
            }
            out
        };
        let mut rows = Vec::with_capacity(k);
        let mut rhs = Vec::with_capacity(k);
        rows.push((0..k).map(|j| space.bilinear(y, &cx[j])).collect::<Vector>());
        rhs.push(f.neg(space.q_value(y)));
        for i in 1..k {
            let row: Vector = (0..k)
                .map(|j| {
                    let gix = g.pow((i + j) as u64, f).mul_vec(&x, f);
                    f.add(space.bilinear(&gy[i], &cx[j]), space.bilinear(&gix, y))
                })
                .collect();
            rows.push(row);
            rhs.push(f.neg(space.bilinear(&gy[i], y)));
        }
        let sys = FqMatrix::from_rows(&rows);
        // odd q: Q(y') = B(y',y') and the first row carries a factor 2
        let (sys, rhs) = if f.is_odd() {
            let two = f.from_int(2);
            let mut s2 = sys.clone();
            for j in 0..k {
                s2[(0, j)] = f.mul(two, sys[(0, j)]);
            }
            (s2, rhs)
        } else {
            (sys, rhs)
        };
        let Some(beta) = sys.solve(&rhs, f) else { return false };
        let mut yp = y.clone();
        for j in 0..k {
            yp = vec_ops::axpy(&yp, beta[j], &cx[j], f);
        }
        let cy = krylov(g, &yp, f);
        if cy.len() != k || !totally_singular(space, &cy) {
            return false;
        }
        let mut basis = cx.clone();
        basis.extend(cy);
        if !is_nondegenerate_span(space, &basis) {
            return false;
        }
        result = Some(basis);
        true
    });
    result.ok_or_else(|| Error::DecompositionFailure("no bicyclic partner found".into()))
}

/// Characteristic 2: a nondegenerate F[g]x ⊕ F[g]y with both summands of
/// height e and no totally singular cyclic summand. Over F_q the module
/// J_e ⊕ J_e (e odd) has such a form besides the hyperbolic one, already for
/// g = 1 on an anisotropic plane.
fn paired_block(space: &QuadSpace, g: &FqMatrix, a: &FqMatrix, e: usize, m: &[Vector]) -> Result<Vec<Vector>> {
    let f = space.field();
    let mut result = None;
    search_span(m, f, |x| {
        if height(a, x, f) != e {
            return false;
        }
        let cx = krylov(g, x, f);
        search_span(m, f, |y| {
            if height(a, y, f) != e {
                return false;
            }
            let mut basis = cx.clone();
            basis.extend(krylov(g, y, f));
            if basis.len() != 2 * cx.len() || !is_nondegenerate_span(space, &basis) {
                return false;
            }
            result = Some(basis);
            true
        })
        .is_some()
    });
    result.ok_or_else(|| Error::DecompositionFailure("no nondegenerate pair of cyclic summands".into()))
}

/// Determinant, spinor norm and Ω-membership of g on a block (q odd), and
/// whether the expected block facts hold: 1± and 2⁻ blocks lie in Ω(V_i),
/// 2⁺ blocks have det −1 and θ(g_i) = dV_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMembership {
    pub det: i32,
    pub spinor_norm: SquareClass,
    pub discriminant: SquareClass,
    pub in_omega: bool,
    pub facts_hold: bool,
}

pub fn classify_block_membership(block: &Block) -> Result<BlockMembership> {
    let s = &block.space;
    if !s.field().is_odd() {
        return Err(Error::OddCharacteristicRequired);
    }
    let det = ogroup::det_sign(s, &block.action)?;
    let theta = ogroup::spinor_norm(s, &block.action)?;
    let disc = s.discriminant()?;
    let in_omega = det == 1 && theta.is_trivial();
    let facts_hold = match block.kind {
        BlockType::T1minus | BlockType::T1plus | BlockType::T2minus => in_omega,
        BlockType::T2plus => det == -1 && theta == disc,
        _ => true,
    };
    Ok(BlockMembership { det, spinor_norm: theta, discriminant: disc, in_omega, facts_hold })
}

/// Sufficient conditions for strong reality read off a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongRealityCheck {
    /// Odd q: a 2*/3 block of dimension ≡ 2 (mod 4). Characteristic 2: an even
    /// number of divisors f^e with e odd, f self-reciprocal, deg f ≡ 2 (mod 4).
    pub condition_one: bool,
    /// Odd q: a 2± block with square discriminant. Characteristic 2: a
    /// unipotent block other than a bicyclic one of dimension ≡ 0 (mod 4).
    pub condition_two: bool,
    /// Some(true) when a sufficient condition fires; in characteristic 2 and
    /// dimension ≡ 2 (mod 4) the conditions are also necessary, giving Some(false).
    pub verdict: Option<bool>,
}

pub fn strongly_real_sufficient(d: &Decomposition, space: &QuadSpace) -> Result<StrongRealityCheck> {
    let f = space.field();
    if f.is_odd() {
        let c1 = d.blocks.iter().any(|b| matches!(b.kind, BlockType::T2star | BlockType::T3) && b.dim() % 4 == 2);
        let mut c2 = false;
        for b in &d.blocks {
            if matches!(b.kind, BlockType::T2minus | BlockType::T2plus) && b.space.discriminant()?.is_trivial() {
                c2 = true;
            }
        }
        return Ok(StrongRealityCheck { condition_one: c1, condition_two: c2, verdict: (c1 || c2).then_some(true) });
    }
    let count = d
        .elementary_divisors()
        .iter()
        .filter(|(p, e)| e % 2 == 1 && p.degree() % 4 == 2 && p.is_self_reciprocal(f))
        .count();
    let c1 = count % 2 == 0;
    let c2 = d.blocks.iter().any(|b| b.is_unipotent(f) && !(b.kind == BlockType::C2bicyclic && b.dim() % 4 == 0));
    let verdict = (space.dim() % 4 == 2).then_some(c1 || c2);
    Ok(StrongRealityCheck { condition_one: c1, condition_two: c2, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_splits_into_lines() {
        let f = Field::new(5).unwrap();
        let s = QuadSpace::split(&f, 4).unwrap();
        let d = decompose(&s, &FqMatrix::identity(4)).unwrap();
        assert_eq!(d.blocks.len(), 4);
        for b in &d.blocks {
            assert_eq!(b.kind, BlockType::T2minus);
            assert_eq!(b.dim(), 1);
            let m = classify_block_membership(b).unwrap();
            assert_eq!((m.det, m.spinor_norm), (1, SquareClass::Trivial));
        }
    }

    #[test]
    fn minus_identity_line_membership() {
        let f = Field::new(7).unwrap();
        let s = QuadSpace::from_gram(&f, FqMatrix::from_ints(&f, 1, 1, &[3])).unwrap();
        let g = FqMatrix::from_ints(&f, 1, 1, &[-1]);
        let d = decompose(&s, &g).unwrap();
        assert_eq!(d.blocks[0].kind, BlockType::T2plus);
        let m = classify_block_membership(&d.blocks[0]).unwrap();
        assert_eq!(m.det, -1);
        assert_eq!(m.spinor_norm, SquareClass::NonSquare);
        assert!(m.facts_hold);
    }
}
