//! The subgroup lattice O ⊇ SO, K, T ⊇ Ω of a quadratic space: spinor norm,
//! membership predicates, reflections, group orders and enumeration.
//!
//! Conventions: the reflection along an anisotropic v is
//! `r_v(x) = x − (Q(x+v) − Q(x) − Q(v))/Q(v) · v`, and the spinor norm is
//! θ(r_v) = square class of Q(v). In characteristic 2 the reflections are the
//! orthogonal transvections, SO is read as the Dickson-invariant kernel Ω, and
//! K and T are not defined.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_ops, Fq, FqMatrix, SquareClass, Vector};
use crate::error::{Error, Result};
use crate::forms::{FormType, QuadSpace};
use crate::group::MatrixGroup;

/// Members of the subgroup lattice. `POmega` elements are Ω-matrices read modulo {±I} ∩ Ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    O,
    SO,
    K,
    T,
    Omega,
    POmega,
}

impl GroupKind {
    pub const ALL: [GroupKind; 6] = [GroupKind::O, GroupKind::SO, GroupKind::K, GroupKind::T, GroupKind::Omega, GroupKind::POmega];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::O => "O",
            GroupKind::SO => "SO",
            GroupKind::K => "K",
            GroupKind::T => "T",
            GroupKind::Omega => "Omega",
            GroupKind::POmega => "POmega",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupKind> {
        match s.to_ascii_lowercase().as_str() {
            "o" => Ok(GroupKind::O),
            "so" => Ok(GroupKind::SO),
            "k" => Ok(GroupKind::K),
            "t" => Ok(GroupKind::T),
            "omega" => Ok(GroupKind::Omega),
            "pomega" => Ok(GroupKind::POmega),
            _ => Err(Error::InvalidConfig(format!("unknown group {s:?}"))),
        }
    }
}

/// An isometry together with the space it preserves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    space: QuadSpace,
    matrix: FqMatrix,
}

impl Isometry {
    pub fn new(space: &QuadSpace, matrix: FqMatrix) -> Result<Isometry> {
        if matrix.rows() != space.dim() || !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix on a {}-dimensional space", matrix.rows(), matrix.cols(), space.dim())));
        }
        if !space.is_isometry(&matrix) {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { space: space.clone(), matrix })
    }
    pub fn space(&self) -> &QuadSpace {
        &self.space
    }
    pub fn matrix(&self) -> &FqMatrix {
        &self.matrix
    }
}

/// Reflection along v; errors if v is singular.
pub fn reflection(space: &QuadSpace, v: &[Fq]) -> Result<FqMatrix> {
    let f = space.field();
    let qv = space.q_value(v);
    if qv.is_zero() {
        return Err(Error::InvalidConfig("reflection along a singular vector".into()));
    }
    let n = space.dim();
    // polar(x, v) = c · xᵀ B v with c = 2 (odd q) or 1 (q even)
    let bv = space.gram().mul_vec(v, f);
    let c = if f.is_odd() { f.from_int(2) } else { Fq::ONE };
    let coef = f.div(c, qv);
    let mut r = FqMatrix::identity(n);
    for i in 0..n {
        let vi = f.mul(coef, v[i]);
        if vi.is_zero() {
            continue;
        }
        for j in 0..n {
            r[(i, j)] = f.sub(r[(i, j)], f.mul(vi, bv[j]));
        }
    }
    Ok(r)
}

/// Anisotropic projective points (first nonzero coordinate 1), in
/// lexicographic order of the representative.
fn anisotropic_points(space: &QuadSpace) -> impl Iterator<Item = Vector> + '_ {
    let n = space.dim();
    let q = space.field().q() as u64;
    (0..n).flat_map(move |lead| {
        (0..q.pow((n - lead - 1) as u32)).filter_map(move |idx| {
            let mut v = vec![Fq::ZERO; n];
            v[lead] = Fq::ONE;
            let mut rest = idx;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = Fq((rest % q) as u32);
                rest /= q;
            }
            (!space.q_value(&v).is_zero()).then_some(v)
        })
    })
}

/// One reflection per anisotropic projective point, in lexicographic order
/// of the representative.
pub fn reflections(space: &QuadSpace) -> Vec<(Vector, FqMatrix)> {
    anisotropic_points(space)
        .map(|v| {
            let r = reflection(space, &v).expect("anisotropic");
            (v, r)
        })
        .collect()
}

/// Spinor norm θ(g) via an explicit factorization into reflections (q odd).
pub fn spinor_norm(space: &QuadSpace, g: &FqMatrix) -> Result<SquareClass> {
    let f = space.field();
    if !f.is_odd() {
        return Err(Error::SpinorNormCharTwo);
    }
    Ok(spinor_factorization(space, g)?.0)
}

/// Returns θ(g) and vectors v₁…v_m with g = r_{v₁}⋯r_{v_m}.
///
/// Works along an orthogonal anisotropic basis x₁…x_n: once the running
/// element h fixes x₁…x_{k−1}, either r_w with w = h x_k − x_k is anisotropic and
/// sends h x_k to x_k, or r_{x_k} r_{h x_k + x_k} does.
pub fn spinor_factorization(space: &QuadSpace, g: &FqMatrix) -> Result<(SquareClass, Vec<Vector>)> {
    let f = space.field();
    if !f.is_odd() {
        return Err(Error::SpinorNormCharTwo);
    }
    if !space.is_isometry(g) {
        return Err(Error::NotAnIsometry);
    }
    let basis = space.orthogonal_basis()?;
    let mut h = g.clone();
    let mut theta = SquareClass::Trivial;
    let mut vectors = Vec::new();
    for x in basis {
        let y = h.mul_vec(x, f);
        let w = vec_ops::sub(&y, x, f);
        if vec_ops::is_zero(&w) {
            continue;
        }
        let qw = space.q_value(&w);
        if !qw.is_zero() {
            h = reflection(space, &w)?.mul(&h, f);
            theta = theta.mul(f.square_class(qw)?);
            vectors.push(w);
        } else {
            let z = vec_ops::add(&y, x, f);
            let qz = space.q_value(&z);
            h = reflection(space, x)?.mul(&reflection(space, &z)?, f).mul(&h, f);
            theta = theta.mul(f.square_class(qz)?).mul(f.square_class(space.q_value(x))?);
            vectors.push(z);
            vectors.push(x.clone());
        }
    }
    debug_assert!(h.is_identity());
    // g = (r_{v_m} ⋯ r_{v_1})⁻¹ = r_{v_1} ⋯ r_{v_m}
    Ok((theta, vectors))
}

/// det(g) as ±1. Errors if det(g) ∉ {±1}.
pub fn det_sign(space: &QuadSpace, g: &FqMatrix) -> Result<i32> {
    let f = space.field();
    let d = g.det(f);
    if d == Fq::ONE {
        Ok(1)
    } else if d == f.neg(Fq::ONE) {
        Ok(-1)
    } else {
        Err(Error::NotAnIsometry)
    }
}

/// rank(g + I), whose parity decides Ω-membership in characteristic 2.
pub fn rank_g_plus_one(space: &QuadSpace, g: &FqMatrix) -> usize {
    let f = space.field();
    g.add(&FqMatrix::identity(space.dim()), f).rank(f)
}

/// Lattice position of an isometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFlags {
    pub det: i32,
    pub spinor_norm: Option<SquareClass>,
    pub in_so: bool,
    pub in_k: Option<bool>,
    pub in_t: Option<bool>,
    pub in_omega: bool,
}

pub fn lattice_flags(space: &QuadSpace, g: &FqMatrix) -> Result<LatticeFlags> {
    if !space.is_isometry(g) {
        return Err(Error::NotAnIsometry);
    }
    let f = space.field();
    if !f.is_odd() {
        let in_omega = rank_g_plus_one(space, g) % 2 == 0;
        return Ok(LatticeFlags { det: 1, spinor_norm: None, in_so: in_omega, in_k: None, in_t: None, in_omega });
    }
    let det = det_sign(space, g)?;
    let theta = spinor_norm(space, g)?;
    let in_so = det == 1;
    let in_k = theta.is_trivial();
    Ok(LatticeFlags {
        det,
        spinor_norm: Some(theta),
        in_so,
        in_k: Some(in_k),
        in_t: Some(in_k == in_so),
        in_omega: in_so && in_k,
    })
}

/// Membership of an isometry of `space` in the given lattice member.
pub fn member(space: &QuadSpace, g: &FqMatrix, kind: GroupKind) -> Result<bool> {
    let flags = lattice_flags(space, g)?;
    flags_member(&flags, kind)
}

pub fn flags_member(flags: &LatticeFlags, kind: GroupKind) -> Result<bool> {
    Ok(match kind {
        GroupKind::O => true,
        GroupKind::SO => flags.in_so,
        GroupKind::K => flags.in_k.ok_or_else(|| Error::WrongAmbient("K is defined for odd q only".into()))?,
        GroupKind::T => flags.in_t.ok_or_else(|| Error::WrongAmbient("T is defined for odd q only".into()))?,
        GroupKind::Omega | GroupKind::POmega => flags.in_omega,
    })
}

/// Whether −I lies in Ω, i.e. whether POmega is a proper quotient.
pub fn minus_one_in_omega(space: &QuadSpace) -> bool {
    let f = space.field();
    if !f.is_odd() {
        return false;
    }
    let m = FqMatrix::scalar(space.dim(), f.neg(Fq::ONE));
    member(space, &m, GroupKind::Omega).unwrap_or(false)
}

/// |O^ε(n, q)| for the type of `space`.
pub fn orthogonal_order(n: usize, q: u64, ty: FormType) -> u128 {
    let q = q as u128;
    if n == 0 {
        return 1;
    }
    if n % 2 == 1 {
        let m = (n / 2) as u32;
        let mut o = 2 * q.pow(m * m);
        for i in 1..=m {
            o *= q.pow(2 * i) - 1;
        }
        return o;
    }
    let m = (n / 2) as u32;
    let eps: i128 = ty.sign() as i128;
    let mut o = 2 * q.pow(m * (m - 1)) * ((q.pow(m) as i128 - eps) as u128);
    for i in 1..m {
        o *= q.pow(2 * i) - 1;
    }
    o
}

pub fn group_order(space: &QuadSpace, kind: GroupKind) -> Result<u128> {
    let f = space.field();
    let o = orthogonal_order(space.dim(), f.q() as u64, space.form_type()?);
    Ok(match (kind, f.is_odd()) {
        (GroupKind::O, _) => o,
        (GroupKind::SO | GroupKind::Omega, false) => o / 2,
        (GroupKind::K | GroupKind::T, false) => return Err(Error::WrongAmbient("K and T are defined for odd q only".into())),
        (GroupKind::POmega, false) => o / 2,
        (GroupKind::SO | GroupKind::K | GroupKind::T, true) => o / 2,
        (GroupKind::Omega, true) => o / 4,
        (GroupKind::POmega, true) => {
            if minus_one_in_omega(space) {
                o / 8
            } else {
                o / 4
            }
        }
    })
}

/// Generators of O: all reflections.
pub fn orthogonal_generators(space: &QuadSpace) -> Vec<FqMatrix> {
    reflections(space).into_iter().map(|(_, r)| r).collect()
}

/// Every element of the given lattice member, after checking its order
/// against `cap`. O is enumerated by closure from reflections (falling back
/// to a search over all matrices when reflections generate a proper
/// subgroup, as for O⁺(4,2)); subgroups are obtained by filtering.
pub fn enumerate(space: &QuadSpace, kind: GroupKind, cap: u128) -> Result<MatrixGroup> {
    let order = group_order(space, kind)?;
    let full = group_order(space, GroupKind::O)?;
    if full > cap.max(order) || order > cap {
        return Err(Error::GroupTooLarge { order, cap });
    }
    let f = space.field();
    let n = space.dim();
    let gens = orthogonal_generators(space);
    let mut o = MatrixGroup::closure(f, n, &gens, false, full)?;
    if (o.len() as u128) < full {
        o = brute_force_orthogonal(space)?;
    }
    if o.len() as u128 != full {
        return Err(Error::InvalidConfig(format!("enumerated {} elements, expected {full}", o.len())));
    }
    let g = match kind {
        GroupKind::O => o,
        GroupKind::POmega => o.filter(|m| member(space, m, GroupKind::Omega).unwrap_or(false)).projectivize(),
        k => o.filter(|m| member(space, m, k).unwrap_or(false)),
    };
    debug_assert_eq!(g.len() as u128, order);
    Ok(g)
}

const BRUTE_FORCE_LIMIT: u64 = 1 << 24;

fn brute_force_orthogonal(space: &QuadSpace) -> Result<MatrixGroup> {
    let f = space.field();
    let n = space.dim();
    let q = f.q() as u64;
    let total = (q as f64).powi((n * n) as i32);
    if total > BRUTE_FORCE_LIMIT as f64 {
        return Err(Error::GroupTooLarge { order: total as u128, cap: BRUTE_FORCE_LIMIT as u128 });
    }
    // choose images of basis vectors column by column, pruning by the form
    let mut found = Vec::new();
    let vectors: Vec<Vector> = (0..q.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = Fq((idx % q) as u32);
                    idx /= q;
                    c
                })
                .collect()
        })
        .collect();
    let mut cols: Vec<usize> = Vec::new();
    search_columns(space, &vectors, &mut cols, &mut found);
    Ok(MatrixGroup::from_elements(f, n, found, false))
}

fn search_columns(space: &QuadSpace, vectors: &[Vector], cols: &mut Vec<usize>, found: &mut Vec<FqMatrix>) {
    let n = space.dim();
    let j = cols.len();
    if j == n {
        let cs: Vec<Vector> = cols.iter().map(|&c| vectors[c].clone()).collect();
        let m = FqMatrix::from_cols(n, &cs);
        if space.is_isometry(&m) {
            found.push(m);
        }
        return;
    }
    let ej = vec_ops::unit(n, j);
    let target_q = space.q_value(&ej);
    for (idx, v) in vectors.iter().enumerate() {
        if space.q_value(v) != target_q {
            continue;
        }
        let ok = cols.iter().enumerate().all(|(i, &c)| space.bilinear(&vectors[c], v) == space.gram()[(i, j)]);
        if ok {
            cols.push(idx);
            search_columns(space, vectors, cols, found);
            cols.pop();
        }
    }
}

/// Reflections with square and non-square Q-values (q odd). In dimension 1
/// only one of them exists.
fn coset_reflections(space: &QuadSpace) -> (Option<FqMatrix>, Option<FqMatrix>) {
    let f = space.field();
    let (mut sq, mut ns) = (None, None);
    for v in anisotropic_points(space) {
        let slot = if f.is_square(space.q_value(&v)) { &mut sq } else { &mut ns };
        if slot.is_none() {
            *slot = Some(reflection(space, &v).expect("anisotropic"));
        }
        if sq.is_some() && ns.is_some() {
            break;
        }
    }
    (sq, ns)
}

/// Random element of the given lattice member: a random product of
/// reflections moved into the subgroup by a fixed coset representative.
pub fn random_element<R: Rng>(space: &QuadSpace, kind: GroupKind, rng: &mut R) -> Result<FqMatrix> {
    let f = space.field();
    let n = space.dim();
    if anisotropic_points(space).next().is_none() {
        return Ok(FqMatrix::identity(n));
    }
    let len = 3 * n + rng.gen_range(0..=n + 1);
    let mut g = FqMatrix::identity(n);
    let mut done = 0;
    while done < len {
        let v: Vector = (0..n).map(|_| f.elem(rng.gen_range(0..f.q()))).collect();
        if space.q_value(&v).is_zero() {
            continue;
        }
        g = g.mul(&reflection(space, &v)?, f);
        done += 1;
    }
    correct_into(space, g, kind)
}

/// Multiplies g ∈ O by a coset representative so the result lies in `kind`.
pub fn correct_into(space: &QuadSpace, g: FqMatrix, kind: GroupKind) -> Result<FqMatrix> {
    let f = space.field();
    if kind == GroupKind::O {
        return Ok(g);
    }
    let flags = lattice_flags(space, &g)?;
    if !f.is_odd() {
        return match kind {
            GroupKind::K | GroupKind::T => Err(Error::WrongAmbient("K and T are defined for odd q only".into())),
            _ if flags.in_omega => Ok(g),
            _ => Ok(g.mul(&coset_reflections(space).0.expect("q even has transvections"), f)),
        };
    }
    let det_bad = flags.det == -1;
    let theta_bad = !flags.in_k.unwrap();
    // (flip det, flip θ) needed
    let need = match kind {
        GroupKind::O => (false, false),
        GroupKind::SO => (det_bad, false),
        GroupKind::K => (false, theta_bad),
        GroupKind::T => (false, !flags.in_t.unwrap()),
        GroupKind::Omega | GroupKind::POmega => (det_bad, theta_bad),
    };
    let (ra, rb) = coset_reflections(space);
    let fix = match need {
        (false, false) => None,
        (true, false) => ra.or_else(|| rb.clone()),
        (true, true) => rb.or(ra),
        (false, true) => match (ra, rb) {
            (Some(a), Some(b)) => Some(a.mul(&b, f)),
            _ => None,
        },
    };
    Ok(match fix {
        Some(r) => g.mul(&r, f),
        None => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reflection_properties() {
        for q in [3u64, 4, 5] {
            let f = Field::new(q).unwrap();
            let s = QuadSpace::split(&f, 4).unwrap();
            for (v, r) in reflections(&s) {
                assert!(s.is_isometry(&r));
                assert!(r.mul(&r, &f).is_identity());
                if f.is_odd() {
                    assert_eq!(det_sign(&s, &r).unwrap(), -1);
                    assert_eq!(spinor_norm(&s, &r).unwrap(), f.square_class(s.q_value(&v)).unwrap());
                } else {
                    assert_eq!(rank_g_plus_one(&s, &r), 1);
                }
            }
        }
    }

    #[test]
    fn reflection_count_identity_plane_f3() {
        let f = Field::new(3).unwrap();
        let s = QuadSpace::from_gram(&f, FqMatrix::identity(2)).unwrap();
        // x² + y² over F_3 has only the trivial zero, so all 4 points are anisotropic
        assert_eq!(reflections(&s).len(), 4);
    }

    #[test]
    fn appendix_s0_not_in_omega() {
        for q in [3u64, 7] {
            let f = Field::new(q).unwrap();
            let s = QuadSpace::split(&f, 4).unwrap();
            let s0 = FqMatrix::from_ints(&f, 4, 4, &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0]);
            assert!(member(&s, &s0, GroupKind::SO).unwrap());
            assert!(!member(&s, &s0, GroupKind::Omega).unwrap());
        }
    }

    #[test]
    fn minus_identity_spinor_norm_odd_dim() {
        let f = Field::new(5).unwrap();
        for ty in [FormType::Split, FormType::NonSplit] {
            let s = QuadSpace::standard(&f, 3, ty).unwrap();
            let m = FqMatrix::scalar(3, f.neg(Fq::ONE));
            assert_eq!(spinor_norm(&s, &m).unwrap(), s.discriminant().unwrap());
        }
    }

    #[test]
    fn random_elements_land_in_subgroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Field::new(5).unwrap();
        let s = QuadSpace::nonsplit(&f, 4).unwrap();
        for kind in [GroupKind::SO, GroupKind::K, GroupKind::T, GroupKind::Omega] {
            for _ in 0..10 {
                let g = random_element(&s, kind, &mut rng).unwrap();
                assert!(member(&s, &g, kind).unwrap());
            }
        }
    }

    #[test]
    fn small_orders() {
        assert_eq!(orthogonal_order(6, 2, FormType::Split), 2 * 20160);
        assert_eq!(orthogonal_order(6, 2, FormType::NonSplit), 2 * 25920);
        assert_eq!(orthogonal_order(2, 3, FormType::NonSplit), 8);
        assert_eq!(orthogonal_order(3, 3, FormType::Split), 48);
    }
}
