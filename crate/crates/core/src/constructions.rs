//! Explicit elements of orthogonal groups over F_q, q ≡ 3 (mod 4), with
//! their claimed properties checked on the spot.
//!
//! Every builder fixes a concrete Gram matrix (J_n blocks, identity blocks
//! or a hyperbolic pairing) rather than the canonical forms of [`QuadSpace::standard`].

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Fq, FqMatrix, FqPoly, Vector};
use crate::decomp;
use crate::error::{Error, Result};
use crate::forms::{antidiag, FormType, QuadSpace};
use crate::ogroup::{self, GroupKind};
use crate::reality::{self, GroupSpec, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Failed,
    /// Not computed directly; follows from verified component statements.
    PaperArgued,
    /// The search exceeded its cap.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Assertion {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Assertion {
        let status = if holds { Status::Verified } else { Status::Failed };
        Assertion { name: name.into(), status, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct NamedConstruction {
    pub name: String,
    pub space: QuadSpace,
    pub matrix: FqMatrix,
    /// Group the matrix is claimed to lie in.
    pub kind: GroupKind,
    pub assertions: Vec<Assertion>,
}

/// Serializable summary of a construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub name: String,
    pub q: u32,
    pub group: String,
    pub assertions: Vec<Assertion>,
    pub all_hold: bool,
}

impl NamedConstruction {
    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn spec(&self) -> Result<GroupSpec> {
        GroupSpec::new(self.space.clone(), self.kind)
    }

    /// No assertion failed; skipped and argued ones count as holding.
    pub fn all_hold(&self) -> bool {
        self.assertions.iter().all(|a| a.status != Status::Failed)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn report(&self) -> Result<ConstructionReport> {
        Ok(ConstructionReport {
            name: self.name.clone(),
            q: self.field().q(),
            group: self.spec()?.label(),
            assertions: self.assertions.clone(),
            all_hold: self.all_hold(),
        })
    }
}

/// The field F_q, provided q ≡ 3 (mod 4).
pub fn field_3_mod_4(q: u64) -> Result<Field> {
    if q % 4 != 3 {
        return Err(Error::WrongFieldClass(q));
    }
    Field::new(q)
}

fn gram_space(f: &Field, blocks: &[FqMatrix]) -> Result<QuadSpace> {
    let refs: Vec<&FqMatrix> = blocks.iter().collect();
    QuadSpace::from_gram(f, FqMatrix::block_diag(&refs))
}

/// γ = (p − 1)/2, so that 2γ + 1 = 0.
pub fn gamma(f: &Field) -> Fq {
    f.from_int((f.p() as i64 - 1) / 2)
}

pub fn u_matrix(f: &Field) -> FqMatrix {
    FqMatrix::from_ints(f, 4, 4, &[1, -1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1])
}

pub fn s0_matrix(f: &Field) -> FqMatrix {
    FqMatrix::from_ints(f, 4, 4, &[0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0])
}

pub fn u1_matrix(f: &Field) -> FqMatrix {
    let mut m = FqMatrix::identity(6);
    for b in [0, 3] {
        m[(b, b + 1)] = f.neg(Fq::ONE);
        m[(b, b + 2)] = gamma(f);
        m[(b + 1, b + 2)] = Fq::ONE;
    }
    m
}

pub fn h_matrix(f: &Field) -> FqMatrix {
    FqMatrix::block_diag(&[&u_matrix(f), &FqMatrix::identity(2).neg(f)])
}

pub fn h0_matrix(f: &Field) -> FqMatrix {
    FqMatrix::block_diag(&[&u1_matrix(f), &u_matrix(f).neg(f)])
}

/// Space with Gram matrix J_4.
pub fn u_space(f: &Field) -> Result<QuadSpace> {
    gram_space(f, &[antidiag(4)])
}

/// Space with Gram matrix diag(J_4, I_2).
pub fn h_space(f: &Field) -> Result<QuadSpace> {
    gram_space(f, &[antidiag(4), FqMatrix::identity(2)])
}

/// Space with Gram matrix diag(J_3, J_3).
pub fn u1_space(f: &Field) -> Result<QuadSpace> {
    gram_space(f, &[antidiag(3), antidiag(3)])
}

/// Space with Gram matrix diag(J_3, J_3, J_4).
pub fn h0_space(f: &Field) -> Result<QuadSpace> {
    gram_space(f, &[antidiag(3), antidiag(3), antidiag(4)])
}

/// Space with the hyperbolic Gram matrix [[0, I_4], [I_4, 0]].
pub fn eta_space(f: &Field) -> Result<QuadSpace> {
    let mut g = FqMatrix::zeros(8, 8);
    for i in 0..4 {
        g[(i, i + 4)] = Fq::ONE;
        g[(i + 4, i)] = Fq::ONE;
    }
    QuadSpace::from_gram(f, g)
}

fn cap_detail(e: &Error) -> String {
    format!("not decided: {e}")
}

fn skipped(name: &str, e: &Error) -> Assertion {
    Assertion { name: name.into(), status: Status::Skipped, detail: cap_detail(e) }
}

fn form_assertion(space: &QuadSpace, ty: FormType) -> Assertion {
    let got = space.form_type();
    let holds = got.as_ref().map(|t| *t == ty).unwrap_or(false);
    Assertion::new("form type", holds, format!("expected {ty:?}, found {got:?}"))
}

fn membership(space: &QuadSpace, g: &FqMatrix, kind: GroupKind) -> Result<Assertion> {
    let holds = space.is_isometry(g) && ogroup::member(space, g, kind)?;
    Ok(Assertion::new("membership", holds, format!("element of {}", kind.name())))
}

fn sorted_divisors(mut v: Vec<(FqPoly, usize)>) -> Vec<(FqPoly, usize)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

fn divisor_assertion(f: &Field, g: &FqMatrix, expected: Vec<(FqPoly, usize)>) -> Assertion {
    let got = sorted_divisors(g.elementary_divisors(f));
    let show = |v: &[(FqPoly, usize)]| v.iter().map(|(p, e)| format!("({})^{e}", p.display(f))).collect::<Vec<_>>().join(", ");
    Assertion::new("elementary divisors", got == sorted_divisors(expected.clone()), show(&got))
}

/// Block types and dimensions of the orthogonal decomposition, sorted.
pub fn block_profile(space: &QuadSpace, g: &FqMatrix) -> Result<Vec<(String, usize)>> {
    let d = decomp::decompose(space, g)?;
    let mut v: Vec<(String, usize)> = d.blocks.iter().map(|b| (b.kind.label().to_string(), b.dim())).collect();
    v.sort();
    Ok(v)
}

fn profile_assertion(space: &QuadSpace, g: &FqMatrix, expected: &[(&str, usize)]) -> Result<Assertion> {
    let got = block_profile(space, g)?;
    let mut want: Vec<(String, usize)> = expected.iter().map(|(s, d)| (s.to_string(), *d)).collect();
    want.sort();
    Ok(Assertion::new("block types", got == want, format!("{got:?}")))
}

fn inverts(g: &FqMatrix, x: &FqMatrix, f: &Field) -> Result<bool> {
    Ok(x.mul(g, f) == g.inverse(f)?.mul(x, f))
}

fn minus_identity(f: &Field, n: usize) -> FqMatrix {
    FqMatrix::scalar(n, f.neg(Fq::ONE))
}

/// Dimension of the −1-eigenspace of x and the form restricted to it.
pub fn minus_eigenspace(space: &QuadSpace, x: &FqMatrix) -> Result<(usize, Option<FormType>)> {
    let f = space.field();
    let n = space.dim();
    let basis = x.add(&FqMatrix::identity(n), f).kernel(f);
    if basis.is_empty() {
        return Ok((0, None));
    }
    let ty = space.restrict(&basis)?.form_type()?;
    Ok((basis.len(), Some(ty)))
}

/// Weak reality modulo ±I, decided by search.
fn weakly_real_assertion(space: &QuadSpace, g: &FqMatrix, opts: &SearchOptions) -> Result<Assertion> {
    let name = "weakly real mod Z";
    let spec = GroupSpec::new(space.clone(), GroupKind::POmega)?;
    match reality::decide_reality(&spec, g, true, opts) {
        Ok(v) => Ok(Assertion::new(
            name,
            v.is_weakly_real() && v.verify(&spec, g)?,
            format!("real {}, strongly real {}, {} candidate columns", v.is_real, v.is_strongly_real, v.search_cost),
        )),
        Err(e @ Error::SearchTooLarge { .. }) => Ok(skipped(name, &e)),
        Err(e) => Err(e),
    }
}

/// Claims about u run over all of its inverting isometries and its centralizer.
fn u_claims(space: &QuadSpace, u: &FqMatrix, cap: u64) -> Result<Vec<Assertion>> {
    let f = space.field();
    let mut out = Vec::new();

    let name = "centralizer in Omega";
    let mut count = 0u64;
    let mut outside = 0u64;
    match reality::for_each_intertwining_isometry(space, u, u, cap, |x| {
        count += 1;
        if !ogroup::member(space, x, GroupKind::Omega)? {
            outside += 1;
        }
        Ok(false)
    }) {
        Ok(_) => out.push(Assertion::new(name, outside == 0, format!("{count} centralizing isometries, {outside} outside Omega"))),
        Err(e @ Error::SearchTooLarge { .. }) => out.push(skipped(name, &e)),
        Err(e) => return Err(e),
    }

    let minus = minus_identity(f, space.dim());
    let mut in_so = 0u64;
    let mut so_in_omega = 0u64;
    let mut square_minus = 0u64;
    match reality::for_each_inverting_isometry(space, u, 1, cap, |x| {
        if ogroup::member(space, x, GroupKind::SO)? {
            in_so += 1;
            if ogroup::member(space, x, GroupKind::Omega)? {
                so_in_omega += 1;
            }
        }
        if x.mul(x, f) == minus {
            square_minus += 1;
        }
        Ok(false)
    }) {
        Ok(_) => {
            out.push(Assertion::new(
                "inverters in SO lie outside Omega",
                in_so > 0 && so_in_omega == 0,
                format!("{in_so} inverting elements of SO, {so_in_omega} in Omega"),
            ));
            out.push(Assertion::new("no inverter squares to -I", square_minus == 0, format!("{square_minus} found")));
        }
        Err(e @ Error::SearchTooLarge { .. }) => {
            out.push(skipped("inverters in SO lie outside Omega", &e));
            out.push(skipped("no inverter squares to -I", &e));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

pub fn build_u(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = u_space(&f)?;
    let u = u_matrix(&f);
    let lin = FqPoly::linear(&f, Fq::ONE);
    let mut assertions = vec![
        form_assertion(&space, FormType::Split),
        membership(&space, &u, GroupKind::Omega)?,
        divisor_assertion(&f, &u, vec![(lin.clone(), 2), (lin, 2)]),
    ];
    assertions.extend(u_claims(&space, &u, opts.cap)?);
    Ok(NamedConstruction { name: "u".into(), space, matrix: u, kind: GroupKind::Omega, assertions })
}

pub fn build_s0(q: u64) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = u_space(&f)?;
    let s0 = s0_matrix(&f);
    let u = u_matrix(&f);
    let mut assertions = vec![
        membership(&space, &s0, GroupKind::SO)?,
        Assertion::new("outside Omega", !ogroup::member(&space, &s0, GroupKind::Omega)?, "s0 is in SO but not in Omega"),
        Assertion::new("inverts u", inverts(&u, &s0, &f)?, "s0 u s0^-1 = u^-1"),
        Assertion::new("involution", s0.mul(&s0, &f).is_identity(), "s0^2 = I"),
    ];
    let basis: Vec<Vector> = vec![
        vec![Fq::ONE, Fq::ZERO, f.neg(Fq::ONE), Fq::ZERO],
        vec![Fq::ZERO, Fq::ONE, Fq::ZERO, f.neg(Fq::ONE)],
    ];
    let eig = space.restrict(&basis)?;
    let m2 = f.from_int(-2);
    let want = FqMatrix::from_data(2, 2, vec![Fq::ZERO, m2, m2, Fq::ZERO]);
    assertions.push(Assertion::new(
        "-1-eigenspace form",
        eig.gram() == &want && eig.form_type()? == FormType::Split && minus_eigenspace(&space, &s0)? == (2, Some(FormType::Split)),
        "Gram [[0,-2],[-2,0]] on (1,0,-1,0), (0,1,0,-1); split",
    ));
    Ok(NamedConstruction { name: "s0".into(), space, matrix: s0, kind: GroupKind::SO, assertions })
}

/// An element of SO(2) \ Ω(2) for the identity Gram matrix.
fn outer_rotation(f: &Field) -> Result<FqMatrix> {
    let space = QuadSpace::from_gram(f, FqMatrix::identity(2))?;
    for a in f.elements() {
        for b in f.elements() {
            let x = FqMatrix::from_data(2, 2, vec![a, f.neg(b), b, a]);
            if space.is_isometry(&x) && ogroup::member(&space, &x, GroupKind::SO)? && !ogroup::member(&space, &x, GroupKind::Omega)? {
                return Ok(x);
            }
        }
    }
    Err(Error::WrongAmbient("SO(2) has no element outside Omega".into()))
}

pub fn build_h(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = h_space(&f)?;
    let h = h_matrix(&f);
    let lin = FqPoly::linear(&f, Fq::ONE);
    let plus = FqPoly::linear(&f, f.neg(Fq::ONE));
    let mut assertions = vec![
        form_assertion(&space, FormType::NonSplit),
        membership(&space, &h, GroupKind::Omega)?,
        divisor_assertion(&f, &h, vec![(lin.clone(), 2), (lin, 2), (plus.clone(), 1), (plus, 1)]),
        profile_assertion(&space, &h, &[("1-", 4), ("2+", 1), ("2+", 1)])?,
    ];
    let x = FqMatrix::block_diag(&[&s0_matrix(&f), &outer_rotation(&f)?]);
    assertions.push(Assertion::new(
        "real in Omega",
        ogroup::member(&space, &x, GroupKind::Omega)? && inverts(&h, &x, &f)?,
        "diag(s0, x0) with x0 in SO(2) outside Omega inverts h",
    ));
    assertions.push(weakly_real_assertion(&space, &h, opts)?);
    Ok(NamedConstruction { name: "h".into(), space, matrix: h, kind: GroupKind::Omega, assertions })
}

/// Census of the involutions of SO(6) inverting u₁.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionFamilies {
    pub total: u64,
    pub in_omega: u64,
    /// −1-eigenspace of dimension 2 with a non-split form.
    pub two_dim_nonsplit: u64,
    /// −1-eigenspace of dimension 4 with a split form.
    pub four_dim_split: u64,
    pub other: u64,
}

pub fn u1_involutions(space: &QuadSpace, u1: &FqMatrix, cap: u64) -> Result<InvolutionFamilies> {
    let f = space.field();
    let mut fam = InvolutionFamilies::default();
    reality::for_each_inverting_isometry(space, u1, 1, cap, |x| {
        if !x.mul(x, f).is_identity() || !ogroup::member(space, x, GroupKind::SO)? {
            return Ok(false);
        }
        fam.total += 1;
        if ogroup::member(space, x, GroupKind::Omega)? {
            fam.in_omega += 1;
        }
        match minus_eigenspace(space, x)? {
            (2, Some(FormType::NonSplit)) => fam.two_dim_nonsplit += 1,
            (4, Some(FormType::Split)) => fam.four_dim_split += 1,
            _ => fam.other += 1,
        }
        Ok(false)
    })?;
    Ok(fam)
}

/// First element of SO \ Ω satisfying xa = bx.
fn outer_intertwiner(space: &QuadSpace, a: &FqMatrix, b: &FqMatrix, cap: u64) -> Result<Option<FqMatrix>> {
    let mut found = None;
    reality::for_each_intertwining_isometry(space, a, b, cap, |x| {
        if ogroup::member(space, x, GroupKind::SO)? && !ogroup::member(space, x, GroupKind::Omega)? {
            found = Some(x.clone());
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

pub fn build_u1(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = u1_space(&f)?;
    let u1 = u1_matrix(&f);
    let lin = FqPoly::linear(&f, Fq::ONE);
    let mut assertions = vec![
        Assertion::new("2 gamma + 1 = 0", f.add(f.add(gamma(&f), gamma(&f)), Fq::ONE).is_zero(), "gamma = (p-1)/2"),
        form_assertion(&space, FormType::NonSplit),
        membership(&space, &u1, GroupKind::Omega)?,
        divisor_assertion(&f, &u1, vec![(lin.clone(), 3), (lin, 3)]),
    ];
    match u1_involutions(&space, &u1, opts.cap) {
        Ok(fam) => {
            assertions.push(Assertion::new(
                "inverting involutions in Omega",
                fam.total > 0 && fam.in_omega == fam.total,
                format!("{} involutions of SO invert u1, {} in Omega", fam.total, fam.in_omega),
            ));
            assertions.push(Assertion::new(
                "involution families",
                fam.other == 0 && fam.two_dim_nonsplit > 0 && fam.four_dim_split > 0,
                format!(
                    "{} with 2-dim non-split -1-eigenspace, {} with 4-dim split, {} other",
                    fam.two_dim_nonsplit, fam.four_dim_split, fam.other
                ),
            ));
        }
        Err(e @ Error::SearchTooLarge { .. }) => {
            assertions.push(skipped("inverting involutions in Omega", &e));
            assertions.push(skipped("involution families", &e));
        }
        Err(e) => return Err(e),
    }
    let name = "centralizer meets SO outside Omega";
    match outer_intertwiner(&space, &u1, &u1, opts.cap) {
        Ok(c) => assertions.push(Assertion::new(name, c.is_some(), "an element of SO \\ Omega commutes with u1")),
        Err(e @ Error::SearchTooLarge { .. }) => assertions.push(skipped(name, &e)),
        Err(e) => return Err(e),
    }
    Ok(NamedConstruction { name: "u1".into(), space, matrix: u1, kind: GroupKind::Omega, assertions })
}

pub fn build_h0(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = h0_space(&f)?;
    let h0 = h0_matrix(&f);
    let lin = FqPoly::linear(&f, Fq::ONE);
    let plus = FqPoly::linear(&f, f.neg(Fq::ONE));
    let mut assertions = vec![
        form_assertion(&space, FormType::NonSplit),
        membership(&space, &h0, GroupKind::Omega)?,
        divisor_assertion(&f, &h0, vec![(lin.clone(), 3), (lin, 3), (plus.clone(), 2), (plus, 2)]),
        profile_assertion(&space, &h0, &[("2-", 3), ("2-", 3), ("1+", 4)])?,
    ];
    let u1 = u1_matrix(&f);
    let name = "real in Omega";
    let u1_space = u1_space(&f)?;
    match outer_intertwiner(&u1_space, &u1, &u1.inverse(&f)?, opts.cap) {
        Ok(Some(y1)) => {
            let x = FqMatrix::block_diag(&[&y1, &s0_matrix(&f)]);
            assertions.push(Assertion::new(
                name,
                ogroup::member(&space, &x, GroupKind::Omega)? && inverts(&h0, &x, &f)?,
                "diag(y1, s0) with y1 in SO(6) outside Omega inverts h0",
            ));
        }
        Ok(None) => assertions.push(Assertion::new(name, false, "no element of SO(6) outside Omega inverts u1")),
        Err(e @ Error::SearchTooLarge { .. }) => assertions.push(skipped(name, &e)),
        Err(e) => return Err(e),
    }
    assertions.push(weakly_real_assertion(&space, &h0, opts)?);
    Ok(NamedConstruction { name: "h0".into(), space, matrix: h0, kind: GroupKind::Omega, assertions })
}

/// Companion matrix of a monic polynomial, with the negated coefficients in the last column.
pub fn companion(f: &Field, p: &FqPoly) -> FqMatrix {
    let d = p.degree();
    let mut m = FqMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Fq::ONE;
    }
    for i in 0..d {
        m[(i, d - 1)] = f.neg(p.coeff(i));
    }
    m
}

/// Deterministic sequence of invertible 4×4 conjugators: the identity,
/// then the elementary matrices I + cE_ij.
fn conjugators(f: &Field) -> impl Iterator<Item = FqMatrix> + '_ {
    let mut out = vec![FqMatrix::identity(4)];
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            for c in f.elements().skip(1) {
                let mut m = FqMatrix::identity(4);
                m[(i, j)] = c;
                out.push(m);
            }
        }
    }
    out.into_iter()
}

/// η = diag(C, C⁻ᵀ) in Ω⁺(8,q) with C a conjugate of the companion matrix
/// of (t² + 1)²; also returns the number of conjugators tried.
pub fn eta_matrix(f: &Field) -> Result<(FqMatrix, usize)> {
    let space = eta_space(f)?;
    let p = FqPoly::from_ints(f, &[1, 0, 1]).pow(2, f);
    let c = companion(f, &p);
    for (k, pm) in conjugators(f).enumerate() {
        let ck = pm.mul(&c, f).mul(&pm.inverse(f)?, f);
        let eta = FqMatrix::block_diag(&[&ck, &ck.inverse(f)?.transpose()]);
        if ogroup::member(&space, &eta, GroupKind::Omega)? {
            return Ok((eta, k + 1));
        }
    }
    Err(Error::EtaConstructionFailed)
}

pub fn build_eta(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = eta_space(&f)?;
    let (eta, tries) = eta_matrix(&f)?;
    let quad = FqPoly::from_ints(&f, &[1, 0, 1]);
    let mut assertions = vec![
        Assertion::new("attempts", true, format!("{tries} conjugator(s) tried")),
        form_assertion(&space, FormType::Split),
        membership(&space, &eta, GroupKind::Omega)?,
        Assertion::new("determinant", eta.det(&f) == Fq::ONE, "det = 1"),
        divisor_assertion(&f, &eta, vec![(quad.clone(), 2), (quad, 2)]),
    ];
    let sq_poly = eta.mul(&eta, &f).char_poly(&f);
    let minus_only = sq_poly == FqPoly::linear(&f, f.neg(Fq::ONE)).pow(8, &f);
    assertions.push(Assertion::new("square has eigenvalue -1 only", minus_only, sq_poly.display(&f)));
    let name = "centralizer in Omega";
    let mut count = 0u64;
    let mut outside = 0u64;
    match reality::for_each_intertwining_isometry(&space, &eta, &eta, opts.cap, |x| {
        count += 1;
        if !ogroup::member(&space, x, GroupKind::Omega)? {
            outside += 1;
        }
        Ok(false)
    }) {
        Ok(_) => assertions.push(Assertion::new(name, outside == 0, format!("{count} centralizing isometries, {outside} outside Omega"))),
        Err(e @ Error::SearchTooLarge { .. }) => assertions.push(skipped(name, &e)),
        Err(e) => return Err(e),
    }
    Ok(NamedConstruction { name: "eta".into(), space, matrix: eta, kind: GroupKind::Omega, assertions })
}

/// Cap on the direct reality search over a block sum with η factors.
pub const DIRECT_ATTEMPT_CAP: u64 = 2_000_000;

/// The element of Ω⁻(4m+2, q): h ⊕ η^{⊕l} when 4m+2 = 8l+6, and
/// h₀ ⊕ η^{⊕l} when 4m+2 = 8l+10.
pub fn build_weakly_real_family(m: usize, q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    if m == 0 {
        return Err(Error::InvalidConfig("m must be at least 1".into()));
    }
    let (base, l) = if m % 2 == 1 { (build_h(q, opts)?, (m - 1) / 2) } else { (build_h0(q, opts)?, (m - 2) / 2) };
    let name = if m % 2 == 1 { "g1" } else { "g0" };
    if l == 0 {
        let mut c = base;
        c.name = name.into();
        return Ok(c);
    }
    let eta = build_eta(q, opts)?;
    let mut space = base.space.clone();
    let mut blocks = vec![base.matrix.clone()];
    for _ in 0..l {
        space = space.direct_sum(&eta.space)?;
        blocks.push(eta.matrix.clone());
    }
    let refs: Vec<&FqMatrix> = blocks.iter().collect();
    let g = FqMatrix::block_diag(&refs);
    let mut assertions = vec![form_assertion(&space, FormType::NonSplit), membership(&space, &g, GroupKind::Omega)?];
    let common = base.matrix.char_poly(&f).gcd(&eta.matrix.char_poly(&f), &f);
    assertions.push(Assertion::new("disjoint eigenvalues", common.degree() == 0, "char polys of the parts are coprime"));
    let direct_opts = SearchOptions { cap: opts.cap.min(DIRECT_ATTEMPT_CAP), ..*opts };
    let direct = weakly_real_assertion(&space, &g, &direct_opts)?;
    if direct.status == Status::Skipped {
        let parts_hold = [
            base.assertion("weakly real mod Z"),
            eta.assertion("centralizer in Omega"),
            eta.assertion("membership"),
        ]
        .iter()
        .all(|a| a.map(|a| a.status == Status::Verified).unwrap_or(false));
        assertions.push(Assertion {
            name: "weakly real mod Z".into(),
            status: if parts_hold { Status::PaperArgued } else { Status::Failed },
            detail: format!("{}; components: {} weakly real mod Z, eta centralizer in Omega", direct.detail, base.name),
        });
    } else {
        assertions.push(direct);
    }
    Ok(NamedConstruction { name: name.into(), space, matrix: g, kind: GroupKind::Omega, assertions })
}

/// First element of Ω⁺(4,q) on the J_4 space whose only elementary divisor
/// is (t² + 1)², with the check that it is not real in Ω⁺(4,q).
pub fn build_nonreal_control(q: u64, opts: &SearchOptions) -> Result<NamedConstruction> {
    let f = field_3_mod_4(q)?;
    let space = u_space(&f)?;
    let quad = FqPoly::from_ints(&f, &[1, 0, 1]);
    let group = ogroup::enumerate(&space, GroupKind::Omega, 1 << 24)?;
    let g = (0..group.len())
        .map(|i| group.element(i))
        .find(|g| g.elementary_divisors(&f) == vec![(quad.clone(), 2)])
        .cloned()
        .ok_or_else(|| Error::WrongAmbient("no element with divisor (t^2+1)^2".into()))?;
    let spec = GroupSpec::new(space.clone(), GroupKind::Omega)?;
    let v = reality::decide_reality(&spec, &g, false, opts)?;
    let assertions = vec![
        membership(&space, &g, GroupKind::Omega)?,
        Assertion::new("not real", !v.is_real, format!("{} candidate columns", v.search_cost)),
    ];
    Ok(NamedConstruction { name: "nonreal-control".into(), space, matrix: g, kind: GroupKind::Omega, assertions })
}

/// Builds a construction by its command-line name.
pub fn build_named(name: &str, q: u64, m: Option<usize>, opts: &SearchOptions) -> Result<NamedConstruction> {
    match name {
        "u" => build_u(q, opts),
        "s0" => build_s0(q),
        "h" => build_h(q, opts),
        "u1" => build_u1(q, opts),
        "h0" => build_h0(q, opts),
        "eta" => build_eta(q, opts),
        "g-family" => build_weakly_real_family(m.ok_or_else(|| Error::InvalidConfig("g-family needs m".into()))?, q, opts),
        "nonreal-control" => build_nonreal_control(q, opts),
        other => Err(Error::InvalidConfig(format!("unknown construction {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_class_is_checked() {
        assert_eq!(build_s0(5).unwrap_err(), Error::WrongFieldClass(5));
        assert!(build_s0(3).unwrap().all_hold());
    }

    #[test]
    fn companion_has_its_polynomial() {
        let f = Field::new(3).unwrap();
        let p = FqPoly::from_ints(&f, &[1, 0, 1]).pow(2, &f);
        assert_eq!(companion(&f, &p).char_poly(&f), p);
    }
}
