//! Real, strongly real and weakly real elements.
//!
//! An element g of G is real when some x ∈ G satisfies xgx⁻¹ = g⁻¹, and
//! strongly real when such an x can be chosen with x² = 1. Read modulo
//! Z = {±I}, the target may also be −g⁻¹ and x² may be −I.
//!
//! Every x with xg = ±g⁻¹x lies in the twisted centralizer, a linear space
//! of matrices. The decider enumerates its isometries column by column:
//! the basis is echelonized on column-major entries, so fixing the
//! coefficients whose pivots lie in the first j columns fixes the first j
//! columns of x, and the Gram conditions on those columns prune the tree.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{vec_ops, Field, Fq, FqMatrix, FqPoly, Vector};
use crate::decomp;
use crate::error::{Error, Result};
use crate::forms::{FormType, QuadSpace};
use crate::group::MatrixGroup;
use crate::ogroup::{self, GroupKind};

/// Default bound on candidate columns evaluated by one decision.
pub const DEFAULT_CAP: u64 = 200_000_000;

/// A lattice member over a fixed quadratic space.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub space: QuadSpace,
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn new(space: QuadSpace, kind: GroupKind) -> Result<GroupSpec> {
        if !space.field().is_odd() && matches!(kind, GroupKind::K | GroupKind::T) {
            return Err(Error::WrongAmbient("K and T are defined for odd q only".into()));
        }
        if !space.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        Ok(GroupSpec { space, kind })
    }

    pub fn standard(q: u64, n: usize, ty: FormType, kind: GroupKind) -> Result<GroupSpec> {
        let f = Field::new(q)?;
        GroupSpec::new(QuadSpace::standard(&f, n, ty)?, kind)
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn is_projective(&self) -> bool {
        self.kind == GroupKind::POmega
    }

    pub fn contains(&self, g: &FqMatrix) -> Result<bool> {
        if g.rows() != self.dim() || g.cols() != self.dim() || !self.space.is_isometry(g) {
            return Ok(false);
        }
        if self.kind == GroupKind::O {
            return Ok(true);
        }
        ogroup::member(&self.space, g, self.kind)
    }

    /// Name such as `Omega-(6,3)`; the sign is omitted in odd dimension.
    pub fn label(&self) -> String {
        let n = self.dim();
        let q = self.field().q();
        let sign = if n % 2 == 1 {
            ""
        } else {
            self.space.form_type().map(|t| t.symbol()).unwrap_or("?")
        };
        format!("{}{}({},{})", self.kind.name(), sign, n, q)
    }

    pub fn order(&self) -> Result<u128> {
        ogroup::group_order(&self.space, self.kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Bound on evaluated candidate columns, summed over both sign branches.
    pub cap: u64,
    /// Worker threads; results other than the choice of certificate do not depend on it.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: DEFAULT_CAP, threads: 1 }
    }
}

/// Solutions X of Xg = sign · g⁻¹X.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistedCentralizerSpace {
    pub sign: i32,
    pub basis: Vec<FqMatrix>,
}

impl TwistedCentralizerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of X ↦ Xg − sign · g⁻¹X on n×n matrices.
pub fn twisted_centralizer(field: &Field, g: &FqMatrix, sign: i32) -> Result<TwistedCentralizerSpace> {
    let f = field;
    let ginv = g.inverse(f)?;
    let target = if sign >= 0 { ginv } else { ginv.neg(f) };
    Ok(TwistedCentralizerSpace { sign, basis: intertwiner_space(f, g, &target) })
}

/// Basis of the solutions X of Xa = bX.
pub fn intertwiner_space(field: &Field, a: &FqMatrix, b: &FqMatrix) -> Vec<FqMatrix> {
    let f = field;
    let n = a.rows();
    // unknown X[r][c] sits at c*n + r
    let mut sys = FqMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let eq = j * n + i;
            for l in 0..n {
                let x = a[(l, j)];
                if !x.is_zero() {
                    let u = l * n + i;
                    sys[(eq, u)] = f.add(sys[(eq, u)], x);
                }
                let y = b[(i, l)];
                if !y.is_zero() {
                    let u = j * n + l;
                    sys[(eq, u)] = f.sub(sys[(eq, u)], y);
                }
            }
        }
    }
    sys.kernel(f).into_iter().map(|v| unflatten(n, &v)).collect()
}

fn unflatten(n: usize, v: &[Fq]) -> FqMatrix {
    let mut m = FqMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            m[(r, c)] = v[c * n + r];
        }
    }
    m
}

fn flatten(m: &FqMatrix) -> Vector {
    let n = m.rows();
    (0..n * n).map(|k| m[(k % n, k / n)]).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealityVerdict {
    pub projective: bool,
    pub is_real: bool,
    pub is_strongly_real: bool,
    /// x ∈ G with xgx⁻¹ = certificate_sign · g⁻¹.
    pub certificate: Option<FqMatrix>,
    pub certificate_sign: Option<i32>,
    /// x ∈ G inverting g (up to sign when projective) with x² = I, or x² = ±I when projective.
    pub involution: Option<FqMatrix>,
    pub involution_sign: Option<i32>,
    /// Candidate columns evaluated.
    pub search_cost: u64,
    /// (sign, dimension) of each twisted centralizer searched.
    pub twisted_dims: Vec<(i32, usize)>,
    /// False when several workers raced for the certificate.
    pub canonical: bool,
}

impl RealityVerdict {
    pub fn is_weakly_real(&self) -> bool {
        self.is_real && !self.is_strongly_real
    }

    /// Re-checks both certificates by multiplication and membership.
    pub fn verify(&self, spec: &GroupSpec, g: &FqMatrix) -> Result<bool> {
        let f = spec.field();
        let n = spec.dim();
        let ginv = g.inverse(f)?;
        let check = |x: &FqMatrix, sign: i32, involution: bool| -> Result<bool> {
            if !spec.contains(x)? {
                return Ok(false);
            }
            let target = if sign >= 0 { ginv.clone() } else { ginv.neg(f) };
            if x.mul(g, f) != target.mul(x, f) {
                return Ok(false);
            }
            if sign < 0 && !self.projective {
                return Ok(false);
            }
            if involution {
                let sq = x.mul(x, f);
                let minus = FqMatrix::scalar(n, f.neg(Fq::ONE));
                return Ok(sq.is_identity() || (self.projective && sq == minus));
            }
            Ok(true)
        };
        if self.is_real != self.certificate.is_some() || self.is_strongly_real != self.involution.is_some() {
            return Ok(false);
        }
        if let Some(x) = &self.certificate {
            if !check(x, self.certificate_sign.unwrap_or(1), false)? {
                return Ok(false);
            }
        }
        if let Some(x) = &self.involution {
            if !check(x, self.involution_sign.unwrap_or(1), true)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Default)]
struct Found {
    real: Option<FqMatrix>,
    strong: Option<FqMatrix>,
}

/// Receives each isometry of the searched space; returning true stops the search.
type Sink<'s> = dyn FnMut(FqMatrix) -> Result<bool> + 's;

struct Searcher<'a> {
    space: &'a QuadSpace,
    n: usize,
    d: usize,
    /// cols[i][j]: column j of basis element i
    cols: Vec<Vec<Vector>>,
    /// basis indices with pivot in column j are start[j]..start[j+1]
    start: Vec<usize>,
    q_diag: Vec<Fq>,
    cap: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Searcher<'_> {
    fn new<'a>(space: &'a QuadSpace, tc: &TwistedCentralizerSpace, cap: u64, nodes: &'a AtomicU64, stop: &'a AtomicBool) -> Searcher<'a> {
        let f = space.field();
        let n = space.dim();
        let mut basis = Vec::new();
        let mut start = vec![0; n + 1];
        if tc.dim() > 0 {
            let rows: Vec<Vector> = tc.basis.iter().map(flatten).collect();
            let (r, pivots) = FqMatrix::from_rows(&rows).rref(f);
            for i in 0..pivots.len() {
                basis.push(unflatten(n, &r.row(i)));
            }
            for j in 0..=n {
                start[j] = pivots.iter().filter(|&&p| p < j * n).count();
            }
        }
        let cols = basis.iter().map(|m: &FqMatrix| (0..n).map(|j| m.col(j)).collect()).collect();
        let q_diag = (0..n).map(|j| space.q_value(&vec_ops::unit(n, j))).collect();
        Searcher { space, n, d: basis.len(), cols, start, q_diag, cap, nodes, stop }
    }

    fn dfs(&self, j: usize, coeffs: &mut [Fq], xcols: &mut Vec<Vector>, sink: &mut Sink<'_>) -> Result<()> {
        if self.stop.load(Ordering::Relaxed) {
            return Ok(());
        }
        if j == self.n {
            if sink(FqMatrix::from_cols(self.n, xcols))? {
                self.stop.store(true, Ordering::Relaxed);
            }
            return Ok(());
        }
        let base = self.base_column(j, coeffs);
        let range = self.start[j]..self.start[j + 1];
        self.for_each_assignment(j, range, coeffs, &base, xcols, sink, None)
    }

    fn base_column(&self, j: usize, coeffs: &[Fq]) -> Vector {
        let f = self.space.field();
        let mut base = vec![Fq::ZERO; self.n];
        for i in 0..self.start[j] {
            if !coeffs[i].is_zero() {
                base = vec_ops::axpy(&base, coeffs[i], &self.cols[i][j], f);
            }
        }
        base
    }

    /// Runs through the assignments of the coefficients in `range`, in
    /// lexicographic order; `part` = (worker, workers) keeps every
    /// `workers`-th assignment.
    #[allow(clippy::too_many_arguments)]
    fn for_each_assignment(
        &self,
        j: usize,
        range: std::ops::Range<usize>,
        coeffs: &mut [Fq],
        base: &[Fq],
        xcols: &mut Vec<Vector>,
        sink: &mut Sink<'_>,
        part: Option<(usize, usize)>,
    ) -> Result<()> {
        let f = self.space.field();
        let q = f.q() as u64;
        let total = q.pow(range.len() as u32);
        for idx in 0..total {
            if let Some((w, ws)) = part {
                if idx as usize % ws != w {
                    continue;
                }
            }
            if self.stop.load(Ordering::Relaxed) {
                return Ok(());
            }
            let mut rest = idx;
            for i in range.clone().rev() {
                coeffs[i] = Fq((rest % q) as u32);
                rest /= q;
            }
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
                return Err(Error::SearchTooLarge { dim: self.d, cap: self.cap });
            }
            let mut col = base.to_vec();
            for i in range.clone() {
                if !coeffs[i].is_zero() {
                    col = vec_ops::axpy(&col, coeffs[i], &self.cols[i][j], f);
                }
            }
            if !self.column_fits(j, &col, xcols) {
                continue;
            }
            xcols.push(col);
            let r = self.dfs(j + 1, coeffs, xcols, sink);
            xcols.pop();
            r?;
        }
        for i in range {
            coeffs[i] = Fq::ZERO;
        }
        Ok(())
    }

    fn column_fits(&self, j: usize, col: &[Fq], xcols: &[Vector]) -> bool {
        let s = self.space;
        if s.q_value(col) != self.q_diag[j] {
            return false;
        }
        let gram = s.gram();
        xcols.iter().enumerate().all(|(a, xa)| s.bilinear(xa, col) == gram[(a, j)])
    }

    fn run_sequential(&self, sink: &mut Sink<'_>) -> Result<()> {
        let mut coeffs = vec![Fq::ZERO; self.d];
        self.dfs(0, &mut coeffs, &mut Vec::new(), sink)
    }

    /// Splits the assignments of the first column among workers, each with
    /// its own sink.
    fn run_parallel<'m, T: Send>(
        &self,
        threads: usize,
        make: impl Fn() -> (T, Box<dyn FnMut(FqMatrix, &mut T) -> Result<bool> + Send + 'm>) + Sync,
    ) -> Result<Vec<T>> {
        let n = self.n;
        let results: Mutex<Vec<(usize, Result<T>)>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for w in 0..threads {
                let results = &results;
                let make = &make;
                scope.spawn(move || {
                    let (mut state, mut visit) = make();
                    let mut coeffs = vec![Fq::ZERO; self.d];
                    let base = vec![Fq::ZERO; n];
                    let r = {
                        let mut sink = |x: FqMatrix| visit(x, &mut state);
                        self.for_each_assignment(0, self.start[0]..self.start[1], &mut coeffs, &base, &mut Vec::new(), &mut sink, Some((w, threads)))
                    };
                    results.lock().expect("no worker panics").push((w, r.map(|_| state)));
                });
            }
        });
        let mut all = results.into_inner().expect("no worker panics");
        all.sort_by_key(|(w, _)| *w);
        all.into_iter().map(|(_, r)| r).collect()
    }
}

/// Calls `visit` on every isometry x of `space` with xg = sign · g⁻¹x, in
/// lexicographic order of coefficient vectors, until it returns true.
/// Returns the number of candidate columns evaluated.
pub fn for_each_inverting_isometry(
    space: &QuadSpace,
    g: &FqMatrix,
    sign: i32,
    cap: u64,
    visit: impl FnMut(&FqMatrix) -> Result<bool>,
) -> Result<u64> {
    let tc = twisted_centralizer(space.field(), g, sign)?;
    search_space(space, &tc, cap, visit)
}

/// Calls `visit` on every isometry x of `space` with xa = bx; with a = b
/// this runs through the centralizer of a in O.
pub fn for_each_intertwining_isometry(
    space: &QuadSpace,
    a: &FqMatrix,
    b: &FqMatrix,
    cap: u64,
    visit: impl FnMut(&FqMatrix) -> Result<bool>,
) -> Result<u64> {
    let tc = TwistedCentralizerSpace { sign: 1, basis: intertwiner_space(space.field(), a, b) };
    search_space(space, &tc, cap, visit)
}

fn search_space(space: &QuadSpace, tc: &TwistedCentralizerSpace, cap: u64, mut visit: impl FnMut(&FqMatrix) -> Result<bool>) -> Result<u64> {
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let searcher = Searcher::new(space, tc, cap, &nodes, &stop);
    searcher.run_sequential(&mut |x| visit(&x))?;
    Ok(nodes.load(Ordering::Relaxed))
}

fn record(spec: &GroupSpec, projective: bool, x: FqMatrix, found: &mut Found) -> Result<bool> {
    let f = spec.field();
    if spec.kind != GroupKind::O && !ogroup::member(&spec.space, &x, spec.kind)? {
        return Ok(false);
    }
    let sq = x.mul(&x, f);
    let strong = sq.is_identity() || (projective && sq == FqMatrix::scalar(spec.dim(), f.neg(Fq::ONE)));
    if found.real.is_none() {
        found.real = Some(x.clone());
    }
    if strong {
        found.strong = Some(x);
    }
    Ok(strong)
}

/// Decides whether g is real and strongly real in G, or modulo {±I} when
/// `projective` is set or G is POmega.
pub fn decide_reality(spec: &GroupSpec, g: &FqMatrix, projective: bool, opts: &SearchOptions) -> Result<RealityVerdict> {
    let f = spec.field();
    let projective = projective || spec.is_projective();
    if !spec.contains(g)? {
        return Err(Error::WrongAmbient(format!("element is not in {}", spec.label())));
    }
    let signs: &[i32] = if projective && f.is_odd() { &[1, -1] } else { &[1] };
    let nodes = AtomicU64::new(0);
    let mut verdict = RealityVerdict {
        projective,
        is_real: false,
        is_strongly_real: false,
        certificate: None,
        certificate_sign: None,
        involution: None,
        involution_sign: None,
        search_cost: 0,
        twisted_dims: Vec::new(),
        canonical: opts.threads <= 1,
    };
    // x = I already works when g² = ±I
    for &sign in signs {
        let s = if sign > 0 { Fq::ONE } else { f.neg(Fq::ONE) };
        if g.mul(g, f) == FqMatrix::scalar(spec.dim(), s) {
            verdict.certificate = Some(FqMatrix::identity(spec.dim()));
            verdict.certificate_sign = Some(sign);
            verdict.involution = verdict.certificate.clone();
            verdict.involution_sign = Some(sign);
            verdict.is_real = true;
            verdict.is_strongly_real = true;
            verdict.canonical = true;
            return Ok(verdict);
        }
    }
    for &sign in signs {
        let tc = twisted_centralizer(f, g, sign)?;
        verdict.twisted_dims.push((sign, tc.dim()));
        let stop = AtomicBool::new(false);
        let searcher = Searcher::new(&spec.space, &tc, opts.cap, &nodes, &stop);
        let found = if opts.threads <= 1 {
            let mut found = Found::default();
            searcher.run_sequential(&mut |x| record(spec, projective, x, &mut found))?;
            found
        } else {
            let parts = searcher.run_parallel(opts.threads, || {
                let visit: Box<dyn FnMut(FqMatrix, &mut Found) -> Result<bool> + Send + '_> =
                    Box::new(move |x, found| record(spec, projective, x, found));
                (Found::default(), visit)
            })?;
            let mut merged = Found::default();
            for p in parts {
                merged.real = merged.real.or(p.real);
                merged.strong = merged.strong.or(p.strong);
            }
            merged
        };
        if verdict.certificate.is_none() {
            if let Some(x) = found.real {
                verdict.certificate = Some(x);
                verdict.certificate_sign = Some(sign);
            }
        }
        if let Some(x) = found.strong {
            verdict.involution = Some(x);
            verdict.involution_sign = Some(sign);
            break;
        }
    }
    verdict.is_real = verdict.certificate.is_some();
    verdict.is_strongly_real = verdict.involution.is_some();
    verdict.search_cost = nodes.load(Ordering::Relaxed);
    Ok(verdict)
}

/// Realness in SO(4m+2, q), q odd: g is real exactly when it has an
/// elementary divisor (t ± 1)^e with e odd.
pub fn structural_real_so(space: &QuadSpace, g: &FqMatrix) -> Result<bool> {
    let f = space.field();
    if !f.is_odd() || space.dim() % 4 != 2 {
        return Err(Error::WrongAmbient("structural criterion needs q odd and n ≡ 2 (mod 4)".into()));
    }
    if !ogroup::member(space, g, GroupKind::SO)? {
        return Err(Error::WrongAmbient("element is not in SO".into()));
    }
    let lin = [FqPoly::linear(f, Fq::ONE), FqPoly::linear(f, f.neg(Fq::ONE))];
    Ok(g.elementary_divisors(f).iter().any(|(p, e)| e % 2 == 1 && lin.contains(p)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassInfo {
    pub representative: FqMatrix,
    pub size: usize,
    pub element_order: u64,
    pub real: bool,
    pub strongly_real: bool,
    pub certificate: Option<FqMatrix>,
    pub involution: Option<FqMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassReport {
    pub group: String,
    pub order: usize,
    pub classes: Vec<ClassInfo>,
    pub real_classes: usize,
    pub strongly_real_classes: usize,
    pub weakly_real_classes: usize,
    pub checks: Vec<TheoremCheck>,
}

impl ClassReport {
    pub fn is_real_group(&self) -> bool {
        self.classes.iter().all(|c| c.real)
    }
    pub fn is_strongly_real_group(&self) -> bool {
        self.classes.iter().all(|c| c.strongly_real)
    }
    pub fn real_classes_strongly_real(&self) -> bool {
        self.classes.iter().all(|c| !c.real || c.strongly_real)
    }
    pub fn checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

const CLASS_SEED: u64 = 0xc1a5_5e5;

/// A generating set of an enumerated group, drawn from a fixed seed.
pub fn generators(group: &MatrixGroup) -> Vec<FqMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(CLASS_SEED);
    let mut gens: Vec<FqMatrix> = Vec::new();
    let mut sub = MatrixGroup::closure(group.field(), group.dim(), &[], group.is_projective(), u128::MAX).expect("uncapped");
    while sub.len() < group.len() {
        let x = group.element(rng.gen_range(0..group.len()));
        if !sub.contains(x) {
            gens.push(x.clone());
            sub = MatrixGroup::closure(group.field(), group.dim(), &gens, group.is_projective(), u128::MAX).expect("uncapped");
        }
    }
    gens
}

/// Conjugacy classes as sorted index lists, ordered by smallest member.
pub fn conjugacy_classes(group: &MatrixGroup) -> Vec<Vec<usize>> {
    let f = group.field();
    let gens = generators(group);
    let invs: Vec<FqMatrix> = gens.iter().map(|s| s.inverse(f).expect("invertible")).collect();
    let mut parent: Vec<usize> = (0..group.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..group.len() {
        let x = group.element(i);
        for (s, si) in gens.iter().zip(&invs) {
            let y = s.mul(x, f).mul(si, f);
            let j = group.index_of(&y).expect("closed under conjugation");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..group.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    classes.into_values().collect()
}

/// Order of an element of an enumerated group.
pub fn element_order(group: &MatrixGroup, i: usize) -> u64 {
    let mut k = 1;
    let mut cur = i;
    while cur != 0 {
        cur = group.mul_idx(cur, i);
        k += 1;
    }
    k
}

/// Enumerates G, splits it into conjugacy classes and decides each class on
/// its smallest member. Applicable classification statements are checked
/// against the result.
pub fn census(spec: &GroupSpec, cap: u128, opts: &SearchOptions) -> Result<ClassReport> {
    let group = ogroup::enumerate(&spec.space, spec.kind, cap)?;
    let classes = conjugacy_classes(&group);
    let mut infos = Vec::with_capacity(classes.len());
    for class in &classes {
        let rep = group.element(class[0]).clone();
        let v = decide_reality(spec, &rep, spec.is_projective(), opts)?;
        infos.push(ClassInfo {
            representative: rep,
            size: class.len(),
            element_order: element_order(&group, class[0]),
            real: v.is_real,
            strongly_real: v.is_strongly_real,
            certificate: v.certificate,
            involution: v.involution,
        });
    }
    let real = infos.iter().filter(|c| c.real).count();
    let strong = infos.iter().filter(|c| c.strongly_real).count();
    let mut report = ClassReport {
        group: spec.label(),
        order: group.len(),
        classes: infos,
        real_classes: real,
        strongly_real_classes: strong,
        weakly_real_classes: real - strong,
        checks: Vec::new(),
    };
    report.checks = theorem_checks(spec, &report)?;
    Ok(report)
}

fn check(name: &str, statement: &str, holds: bool) -> TheoremCheck {
    TheoremCheck { name: name.into(), statement: statement.into(), holds }
}

/// Classification statements that apply to the censused group.
pub fn theorem_checks(spec: &GroupSpec, report: &ClassReport) -> Result<Vec<TheoremCheck>> {
    let f = spec.field();
    let n = spec.dim();
    let q = f.q() as u64;
    let mut out = Vec::new();
    let strong = report.is_strongly_real_group();
    let real = report.is_real_group();
    let real_strong = report.real_classes_strongly_real();
    if !f.is_odd() {
        if matches!(spec.kind, GroupKind::Omega | GroupKind::POmega | GroupKind::SO) && n % 4 == 2 {
            out.push(check("char-2 real classes strongly real", "all real classes are strongly real", real_strong));
            let mut agree = true;
            let mut agree_real = true;
            for c in &report.classes {
                let d = decomp::decompose(&spec.space, &c.representative)?;
                let s = decomp::strongly_real_sufficient(&d, &spec.space)?;
                agree &= s.verdict == Some(c.strongly_real);
                if c.real {
                    agree_real &= s.verdict == Some(c.strongly_real);
                }
            }
            out.push(check("char-2 criterion", "strongly real exactly when condition (i) or (ii) holds", agree));
            out.push(check(
                "char-2 criterion on real classes",
                "a real class is strongly real exactly when condition (i) or (ii) holds",
                agree_real,
            ));
        }
        return Ok(out);
    }
    let ty = spec.space.form_type()?;
    let q1 = q % 4 == 1;
    let small_ok = q > 3 || n >= 6;
    match spec.kind {
        GroupKind::O if n >= 2 => out.push(check("O strongly real", "O(n,q) is strongly real", strong)),
        GroupKind::SO if n >= 3 => {
            let expect = n % 4 != 2;
            out.push(check("SO real", "SO(n,q) is real exactly when n ≢ 2 (mod 4)", real == expect));
            out.push(check("SO strongly real", "SO(n,q) is strongly real exactly when it is real", strong == real));
        }
        GroupKind::K if n >= 3 && small_ok && n % 2 == 0 => {
            let plus = ty == FormType::Split;
            let expect = q1 || (plus && n % 4 == 2) || (!plus && n % 4 == 0) || n == 8;
            out.push(check("K strongly real", "K(n,q) strong reality classification", strong == expect));
        }
        GroupKind::Omega | GroupKind::POmega => {
            let omega = spec.kind == GroupKind::Omega;
            if omega && n >= 3 && small_ok {
                let expect = (q1 && n % 4 != 2) || (!q1 && ty == FormType::NonSplit && n % 4 == 0) || n == 8 || n == 9;
                out.push(check("Omega strongly real", "Ω(n,q) strong reality classification", strong == expect));
            }
            if n % 4 == 2 && n >= 6 {
                let easy = (ty == FormType::NonSplit && q1) || (ty == FormType::Split && !q1);
                if omega && easy {
                    out.push(check("easy cases", "all real classes are strongly real", real_strong));
                }
                if ty == FormType::Split && q1 {
                    out.push(check("Omega+ with q ≡ 1 (mod 4)", "all real classes are strongly real", real_strong));
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_twisted_centralizer_is_everything() {
        let f = Field::new(3).unwrap();
        let tc = twisted_centralizer(&f, &FqMatrix::identity(3), 1).unwrap();
        assert_eq!(tc.dim(), 9);
    }

    #[test]
    fn identity_is_strongly_real() {
        let spec = GroupSpec::standard(3, 4, FormType::Split, GroupKind::Omega).unwrap();
        let v = decide_reality(&spec, &FqMatrix::identity(4), false, &SearchOptions::default()).unwrap();
        assert!(v.is_strongly_real && v.is_real);
        assert!(v.verify(&spec, &FqMatrix::identity(4)).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let spec = GroupSpec::standard(3, 4, FormType::Split, GroupKind::O).unwrap();
        let f = spec.field();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = loop {
            let g = ogroup::random_element(&spec.space, GroupKind::O, &mut rng).unwrap();
            if !g.mul(&g, f).is_identity() {
                break g;
            }
        };
        let d = twisted_centralizer(f, &g, 1).unwrap().dim();
        let opts = SearchOptions { cap: 3, threads: 1 };
        assert_eq!(decide_reality(&spec, &g, false, &opts).unwrap_err(), Error::SearchTooLarge { dim: d, cap: 3 });
    }
}
