//! Character tables of enumerated groups by Dixon's method, with
//! Frobenius–Schur and twisted indicators.
//!
//! The class-multiplication coefficients are reduced modulo a prime ℓ ≡ 1
//! (mod exponent); common eigenvectors of the class matrices over F_ℓ give
//! the characters modulo ℓ, and eigenvalue multiplicities lift them to
//! exact values in Z[ζ_e].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Fq, FqMatrix};
use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::ogroup;
use crate::reality::{self, GroupSpec};

/// Default bound on the order of a group whose table is computed.
pub const DEFAULT_TABLE_CAP: u128 = 100_000;

/// Elements of Z[ζ_e], stored as coefficient vectors in the power basis
/// 1, ζ, …, ζ^{φ(e)−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cyc(pub Vec<i64>);

#[derive(Clone, Debug)]
pub struct CycloRing {
    order: usize,
    degree: usize,
    /// ζ^m reduced, for 0 ≤ m < order.
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd] / den[dd];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Integer coefficients of the cyclotomic polynomial Φ_n, constant first.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

impl CycloRing {
    pub fn new(order: usize) -> CycloRing {
        let phi = cyclotomic_poly(order);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ζ and reduce with Φ
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            next[1..degree].copy_from_slice(&cur[..(degree - 1)]);
            for (j, c) in next.iter_mut().enumerate() {
                *c -= top * phi[j];
            }
            cur = next;
        }
        CycloRing { order, degree, powers }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![0; self.degree])
    }

    pub fn int(&self, n: i64) -> Cyc {
        let mut v = vec![0; self.degree];
        v[0] = n;
        Cyc(v)
    }

    pub fn root_power(&self, k: usize) -> Cyc {
        Cyc(self.powers[k % self.order].clone())
    }

    /// Σ a_m ζ^m for a coefficient vector indexed by exponent.
    pub fn from_exponents(&self, a: &[i64]) -> Cyc {
        let mut v = vec![0; self.degree];
        for (m, &c) in a.iter().enumerate() {
            if c != 0 {
                for (x, p) in v.iter_mut().zip(&self.powers[m % self.order]) {
                    *x += c * p;
                }
            }
        }
        Cyc(v)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, a: &Cyc, c: i64) -> Cyc {
        Cyc(a.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut prod = vec![0i64; 2 * self.degree];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.from_exponents(&prod)
    }

    pub fn conj(&self, a: &Cyc) -> Cyc {
        let mut ex = vec![0i64; self.order];
        for (k, &c) in a.0.iter().enumerate() {
            ex[(self.order - k) % self.order] += c;
        }
        self.from_exponents(&ex)
    }

    pub fn as_integer(&self, a: &Cyc) -> Option<i64> {
        a.0[1..].iter().all(|&x| x == 0).then_some(a.0[0])
    }

    /// Text such as `2 + z^3 - z^5`, with z = exp(2πi/e).
    pub fn display(&self, a: &Cyc) -> String {
        let mut parts = Vec::new();
        for (k, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let term = match (c, k) {
                (_, 0) => c.abs().to_string(),
                (1 | -1, _) => mono,
                _ => format!("{}{}", c.abs(), mono),
            };
            parts.push((c < 0, term));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (neg, t)) in parts.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&t);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct CharTable {
    pub label: String,
    pub group: MatrixGroup,
    /// Class index of every group element.
    pub class_of: Vec<usize>,
    /// Element index of each class representative (its smallest member).
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub element_orders: Vec<u64>,
    pub inverse_class: Vec<usize>,
    /// Class of the square of each representative.
    pub square_class: Vec<usize>,
    pub exponent: usize,
    /// Prime used for the modular computation.
    pub prime: u64,
    pub ring: CycloRing,
    /// characters[χ][class]; the trivial character comes first.
    pub characters: Vec<Vec<Cyc>>,
}

/// Serializable form of a table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharTableReport {
    pub group: String,
    pub order: usize,
    pub exponent: usize,
    pub prime: u64,
    pub class_sizes: Vec<usize>,
    pub element_orders: Vec<u64>,
    pub real_classes: usize,
    /// Values as text in z = exp(2πi/exponent).
    pub characters: Vec<Vec<String>>,
    pub degrees: Vec<i64>,
    pub indicators: Vec<i32>,
    pub twisted_indicators: Option<Vec<i32>>,
    pub orthogonality: bool,
    pub involutions: usize,
    pub indicator_degree_sum: i64,
}

impl CharTable {
    pub fn order(&self) -> usize {
        self.group.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn degree(&self, chi: usize) -> i64 {
        self.ring.as_integer(&self.characters[chi][0]).expect("degrees are integers")
    }

    pub fn is_real_valued(&self, chi: usize) -> bool {
        self.characters[chi].iter().all(|v| self.ring.conj(v) == *v)
    }

    pub fn real_valued_count(&self) -> usize {
        (0..self.characters.len()).filter(|&c| self.is_real_valued(c)).count()
    }

    pub fn real_class_count(&self) -> usize {
        (0..self.num_classes()).filter(|&i| self.inverse_class[i] == i).count()
    }

    /// Σ_class |C| χ(rep) conj(ψ(rep)).
    fn inner_sum(&self, chi: &[Cyc], psi: &[Cyc]) -> Cyc {
        let r = &self.ring;
        let mut s = r.zero();
        for i in 0..self.num_classes() {
            let t = r.mul(&chi[i], &r.conj(&psi[i]));
            s = r.add(&s, &r.scale(&t, self.class_sizes[i] as i64));
        }
        s
    }

    /// Row and column orthogonality and Σ χ(1)² = |G|, checked exactly.
    pub fn check_orthogonality(&self) -> bool {
        let r = &self.ring;
        let k = self.num_classes();
        let g = self.order() as i64;
        if self.characters.len() != k {
            return false;
        }
        for a in 0..k {
            for b in a..k {
                let want = if a == b { g } else { 0 };
                if r.as_integer(&self.inner_sum(&self.characters[a], &self.characters[b])) != Some(want) {
                    return false;
                }
            }
        }
        for i in 0..k {
            for j in i..k {
                let mut s = r.zero();
                for chi in &self.characters {
                    s = r.add(&s, &r.mul(&chi[i], &r.conj(&chi[j])));
                }
                let want = if i == j { g / self.class_sizes[i] as i64 } else { 0 };
                if r.as_integer(&s) != Some(want) {
                    return false;
                }
            }
        }
        (0..k).map(|c| self.degree(c).pow(2)).sum::<i64>() == g
    }

    /// ε(χ) = (1/|G|) Σ |C| χ(rep²).
    pub fn fs_indicator(&self, chi: usize) -> Result<i32> {
        let r = &self.ring;
        let mut s = r.zero();
        for i in 0..self.num_classes() {
            s = r.add(&s, &r.scale(&self.characters[chi][self.square_class[i]], self.class_sizes[i] as i64));
        }
        self.normalized_indicator(&s)
    }

    fn normalized_indicator(&self, s: &Cyc) -> Result<i32> {
        let g = self.order() as i64;
        match self.ring.as_integer(s) {
            Some(v) if v % g == 0 && (-1..=1).contains(&(v / g)) => Ok((v / g) as i32),
            _ => Err(Error::CharTable(format!("indicator sum {} is not in {{-1, 0, 1}}·|G|", self.ring.display(s)))),
        }
    }

    pub fn indicators(&self) -> Result<Vec<i32>> {
        (0..self.characters.len()).map(|c| self.fs_indicator(c)).collect()
    }

    /// Number of g ≠ 1 with g² = 1.
    pub fn involution_count(&self) -> usize {
        (1..self.num_classes()).filter(|&i| self.square_class[i] == 0).map(|i| self.class_sizes[i]).sum()
    }

    /// Σ ε(χ) χ(1), which equals 1 + the number of involutions.
    pub fn indicator_degree_sum(&self) -> Result<i64> {
        let eps = self.indicators()?;
        Ok((0..self.characters.len()).map(|c| eps[c] as i64 * self.degree(c)).sum())
    }

    /// Class of an arbitrary matrix of the group.
    pub fn class_of_matrix(&self, m: &FqMatrix) -> Option<usize> {
        self.group.index_of(&self.group.canon(m.clone())).map(|i| self.class_of[i])
    }

    pub fn report(&self, twisted: Option<Vec<i32>>) -> Result<CharTableReport> {
        Ok(CharTableReport {
            group: self.label.clone(),
            order: self.order(),
            exponent: self.exponent,
            prime: self.prime,
            class_sizes: self.class_sizes.clone(),
            element_orders: self.element_orders.clone(),
            real_classes: self.real_class_count(),
            characters: self.characters.iter().map(|c| c.iter().map(|v| self.ring.display(v)).collect()).collect(),
            degrees: (0..self.characters.len()).map(|c| self.degree(c)).collect(),
            indicators: self.indicators()?,
            twisted_indicators: twisted,
            orthogonality: self.check_orthogonality(),
            involutions: self.involution_count(),
            indicator_degree_sum: self.indicator_degree_sum()?,
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime ℓ ≡ 1 (mod e) with ℓ > 2√order and ℓ > 64k², where k
/// is the number of classes.
pub fn splitting_prime(exponent: usize, order: usize, classes: usize) -> u64 {
    let e = exponent as u64;
    let bound = (2 * ((order as f64).sqrt().ceil() as u64) + 1).max(64 * (classes * classes) as u64);
    let mut l = e + 1;
    while l <= bound || !is_prime(l) {
        l += e;
    }
    l
}

/// Table of the group G of `spec`, enumerated up to `cap` elements.
pub fn char_table(spec: &GroupSpec, cap: u128) -> Result<CharTable> {
    let order = spec.order()?;
    if order > cap {
        return Err(Error::GroupTooLarge { order, cap });
    }
    let group = ogroup::enumerate(&spec.space, spec.kind, cap)?;
    char_table_of(group, spec.label())
}

/// Table of an enumerated group.
pub fn char_table_of(group: MatrixGroup, label: String) -> Result<CharTable> {
    let classes = reality::conjugacy_classes(&group);
    let k = classes.len();
    let n = group.len();
    let mut class_of = vec![0usize; n];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }
    let class_reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let class_sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let element_orders: Vec<u64> = class_reps.iter().map(|&i| reality::element_order(&group, i)).collect();
    let exponent = element_orders.iter().fold(1usize, |a, &o| a / gcd(a, o as usize) * o as usize);
    let inverse_class: Vec<usize> = class_reps.iter().map(|&i| class_of[group.inv_idx(i)]).collect();
    let square_class: Vec<usize> = class_reps.iter().map(|&i| class_of[group.mul_idx(i, i)]).collect();

    let prime = splitting_prime(exponent, n, k);
    let fl = Field::new(prime)?;
    // coeff[i][j][m] = #{(x, y) ∈ C_i × C_j : xy = rep_m}
    let mut coeff = vec![vec![vec![0u64; k]; k]; k];
    for (m, &z) in class_reps.iter().enumerate() {
        for x in 0..n {
            let y = group.mul_idx(group.inv_idx(x), z);
            coeff[class_of[x]][class_of[y]][m] += 1;
        }
    }
    let omegas = common_eigenvectors(&fl, &coeff, k)?;

    let modp = |v: i64| fl.from_int(v);
    let mut chars_mod: Vec<Vec<Fq>> = Vec::with_capacity(k);
    for w in &omegas {
        // χ(1)² = |G| / Σ ω_i ω_{i'} / |C_i|
        let mut s = Fq::ZERO;
        for i in 0..k {
            let t = fl.mul(w[i], w[inverse_class[i]]);
            s = fl.add(s, fl.div(t, modp(class_sizes[i] as i64)));
        }
        let d2 = fl.div(modp(n as i64), s);
        let d = (1..=((n as f64).sqrt() as i64 + 1))
            .find(|&d| modp(d * d) == d2)
            .ok_or_else(|| Error::CharTable("no degree fits".into()))?;
        let dm = modp(d);
        chars_mod.push((0..k).map(|i| fl.div(fl.mul(w[i], dm), modp(class_sizes[i] as i64))).collect());
    }

    let ring = CycloRing::new(exponent);
    let prim = fl.primitive_element();
    let z = fl.pow(prim, (prime - 1) / exponent as u64);
    // classes of the powers of each representative
    let power_classes: Vec<Vec<usize>> = class_reps
        .iter()
        .zip(&element_orders)
        .map(|(&i, &o)| {
            let mut out = Vec::with_capacity(o as usize);
            let mut cur = 0;
            for _ in 0..o {
                out.push(class_of[cur]);
                cur = group.mul_idx(cur, i);
            }
            out
        })
        .collect();
    let mut characters = Vec::with_capacity(k);
    for cm in &chars_mod {
        let d = fl_to_int(&fl, cm[0]);
        let mut row = Vec::with_capacity(k);
        for i in 0..k {
            let o = element_orders[i] as usize;
            let step = exponent / o;
            let inv_o = fl.inv(modp(o as i64));
            let mut ex = vec![0i64; exponent];
            for kk in 0..o {
                // multiplicity of ζ_o^kk among the eigenvalues
                let mut s = Fq::ZERO;
                for j in 0..o {
                    let e = (exponent - (step * j * kk) % exponent) % exponent;
                    s = fl.add(s, fl.mul(cm[power_classes[i][j]], fl.pow(z, e as u64)));
                }
                let mult = fl_to_int(&fl, fl.mul(s, inv_o));
                if mult > d {
                    return Err(Error::CharTable(format!("multiplicity {mult} exceeds degree {d}")));
                }
                ex[step * kk] += mult;
            }
            row.push(ring.from_exponents(&ex));
        }
        characters.push(row);
    }
    characters.sort_by(|a, b| {
        let da = ring.as_integer(&a[0]);
        let db = ring.as_integer(&b[0]);
        da.cmp(&db).then_with(|| a.iter().map(|c| &c.0).cmp(b.iter().map(|c| &c.0)))
    });
    // the trivial character has degree 1 and all values 1; put it first
    if let Some(pos) = characters.iter().position(|c| c.iter().all(|v| ring.as_integer(v) == Some(1))) {
        let t = characters.remove(pos);
        characters.insert(0, t);
    }
    let table = CharTable {
        label,
        group,
        class_of,
        class_reps,
        class_sizes,
        element_orders,
        inverse_class,
        square_class,
        exponent,
        prime,
        ring,
        characters,
    };
    Ok(table)
}

/// Residue of a prime-field element as a symmetric integer representative.
fn fl_to_int(f: &Field, a: Fq) -> i64 {
    let p = f.q() as i64;
    let v = a.0 as i64;
    if v > p / 2 {
        v - p
    } else {
        v
    }
}

/// Normalized common eigenvectors ω (ω at the identity class = 1) of the
/// class matrices A_i[j][m] = coeff[i][j][m].
fn common_eigenvectors(fl: &Field, coeff: &[Vec<Vec<u64>>], k: usize) -> Result<Vec<Vec<Fq>>> {
    let p = fl.q() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1c0);
    for _ in 0..64 {
        let c: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        let mut a = FqMatrix::zeros(k, k);
        for (i, ci) in c.iter().enumerate() {
            if *ci == 0 {
                continue;
            }
            for j in 0..k {
                for m in 0..k {
                    let v = (coeff[i][j][m] % p) * ci % p;
                    a[(j, m)] = fl.add(a[(j, m)], Fq(v as u32));
                }
            }
        }
        let factors = a.char_poly(fl).factorize(fl);
        if factors.len() != k || factors.iter().any(|(f, e)| *e != 1 || f.degree() != 1) {
            continue;
        }
        let mut out = Vec::with_capacity(k);
        for (f, _) in &factors {
            let lambda = fl.neg(f.coeff(0));
            let m = a.sub(&FqMatrix::scalar(k, lambda), fl);
            let ker = m.kernel(fl);
            if ker.len() != 1 {
                return Err(Error::CharTable("eigenspace is not a line".into()));
            }
            let v = &ker[0];
            if v[0].is_zero() {
                return Err(Error::CharTable("eigenvector vanishes at the identity".into()));
            }
            let inv = fl.inv(v[0]);
            out.push(v.iter().map(|&x| fl.mul(x, inv)).collect());
        }
        return Ok(out);
    }
    Err(Error::CharTable("class matrices did not split".into()))
}

/// ε_ι(ψ) = (1/|H|) Σ ψ(g · sgs⁻¹) for the automorphism ι = conjugation by s.
pub fn twisted_indicator(table: &CharTable, s: &FqMatrix, psi: usize) -> Result<i32> {
    let counts = twist_counts(table, s)?;
    twisted_from_counts(table, &counts, psi)
}

/// All twisted indicators of a table.
pub fn twisted_indicators(table: &CharTable, s: &FqMatrix) -> Result<Vec<i32>> {
    let counts = twist_counts(table, s)?;
    (0..table.characters.len()).map(|c| twisted_from_counts(table, &counts, c)).collect()
}

fn twisted_from_counts(table: &CharTable, counts: &[usize], psi: usize) -> Result<i32> {
    let r = &table.ring;
    let mut s = r.zero();
    for (i, &c) in counts.iter().enumerate() {
        s = r.add(&s, &r.scale(&table.characters[psi][i], c as i64));
    }
    table.normalized_indicator(&s)
}

/// counts[k] = #{g : g · sgs⁻¹ ∈ C_k}; checks that conjugation by s is an
/// involutory automorphism.
fn twist_counts(table: &CharTable, s: &FqMatrix) -> Result<Vec<usize>> {
    let group = &table.group;
    let f = group.field();
    let sinv = s.inverse(f)?;
    let mut counts = vec![0usize; table.num_classes()];
    let mut image = vec![0usize; group.len()];
    for (i, g) in group.elements().iter().enumerate() {
        let t = group.canon(s.mul(g, f).mul(&sinv, f));
        image[i] = group.index_of(&t).ok_or_else(|| Error::WrongAmbient("s does not normalize the group".into()))?;
    }
    for (i, &j) in image.iter().enumerate() {
        if image[j] != i {
            return Err(Error::NotInvolutory);
        }
        counts[table.class_of[group.mul_idx(i, j)]] += 1;
    }
    Ok(counts)
}

/// One irreducible ψ of H and the constituents of its induction to G.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexTwoCheck {
    pub psi: usize,
    pub induced: Vec<usize>,
    pub eps_psi: i32,
    pub eps_twisted: i32,
    pub eps_constituents: Vec<i32>,
    pub holds: bool,
}

/// For H of index two in G = ⟨H, s⟩ with s² = 1, checks per ψ ∈ Irr(H):
/// ε(χ) = ε(ψ) + ε_ι(ψ) when ψ^G = χ is irreducible, and
/// ε(χ₁) + ε(χ₂) = ε(ψ) + ε_ι(ψ) with ε(χ₁) = ε(χ₂) when ψ^G = χ₁ + χ₂.
pub fn weak_index_two(h: &CharTable, g: &CharTable, s: &FqMatrix) -> Result<Vec<IndexTwoCheck>> {
    if g.order() != 2 * h.order() {
        return Err(Error::WrongAmbient("H must have index 2 in G".into()));
    }
    if !s.mul(s, h.group.field()).is_identity() {
        return Err(Error::NotInvolutory);
    }
    let fuse: Vec<usize> = h
        .class_reps
        .iter()
        .map(|&i| g.class_of_matrix(h.group.element(i)).ok_or_else(|| Error::WrongAmbient("H is not inside G".into())))
        .collect::<Result<_>>()?;
    let r = &h.ring;
    let gr = &g.ring;
    // values of G's characters on H's classes, re-expressed in H's ring
    let lift = |v: &Cyc| -> Result<Cyc> {
        let ex = exponent_form(gr, v);
        let mut out = vec![0i64; h.exponent];
        for (m, c) in ex.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            if (m * h.exponent) % g.exponent != 0 {
                return Err(Error::CharTable("value outside the subgroup's cyclotomic field".into()));
            }
            out[m * h.exponent / g.exponent] += c;
        }
        Ok(r.from_exponents(&out))
    };
    let eps_g = g.indicators()?;
    let twisted = twisted_indicators(h, s)?;
    let mut out = Vec::new();
    for psi in 0..h.characters.len() {
        let mut induced = Vec::new();
        for chi in 0..g.characters.len() {
            let res: Vec<Cyc> = fuse.iter().map(|&c| lift(&g.characters[chi][c])).collect::<Result<_>>()?;
            let m = r.as_integer(&h.inner_sum(&res, &h.characters[psi])).unwrap_or(-1);
            if m % h.order() as i64 != 0 {
                return Err(Error::CharTable("restriction multiplicity is not an integer".into()));
            }
            for _ in 0..m / h.order() as i64 {
                induced.push(chi);
            }
        }
        let eps_psi = h.fs_indicator(psi)?;
        let eps_twisted = twisted[psi];
        let eps_constituents: Vec<i32> = induced.iter().map(|&c| eps_g[c]).collect();
        let holds = match eps_constituents.as_slice() {
            [a] => *a == eps_psi + eps_twisted,
            [a, b] => a == b && a + b == eps_psi + eps_twisted,
            _ => false,
        };
        out.push(IndexTwoCheck { psi, induced, eps_psi, eps_twisted, eps_constituents, holds });
    }
    Ok(out)
}

/// Coefficients by exponent of ζ (a representation with only the basis powers).
fn exponent_form(r: &CycloRing, v: &Cyc) -> Vec<i64> {
    let mut ex = vec![0i64; r.order()];
    ex[..v.0.len()].copy_from_slice(&v.0);
    ex
}

/// Outcome of comparing a table of H/Z with a table of H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    /// Every character of H/Z inflates to a character of H with the same indicator.
    pub inflations_match: bool,
    /// Indicators of H/Z equal those of the characters of H with Z in the kernel, as multisets.
    pub multisets_match: bool,
}

impl LiftReport {
    pub fn holds(&self) -> bool {
        self.inflations_match && self.multisets_match
    }
}

pub fn lift_check(quotient: &CharTable, table: &CharTable) -> Result<LiftReport> {
    // quotient class of every class of H
    let image: Vec<usize> = table
        .class_reps
        .iter()
        .map(|&i| quotient.class_of_matrix(table.group.element(i)).ok_or_else(|| Error::WrongAmbient("not a quotient".into())))
        .collect::<Result<_>>()?;
    let eps_q = quotient.indicators()?;
    let eps_h = table.indicators()?;
    let r = &table.ring;
    let translate = |v: &Cyc| -> Result<Cyc> {
        let ex = exponent_form(&quotient.ring, v);
        let mut out = vec![0i64; table.exponent];
        for (m, c) in ex.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            if (m * table.exponent) % quotient.exponent != 0 {
                return Err(Error::CharTable("quotient exponent does not divide".into()));
            }
            out[m * table.exponent / quotient.exponent] += c;
        }
        Ok(r.from_exponents(&out))
    };
    let mut inflations_match = true;
    for (c, chi) in quotient.characters.iter().enumerate() {
        let infl: Vec<Cyc> = image.iter().map(|&i| translate(&chi[i])).collect::<Result<_>>()?;
        match table.characters.iter().position(|row| *row == infl) {
            Some(pos) => inflations_match &= eps_h[pos] == eps_q[c],
            None => inflations_match = false,
        }
    }
    // characters of H trivial on Z: χ(z) = χ(1) on every class mapping to the identity
    let central: Vec<usize> = (0..table.num_classes()).filter(|&i| image[i] == 0).collect();
    let mut from_h: Vec<i32> = (0..table.characters.len())
        .filter(|&c| central.iter().all(|&i| table.characters[c][i] == table.characters[c][0]))
        .map(|c| eps_h[c])
        .collect();
    let mut from_q = eps_q.clone();
    from_h.sort();
    from_q.sort();
    Ok(LiftReport { inflations_match, multisets_match: from_h == from_q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn ring_arithmetic() {
        let r = CycloRing::new(3);
        let z = r.root_power(1);
        let z2 = r.mul(&z, &z);
        assert_eq!(r.add(&r.add(&r.int(1), &z), &z2), r.zero());
        assert_eq!(r.conj(&z), z2);
        assert_eq!(r.mul(&z, &z2), r.int(1));
    }

    #[test]
    fn splitting_primes() {
        assert_eq!(splitting_prime(2, 4, 1), 67);
        assert!(splitting_prime(180, 25920, 20) % 180 == 1);
    }
}
