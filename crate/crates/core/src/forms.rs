//! Quadratic spaces over F_q.
//!
//! For odd q a space is given by a symmetric Gram matrix `G` and `Q(v) = vᵀGv`,
//! so the bilinear form is `B(v, w) = vᵀGw`. In characteristic 2 the space is
//! given by an upper-triangular `A` with `Q(v) = vᵀAv` and `B = A + Aᵀ`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{vec_ops, Field, Fq, FqMatrix, FqPoly, SquareClass, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormType {
    Split,
    NonSplit,
}

impl FormType {
    pub fn sign(self) -> i32 {
        match self {
            FormType::Split => 1,
            FormType::NonSplit => -1,
        }
    }
    pub fn from_sign(s: i32) -> FormType {
        if s >= 0 {
            FormType::Split
        } else {
            FormType::NonSplit
        }
    }
    pub fn symbol(self) -> &'static str {
        match self {
            FormType::Split => "+",
            FormType::NonSplit => "-",
        }
    }
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::Split => "split",
            FormType::NonSplit => "non-split",
        })
    }
}

#[derive(Clone, Debug)]
pub struct QuadSpace {
    field: Field,
    n: usize,
    /// Matrix of B: the Gram matrix for odd q, A + Aᵀ in characteristic 2.
    gram: FqMatrix,
    /// Upper-triangular quadratic matrix (characteristic 2 only).
    quad: Option<FqMatrix>,
    ortho: OnceLock<Vec<Vector>>,
}

impl PartialEq for QuadSpace {
    fn eq(&self, other: &QuadSpace) -> bool {
        self.field == other.field && self.gram == other.gram && self.quad == other.quad
    }
}
impl Eq for QuadSpace {}

/// Square matrix J_n with ones on the antidiagonal.
pub fn antidiag(n: usize) -> FqMatrix {
    let mut m = FqMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = Fq::ONE;
    }
    m
}

impl QuadSpace {
    /// Space with symmetric Gram matrix `gram` (q odd). Degenerate forms are
    /// accepted; typed queries on them report [`Error::DegenerateForm`].
    pub fn from_gram(field: &Field, gram: FqMatrix) -> Result<QuadSpace> {
        if !field.is_odd() {
            return Err(Error::OddCharacteristicRequired);
        }
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        if gram.transpose() != gram {
            return Err(Error::InvalidConfig("Gram matrix must be symmetric".into()));
        }
        Ok(QuadSpace { field: field.clone(), n: gram.rows(), gram, quad: None, ortho: OnceLock::new() })
    }

    /// Characteristic-2 space with `Q(v) = vᵀAv`. Only the upper triangle of
    /// `A + Aᵀ` and the diagonal of `A` matter; they are normalized here.
    pub fn from_quad(field: &Field, a: FqMatrix) -> Result<QuadSpace> {
        if field.is_odd() {
            return Err(Error::InvalidConfig("quadratic-matrix input is for characteristic 2".into()));
        }
        if !a.is_square() {
            return Err(Error::DimensionMismatch("quadratic matrix must be square".into()));
        }
        let n = a.rows();
        let mut upper = FqMatrix::zeros(n, n);
        for i in 0..n {
            upper[(i, i)] = a[(i, i)];
            for j in i + 1..n {
                upper[(i, j)] = field.add(a[(i, j)], a[(j, i)]);
            }
        }
        let gram = upper.add(&upper.transpose(), field);
        Ok(QuadSpace { field: field.clone(), n, gram, quad: Some(upper), ortho: OnceLock::new() })
    }

    /// The split form: Gram J_n for odd q, `x₁x₂ + x₃x₄ + …` for q even.
    pub fn split(field: &Field, n: usize) -> Result<QuadSpace> {
        if field.is_odd() {
            return QuadSpace::from_gram(field, antidiag(n));
        }
        if n % 2 == 1 {
            return Err(Error::DegenerateForm);
        }
        let mut a = FqMatrix::zeros(n, n);
        for i in (0..n).step_by(2) {
            a[(i, i + 1)] = Fq::ONE;
        }
        QuadSpace::from_quad(field, a)
    }

    /// The non-split form of dimension n. For odd n (q odd) this is the
    /// representative whose discriminant differs from that of J_n.
    pub fn nonsplit(field: &Field, n: usize) -> Result<QuadSpace> {
        if n == 0 {
            return Err(Error::DegenerateForm);
        }
        if field.is_odd() {
            let nu = field.non_square().expect("odd q has non-squares");
            if n % 2 == 1 {
                let mut g = antidiag(n);
                g[(n / 2, n / 2)] = nu;
                return QuadSpace::from_gram(field, g);
            }
            let mut aniso = FqMatrix::identity(2);
            aniso[(1, 1)] = field.neg(nu);
            let head = antidiag(n - 2);
            return QuadSpace::from_gram(field, FqMatrix::block_diag(&[&head, &aniso]));
        }
        if n % 2 == 1 {
            return Err(Error::DegenerateForm);
        }
        let beta = anisotropic_constant(field);
        let mut a = FqMatrix::zeros(n, n);
        for i in (0..n - 2).step_by(2) {
            a[(i, i + 1)] = Fq::ONE;
        }
        a[(n - 2, n - 2)] = Fq::ONE;
        a[(n - 2, n - 1)] = Fq::ONE;
        a[(n - 1, n - 1)] = beta;
        QuadSpace::from_quad(field, a)
    }

    pub fn standard(field: &Field, n: usize, ty: FormType) -> Result<QuadSpace> {
        match ty {
            FormType::Split => QuadSpace::split(field, n),
            FormType::NonSplit => QuadSpace::nonsplit(field, n),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    /// Matrix of the bilinear form B.
    pub fn gram(&self) -> &FqMatrix {
        &self.gram
    }
    /// Upper-triangular quadratic matrix in characteristic 2.
    pub fn quad_matrix(&self) -> Option<&FqMatrix> {
        self.quad.as_ref()
    }

    pub fn q_value(&self, v: &[Fq]) -> Fq {
        let f = &self.field;
        let m = self.quad.as_ref().unwrap_or(&self.gram);
        let mv = m.mul_vec(v, f);
        v.iter().zip(&mv).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// B(v, w) = vᵀ·B_mat·w.
    pub fn bilinear(&self, v: &[Fq], w: &[Fq]) -> Fq {
        let f = &self.field;
        let gw = self.gram.mul_vec(w, f);
        v.iter().zip(&gw).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Polarization Q(v + w) − Q(v) − Q(w).
    pub fn polar(&self, v: &[Fq], w: &[Fq]) -> Fq {
        let b = self.bilinear(v, w);
        if self.field.is_odd() {
            self.field.add(b, b)
        } else {
            b
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.gram.det(&self.field).is_zero()
    }

    pub fn discriminant(&self) -> Result<SquareClass> {
        if !self.field.is_odd() {
            return Err(Error::CharTwoDiscriminant);
        }
        let d = self.gram.det(&self.field);
        if d.is_zero() {
            return Err(Error::DegenerateForm);
        }
        self.field.square_class(d)
    }

    /// Split/non-split classification. For odd q the type is Split exactly when
    /// the discriminant matches that of J_n; in characteristic 2 it is Split
    /// exactly when the Witt index is n/2.
    pub fn form_type(&self) -> Result<FormType> {
        if self.n == 0 {
            return Ok(FormType::Split);
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        if self.field.is_odd() {
            let reference = self.field.square_class(antidiag(self.n).det(&self.field))?;
            return Ok(if self.discriminant()? == reference { FormType::Split } else { FormType::NonSplit });
        }
        Ok(if 2 * self.witt_index() == self.n { FormType::Split } else { FormType::NonSplit })
    }

    /// Dimension of a maximal totally singular subspace, found by splitting off
    /// hyperbolic pairs. Requires a nondegenerate space.
    pub fn witt_index(&self) -> usize {
        let f = &self.field;
        let mut w: Vec<Vector> = (0..self.n).map(|i| vec_ops::unit(self.n, i)).collect();
        let mut index = 0;
        while w.len() >= 2 {
            let Some(x) = self.singular_vector_in(&w) else { break };
            let y = w
                .iter()
                .find(|b| !self.polar(&x, b).is_zero())
                .expect("nondegenerate complement has a partner")
                .clone();
            let y = vec_ops::scale(&y, f.inv(self.polar(&x, &y)), f);
            let y = vec_ops::axpy(&y, f.neg(self.q_value(&y)), &x, f);
            index += 1;
            // complement of <x, y> inside span(w)
            let rows = vec![
                w.iter().map(|b| self.polar(&x, b)).collect::<Vector>(),
                w.iter().map(|b| self.polar(&y, b)).collect::<Vector>(),
            ];
            let coeffs = FqMatrix::from_rows(&rows).kernel(f);
            w = coeffs.iter().map(|c| combine(&w, c, f)).collect();
        }
        index
    }

    /// Nonzero singular vector in the span of `basis`, searched in the span of
    /// its first three vectors (always enough when three are available).
    fn singular_vector_in(&self, basis: &[Vector]) -> Option<Vector> {
        let f = &self.field;
        let k = basis.len().min(3);
        let q = f.q() as u64;
        let total = q.pow(k as u32);
        for idx in 1..total {
            let mut rest = idx;
            let mut v = vec![Fq::ZERO; self.n];
            for b in &basis[..k] {
                let c = Fq((rest % q) as u32);
                rest /= q;
                if !c.is_zero() {
                    v = vec_ops::axpy(&v, c, b, f);
                }
            }
            if self.q_value(&v).is_zero() {
                return Some(v);
            }
        }
        None
    }

    /// Basis of pairwise orthogonal anisotropic vectors (q odd, nondegenerate).
    pub fn orthogonal_basis(&self) -> Result<&[Vector]> {
        if !self.field.is_odd() {
            return Err(Error::OddCharacteristicRequired);
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        Ok(self.ortho.get_or_init(|| {
            let f = &self.field;
            let mut w: Vec<Vector> = (0..self.n).map(|i| vec_ops::unit(self.n, i)).collect();
            let mut out = Vec::with_capacity(self.n);
            while !w.is_empty() {
                let x = w
                    .iter()
                    .find(|v| !self.q_value(v).is_zero())
                    .cloned()
                    .or_else(|| {
                        (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).find_map(|(i, j)| {
                            let s = vec_ops::add(&w[i], &w[j], f);
                            (!self.q_value(&s).is_zero()).then_some(s)
                        })
                    })
                    .expect("nondegenerate subspace has an anisotropic vector");
                let row = vec![w.iter().map(|b| self.bilinear(&x, b)).collect::<Vector>()];
                let coeffs = FqMatrix::from_rows(&row).kernel(f);
                w = coeffs.iter().map(|c| combine(&w, c, f)).collect();
                out.push(x);
            }
            out
        }))
    }

    /// Form restricted to the span of `basis`, in those coordinates.
    pub fn restrict(&self, basis: &[Vector]) -> Result<QuadSpace> {
        let f = &self.field;
        let k = basis.len();
        if basis.iter().any(|b| b.len() != self.n) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        let p = FqMatrix::from_cols(self.n, basis);
        if p.rank(f) < k {
            return Err(Error::DependentBasis);
        }
        if f.is_odd() {
            let g = p.transpose().mul(&self.gram, f).mul(&p, f);
            return QuadSpace::from_gram(f, g);
        }
        let mut a = FqMatrix::zeros(k, k);
        for i in 0..k {
            a[(i, i)] = self.q_value(&basis[i]);
            for j in i + 1..k {
                a[(i, j)] = self.polar(&basis[i], &basis[j]);
            }
        }
        QuadSpace::from_quad(f, a)
    }

    pub fn direct_sum(&self, other: &QuadSpace) -> Result<QuadSpace> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        match (&self.quad, &other.quad) {
            (Some(a), Some(b)) => QuadSpace::from_quad(&self.field, FqMatrix::block_diag(&[a, b])),
            (None, None) => QuadSpace::from_gram(&self.field, FqMatrix::block_diag(&[&self.gram, &other.gram])),
            _ => Err(Error::FieldMismatch),
        }
    }

    /// Whether g preserves the form: gᵀBg = B, and in characteristic 2 also
    /// Q(g eᵢ) = Q(eᵢ) on the standard basis.
    pub fn is_isometry(&self, g: &FqMatrix) -> bool {
        let f = &self.field;
        if g.rows() != self.n || !g.is_square() {
            return false;
        }
        if g.transpose().mul(&self.gram, f).mul(g, f) != self.gram {
            return false;
        }
        if g.det(f).is_zero() {
            return false;
        }
        if self.quad.is_some() {
            for i in 0..self.n {
                if self.q_value(&g.col(i)) != self.q_value(&vec_ops::unit(self.n, i)) {
                    return false;
                }
            }
        }
        true
    }

    /// Orthogonal complement of span(vectors) in the whole space.
    pub fn perp(&self, vectors: &[Vector]) -> Vec<Vector> {
        if vectors.is_empty() {
            return (0..self.n).map(|i| vec_ops::unit(self.n, i)).collect();
        }
        let rows: Vec<Vector> = vectors.iter().map(|v| self.gram.transpose().mul_vec(v, &self.field)).collect();
        FqMatrix::from_rows(&rows).kernel(&self.field)
    }

    /// Text file: "form=gram" or "form=quad" followed by the matrix.
    pub fn to_text(&self) -> String {
        match &self.quad {
            Some(a) => format!("form=quad\n{}", crate::algebra::textfmt::write_matrix(&self.field, a)),
            None => format!("form=gram\n{}", crate::algebra::textfmt::write_matrix(&self.field, &self.gram)),
        }
    }

    pub fn from_text(text: &str) -> Result<QuadSpace> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let kind = lines.next().ok_or_else(|| Error::Parse("empty space file".into()))?;
        let rest: Vec<&str> = lines.collect();
        let (field, m) = crate::algebra::textfmt::read_matrix(&rest.join("\n"))?;
        match kind {
            "form=gram" => QuadSpace::from_gram(&field, m),
            "form=quad" => QuadSpace::from_quad(&field, m),
            other => Err(Error::Parse(format!("expected form=gram or form=quad, got {other:?}"))),
        }
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

/// β such that t² + t + β is irreducible over F_q (q even).
fn anisotropic_constant(field: &Field) -> Fq {
    field
        .elements()
        .find(|&b| FqPoly::from_coeffs(vec![b, Fq::ONE, Fq::ONE]).is_irreducible(field))
        .expect("an irreducible quadratic t^2 + t + b exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(f: &Field, n: usize, ints: &[i64]) -> QuadSpace {
        QuadSpace::from_gram(f, FqMatrix::from_ints(f, n, n, ints)).unwrap()
    }

    #[test]
    fn named_forms_q3_and_q7() {
        for q in [3u64, 7, 11] {
            let f = Field::new(q).unwrap();
            let j4 = QuadSpace::split(&f, 4).unwrap();
            assert_eq!(j4.discriminant().unwrap(), SquareClass::Trivial);
            assert_eq!(j4.form_type().unwrap(), FormType::Split);
            let i2 = QuadSpace::from_gram(&f, FqMatrix::identity(2)).unwrap();
            assert_eq!(i2.form_type().unwrap(), FormType::NonSplit);
            let six = j4.direct_sum(&i2).unwrap();
            assert_eq!(six.form_type().unwrap(), FormType::NonSplit);
            let j3 = QuadSpace::split(&f, 3).unwrap();
            assert_eq!(j3.direct_sum(&j3).unwrap().form_type().unwrap(), FormType::NonSplit);
            let plane = gram(&f, 2, &[0, -2, -2, 0]);
            assert_eq!(plane.discriminant().unwrap(), SquareClass::NonSquare);
            assert_eq!(plane.form_type().unwrap(), FormType::Split);
        }
    }

    #[test]
    fn restriction_to_eigenspace_of_s0() {
        let f = Field::new(3).unwrap();
        let j4 = QuadSpace::split(&f, 4).unwrap();
        let b = vec![
            vec![f.from_int(1), f.zero(), f.from_int(-1), f.zero()],
            vec![f.zero(), f.from_int(1), f.zero(), f.from_int(-1)],
        ];
        let r = j4.restrict(&b).unwrap();
        assert_eq!(r.gram(), &FqMatrix::from_ints(&f, 2, 2, &[0, -2, -2, 0]));
        assert_eq!(j4.restrict(&[b[0].clone(), b[0].clone()]), Err(Error::DependentBasis));
    }

    #[test]
    fn witt_index_matches_type_odd() {
        for q in [3u64, 5, 9] {
            let f = Field::new(q).unwrap();
            for n in 2..=6 {
                for ty in [FormType::Split, FormType::NonSplit] {
                    let s = QuadSpace::standard(&f, n, ty).unwrap();
                    assert_eq!(s.form_type().unwrap(), ty);
                    if n % 2 == 0 {
                        let expect = if ty == FormType::Split { n / 2 } else { n / 2 - 1 };
                        assert_eq!(s.witt_index(), expect, "q={q} n={n} {ty}");
                    } else {
                        assert_eq!(s.witt_index(), n / 2);
                    }
                }
            }
        }
    }

    #[test]
    fn char_two_types() {
        for q in [2u64, 4, 8] {
            let f = Field::new(q).unwrap();
            for n in [2usize, 4, 6] {
                assert_eq!(QuadSpace::split(&f, n).unwrap().form_type().unwrap(), FormType::Split);
                assert_eq!(QuadSpace::nonsplit(&f, n).unwrap().form_type().unwrap(), FormType::NonSplit);
            }
            assert_eq!(QuadSpace::split(&f, 4).unwrap().discriminant(), Err(Error::CharTwoDiscriminant));
        }
    }

    #[test]
    fn text_roundtrip() {
        let f = Field::new(4).unwrap();
        let s = QuadSpace::nonsplit(&f, 4).unwrap();
        assert_eq!(QuadSpace::from_text(&s.to_text()).unwrap(), s);
        let f = Field::new(7).unwrap();
        let s = QuadSpace::nonsplit(&f, 5).unwrap();
        assert_eq!(QuadSpace::from_text(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn orthogonal_basis_is_orthogonal() {
        let f = Field::new(9).unwrap();
        let s = QuadSpace::split(&f, 6).unwrap();
        let b = s.orthogonal_basis().unwrap();
        assert_eq!(b.len(), 6);
        for i in 0..6 {
            assert!(!s.q_value(&b[i]).is_zero());
            for j in 0..i {
                assert!(s.bilinear(&b[i], &b[j]).is_zero());
            }
        }
    }
}
