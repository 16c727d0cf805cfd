//! Dense matrices over F_q, exact Gaussian elimination, characteristic
//! polynomials and elementary divisors.

use serde::{Deserialize, Serialize};

use super::field::{Field, Fq};
use super::poly::FqPoly;
use crate::error::{Error, Result};

/// Column vector over F_q.
pub type Vector = Vec<Fq>;

/// Row-major dense matrix. Entries are interpreted in a [`Field`] passed to each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> FqMatrix {
        FqMatrix { rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fq::ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: Fq) -> FqMatrix {
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Fq>) -> FqMatrix {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        FqMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vector]) -> FqMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        FqMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vector]) -> FqMatrix {
        let mut m = FqMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    /// Row-major integer entries mapped into the prime subfield.
    pub fn from_ints(field: &Field, rows: usize, cols: usize, ints: &[i64]) -> FqMatrix {
        assert_eq!(ints.len(), rows * cols);
        FqMatrix { rows, cols, data: ints.iter().map(|&v| field.from_int(v)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Fq] {
        &self.data
    }
    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix, f: &Field) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut out = FqMatrix::zeros(n, m);
        if f.k() == 1 {
            let p = f.p() as u64;
            let mut acc = vec![0u64; m];
            for i in 0..n {
                acc.iter_mut().for_each(|a| *a = 0);
                for l in 0..k {
                    let a = self.data[i * k + l].0 as u64;
                    if a == 0 {
                        continue;
                    }
                    let row = &other.data[l * m..(l + 1) * m];
                    for (j, b) in row.iter().enumerate() {
                        acc[j] += a * b.0 as u64;
                    }
                }
                for j in 0..m {
                    out.data[i * m + j] = Fq((acc[j] % p) as u32);
                }
            }
            return out;
        }
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let idx = i * m + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.data[l * m + j]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Fq], f: &Field) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                row.iter().zip(v).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &FqMatrix, f: &Field) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }
    pub fn sub(&self, other: &FqMatrix, f: &Field) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        }
    }
    pub fn scale(&self, c: Fq, f: &Field) -> FqMatrix {
        FqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }
    pub fn neg(&self, f: &Field) -> FqMatrix {
        FqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> FqMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FqMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { Fq::ONE } else { Fq::ZERO }))
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[&FqMatrix]) -> FqMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = FqMatrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(pr, r);
            let inv = f.inv(m[(r, c)]);
            for j in c..m.cols {
                m[(r, j)] = f.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.mul(factor, m[(r, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    pub fn det(&self, f: &Field) -> Fq {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fq::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return Fq::ZERO };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let piv = m[(c, c)];
            det = f.mul(det, piv);
            let inv = f.inv(piv);
            for i in c + 1..n {
                let factor = f.mul(m[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.mul(factor, m[(c, j)]);
                    m[(i, j)] = f.sub(m[(i, j)], v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: &Field) -> Result<FqMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = FqMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Fq::ONE;
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = FqMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space {x : A x = 0}.
    pub fn kernel(&self, f: &Field) -> Vec<Vector> {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fq::ZERO; self.cols];
                v[fc] = Fq::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r[(row, fc)]);
                }
                v
            })
            .collect()
    }

    /// One solution of A x = b together with a kernel basis, or None if inconsistent.
    pub fn solve_affine(&self, b: &[Fq], f: &Field) -> Option<(Vector, Vec<Vector>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FqMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fq::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)];
        }
        Some((x, self.kernel(f)))
    }

    pub fn solve(&self, b: &[Fq], f: &Field) -> Option<Vector> {
        self.solve_affine(b, f).map(|(x, _)| x)
    }

    /// p(A) by Horner's rule.
    pub fn eval_poly(&self, p: &FqPoly, f: &Field) -> FqMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = FqMatrix::zeros(n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self, f).add(&FqMatrix::scalar(n, c), f);
        }
        acc
    }

    /// Characteristic polynomial det(tI - A) via reduction to Hessenberg form.
    pub fn char_poly(&self, f: &Field) -> FqPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let r = c + 1;
            let Some(i) = (r..n).find(|&i| !h[(i, c)].is_zero()) else { continue };
            if i != r {
                h.swap_rows(i, r);
                for row in 0..n {
                    h.data.swap(row * n + i, row * n + r);
                }
            }
            let inv = f.inv(h[(r, c)]);
            for j in r + 1..n {
                let u = f.mul(h[(j, c)], inv);
                if u.is_zero() {
                    continue;
                }
                for col in 0..n {
                    let v = f.mul(u, h[(r, col)]);
                    h[(j, col)] = f.sub(h[(j, col)], v);
                }
                for row in 0..n {
                    let v = f.mul(u, h[(row, j)]);
                    h[(row, r)] = f.add(h[(row, r)], v);
                }
            }
        }
        let t = FqPoly::x();
        let mut p: Vec<FqPoly> = vec![FqPoly::one()];
        for m in 1..=n {
            let lin = t.sub(&FqPoly::constant(h[(m - 1, m - 1)]), f);
            let mut pm = lin.mul(&p[m - 1], f);
            let mut prod = Fq::ONE;
            for i in 1..m {
                prod = f.mul(prod, h[(m - i, m - i - 1)]);
                if prod.is_zero() {
                    break;
                }
                let c = f.mul(prod, h[(m - i - 1, m - 1)]);
                pm = pm.sub(&p[m - i - 1].scale(c, f), f);
            }
            p.push(pm);
        }
        p.pop().unwrap()
    }

    /// Elementary divisors f^e of the F_q[t]-module defined by a square matrix,
    /// listed with repetition and sorted by (f, e).
    pub fn elementary_divisors(&self, f: &Field) -> Vec<(FqPoly, usize)> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (irr, mult) in self.char_poly(f).factorize(f) {
            let d = irr.degree();
            let a = self.eval_poly(&irr, f);
            let mut nullities = vec![0usize];
            let mut power = FqMatrix::identity(n);
            while *nullities.last().unwrap() < mult * d {
                power = power.mul(&a, f);
                nullities.push(n - power.rank(f));
            }
            // at_least[j] = number of blocks with exponent >= j
            let at_least: Vec<usize> = (1..nullities.len()).map(|j| (nullities[j] - nullities[j - 1]) / d).collect();
            for j in 1..=at_least.len() {
                let next = at_least.get(j).copied().unwrap_or(0);
                for _ in 0..(at_least[j - 1] - next) {
                    out.push((irr.clone(), j));
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    pub fn trace(&self, f: &Field) -> Fq {
        (0..self.rows).fold(Fq::ZERO, |acc, i| f.add(acc, self[(i, i)]))
    }
}

impl std::ops::Index<(usize, usize)> for FqMatrix {
    type Output = Fq;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fq {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FqMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fq {
        &mut self.data[i * self.cols + j]
    }
}

/// Vector helpers.
pub mod vec_ops {
    use super::{Field, Fq, Vector};

    pub fn add(a: &[Fq], b: &[Fq], f: &Field) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }
    pub fn sub(a: &[Fq], b: &[Fq], f: &Field) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }
    pub fn scale(a: &[Fq], c: Fq, f: &Field) -> Vector {
        a.iter().map(|&x| f.mul(x, c)).collect()
    }
    /// a + c b
    pub fn axpy(a: &[Fq], c: Fq, b: &[Fq], f: &Field) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect()
    }
    pub fn is_zero(a: &[Fq]) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    pub fn unit(n: usize, i: usize) -> Vector {
        let mut v = vec![Fq::ZERO; n];
        v[i] = Fq::ONE;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_divisors() {
        let f = Field::new(5).unwrap();
        let ed = FqMatrix::identity(4).elementary_divisors(&f);
        let tm1 = FqPoly::from_ints(&f, &[-1, 1]);
        assert_eq!(ed, vec![(tm1, 1); 4]);
    }

    #[test]
    fn char_poly_companion() {
        let f = Field::new(7).unwrap();
        // companion matrix of t^3 + 2t + 5
        let c = FqMatrix::from_ints(&f, 3, 3, &[0, 0, -5, 1, 0, -2, 0, 1, 0]);
        assert_eq!(c.char_poly(&f), FqPoly::from_ints(&f, &[5, 2, 0, 1]));
    }

    #[test]
    fn inverse_and_det() {
        let f = Field::new(9).unwrap();
        let m = FqMatrix::from_data(2, 2, vec![Fq(1), Fq(4), Fq(2), Fq(7)]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&inv, &f).is_identity());
        let singular = FqMatrix::from_ints(&f, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(singular.inverse(&f), Err(Error::Singular));
        assert_eq!(singular.det(&f), Fq::ZERO);
    }

    #[test]
    fn kernel_rank_nullity() {
        let f = Field::new(3).unwrap();
        let m = FqMatrix::from_ints(&f, 3, 4, &[1, 2, 0, 1, 2, 1, 0, 2, 0, 0, 1, 1]);
        let k = m.kernel(&f);
        assert_eq!(m.rank(&f) + k.len(), 4);
        for v in k {
            assert!(vec_ops::is_zero(&m.mul_vec(&v, &f)));
        }
    }
}
