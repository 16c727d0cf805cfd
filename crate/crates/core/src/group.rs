//! Explicitly enumerated matrix groups.

use std::collections::HashMap;

use crate::algebra::{Field, FqMatrix};
use crate::error::{Error, Result};

/// A finite matrix group held as an element list with a hash index.
/// Element 0 is the identity. In projective mode each element is stored as
/// the smaller of `x` and `−x`, so the list is a group modulo {±I}.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    field: Field,
    n: usize,
    projective: bool,
    elements: Vec<FqMatrix>,
    index: HashMap<FqMatrix, usize>,
}

impl MatrixGroup {
    /// Closure of `gens` under right multiplication.
    pub fn closure(field: &Field, n: usize, gens: &[FqMatrix], projective: bool, cap: u128) -> Result<MatrixGroup> {
        let mut g = MatrixGroup::from_elements(field, n, vec![FqMatrix::identity(n)], projective);
        g.extend(gens, cap)?;
        Ok(g)
    }

    /// Group from an element list closed under multiplication (not checked).
    pub fn from_elements(field: &Field, n: usize, elements: Vec<FqMatrix>, projective: bool) -> MatrixGroup {
        let mut g = MatrixGroup { field: field.clone(), n, projective, elements: Vec::new(), index: HashMap::new() };
        let id = g.canon(FqMatrix::identity(n));
        g.insert(id);
        for e in elements {
            let e = g.canon(e);
            g.insert(e);
        }
        g
    }

    /// Closes the current element set under right multiplication by `gens`.
    /// Pass all generators of the intended group, old and new.
    pub fn extend(&mut self, gens: &[FqMatrix], cap: u128) -> Result<()> {
        let gens: Vec<FqMatrix> = gens.iter().map(|s| self.canon(s.clone())).collect();
        let mut head = 0;
        while head < self.elements.len() {
            let x = self.elements[head].clone();
            head += 1;
            for s in &gens {
                let y = self.canon(x.mul(s, &self.field));
                if !self.index.contains_key(&y) {
                    if self.elements.len() as u128 >= cap {
                        return Err(Error::GroupTooLarge { order: self.elements.len() as u128 + 1, cap });
                    }
                    self.insert(y);
                }
            }
        }
        Ok(())
    }

    fn insert(&mut self, m: FqMatrix) -> bool {
        if self.index.contains_key(&m) {
            return false;
        }
        self.index.insert(m.clone(), self.elements.len());
        self.elements.push(m);
        true
    }

    pub fn canon(&self, m: FqMatrix) -> FqMatrix {
        if self.projective {
            let neg = m.neg(&self.field);
            if neg < m {
                return neg;
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn is_projective(&self) -> bool {
        self.projective
    }
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn elements(&self) -> &[FqMatrix] {
        &self.elements
    }
    pub fn element(&self, i: usize) -> &FqMatrix {
        &self.elements[i]
    }
    pub fn index_of(&self, m: &FqMatrix) -> Option<usize> {
        if self.projective {
            self.index.get(&self.canon(m.clone())).copied()
        } else {
            self.index.get(m).copied()
        }
    }
    pub fn contains(&self, m: &FqMatrix) -> bool {
        self.index_of(m).is_some()
    }
    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        let m = self.elements[i].mul(&self.elements[j], &self.field);
        self.index_of(&m).expect("group is closed under multiplication")
    }
    pub fn inv_idx(&self, i: usize) -> usize {
        let m = self.elements[i].inverse(&self.field).expect("group elements are invertible");
        self.index_of(&m).expect("group is closed under inversion")
    }

    /// Subgroup of the elements satisfying `pred`.
    pub fn filter(&self, mut pred: impl FnMut(&FqMatrix) -> bool) -> MatrixGroup {
        let keep: Vec<FqMatrix> = self.elements.iter().filter(|m| pred(m)).cloned().collect();
        MatrixGroup::from_elements(&self.field, self.n, keep, self.projective)
    }

    /// The same elements read modulo {±I}.
    pub fn projectivize(&self) -> MatrixGroup {
        MatrixGroup::from_elements(&self.field, self.n, self.elements.clone(), true)
    }

    /// Elements of order dividing 2 (including the identity).
    pub fn count_square_roots_of_identity(&self) -> usize {
        let id = self.canon(FqMatrix::identity(self.n));
        self.elements.iter().filter(|m| self.canon(m.mul(m, &self.field)) == id).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fq;

    #[test]
    fn gl2_f2_closure() {
        let f = Field::new(2).unwrap();
        let a = FqMatrix::from_data(2, 2, vec![Fq(1), Fq(1), Fq(0), Fq(1)]);
        let b = FqMatrix::from_data(2, 2, vec![Fq(0), Fq(1), Fq(1), Fq(0)]);
        let g = MatrixGroup::closure(&f, 2, &[a, b], false, 100).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.count_square_roots_of_identity(), 4);
        let e = MatrixGroup::closure(&f, 2, &[g.element(1).clone()], false, 1);
        assert!(matches!(e, Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn projective_halves_sl2_f3() {
        let f = Field::new(3).unwrap();
        let a = FqMatrix::from_ints(&f, 2, 2, &[1, 1, 0, 1]);
        let b = FqMatrix::from_ints(&f, 2, 2, &[1, 0, 1, 1]);
        let g = MatrixGroup::closure(&f, 2, &[a.clone(), b.clone()], false, 100).unwrap();
        let pg = MatrixGroup::closure(&f, 2, &[a, b], true, 100).unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(pg.len(), 12);
    }
}
