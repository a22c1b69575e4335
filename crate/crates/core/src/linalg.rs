//! Dense matrices and Gauss–Jordan elimination.
//!
//! Row operations are left multiplications only, so the elimination routines
//! are valid over (possibly noncommutative) division rings as well as fields.
//! Elements without a context-free zero are handled by passing a template.

use std::fmt;

use crate::error::MatrixError;
use crate::field::{FieldElement, RingElement};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
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

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }
}

impl<T: RingElement> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, template: &T) -> Self {
        Self::filled(rows, cols, template.zero_of())
    }

    pub fn identity(n: usize, template: &T) -> Self {
        let (zero, one) = (template.zero_of(), template.one_of());
        Self::from_fn(n, n, |r, c| if r == c { one.clone() } else { zero.clone() })
    }

    pub fn column_vector(v: &[T]) -> Self {
        Self::from_fn(v.len(), 1, |r, _| v[r].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).clone() + o.get(r, c).clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).clone() - o.get(r, c).clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let zero = self.data.first().or(o.data.first()).map(|x| x.zero_of());
        Self::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = zero.clone().expect("empty product");
            for k in 0..self.cols {
                acc = acc + self.get(r, k).clone() * o.get(k, c).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        self.mul(&Self::column_vector(v)).column(0)
    }

    /// Multiplies every entry on the left by `x`.
    pub fn scale_left(&self, x: &T) -> Self {
        self.map(|y| x.clone() * y.clone())
    }

    pub fn scale_right(&self, x: &T) -> Self {
        self.map(|y| y.clone() * x.clone())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = self.data[0].zero_of();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }
}

/// Result of reducing to reduced row echelon form.
pub struct Echelon<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: FieldElement> Matrix<T> {
    /// Gauss–Jordan elimination. Fails with `ZeroDivisor` when a nonzero
    /// pivot candidate has no inverse, which only happens over rings with
    /// zero divisors.
    pub fn echelon(&self) -> Result<Echelon<T>, MatrixError> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero_elem()) else {
                continue;
            };
            let inv = m.get(p, col).inv_elem().ok_or(MatrixError::ZeroDivisor)?;
            m.swap_rows(p, row);
            for c in 0..m.cols {
                let v = inv.clone() * m.get(row, c).clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero_elem() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c).clone() - factor.clone() * m.get(row, c).clone();
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(Echelon { reduced: m, pivots })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> Result<usize, MatrixError> {
        Ok(self.echelon()?.pivots.len())
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Dimension(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let id = Self::identity(n, &self.data[0]);
        let aug = Self::from_fn(n, 2 * n, |r, c| if c < n { self.get(r, c).clone() } else { id.get(r, c - n).clone() });
        let ech = aug.echelon()?;
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return Err(MatrixError::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| ech.reduced.get(r, c + n).clone()))
    }

    /// One solution of `self·x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[T]) -> Result<Option<Vec<T>>, MatrixError> {
        assert_eq!(rhs.len(), self.rows);
        let Some(template) = self.data.first().or(rhs.first()) else {
            return Ok(Some(Vec::new()));
        };
        let zero = template.zero_of();
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                rhs[r].clone()
            }
        });
        let ech = aug.echelon()?;
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![zero; self.cols];
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.reduced.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// A basis of the right kernel `{x : self·x = 0}`.
    pub fn kernel(&self) -> Result<Vec<Vec<T>>, MatrixError> {
        let Some(template) = self.data.first() else {
            return Ok(Vec::new());
        };
        let (zero, one) = (template.zero_of(), template.one_of());
        let ech = self.echelon()?;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !ech.pivots.contains(c)) {
            let mut x = vec![zero.clone(); self.cols];
            x[free] = one.clone();
            for (r, &p) in ech.pivots.iter().enumerate() {
                x[p] = -ech.reduced.get(r, free).clone();
            }
            basis.push(x);
        }
        Ok(basis)
    }

    pub fn is_invertible(&self) -> Result<bool, MatrixError> {
        Ok(self.is_square() && self.rank()? == self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BaseField, Rational};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn inverse_of_rotation() {
        let m = mat(&[&[0, 1], &[-1, 0]]);
        assert_eq!(m.inverse().unwrap(), mat(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn singular_is_reported() {
        let m = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.inverse(), Err(MatrixError::Singular));
        assert_eq!(m.rank().unwrap(), 1);
        let k = m.kernel().unwrap();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero_elem()));
    }

    #[test]
    fn inconsistent_system() {
        let m = mat(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.solve(&[q(1), q(2)]).unwrap(), None);
        let x = m.solve(&[q(3), q(3)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(3), q(3)]);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 12)) {
            let m = Matrix::from_fn(3, 4, |r, c| q(entries[r * 4 + c]));
            let rank = m.rank().unwrap();
            let ker = m.kernel().unwrap();
            prop_assert_eq!(rank + ker.len(), 4);
            for v in ker {
                prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero_elem()));
            }
        }

        #[test]
        fn inverse_is_two_sided(entries in proptest::collection::vec(-4i64..=4, 9)) {
            let m = Matrix::from_fn(3, 3, |r, c| q(entries[r * 3 + c]));
            if let Ok(inv) = m.inverse() {
                let id = Matrix::identity(3, &q(0));
                prop_assert_eq!(m.mul(&inv), id.clone());
                prop_assert_eq!(inv.mul(&m), id);
            } else {
                prop_assert!(m.rank().unwrap() < 3);
            }
        }
    }
}
