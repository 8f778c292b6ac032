//! Dense matrices over a [`Field`]. Arithmetic takes the field explicitly so
//! entries stay plain values.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zero<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![f.zero(); rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { f.one() } else { f.zero() })
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    /// `self += s * other`, in place.
    pub fn add_scaled<F: Field<Elem = E>>(&mut self, other: &Self, s: &E, f: &F) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if f.is_zero(s) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !f.is_zero(b) {
                *a = f.add(a, &f.mul(b, s));
            }
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref<F: Field<Elem = E>>(&mut self, f: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), &f.mul(&factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().rref(f).len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`, each vector of length `cols`.
    pub fn kernel<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: usize, f: &F) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(f, self.rows);
        for _ in 0..k {
            acc = acc.mul(self, f);
        }
        acc
    }

    pub fn apply<F: Field<Elem = E>>(&self, v: &[E], f: &F) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                f.one()
            } else {
                f.zero()
            }
        });
        let pivots = aug.rref(f);
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| aug.get(r, c + n).clone()))
    }

    pub fn render<F: Field<Elem = E>>(&self, f: &F) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = self.row(r).iter().map(|x| f.render(x)).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        format!("[{}]", rows.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn kernel_of_rank_one() {
        let f = Rationals;
        let m = Matrix::from_fn(2, 3, |r, c| f.from_i64(((r + 1) * (c + 1)) as i64));
        assert_eq!(m.rank(&f), 1);
        let k = m.kernel(&f);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.apply(&v, &f).iter().all(|x| f.is_zero(x)));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(2, 2, vec![1, 2, 3, 4]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(&f, 2));
        let singular = Matrix::from_rows(2, 2, vec![1, 2, 2, 4]);
        assert!(singular.inverse(&f).is_none());
    }

    #[test]
    fn shift_powers_vanish() {
        let f = PrimeField::new(2).unwrap();
        let n = Matrix::from_fn(3, 3, |r, c| u32::from(r == c + 1));
        assert_eq!(n.pow(2, &f).rank(&f), 1);
        assert!(n.pow(3, &f).is_zero(&f));
    }
}
