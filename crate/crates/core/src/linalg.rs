//! Dense exact linear algebra over an abstract field: echelon forms, kernels, solves.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qfield::ExactScalar;

/// The operations an exact field must supply. Method names avoid clashing with `std::ops`.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Multiplicative inverse; callers guarantee `self` is non-zero.
    fn finv(&self) -> Self;
}

impl Field for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.inv().expect("inverse of zero")
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.recip()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = (0..self.rows).map(|r| self.row(r)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    t.set(c, r, x.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).fadd(&a.fmul(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.fadd(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.fsub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.fmul(s)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.fadd(&a.fmul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `o` below `self`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).finv();
            for k in c..self.cols {
                let v = self.get(r, k);
                if !v.is_zero() {
                    let v = v.fmul(&inv);
                    self.set(r, k, v);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let b = self.get(r, k);
                    if b.is_zero() {
                        continue;
                    }
                    let v = self.get(i, k).fsub(&f.fmul(b));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space, in canonical echelon form: each basis vector has
    /// first non-zero entry 1 and the basis vectors are the rows of an RREF matrix.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<Vec<F>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    let x = m.get(row, f);
                    if !x.is_zero() {
                        v[pc] = x.fneg();
                    }
                }
                v
            })
            .collect();
        echelon_basis(raw, self.cols)
    }

    /// Some solution `x` of `self * x = b`, or `None` if the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, F::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

/// Canonical basis of the span of `vectors`: the non-zero rows of their RREF.
pub fn echelon_basis<F: Field>(vectors: Vec<Vec<F>>, dim: usize) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(vectors, dim);
    let k = m.rref().len();
    (0..k).map(|r| m.row(r).to_vec()).collect()
}

/// Indices of a maximal independent subset of `vectors`, chosen greedily in order.
pub fn independent_subset<F: Field>(vectors: &[Vec<F>], dim: usize) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    // Columns are the vectors; pivot columns of the RREF are the greedy choice.
    let mut m = Matrix::from_cols(vectors, dim);
    m.rref()
}

pub fn vec_is_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.fadd(y)).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.fsub(y)).collect()
}

pub fn vec_scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.fmul(s)).collect()
}

/// `acc += s * v`, skipping zero entries.
pub fn vec_axpy<F: Field>(acc: &mut [F], s: &F, v: &[F]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.fadd(&s.fmul(x));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect(), cols)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&k[0])));
        assert_eq!(k[0][0], r(1));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let x = a.solve(&[r(3), r(2)]).unwrap();
        assert_eq!(x, vec![r(1), r(1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 1], &[1, 1]]).inverse().is_none());
        assert!(m(&[&[1, 1], &[1, 1]]).solve(&[r(1), r(2)]).is_none());
    }

    #[test]
    fn greedy_subset() {
        let vs = vec![vec![r(1), r(0)], vec![r(2), r(0)], vec![r(0), r(1)]];
        assert_eq!(independent_subset(&vs, 2), vec![0, 2]);
    }

    #[test]
    fn scalar_field_kernel() {
        let q = ExactScalar::q_pow(1);
        let one = ExactScalar::one();
        let a = Matrix::from_rows(vec![vec![q.clone(), one.clone()], vec![&q * &q, q.clone()]], 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&k[0])));
    }
}
