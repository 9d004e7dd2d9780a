//! Small dense matrices over the crate's coefficient rings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{EllFn, Scalar};

/// Ring operations needed by [`Mat`]. Elements carry enough context to build
/// their own zero and one (an [`EllFn`] knows its curve).
pub trait RingElem: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, o: &Self) -> Self;
    fn sub_elem(&self, o: &Self) -> Self;
    fn mul_elem(&self, o: &Self) -> Self;
    fn inv_elem(&self) -> Result<Self>;
    /// Pivot preference for elimination; smaller is better.
    fn pivot_weight(&self) -> i64 {
        0
    }
}

impl RingElem for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_elem(&self) -> Result<Self> {
        self.inv()
    }
}

impl RingElem for EllFn {
    fn zero_like(&self) -> Self {
        EllFn::zero(self.curve())
    }
    fn one_like(&self) -> Self {
        EllFn::one(self.curve())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_elem(&self) -> Result<Self> {
        self.inv()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<T>>", try_from = "Vec<Vec<T>>")]
#[serde(bound(
    serialize = "T: Serialize + Clone",
    deserialize = "T: Deserialize<'de>"
))]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> From<Mat<T>> for Vec<Vec<T>> {
    fn from(m: Mat<T>) -> Self {
        m.to_rows()
    }
}

impl<T> TryFrom<Vec<Vec<T>>> for Mat<T> {
    type Error = Error;
    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Mat::from_rows(rows)
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&&self.data[r * self.cols..(r + 1) * self.cols]);
        }
        l.finish()
    }
}

impl<T> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Mat<U>> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[T]>::to_vec)
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<T>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
}

impl<T: RingElem> Mat<T> {
    pub fn identity(n: usize, proto: &T) -> Self {
        let (z, o) = (proto.zero_like(), proto.one_like());
        Mat::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != rhs.rows || self.cols == 0 {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.get(i, 0).mul_elem(rhs.get(0, j));
            for k in 1..self.cols {
                let (a, b) = (self.get(i, k), rhs.get(k, j));
                if !a.is_zero_elem() && !b.is_zero_elem() {
                    acc = acc.add_elem(&a.mul_elem(b));
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        let col = Mat::from_fn(v.len(), 1, |i, _| v[i].clone());
        Ok(self.mul(&col)?.data)
    }

    fn zip(&self, rhs: &Mat<T>, f: impl Fn(&T, &T) -> T) -> Result<Mat<T>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        self.zip(rhs, T::add_elem)
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        self.zip(rhs, T::sub_elem)
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        self.map(|a| a.mul_elem(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero_elem)
    }

    /// Gauss-Jordan inverse, choosing pivots by [`RingElem::pivot_weight`].
    pub fn inverse(&self) -> Result<Mat<T>> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n, &self.data[0]);
        for col in 0..n {
            let piv = (col..n)
                .filter(|&r| !a.get(r, col).is_zero_elem())
                .min_by_key(|&r| a.get(r, col).pivot_weight())
                .ok_or(Error::SingularMatrix)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a.get(col, col).inv_elem()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_zero_elem() {
                    continue;
                }
                let f = a.get(r, col).clone();
                a.axpy_row(r, col, &f);
                inv.axpy_row(r, col, &f);
            }
        }
        Ok(inv)
    }

    /// Determinant by fraction-based elimination.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() || self.rows == 0 {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.data[0].one_like();
        for col in 0..n {
            let Some(piv) = (col..n)
                .filter(|&r| !a.get(r, col).is_zero_elem())
                .min_by_key(|&r| a.get(r, col).pivot_weight())
            else {
                return Ok(det.zero_like());
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = det.zero_like().sub_elem(&det);
            }
            let p = a.get(col, col).clone();
            det = det.mul_elem(&p);
            let pi = p.inv_elem()?;
            for r in col + 1..n {
                if a.get(r, col).is_zero_elem() {
                    continue;
                }
                let f = a.get(r, col).mul_elem(&pi);
                a.axpy_row(r, col, &f);
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &T) {
        for j in 0..self.cols {
            let v = self.get(r, j).mul_elem(c);
            self.set(r, j, v);
        }
    }

    /// row[r] -= f * row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &T) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero_elem() {
                continue;
            }
            let v = self.get(r, j).sub_elem(&f.mul_elem(s));
            self.set(r, j, v);
        }
    }
}

/// Reduced row echelon form of a scalar matrix; returns pivot columns.
pub fn rref(m: &mut Mat<Scalar>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        m.swap_rows(p, row);
        let inv = m.get(row, col).inv().unwrap();
        m.scale_row(row, &inv);
        for r in 0..m.rows {
            if r != row && !m.get(r, col).is_zero() {
                let f = m.get(r, col).clone();
                m.axpy_row(r, row, &f);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Mat<Scalar>) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn nullspace(m: &Mat<Scalar>) -> Vec<Vec<Scalar>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); m.cols];
            v[f] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f);
            }
            v
        })
        .collect()
}

/// One solution of `m v = b` with free variables set to zero, if consistent.
pub fn solve(m: &Mat<Scalar>, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut aug = Mat::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut v = vec![Scalar::zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = aug.get(row, m.cols).clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<Scalar> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det().unwrap(), Scalar::int(1));
        let i = a.mul(&a.inverse().unwrap()).unwrap();
        assert_eq!(i, Mat::identity(2, &Scalar::zero()));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        assert!(solve(&a, &[Scalar::int(1), Scalar::int(3)]).is_none());
        let x = solve(&a, &[Scalar::int(1), Scalar::int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![Scalar::int(1), Scalar::int(2)]);
    }
}
