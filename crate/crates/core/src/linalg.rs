//! Dense and sparse exact linear algebra over a generic field.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactfield::CyclotomicElem;

/// Exact field operations used by the elimination routines.
pub trait Field: Clone + PartialEq + Debug + Send + Sync
where
    for<'a> &'a Self: Add<&'a Self, Output = Self>
        + Sub<&'a Self, Output = Self>
        + Mul<&'a Self, Output = Self>
        + Neg<Output = Self>,
{
    fn fzero() -> Self;
    fn fone() -> Self;
    fn is_fzero(&self) -> bool;
    /// Inverse of a nonzero element.
    fn finv(&self) -> Self;
}

impl Field for BigRational {
    fn fzero() -> Self {
        BigRational::zero()
    }
    fn fone() -> Self {
        BigRational::one()
    }
    fn is_fzero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn finv(&self) -> Self {
        self.recip()
    }
}

impl Field for CyclotomicElem {
    fn fzero() -> Self {
        CyclotomicElem::zero()
    }
    fn fone() -> Self {
        CyclotomicElem::one()
    }
    fn is_fzero(&self) -> bool {
        self.is_zero()
    }
    fn finv(&self) -> Self {
        self.inv()
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> Matrix<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::fzero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::fone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_fzero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U>
    where
        for<'a> &'a U: Add<&'a U, Output = U> + Sub<&'a U, Output = U> + Mul<&'a U, Output = U> + Neg<Output = U>,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_fzero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_fzero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_fzero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].finv();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_fzero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : self·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![T::fzero(); self.cols];
                x[f] = T::fone();
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = -&r[(row, f)];
                }
                x
            })
            .collect()
    }

    /// Some solution of `self·x = b`, if the system is consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::fzero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::fone();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = T::fone();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_fzero()) else {
                return T::fzero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -&det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].finv();
            for i in c + 1..n {
                if m[(i, c)].is_fzero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
        }
        det
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::fzero(), |acc, i| &acc + &self[(i, i)])
    }
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>,
{
    let mut acc = T::fzero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_fzero() && !y.is_fzero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

/// Incrementally maintained semi-echelon basis, used for span membership and
/// closure computations.
#[derive(Clone, Debug)]
pub struct EchelonBasis<T> {
    dim: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Field> EchelonBasis<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>,
{
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// The residue of `v` after reduction against the current rows.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_fzero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_fzero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(T::is_fzero)
    }

    /// Adds `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_fzero()) else {
            return false;
        };
        let inv = r[p].finv();
        self.rows.push((p, r.iter().map(|x| x * &inv).collect()));
        true
    }
}

/// Row-sparse matrix; rows keep their entries sorted by column.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, T)>>,
}

impl<T: Field> SparseMatrix<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T> + Neg<Output = T>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, T::fone()));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_entries(&self, i: usize) -> &[(usize, T)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.data[i][k].1.clone())
            .unwrap_or_else(|_| T::fzero())
    }

    /// Adds `x` to entry (i, j).
    pub fn add_to(&mut self, i: usize, j: usize, x: &T) {
        if x.is_fzero() {
            return;
        }
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                let s = &row[k].1 + x;
                if s.is_fzero() {
                    row.remove(k);
                } else {
                    row[k].1 = s;
                }
            }
            Err(k) => row.insert(k, (j, x.clone())),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) if x.is_fzero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = x,
            Err(_) if x.is_fzero() => {}
            Err(k) => row.insert(k, (j, x)),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn from_dense(m: &Matrix<T>) -> Self {
        let mut s = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_fzero() {
                    s.data[i].push((j, m[(i, j)].clone()));
                }
            }
        }
        s
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                m[(i, *j)] = x.clone();
            }
        }
        m
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U>
    where
        for<'a> &'a U: Add<&'a U, Output = U> + Sub<&'a U, Output = U> + Mul<&'a U, Output = U> + Neg<Output = U>,
    {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, x)| (*j, f(x))).filter(|e| !e.1.is_fzero()).collect())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x * s)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row {
                t.data[*j].push((i, x.clone()));
            }
        }
        t
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (i, row) in o.data.iter().enumerate() {
            for (j, x) in row {
                out.add_to(i, *j, x);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-&T::fone()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in sparse product");
        let mut out = Self::zeros(self.rows, o.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, T> = std::collections::BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &o.data[*k] {
                    let p = a * b;
                    acc.entry(*j)
                        .and_modify(|e| *e = &*e + &p)
                        .or_insert(p);
                }
            }
            out.data[i] = acc.into_iter().filter(|(_, x)| !x.is_fzero()).collect();
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = T::fzero();
                for (j, x) in row {
                    if !v[*j].is_fzero() {
                        acc = &acc + &(x * &v[*j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
}

/// Applies a rational sparse matrix to a cyclotomic vector.
pub fn apply_rational(m: &SparseMatrix<BigRational>, v: &[CyclotomicElem]) -> Vec<CyclotomicElem> {
    (0..m.rows())
        .map(|i| {
            let mut acc = CyclotomicElem::zero();
            for (j, x) in m.row_entries(i) {
                if !v[*j].is_zero() {
                    acc = &acc + &v[*j].scale(x);
                }
            }
            acc
        })
        .collect()
}
