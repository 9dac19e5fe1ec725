use super::scalar::{Ring, Scalar, C64};
use nalgebra::DMatrix;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Dense row-major matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must equal rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Column vector.
    pub fn column(v: Vec<T>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
    }

    /// Row vector.
    pub fn row(v: Vec<T>) -> Self {
        let n = v.len();
        Matrix { rows: 1, cols: n, data: v }
    }

    pub fn scalar(x: T) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn add_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                let v = self[(r0 + i, c0 + j)].clone() + b[(i, j)].clone();
                self[(r0 + i, c0 + j)] = v;
            }
        }
    }

    pub fn hstack(blocks: &[&Matrix<T>]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            m.set_block(0, c, b);
            c += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix<T>]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            m.set_block(r, 0, b);
            r += b.rows;
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> T {
        let n = self.rows.min(self.cols);
        (0..n).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = Self::identity(self.rows);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(|x| x.to_c64())
    }

    pub fn from_c64(m: &Matrix<C64>) -> Self {
        m.map(|x| T::from_c64(*x))
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let v: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&x| T::from_i64(x)).collect()).collect();
        Self::from_rows(&v)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }

    pub fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| T::from_c64(m[(i, j)]))
    }

    /// Inverse by Gauss-Jordan with partial pivoting (largest modulus).
    /// Returns `None` when a pivot is exactly zero (exact) or below 1e-14
    /// relative (float).
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| a[(x, c)].abs().partial_cmp(&a[(y, c)].abs()).unwrap())?;
            let piv = a[(p, c)].clone();
            if piv.is_zero() || (!T::EXACT && piv.abs() < 1e-14 * scale) {
                return None;
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = piv.inv();
            for j in 0..n {
                a[(c, j)] = a[(c, j)].clone() * pinv.clone();
                inv[(c, j)] = inv[(c, j)].clone() * pinv.clone();
            }
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone();
                    for j in 0..n {
                        a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                        inv[(r, j)] = inv[(r, j)].clone() - f.clone() * inv[(c, j)].clone();
                    }
                }
            }
        }
        Some(inv)
    }

    /// Determinant by elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let p = match (c..n).max_by(|&x, &y| a[(x, c)].abs().partial_cmp(&a[(y, c)].abs()).unwrap()) {
                Some(p) => p,
                None => return T::zero(),
            };
            if a[(p, c)].is_zero() {
                return T::zero();
            }
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = det * piv.clone();
            let pinv = piv.inv();
            for r in c + 1..n {
                if !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone() * pinv.clone();
                    for j in c..n {
                        a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                    }
                }
            }
        }
        det
    }

    /// Solve `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        self.inverse().map(|inv| &inv * b)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Characteristic polynomial coefficients of det(x I - self), lowest
    /// degree first, by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&coeffs[n - k + 1]);
            let am = self * &m;
            coeffs[n - k] = -(am.trace() / T::from_i64(k as i64));
        }
        coeffs
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch {:?} x {:?}", self.shape(), rhs.shape());
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<T: Ring> Mul for Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Matrix<T>) -> Matrix<T> {
        &self * &rhs
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Ring> Add for Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Matrix<T>) -> Matrix<T> {
        &self + &rhs
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Ring> Sub for Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Matrix<T>) -> Matrix<T> {
        &self - &rhs
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Ring> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        -&self
    }
}
