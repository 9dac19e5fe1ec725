//! Sparse bivariate Laurent polynomials and matrices of them.
//!
//! Exponents are signed so that restrictions to conics (where one chart
//! coordinate becomes `c / t`) stay inside the same container.

use super::matrix::Matrix;
use super::scalar::{Ring, Scalar};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly2<T> {
    terms: BTreeMap<(i32, i32), T>,
}

pub type PolyMatrix<T> = Matrix<Poly2<T>>;

impl<T: Scalar> Poly2<T> {
    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: T, i: i32, j: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    /// The first chart coordinate.
    pub fn u() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    /// The second chart coordinate.
    pub fn v() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i32, j: i32) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    fn add_term(&mut self, key: (i32, i32), c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                let s = x.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn eval(&self, u: &T, v: &T) -> T {
        let mut acc = T::zero();
        for (&(i, j), c) in &self.terms {
            acc = acc + c.clone() * ipow(u, i) * ipow(v, j);
        }
        acc
    }

    /// Substitute u -> a * t^p, v -> b * t^q, giving a Laurent polynomial in t
    /// as a map exponent -> coefficient.
    pub fn restrict(&self, a: &T, p: i32, b: &T, q: i32) -> BTreeMap<i32, T> {
        let mut out: BTreeMap<i32, T> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let coef = c.clone() * ipow(a, i) * ipow(b, j);
            if coef.is_zero() {
                continue;
            }
            let e = p * i + q * j;
            let entry = out.entry(e).or_insert_with(T::zero);
            *entry = entry.clone() + coef;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Largest coefficient modulus, used for relative residuals.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        let mut p = Poly2::<U>::zero();
        for (&k, c) in &self.terms {
            p.add_term(k, f(c));
        }
        p
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map_coeffs(|c| c.clone() * s.clone())
    }

    /// Drop coefficients below `tol` in modulus (float backends).
    pub fn chop(&self, tol: f64) -> Self {
        let mut p = self.clone();
        p.terms.retain(|_, c| c.abs() > tol);
        p
    }
}

/// Integer power, with negative exponents meaning reciprocals.
pub fn ipow<T: Scalar>(x: &T, e: i32) -> T {
    let mut r = T::one();
    for _ in 0..e.unsigned_abs() {
        r = r * x.clone();
    }
    if e < 0 {
        r.inv()
    } else {
        r
    }
}

impl<T: Scalar> Ring for Poly2<T> {
    fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Self::constant(T::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Scalar> Add for Poly2<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<T: Scalar> Sub for Poly2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for Poly2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly2 { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl<T: Scalar> Mul for Poly2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), a.clone() * b.clone());
            }
        }
        out
    }
}

/// Lift a constant matrix into a polynomial matrix.
pub fn lift<T: Scalar>(m: &Matrix<T>) -> PolyMatrix<T> {
    m.map(|x| Poly2::constant(x.clone()))
}

/// Evaluate a polynomial matrix at a chart point.
pub fn eval_matrix<T: Scalar>(m: &PolyMatrix<T>, u: &T, v: &T) -> Matrix<T> {
    m.map(|p| p.eval(u, v))
}

/// Largest coefficient modulus over all entries.
pub fn poly_matrix_max_abs<T: Scalar>(m: &PolyMatrix<T>) -> f64 {
    m.data().iter().map(|p| p.max_abs()).fold(0.0, f64::max)
}

/// Evaluate a univariate polynomial (lowest degree first) by Horner.
pub fn horner<T: Scalar>(coeffs: &[T], x: &T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// Determinant of a small square polynomial matrix by cofactor expansion
/// along the first row, with zero entries skipped.
pub fn poly_det<T: Scalar>(m: &PolyMatrix<T>) -> Poly2<T> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let idx: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &idx)
}

fn det_rec<T: Scalar>(m: &PolyMatrix<T>, row: usize, cols: &[usize]) -> Poly2<T> {
    if cols.is_empty() {
        return Poly2::one();
    }
    let mut acc = Poly2::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let e = &m[(row, c)];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest);
        let term = e.clone() * minor;
        acc = if pos % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
