//! Dense complex linear algebra on square matrices: arithmetic, LU
//! factorization, matrix exponential, and a non-symmetric eigensolver.
//!
//! Everything here is deterministic: fixed loop orders, no randomized pivoting
//! or multithreading, so repeated calls with identical inputs produce
//! identical bits.

mod eig;
mod expm;

pub(crate) use eig::eig_ungated;
pub use eig::{eig, eig_values, eigenbasis_condition, EigenDecomposition};
pub use expm::expm;

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVector<T: Real> {
    data: Vec<Complex<T>>,
}

impl<T: Real> CVector<T> {
    pub fn zeros(n: usize) -> Self {
        CVector {
            data: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    pub fn from_vec(data: Vec<Complex<T>>) -> Self {
        CVector { data }
    }

    /// Basis vector `e_i` (zero-indexed) of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v[i] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.data.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Euclidean norm `sqrt(sum |v_i|^2)`.
    pub fn norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        CVector {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim(), "vector add")?;
        Ok(CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim(), "vector sub")?;
        Ok(CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Sesquilinear inner product `<self|other> = sum conj(self_i) other_i`.
    pub fn dot_conj(&self, other: &Self) -> Result<Complex<T>> {
        self.check_dim(other.dim(), "inner product")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z))
    }

    /// Bilinear (transpose, unconjugated) product `self^T other`.
    pub fn dot_transpose(&self, other: &Self) -> Result<Complex<T>> {
        self.check_dim(other.dim(), "bilinear product")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z))
    }

    /// Index of the entry with the largest magnitude (first one on ties).
    pub fn argmax_abs(&self) -> usize {
        let mut best = 0;
        let mut best_val = T::zero();
        for (i, z) in self.data.iter().enumerate() {
            let m = z.norm_sqr();
            if m > best_val {
                best_val = m;
                best = i;
            }
        }
        best
    }

    fn check_dim(&self, got: usize, context: &'static str) -> Result<()> {
        if self.dim() != got {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

impl<T: Real> Index<usize> for CVector<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

impl<T: Real> IndexMut<usize> for CVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut Complex<T> {
        &mut self.data[i]
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds from row-major data; `data.len()` must be a perfect square.
    pub fn from_vec(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "matrix from row-major data",
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(CMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n, "matrix add")?;
        Ok(CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n, "matrix sub")?;
        Ok(CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n, "matrix multiply")?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &CVector<T>) -> Result<CVector<T>> {
        self.check_dim(v.dim(), "matrix-vector multiply")?;
        let n = self.n;
        let mut out = CVector::zeros(n);
        for i in 0..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                acc = acc + self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self[(i, i)]
        })
    }

    /// Induced 1-norm: maximum absolute column sum.
    pub fn one_norm(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.n {
            let mut s = T::zero();
            for i in 0..self.n {
                s += self[(i, j)].norm();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Extracts column `j`.
    pub fn col(&self, j: usize) -> CVector<T> {
        let mut v = CVector::zeros(self.n);
        for i in 0..self.n {
            v[i] = self[(i, j)];
        }
        v
    }

    pub fn set_col(&mut self, j: usize, v: &CVector<T>) {
        for i in 0..self.n {
            self[(i, j)] = v[i];
        }
    }

    /// Determinant via partially pivoted LU.
    pub fn det(&self) -> Result<Complex<T>> {
        match Lu::factor(self) {
            Ok(lu) => Ok(lu.det()),
            Err(Error::NumericalFailure { .. }) => Ok(Complex::new(T::zero(), T::zero())),
            Err(e) => Err(e),
        }
    }

    /// Matrix inverse; fails on (numerically) singular input.
    pub fn inverse(&self) -> Result<Self> {
        Lu::factor(self)?.solve_matrix(&Self::identity(self.n))
    }

    /// Solves `self * X = rhs` for `X`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.n, "linear solve")?;
        Lu::factor(self)?.solve_matrix(rhs)
    }

    /// Solves `self * x = rhs` for a single right-hand side.
    pub fn solve_vec(&self, rhs: &CVector<T>) -> Result<CVector<T>> {
        self.check_dim(rhs.dim(), "linear solve")?;
        Lu::factor(self)?.solve_vector(rhs)
    }

    fn check_dim(&self, got: usize, context: &'static str) -> Result<()> {
        if self.n != got {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.n,
                got,
            });
        }
        Ok(())
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// LU factorization with partial pivoting.
struct Lu<T: Real> {
    n: usize,
    lu: Vec<Complex<T>>,
    piv: Vec<usize>,
    parity: bool,
}

impl<T: Real> Lu<T> {
    fn factor(a: &CMatrix<T>) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFiniteInput {
                operation: "LU factorization",
            });
        }
        let n = a.n;
        let mut lu = a.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut parity = false;
        for k in 0..n {
            let mut p = k;
            let mut pmax = lu[k * n + k].norm_sqr();
            for i in (k + 1)..n {
                let m = lu[i * n + k].norm_sqr();
                if m > pmax {
                    pmax = m;
                    p = i;
                }
            }
            if pmax == T::zero() {
                return Err(Error::NumericalFailure {
                    operation: "LU factorization",
                    step: format!("zero pivot at column {k}"),
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
                parity = !parity;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[i * n + j] = lu[i * n + j] - sub;
                }
            }
        }
        Ok(Lu { n, lu, piv, parity })
    }

    fn det(&self) -> Complex<T> {
        let mut d = Complex::new(if self.parity { -T::one() } else { T::one() }, T::zero());
        for k in 0..self.n {
            d = d * self.lu[k * self.n + k];
        }
        d
    }

    fn solve_vector(&self, b: &CVector<T>) -> Result<CVector<T>> {
        let n = self.n;
        let mut x: Vec<Complex<T>> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.lu[i * n + j] * x[j];
                x[i] = x[i] - sub;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let sub = self.lu[i * n + j] * x[j];
                x[i] = x[i] - sub;
            }
            x[i] = x[i] / self.lu[i * n + i];
        }
        Ok(CVector::from_vec(x))
    }

    fn solve_matrix(&self, b: &CMatrix<T>) -> Result<CMatrix<T>> {
        let mut out = CMatrix::zeros(self.n);
        for j in 0..self.n {
            let x = self.solve_vector(&b.col(j))?;
            out.set_col(j, &x);
        }
        Ok(out)
    }
}
