//! Dense row-major complex matrices.
//!
//! The checked methods (`matmul`, `try_add`, `pow`, ...) return errors on shape
//! problems. The operator impls on references panic instead; they are meant for
//! formula code whose shapes have already been validated.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Parse(format!(
                "ragged rows: expected {cols} entries, found {}",
                bad.len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Real rows promoted to complex.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `true` only when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub(crate) fn require_nonempty(&self, op: &'static str) -> Result<()> {
        if self.is_empty() {
            Err(Error::Empty { op })
        } else {
            Ok(())
        }
    }

    fn mismatch(&self, other: &Self, op: &'static str) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub(crate) fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(self.mismatch(other, op))
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(self.mismatch(rhs, "matmul"));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); n * p];
        for i in 0..n {
            let lhs_row = &self.data[i * m..(i + 1) * m];
            let out_row = &mut out[i * p..(i + 1) * p];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * p..(k + 1) * p];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: n,
            cols: p,
            data: out,
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs, "add")?;
        Ok(self.zip_with(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.require_same_shape(rhs, "sub")?;
        Ok(self.zip_with(rhs, |a, b| a - b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance. Panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// `A^k` by repeated squaring, with `A^0 = I`.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let n = self.require_square("matpow")?;
        let mut result = Self::identity(n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(result)
    }

    /// `[[b11, b12], [b21, b22]]`.
    pub fn from_blocks(b11: &Self, b12: &Self, b21: &Self, b22: &Self) -> Result<Self> {
        if b11.rows != b12.rows {
            return Err(b11.mismatch(b12, "from_blocks"));
        }
        if b21.rows != b22.rows {
            return Err(b21.mismatch(b22, "from_blocks"));
        }
        if b11.cols != b21.cols {
            return Err(b11.mismatch(b21, "from_blocks"));
        }
        if b12.cols != b22.cols {
            return Err(b12.mismatch(b22, "from_blocks"));
        }
        let top = b11.rows;
        let left = b11.cols;
        Ok(Self::from_fn(top + b21.rows, left + b12.cols, |r, c| {
            match (r < top, c < left) {
                (true, true) => b11[(r, c)],
                (true, false) => b12[(r, c - left)],
                (false, true) => b21[(r - top, c)],
                (false, false) => b22[(r - top, c - left)],
            }
        }))
    }

    /// Copies the `rows x cols` sub-block starting at `(r0, c0)`. Panics when out of range.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub(crate) fn to_ndarray(&self) -> Array2<Complex64> {
        Array2::from_shape_vec((self.rows, self.cols), self.data.clone()).expect("shape matches data")
    }

    pub(crate) fn from_ndarray(m: &Array2<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Checked product, `A.cols == B.rows`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

/// `A^k` with `A^0 = I`.
pub fn matpow(a: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    a.pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn identity_is_left_unit() {
        let a = ComplexMatrix::from_fn(2, 2, |r, c| Complex64::new(r as f64 + 1.0, c as f64 - 0.5));
        assert_eq!(ComplexMatrix::identity(2).matmul(&a).unwrap(), a);
    }

    #[test]
    fn nilpotent_square_is_zero() {
        let n = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(n.matmul(&n).unwrap().is_zero());
        assert!(n.pow(2).unwrap().is_zero());
    }

    #[test]
    fn reference_pair_product() {
        let e = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let f = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(e.matmul(&f).unwrap(), f);
        assert_eq!(e.pow(2).unwrap(), e);
    }

    #[test]
    fn pow_zero_is_identity() {
        let a = real(&[&[2.0, 3.0], &[5.0, 7.0]]);
        assert_eq!(a.pow(0).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(a.pow(1).unwrap(), a);
    }

    #[test]
    fn shape_errors() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.pow(2), Err(Error::NotSquare { .. })));
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![Complex64::new(0.0, 0.0); 3]),
            Err(Error::EntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![Complex64::new(0.0, 0.0), Complex64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn blocks_round_trip() {
        let a = real(&[&[1.0]]);
        let b = real(&[&[2.0, 3.0]]);
        let c = real(&[&[4.0], &[5.0]]);
        let d = real(&[&[6.0, 7.0], &[8.0, 9.0]]);
        let m = ComplexMatrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert_eq!(m, real(&[&[1.0, 2.0, 3.0], &[4.0, 6.0, 7.0], &[5.0, 8.0, 9.0]]));
        assert_eq!(m.block(1, 1, 2, 2), d);
        assert!(ComplexMatrix::from_blocks(&a, &d, &c, &d).is_err());
    }

    #[test]
    fn adjoint_conjugates() {
        let a = ComplexMatrix::new(1, 2, vec![Complex64::new(1.0, 2.0), Complex64::new(3.0, -4.0)]).unwrap();
        let h = a.adjoint();
        assert_eq!(h.shape(), (2, 1));
        assert_eq!(h[(1, 0)], Complex64::new(3.0, 4.0));
    }
}
