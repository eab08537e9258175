use std::fmt;
use std::ops::Mul;

use super::field::Prime;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Dense matrix over `F_ℓ`, row-major.
///
/// Square matrices act on column vectors: `v ↦ A·v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    prime: Prime,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            prime,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        Self::scalar(prime, n, 1)
    }

    pub fn scalar(prime: Prime, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % prime.get();
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry mod `ℓ`.
    pub fn from_rows<R: AsRef<[i64]>>(prime: Prime, rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::Shape(format!(
                    "ragged rows: expected {c} entries, got {}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| prime.reduce(x)));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            prime,
            data,
        })
    }

    /// Builds from residues already in `[0, ℓ)`.
    pub fn from_residues(prime: Prime, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= prime.get()) {
            return Err(Error::ResidueOutOfRange {
                value: bad as u64,
                prime: prime.get(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            prime,
            data,
        })
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diag(prime: Prime, blocks: &[Matrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(prime, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.prime.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.prime, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Scalar matrix check; returns the scalar.
    pub fn as_scalar(&self) -> Option<u32> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0);
        let ok = (0..self.rows)
            .all(|i| (0..self.cols).all(|j| self.get(i, j) == if i == j { c } else { 0 }));
        ok.then_some(c)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.prime;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.prime;
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| p.sub(a, b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let p = self.prime;
        Matrix {
            data: self.data.iter().map(|&a| p.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Matrix {
        let p = self.prime;
        Matrix {
            data: self.data.iter().map(|&a| p.neg(a)).collect(),
            ..self.clone()
        }
    }

    /// `self - c·I`.
    pub fn minus_scalar(&self, c: u32) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = self.prime.sub(m.get(i, i), c % self.prime.get());
            m.data[i * self.cols + i] = v;
        }
        m
    }

    pub fn mul_mat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = self.prime.get() as u64;
        let (n, m, k) = (self.rows, other.cols, self.cols);
        let mut out = vec![0u32; n * m];
        let mut acc = vec![0u64; m];
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            for t in 0..k {
                let a = self.data[i * k + t] as u64;
                if a == 0 {
                    continue;
                }
                let row = &other.data[t * m..(t + 1) * m];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot += a * b as u64;
                }
                // entries < 2^16, so 2^32 per product; reduce well before u64 overflow
                if t % 1024 == 1023 {
                    acc.iter_mut().for_each(|a| *a %= p);
                }
            }
            for (o, a) in out[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                *o = (a % p) as u32;
            }
        }
        Matrix {
            rows: n,
            cols: m,
            prime: self.prime,
            data: out,
        }
    }

    /// `A·v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.rows];
        self.apply_into(v, &mut out);
        out
    }

    pub fn apply_into(&self, v: &[u32], out: &mut [u32]) {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.prime.get() as u64;
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
            *o = (s % p) as u32;
        }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.prime, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mat(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mat(&base);
            }
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.prime;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = p.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = p.mul(self.get(r, j), inv);
                self.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = p.sub(self.get(i, j), p.mul(f, self.get(r, j)));
                    self.data[i * self.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Null space of `v ↦ A·v` in echelon form.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let p = self.prime;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = p.neg(m.get(r, free));
            }
            basis.push(v);
        }
        Subspace::from_vectors(p, self.cols, basis)
    }

    /// Image (column space) of `A`.
    pub fn image(&self) -> Subspace {
        let t = self.transpose();
        Subspace::from_vectors(
            self.prime,
            self.rows,
            (0..t.rows).map(|i| t.row(i).to_vec()).collect(),
        )
    }

    pub fn det(&self) -> u32 {
        assert!(self.is_square());
        let p = self.prime;
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| m[i * n + c] != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.swap(piv * n + j, c * n + j);
                }
                det = p.neg(det);
            }
            let d = m[c * n + c];
            det = p.mul(det, d);
            let inv = p.inv(d).expect("nonzero pivot");
            for i in c + 1..n {
                let f = p.mul(m[i * n + c], inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    m[i * n + j] = p.sub(m[i * n + j], p.mul(f, m[c * n + j]));
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.prime, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(self.prime, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = aug.data[i * 2 * n + n + j];
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.det() != 0
    }

    /// `Aᵀ·G·A == G`.
    pub fn preserves(&self, gram: &Matrix) -> bool {
        self.transpose().mul_mat(gram).mul_mat(self) == *gram
    }

    /// Group commutator `A·B·A⁻¹·B⁻¹`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        Ok(self
            .mul_mat(other)
            .mul_mat(&self.inverse()?)
            .mul_mat(&other.inverse()?))
    }

    /// Submatrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.prime, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        m
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mul_mat(rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(F_{}; ", self.prime)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()?;
        write!(f, ")")
    }
}

/// Dot product of two vectors mod `ℓ`.
pub fn dot(prime: Prime, a: &[u32], b: &[u32]) -> u32 {
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
    (s % prime.get() as u64) as u32
}
