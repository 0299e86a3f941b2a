//! Dense matrices over `F_p`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{require_prime, Fp};

/// Row-major `rows x cols` matrix over `F_p`, entries stored as residues.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixFp {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<u16>,
}

#[inline]
fn inv_mod(x: u32, p: u32) -> u32 {
    Fp::new(x as u64, p).inv().expect("pivot is nonzero").value()
}

impl MatrixFp {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        assert!(p <= u16::MAX as u32 + 1, "modulus {p} exceeds entry storage");
        MatrixFp {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = MatrixFp::zeros(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    /// An empty row list gives a `0 x 0` matrix; use [`MatrixFp::zeros`] for `0 x n`.
    pub fn from_rows<R: AsRef<[i64]>>(p: u32, rows: &[R]) -> Result<Self> {
        require_prime(p)?;
        if p > u16::MAX as u32 + 1 {
            return Err(Error::ModulusTooLarge(p));
        }
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: (rows.len(), cols),
                    got: (rows.len(), row.len()),
                });
            }
            data.extend(row.iter().map(|&x| x.rem_euclid(p as i64) as u16));
        }
        Ok(MatrixFp {
            rows: rows.len(),
            cols,
            p,
            data,
        })
    }

    /// Like [`MatrixFp::from_rows`] with a known column count, so zero-row matrices keep their width.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(p: u32, cols: usize, rows: &[R]) -> Result<Self> {
        if rows.is_empty() {
            require_prime(p)?;
            return Ok(MatrixFp::zeros(0, cols, p));
        }
        let m = MatrixFp::from_rows(p, rows)?;
        if m.cols != cols {
            return Err(Error::ShapeMismatch {
                expected: (m.rows, cols),
                got: m.shape(),
            });
        }
        Ok(m)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, p: u32, data: Vec<u16>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MatrixFp {
            rows,
            cols,
            p,
            data,
        }
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

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        Fp::new(self.entry(i, j) as u64, self.p)
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] as u32
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = (value % self.p) as u16;
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as u32).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_shape(&self, other: &MatrixFp) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixFp) -> Result<MatrixFp> {
        self.same_shape(other)?;
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u16)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &MatrixFp) -> Result<MatrixFp> {
        self.same_shape(other)?;
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&x, &y)| ((x as u32 + p - y as u32) % p) as u16)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn scale(&self, k: u32) -> MatrixFp {
        let p = self.p as u64;
        let k = k as u64 % p;
        let data = self
            .data
            .iter()
            .map(|&x| ((x as u64 * k) % p) as u16)
            .collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<u16>) -> MatrixFp {
        MatrixFp {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data,
        }
    }

    /// `self * other^T`; used to test orthogonality of row spaces.
    pub fn mul_transpose(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: (other.rows, self.cols),
                got: other.shape(),
            });
        }
        let p = self.p as u64;
        let mut out = MatrixFp::zeros(self.rows, other.rows, self.p);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let dot = self
                    .row(i)
                    .iter()
                    .zip(other.row(j))
                    .fold(0u64, |acc, (&x, &y)| (acc + x as u64 * y as u64) % p);
                out.data[i * other.rows + j] = dot as u16;
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: (other.rows, self.cols),
                got: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFp {
            rows: self.rows + other.rows,
            cols: self.cols,
            p: self.p,
            data,
        })
    }

    /// Places `self` to the left of `other`.
    pub fn hstack(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, other.cols),
                got: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(MatrixFp {
            rows: self.rows,
            cols,
            p: self.p,
            data,
        })
    }

    /// In-place Gauss-Jordan elimination. Pivots are the first nonzero entry found
    /// scanning down the current column. Returns the pivot columns.
    fn reduce_in_place(&mut self) -> Vec<usize> {
        let (rows, cols, p) = (self.rows, self.cols, self.p);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c] as u32, p);
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = ((*x as u32 * inv) % p) as u16;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c] as u32;
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let pivot_row = self.data[r * cols + j] as u32;
                    let x = &mut self.data[i * cols + j];
                    *x = ((*x as u32 + p - (f * pivot_row) % p) % p) as u16;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form, zero rows kept at the bottom.
    pub fn rref(&self) -> MatrixFp {
        let mut m = self.clone();
        m.reduce_in_place();
        m
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref_with_pivots(&self) -> (MatrixFp, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Keeps the first `n` rows.
    pub fn truncate_rows(&self, n: usize) -> MatrixFp {
        let n = n.min(self.rows);
        MatrixFp {
            rows: n,
            cols: self.cols,
            p: self.p,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// `(I_k | A)` for a `k x l` matrix `A`.
    pub fn lift(&self) -> MatrixFp {
        MatrixFp::identity(self.rows, self.p)
            .hstack(self)
            .expect("identity has matching rows")
    }

    /// Rows form a basis of `{ v : A v^T = 0 }`, one row per free column.
    pub fn null_space(&self) -> MatrixFp {
        let (r, pivots) = self.rref_with_pivots();
        let n = self.cols;
        let p = self.p;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut out = MatrixFp::zeros(free.len(), n, p);
        for (k, &f) in free.iter().enumerate() {
            out.data[k * n + f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let x = r.data[i * n + f] as u32;
                out.data[k * n + pc] = ((p - x) % p) as u16;
            }
        }
        out
    }

    /// `(I_m | 0_{m x mr})`.
    pub fn h(m: usize, r: usize, p: u32) -> MatrixFp {
        MatrixFp::identity(m, p)
            .hstack(&MatrixFp::zeros(m, m * r, p))
            .expect("matching rows")
    }

    /// `(0_{m x mr} | I_m)`.
    pub fn hat_h(m: usize, r: usize, p: u32) -> MatrixFp {
        MatrixFp::zeros(m, m * r, p)
            .hstack(&MatrixFp::identity(m, p))
            .expect("matching rows")
    }
}

impl fmt::Debug for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFp(p={}, {:?})", self.p, self.to_rows())
    }
}

/// Compact form such as `[[1,0],[1,1]]`.
impl fmt::Display for MatrixFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for MatrixFp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}
