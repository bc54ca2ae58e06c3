use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::ArithError;

/// Square matrix over the integers with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. Fails unless the rows form a square.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, ArithError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(ArithError::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self { dim, entries })
    }

    pub fn diagonal<I: IntoIterator<Item = BigInt>>(diag: I) -> Self {
        let diag: Vec<BigInt> = diag.into_iter().collect();
        let mut m = Self::zero(diag.len());
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> Self {
        let dim = a.dim + b.dim;
        let mut m = Self::zero(dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                m[(a.dim + i, a.dim + j)] = b[(i, j)].clone();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.dim).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = &self[(i, j)];
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, ArithError> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix, ArithError> {
        self.check_dim(rhs.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(IntMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, ArithError> {
        self.check_dim(rhs.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(IntMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] -= 1;
        }
        m
    }

    pub fn pow(&self, mut exp: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, ArithError> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v.div_floor(&prev);
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.dim {
            self.entries.swap(a * self.dim + j, b * self.dim + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.dim {
            self.entries.swap(i * self.dim + a, i * self.dim + b);
        }
    }

    /// row[dst] += c * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.dim {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.dim {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.dim {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn check_dim(&self, other: usize) -> Result<(), ArithError> {
        if self.dim == other {
            Ok(())
        } else {
            Err(ArithError::DimensionMismatch {
                expected: self.dim,
                got: other,
            })
        }
    }

    /// Largest absolute value among the entries (zero for the zero matrix).
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Entries as machine integers, when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|e| e.to_i64()).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.dim + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small_cases() {
        let m = IntMatrix::from_rows(&[[0, -1], [1, -1]]).unwrap();
        assert_eq!(m.det(), BigInt::from(1));
        let m = IntMatrix::from_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]).unwrap();
        assert_eq!(m.det(), BigInt::from(-2));
        let m = IntMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert!(m.det().is_zero());
    }

    #[test]
    fn pow_and_identity() {
        let w_i = IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap();
        assert!(w_i.pow(4).is_identity());
        assert!(!w_i.pow(2).is_identity());
        assert!(w_i.pow(0).is_identity());
    }

    #[test]
    fn rejects_ragged_rows() {
        let rows: Vec<Vec<i64>> = vec![vec![1, 2], vec![3]];
        assert!(IntMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn block_diag_layout() {
        let a = IntMatrix::from_rows(&[[2]]).unwrap();
        let b = IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap();
        let m = IntMatrix::block_diag(&a, &b);
        assert_eq!(m.to_i64_rows().unwrap(), vec![vec![2, 0, 0], vec![0, 0, -1], vec![0, 1, 0]]);
    }
}
