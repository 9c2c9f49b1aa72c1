use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;

/// Dense integer matrix, row-major. Arithmetic panics on `i64` overflow
/// rather than wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds from rows; `cols` is needed for matrices without rows.
    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMatrix {
            rows: r,
            cols,
            data,
        }
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

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.checked_mul(other[(k, j)]).expect("matrix entry overflow");
                    let cell = &mut out[(i, j)];
                    *cell = cell.checked_add(prod).expect("matrix entry overflow");
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        self.zip(other, |a, b| a.checked_add(b))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.zip(other, |a, b| a.checked_sub(b))
    }

    fn zip(&self, other: &IntMatrix, f: impl Fn(i64, i64) -> Option<i64>) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b).expect("matrix entry overflow"))
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self[(i, j)] == 1,
                std::cmp::Ordering::Greater => self[(i, j)] == 0,
                std::cmp::Ordering::Less => true,
            })
        })
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &m[n - 1][n - 1]
        }
    }

    /// Characteristic polynomial `det(t·Id − M)` by the Faddeev–LeVerrier
    /// recursion in exact arithmetic.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square());
        let n = self.rows;
        let a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} Id
            let mut next = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for l in 0..n {
                    if a[i][l].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !m[l][j].is_zero() {
                            next[i][j] += &a[i][l] * &m[l][j];
                        }
                    }
                }
                next[i][i] += &coeffs[n - k + 1];
            }
            m = next;
            // c_{n-k} = -tr(A M_k) / k
            let mut tr = BigInt::zero();
            for i in 0..n {
                for l in 0..n {
                    tr += &a[i][l] * &m[l][i];
                }
            }
            coeffs[n - k] = -tr / BigInt::from(k as u64);
        }
        IntPoly::new(
            coeffs
                .iter()
                .map(|c| c.to_i64().expect("characteristic polynomial coefficient overflow"))
                .collect(),
        )
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)];
            }
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl From<Vec<Vec<i64>>> for IntMatrix {
    fn from(rows: Vec<Vec<i64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        IntMatrix::from_rows(rows, cols)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_charpoly() {
        let m = IntMatrix::from(vec![vec![2, 1], vec![7, 4]]);
        assert_eq!(m.det(), BigInt::from(1));
        // t^2 - 6t + 1
        assert_eq!(m.charpoly().coeffs(), &[1, -6, 1]);
        let z = IntMatrix::from(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(z.det(), BigInt::from(0));
        assert_eq!(IntMatrix::identity(0).charpoly().coeffs(), &[1]);
        let swap = IntMatrix::from(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(swap.det(), BigInt::from(-1));
    }

    #[test]
    fn powers() {
        let t = IntMatrix::from(vec![vec![1, 1], vec![-1, 0]]);
        assert!(!t.pow(3).is_identity());
        assert!(t.pow(6).is_identity());
        assert_eq!(t.pow(3), t.pow(3).transpose().transpose());
    }

    #[test]
    fn serde_as_nested_rows() {
        let m = IntMatrix::from(vec![vec![1, 2], vec![3, 4]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,2],[3,4]]");
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
