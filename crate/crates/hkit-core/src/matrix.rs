//! Dense matrices over a generic scalar with the tensor operations the
//! rest of the crate needs: Kronecker products, Kronecker sums, adjoints,
//! exact inversion, and nilpotency detection.

use crate::scalar::{Conjugate, GaussRat, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A row-major `rows x cols` matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn new(rows: usize, cols: usize, data: Vec<K>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        assert!(rows > 0 && cols > 0, "matrices must be nonempty");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        assert!(!rows.is_empty(), "matrices must be nonempty");
        let nrows = rows.len();
        let cols = rows[0].len();
        assert!(cols > 0, "matrices must be nonempty");
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "matrix rows must all have the same length"
        );
        let data = rows.into_iter().flatten().collect();
        Matrix::new(nrows, cols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| K::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { K::one() } else { K::zero() })
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

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn entries(&self) -> impl Iterator<Item = &K> {
        self.data.iter()
    }

    pub fn map<M: Scalar>(&self, f: impl Fn(&K) -> M) -> Matrix<M> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> K {
        assert!(self.is_square(), "trace requires a square matrix");
        let mut acc = K::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    /// Kronecker product: block `(i1, j1)` holds `a[i1][j1] * b`.
    #[must_use]
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.rows, self.cols);
        let (r, s) = (other.rows, other.cols);
        Matrix::from_fn(p * r, q * s, |i, j| {
            self.get(i / r, j / s).clone() * other.get(i % r, j % s).clone()
        })
    }

    /// Kronecker sum `a (x) I + I (x) b` of two square matrices.
    #[must_use]
    pub fn tensor_sum(&self, other: &Self) -> Self {
        assert!(
            self.is_square() && other.is_square(),
            "tensor sums require square matrices"
        );
        let left = self.kron(&Matrix::identity(other.rows));
        let right = Matrix::identity(self.rows).kron(other);
        &left + &right
    }

    /// `self^n` for square matrices, with `a^0 = I`.
    #[must_use]
    pub fn pow(&self, n: u32) -> Self {
        assert!(self.is_square(), "powers require a square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Least `k >= 1` with `self^k = 0`, or `None` if the matrix is not
    /// nilpotent. A nilpotent `n x n` matrix has index at most `n`, so the
    /// scan is bounded.
    pub fn nilpotency_index(&self) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let mut power = self.clone();
        for k in 1..=self.rows as u32 {
            if power.is_zero() {
                return Some(k);
            }
            power = &power * self;
        }
        if power.is_zero() {
            // Unreachable for genuinely nilpotent matrices, kept for safety.
            return Some(self.rows as u32);
        }
        None
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<K> = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                    let tmp = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(pivot, j).clone());
                    inv.set(pivot, j, tmp);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() / p.clone());
                inv.set(col, j, inv.get(col, j).clone() / p.clone());
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                    let v = inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone();
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }
}

impl<K: Scalar + Conjugate> Matrix<K> {
    /// Conjugate transpose.
    #[must_use]
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }
}

/// The commutation permutation `P` with `P * (a (x) b) * P^T = b (x) a`
/// for `a` of size `p x p` and `b` of size `q x q`.
pub fn perfect_shuffle<K: Scalar>(p: usize, q: usize) -> Matrix<K> {
    let mut m = Matrix::zeros(p * q, p * q);
    for i in 0..p {
        for j in 0..q {
            m.set(j * p + i, i * q + j, K::one());
        }
    }
    m
}

impl Matrix<GaussRat> {
    /// Sum of squared entry moduli, exactly.
    pub fn frobenius_norm_sq(&self) -> BigRational {
        self.data
            .iter()
            .fold(BigRational::zero(), |acc, v| acc + v.norm_sqr())
    }

    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|v| v.to_complex64())
    }
}

impl Matrix<Complex64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl<K: Scalar> Add for &Matrix<K> {
    type Output = Matrix<K>;
    fn add(self, rhs: Self) -> Matrix<K> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix addition shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }
}

impl<K: Scalar> Sub for &Matrix<K> {
    type Output = Matrix<K>;
    fn sub(self, rhs: Self) -> Matrix<K> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix subtraction shape mismatch"
        );
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }
}

impl<K: Scalar> Mul for &Matrix<K> {
    type Output = Matrix<K>;
    fn mul(self, rhs: Self) -> Matrix<K> {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product shape mismatch: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = K::zero();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
            }
            acc
        })
    }
}

impl<K: Scalar> Neg for &Matrix<K> {
    type Output = Matrix<K>;
    fn neg(self) -> Matrix<K> {
        self.map(|v| -v.clone())
    }
}

impl<K: Scalar> Add for Matrix<K> {
    type Output = Matrix<K>;
    fn add(self, rhs: Self) -> Matrix<K> {
        &self + &rhs
    }
}

impl<K: Scalar> Sub for Matrix<K> {
    type Output = Matrix<K>;
    fn sub(self, rhs: Self) -> Matrix<K> {
        &self - &rhs
    }
}

impl<K: Scalar> Mul for Matrix<K> {
    type Output = Matrix<K>;
    fn mul(self, rhs: Self) -> Matrix<K> {
        &self * &rhs
    }
}

impl<K: fmt::Display> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.data[i * self.cols + j])?;
                if j + 1 < self.cols {
                    write!(f, ", ")?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// JSON shape for exact matrices: `{"dim": n, "entries": [[..], ..]}` with
/// `entries` a square `dim x dim` array of scalars.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<GaussRat>>,
}

impl Serialize for Matrix<GaussRat> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Vec<GaussRat>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        MatrixRepr { dim: self.rows, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix<GaussRat> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.dim == 0 {
            return Err(de::Error::custom("matrix dim must be positive"));
        }
        if repr.entries.len() != repr.dim || repr.entries.iter().any(|r| r.len() != repr.dim) {
            return Err(de::Error::custom(format!(
                "entries must form a {dim}x{dim} array",
                dim = repr.dim
            )));
        }
        Ok(Matrix::from_rows(repr.entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<GaussRat> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(GaussRat::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn product_and_identity() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let i = Matrix::<GaussRat>::identity(2);
        assert_eq!(&a * &i, a);
        assert_eq!(&i * &a, a);
        let b = m(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(&a * &b, m(vec![vec![2, 1], vec![4, 3]]));
    }

    #[test]
    fn kron_small_case() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let b = m(vec![vec![0, 1], vec![0, 0]]);
        let k = a.kron(&b);
        assert_eq!(
            k,
            m(vec![
                vec![0, 1, 0, 2],
                vec![0, 0, 0, 0],
                vec![0, 3, 0, 4],
                vec![0, 0, 0, 0],
            ])
        );
    }

    #[test]
    fn tensor_sum_of_diagonals_adds_eigenvalues() {
        let a = m(vec![vec![1, 0], vec![0, 2]]);
        let b = m(vec![vec![5]]);
        assert_eq!(a.tensor_sum(&b), m(vec![vec![6, 0], vec![0, 7]]));
    }

    #[test]
    fn adjoint_conjugates() {
        let a = Matrix::from_rows(vec![
            vec![GaussRat::i(), GaussRat::from_int(2)],
            vec![GaussRat::zero(), GaussRat::from_int(1) + GaussRat::i()],
        ]);
        let ad = a.adjoint();
        assert_eq!(ad.get(0, 0), &(-GaussRat::i()));
        assert_eq!(ad.get(0, 1), &GaussRat::zero());
        assert_eq!(ad.get(1, 0), &GaussRat::from_int(2));
        assert_eq!(ad.get(1, 1), &(GaussRat::from_int(1) - GaussRat::i()));
        assert!(!a.is_hermitian());
        let h = Matrix::from_rows(vec![
            vec![GaussRat::from_int(1), GaussRat::i()],
            vec![-GaussRat::i(), GaussRat::from_int(3)],
        ]);
        assert!(h.is_hermitian());
    }

    #[test]
    fn inverse_round_trips() {
        let a = m(vec![vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!((&inv * &a).is_identity());
        let singular = m(vec![vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn nilpotency_index_of_shift_blocks() {
        let n = m(vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(n.nilpotency_index(), Some(3));
        let z = Matrix::<GaussRat>::zeros(2, 2);
        assert_eq!(z.nilpotency_index(), Some(1));
        let id = Matrix::<GaussRat>::identity(2);
        assert_eq!(id.nilpotency_index(), None);
    }

    #[test]
    fn shuffle_conjugation_swaps_factors() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let b = m(vec![vec![0, 5], vec![6, 7]]);
        let p = perfect_shuffle::<GaussRat>(2, 2);
        let lhs = &(&p * &a.kron(&b)) * &p.transpose();
        assert_eq!(lhs, b.kron(&a));
    }

    #[test]
    fn serde_uses_dim_entries_schema() {
        let json = r#"{"dim": 2, "entries": [["1/2", 3], ["i", "1-2*i"]]}"#;
        let a: Matrix<GaussRat> = serde_json::from_str(json).unwrap();
        assert_eq!(a.get(0, 0), &GaussRat::from_ratio(1, 2));
        assert_eq!(a.get(1, 1), &(GaussRat::from_int(1) - GaussRat::from_int(2) * GaussRat::i()));
        let back = serde_json::to_string(&a).unwrap();
        let again: Matrix<GaussRat> = serde_json::from_str(&back).unwrap();
        assert_eq!(a, again);
        for bad in [
            r#"{"dim": 2, "entries": [[1,2],[3]]}"#,
            r#"{"dim": 1, "entries": [[1,2],[3,4]]}"#,
            r#"{"dim": 0, "entries": []}"#,
            r#"{"dim": 1, "entries": [[1]], "extra": 0}"#,
            r#"[[1]]"#,
        ] {
            assert!(serde_json::from_str::<Matrix<GaussRat>>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn frobenius_norm_sq_is_exact() {
        let a = Matrix::from_rows(vec![
            vec![GaussRat::from_ratio(1, 2), GaussRat::i()],
            vec![GaussRat::zero(), GaussRat::from_int(2)],
        ]);
        assert_eq!(
            a.frobenius_norm_sq(),
            BigRational::new(21.into(), 4.into())
        );
    }
}
