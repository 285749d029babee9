//! Dense vectors and square matrices over either scalar mode.
//!
//! Matrices act on coordinate columns: column `j` of a matrix is the image
//! of the basis vector `e_{j+1}`. Indices are 0-based internally; anything
//! user-facing (errors, reports) is 1-based.

use std::ops::Index;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use num::complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{ApproxScalar, ExactScalar, Scalar};

/// Coordinates `(x_1, ..., x_n)` of `x = sum x_i e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Vector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![S::zero(); n])
    }

    /// The basis vector `e_k` for 1-based `k`.
    pub fn basis(n: usize, k: usize) -> Self {
        assert!((1..=n).contains(&k), "basis index {k} out of range 1..={n}");
        let mut v = Self::zeros(n);
        v.0[k - 1] = S::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[S] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(S::is_zero)
    }

    /// 1-based index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|v| !v.is_zero()).map(|i| i + 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b).collect()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector(self.0.iter().map(|a| a.clone() * c).collect())
    }

    /// Mode-aware entrywise comparison; returns the first differing 1-based index.
    pub fn first_mismatch(&self, expected: &Self) -> Option<usize> {
        if self.len() != expected.len() {
            return Some(self.len().min(expected.len()) + 1);
        }
        self.0.iter().zip(&expected.0).position(|(a, b)| !a.close_to(b)).map(|i| i + 1)
    }

    pub fn close_to(&self, expected: &Self) -> bool {
        self.first_mismatch(expected).is_none()
    }

    /// Largest entrywise distance.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }

    /// Largest `|a - b| / max(1, |b|)`, the quantity the approximate
    /// tolerance bounds.
    pub fn max_scaled_distance(&self, expected: &Self) -> f64 {
        self.0
            .iter()
            .zip(&expected.0)
            .map(|(a, b)| a.distance(b) / b.to_approx().norm().max(1.0))
            .fold(0.0, f64::max)
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> Vector<T> {
        Vector(self.0.iter().map(f).collect())
    }
}

impl Vector<ExactScalar> {
    pub fn to_mode<T: Scalar>(&self) -> Vector<T> {
        Vector(self.0.iter().map(T::from_exact).collect())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Serialize> Serialize for Vector<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de, S: Deserialize<'de>> Deserialize<'de> for Vector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Vector(Vec::deserialize(deserializer)?))
    }
}

/// Row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<S> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, entries: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<S>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            check_dim(n, row.len())?;
            entries.extend(row);
        }
        Ok(SquareMatrix { n, entries })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: Vec<Vector<S>>) -> Result<Self> {
        let n = columns.len();
        let mut m = Self::zeros(n);
        for (j, col) in columns.into_iter().enumerate() {
            check_dim(n, col.len())?;
            for (i, v) in col.0.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: S) {
        self.entries[row * self.n + col] = v;
    }

    /// Image of `e_{j+1}`.
    pub fn column(&self, j: usize) -> Vector<S> {
        Vector((0..self.n).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn mat_vec(&self, v: &Vector<S>) -> Result<Vector<S>> {
        check_dim(self.n, v.len())?;
        let out = (0..self.n)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + &(a.clone() * x);
                    }
                }
                acc
            })
            .collect();
        Ok(Vector(out))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.n, rhs.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + &(a.clone() * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn invert(&self) -> Result<Self> {
        S::invert_matrix(self)
    }

    pub fn close_to(&self, expected: &Self) -> bool {
        self.n == expected.n && self.entries.iter().zip(&expected.entries).all(|(a, b)| a.close_to(b))
    }

    /// First (row-major) 1-based position where `self` differs from `expected`.
    pub fn first_mismatch(&self, expected: &Self) -> Option<(usize, usize)> {
        if self.n != expected.n {
            return Some((1, 1));
        }
        self.entries
            .iter()
            .zip(&expected.entries)
            .position(|(a, b)| !a.close_to(b))
            .map(|p| (p / self.n + 1, p % self.n + 1))
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> SquareMatrix<T> {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }
}

impl SquareMatrix<ExactScalar> {
    pub fn to_mode<T: Scalar>(&self) -> SquareMatrix<T> {
        self.map(T::from_exact)
    }
}

impl<S: Serialize> Serialize for SquareMatrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let rows: Vec<&[S]> = self.entries.chunks(self.n.max(1)).collect();
        rows.serialize(serializer)
    }
}

impl<'de, S: Deserialize<'de>> Deserialize<'de> for SquareMatrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<S>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(serde::de::Error::custom(format!(
                    "matrix row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(SquareMatrix { n, entries })
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Reduced row-echelon basis of the span of `vectors`.
pub fn row_basis(vectors: Vec<Vector<ExactScalar>>) -> Vec<Vector<ExactScalar>> {
    let mut rows: Vec<Vec<ExactScalar>> = vectors.into_iter().map(Vector::into_entries).collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip().expect("pivot is nonzero");
        let pivot_row: Vec<ExactScalar> = rows[rank].iter().map(|v| v.clone() * &inv).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - &(f.clone() * p);
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rows.truncate(rank);
    rows.into_iter().map(Vector::new).collect()
}

/// Exact inverse. Rows are scaled to integers, the augmented system is
/// reduced with Bareiss fraction-free elimination, and the triangular result
/// is back-substituted over the rationals.
pub(crate) fn invert_exact(m: &SquareMatrix<ExactScalar>) -> Result<SquareMatrix<ExactScalar>> {
    let n = m.dim();
    let width = 2 * n;
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<BigRational> = (0..n).map(|j| m.get(i, j).to_big()).collect();
        let scale = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let mut out: Vec<BigInt> = row.iter().map(|q| q.numer() * (&scale / q.denom())).collect();
        // right-hand side: the same row scaling applied to the identity
        out.extend((0..n).map(|j| if j == i { scale.clone() } else { BigInt::zero() }));
        a.push(out);
    }

    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
        a.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let mut inv = SquareMatrix::<ExactScalar>::zeros(n);
    for c in 0..n {
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[i][n + c].clone());
            for j in i + 1..n {
                if !a[i][j].is_zero() {
                    acc -= BigRational::from_integer(a[i][j].clone()) * inv.get(j, c).to_big();
                }
            }
            let v = acc / BigRational::from_integer(a[i][i].clone());
            inv.set(i, c, ExactScalar::from_big(v));
        }
    }
    Ok(inv)
}

/// Forward elimination over an exact field; true iff every column pivots.
pub(crate) fn full_rank_field<S: Scalar>(m: &SquareMatrix<S>) -> bool {
    let n = m.dim();
    let mut a = m.rows();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return false;
        };
        a.swap(k, p);
        let Some(piv) = a[k][k].recip() else { return false };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() * &piv;
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    a[i][j] = a[i][j].clone() - &(f.clone() * &a[k][j]);
                }
            }
        }
    }
    true
}

/// Gauss-Jordan over any exact field: first nonzero pivot.
pub(crate) fn invert_field<S: Scalar>(m: &SquareMatrix<S>) -> Result<SquareMatrix<S>> {
    let n = m.dim();
    let mut a = m.rows();
    let mut inv = SquareMatrix::<S>::identity(n).rows();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].recip().ok_or(Error::Singular)?;
        for j in 0..n {
            a[k][j] = a[k][j].clone() * &piv;
            inv[k][j] = inv[k][j].clone() * &piv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let (ak, ik) = (a[k][j].clone(), inv[k][j].clone());
                a[i][j] = a[i][j].clone() - &(f.clone() * &ak);
                inv[i][j] = inv[i][j].clone() - &(f.clone() * &ik);
            }
        }
    }
    SquareMatrix::from_rows(inv)
}

/// Gauss-Jordan inverse with partial pivoting, run on the Ruiz-equilibrated
/// matrix `R m C` (power-of-two scalings, so exact). Equilibration makes the
/// singularity test scale-free: automorphism matrices with huge lower
/// entries and O(1) diagonals stay invertible.
pub(crate) fn invert_approx(m: &SquareMatrix<ApproxScalar>) -> Result<SquareMatrix<ApproxScalar>> {
    let n = m.dim();
    if !m.entries.iter().all(ApproxScalar::is_finite) {
        return Err(Error::Singular);
    }
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).0).collect()).collect();
    let (mut r, mut c) = (vec![1.0f64; n], vec![1.0f64; n]);
    let pow2 = |x: f64| if x > 0.0 { 2f64.powi(-(x.sqrt().log2().round() as i32)) } else { 1.0 };
    for _ in 0..30 {
        let row_max: Vec<f64> = a.iter().map(|row| row.iter().map(|v| v.norm()).fold(0.0, f64::max)).collect();
        let col_max: Vec<f64> = (0..n).map(|j| a.iter().map(|row| row[j].norm()).fold(0.0, f64::max)).collect();
        if row_max.iter().chain(&col_max).any(|&x| x == 0.0) {
            return Err(Error::Singular);
        }
        let (fr, fc): (Vec<f64>, Vec<f64>) = (row_max.iter().map(|&x| pow2(x)).collect(), col_max.iter().map(|&x| pow2(x)).collect());
        if fr.iter().chain(&fc).all(|&f| f == 1.0) {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                a[i][j] *= fr[i] * fc[j];
            }
            r[i] *= fr[i];
            c[i] *= fc[i];
        }
    }

    let mut inv: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|row| (row, a[row][k].norm()))
            .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if !(best > 1e-12) {
            return Err(Error::Singular);
        }
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].inv();
        for j in 0..n {
            a[k][j] *= piv;
            inv[k][j] *= piv;
        }
        for i in 0..n {
            let f = a[i][k];
            if i == k || f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let (ak, ik) = (a[k][j], inv[k][j]);
                a[i][j] -= f * ak;
                inv[i][j] -= f * ik;
            }
        }
    }
    // m^{-1} = C (R m C)^{-1} R
    let rows = (0..n).map(|i| (0..n).map(|j| ApproxScalar(inv[i][j] * c[i] * r[j])).collect()).collect();
    let out = SquareMatrix::from_rows(rows)?;
    if out.entries.iter().all(ApproxScalar::is_finite) {
        Ok(out)
    } else {
        Err(Error::Singular)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64) -> ExactScalar {
        ExactScalar::from(p)
    }

    fn qv(xs: &[i64]) -> Vector<ExactScalar> {
        Vector::new(xs.iter().map(|&x| q(x)).collect())
    }

    fn random_rational(rng: &mut ChaCha8Rng) -> ExactScalar {
        ExactScalar::new(rng.gen_range(-9..=9), rng.gen_range(1..=5))
    }

    #[test]
    fn identity_action() {
        let id = SquareMatrix::<ExactScalar>::identity(3);
        assert_eq!(id.mat_vec(&qv(&[1, 2, 3])).unwrap(), qv(&[1, 2, 3]));
    }

    #[test]
    fn diagonal_action() {
        let d = SquareMatrix::diagonal(vec![q(1), q(2), q(1)]);
        assert_eq!(d.mat_vec(&qv(&[1, 1, 0])).unwrap(), qv(&[1, 2, 0]));
    }

    #[test]
    fn basis_vector_extracts_column() {
        let mut l = SquareMatrix::<ExactScalar>::identity(3);
        l.set(1, 0, q(5));
        let e1 = Vector::basis(3, 1);
        assert_eq!(l.mat_vec(&e1).unwrap(), l.column(0));
        assert_eq!(l.column(0), qv(&[1, 5, 0]));
    }

    #[test]
    fn dimension_mismatch() {
        let id = SquareMatrix::<ExactScalar>::identity(3);
        assert_eq!(
            id.mat_vec(&qv(&[1, 2])),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn invert_identity_and_diagonal() {
        let id = SquareMatrix::<ExactScalar>::identity(4);
        assert_eq!(id.invert().unwrap(), id);
        let d = SquareMatrix::diagonal(vec![q(2), q(3)]);
        let expected = SquareMatrix::diagonal(vec![ExactScalar::new(1, 2), ExactScalar::new(1, 3)]);
        assert_eq!(d.invert().unwrap(), expected);
    }

    #[test]
    fn invert_unit_lower_triangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut l = SquareMatrix::<ExactScalar>::identity(4);
        for i in 0..4 {
            for j in 0..i {
                l.set(i, j, random_rational(&mut rng));
            }
        }
        let inv = l.invert().unwrap();
        assert_eq!(l.matmul(&inv).unwrap(), SquareMatrix::identity(4));
    }

    #[test]
    fn singular_is_reported() {
        let m = SquareMatrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        assert_eq!(m.invert(), Err(Error::Singular));
        assert_eq!(m.to_mode::<ApproxScalar>().invert(), Err(Error::Singular));
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = SquareMatrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(m.matmul(&m.invert().unwrap()).unwrap(), SquareMatrix::identity(2));
    }

    #[test]
    fn random_invertible_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 3..=7 {
            let mut done = 0;
            while done < 100 {
                let mut m = SquareMatrix::<ExactScalar>::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, random_rational(&mut rng));
                    }
                }
                let Ok(inv) = m.invert() else { continue };
                assert_eq!(m.matmul(&inv).unwrap(), SquareMatrix::identity(n));

                let ma = m.to_mode::<ApproxScalar>();
                let inva = ma.invert().expect("approximate inverse");
                let prod = ma.matmul(&inva).unwrap();
                let id = SquareMatrix::<ApproxScalar>::identity(n);
                for i in 0..n {
                    for j in 0..n {
                        assert!(prod.get(i, j).distance(id.get(i, j)) <= 1e-9);
                    }
                }
                done += 1;
            }
        }
    }

    #[test]
    fn matrix_json_is_row_major() {
        let m = SquareMatrix::from_rows(vec![
            vec![q(1), ExactScalar::new(1, 2)],
            vec![q(0), q(-3)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["1","1/2"],["0","-3"]]"#);
        let back: SquareMatrix<ExactScalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SquareMatrix<ExactScalar>>(r#"[["1"],["0","1"]]"#).is_err());
    }
}
