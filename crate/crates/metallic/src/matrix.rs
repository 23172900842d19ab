//! Dense matrices over a real quadratic field, with exact kernels,
//! determinants, inverses and inertia.
//!
//! [`ExactMatrix`] stores [`QuadExt`] entries row-major. All entries of
//! one matrix are expected to lie in a single field `Q(√d)` (rationals
//! embed everywhere); [`ExactMatrix::field_radicand`] checks that once at
//! the data boundary, after which internal arithmetic cannot mix fields.
//!
//! Shape mismatches in arithmetic are programming errors and panic, the
//! same contract `nalgebra` uses for dynamically sized matrices. The
//! elimination-based queries (`rref`, `rank`, `nullspace`, `determinant`,
//! `inverse`, `inertia`) are exact: there is no pivot-size heuristic to
//! tune and no tolerance anywhere.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{ExactError, QuadExt};

/// Dense row-major matrix with entries in one real quadratic field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QuadExt>,
}

/// Result of Gauss–Jordan elimination: the reduced row-echelon form, the
/// pivot column of each pivot row, and the rank.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub reduced: ExactMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl ExactMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![QuadExt::zero(); rows * cols] }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, QuadExt::one());
        }
        m
    }

    /// Scalar matrix `λ·I` of size `n`.
    pub fn scalar(n: usize, lambda: &QuadExt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, lambda.clone());
        }
        m
    }

    /// Diagonal matrix from its diagonal entries.
    pub fn diagonal(entries: &[QuadExt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<QuadExt>>) -> Result<Self, ExactError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(ExactError::InvalidParameters(
                "matrix rows have unequal lengths".into(),
            ));
        }
        Ok(Self { rows: height, cols: width, data: rows.into_iter().flatten().collect() })
    }

    /// Build from integer rows (test and fixture convenience).
    pub fn from_integers(rows: &[&[i64]]) -> Result<Self, ExactError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().copied().map(QuadExt::from_integer).collect())
                .collect(),
        )
    }

    /// Build entry-by-entry from a function of `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> QuadExt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Column vector (n×1) from a slice.
    pub fn column(entries: &[QuadExt]) -> Self {
        Self { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    /// Outer product `u·vᵀ` of a column and a row vector.
    pub fn outer(u: &[QuadExt], v: &[QuadExt]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| &u[i] * &v[j])
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

    pub fn get(&self, row: usize, col: usize) -> &QuadExt {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: QuadExt) {
        self.data[row * self.cols + col] = value;
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[QuadExt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as an owned vector.
    pub fn col(&self, j: usize) -> Vec<QuadExt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QuadExt::is_zero)
    }

    /// True when `M = Mᵀ` exactly.
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// True when `M = −Mᵀ` exactly.
    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..=i).all(|j| self.get(i, j) == &-self.get(j, i))
            })
    }

    /// Largest entry in absolute value (zero for an empty matrix).
    ///
    /// All entries share one field, so the comparison is total.
    pub fn max_abs(&self) -> QuadExt {
        let mut best = QuadExt::zero();
        for entry in &self.data {
            let mag = entry.abs();
            if mag.checked_cmp(&best).expect("entries share a field") == std::cmp::Ordering::Greater
            {
                best = mag;
            }
        }
        best
    }

    /// The single radicand all entries live in: `d` if any entry is
    /// irrational in `Q(√d)`, `1` for an all-rational matrix, and an
    /// error when two entries come from different fields.
    pub fn field_radicand(&self) -> Result<u64, ExactError> {
        let mut field = 1u64;
        for entry in &self.data {
            let d = entry.radicand();
            if d == 1 {
                continue;
            }
            if field == 1 {
                field = d;
            } else if field != d {
                return Err(ExactError::MixedRadicands { left: field, right: d });
            }
        }
        Ok(field)
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entry-wise map.
    pub fn map(&self, mut f: impl FnMut(&QuadExt) -> QuadExt) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| f(e)).collect() }
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: &QuadExt) -> Self {
        self.map(|e| e * factor)
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[QuadExt]) -> Vec<QuadExt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(QuadExt::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Floating-point image of the matrix.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(QuadExt::to_f64).collect())
            .collect()
    }

    /// Floating-point image as an `nalgebra` matrix.
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }

    /// Gauss–Jordan elimination to reduced row-echelon form.
    pub fn rref(&self) -> RowEchelon {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let pivot = m.get(pivot_row, col).clone();
            let inv = pivot.checked_inverse().expect("pivot is nonzero");
            m.scale_row(pivot_row, &inv);
            for r in 0..m.rows {
                if r != pivot_row && !m.get(r, col).is_zero() {
                    let factor = -m.get(r, col);
                    m.add_scaled_row(r, pivot_row, &factor);
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        let rank = pivot_cols.len();
        RowEchelon { reduced: m, pivot_cols, rank }
    }

    /// Rank over the exact field.
    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the (right) nullspace `{v : Mv = 0}`, one vector per free
    /// column of the echelon form; empty when the kernel is trivial.
    pub fn nullspace(&self) -> Vec<Vec<QuadExt>> {
        let RowEchelon { reduced, pivot_cols, .. } = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut map = vec![None; self.cols];
            for (row, &col) in pivot_cols.iter().enumerate() {
                map[col] = Some(row);
            }
            map
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![QuadExt::zero(); self.cols];
            v[free] = QuadExt::one();
            for (col, pivot) in pivot_of_col.iter().enumerate() {
                if let Some(row) = pivot {
                    v[col] = -reduced.get(*row, free);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix (exact Gaussian elimination).
    pub fn determinant(&self) -> QuadExt {
        assert!(self.is_square(), "determinant requires a square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = QuadExt::one();
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return QuadExt::zero();
            };
            if src != col {
                m.swap_rows(col, src);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            for r in col + 1..n {
                if !m.get(r, col).is_zero() {
                    let factor = -(m.get(r, col) / &pivot);
                    m.add_scaled_row(r, col, &factor);
                }
            }
            det = det * pivot;
        }
        det
    }

    /// Exact inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse requires a square matrix");
        let n = self.rows;
        let mut augmented = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                augmented.set(i, j, self.get(i, j).clone());
            }
            augmented.set(i, n + i, QuadExt::one());
        }
        let RowEchelon { reduced, pivot_cols, .. } = augmented.rref();
        // The block [A|I] always has full row rank; A is invertible only
        // when every pivot lands in the left block, i.e. at columns 0..n.
        let invertible =
            pivot_cols.len() == n && pivot_cols.iter().enumerate().all(|(i, &c)| c == i);
        if !invertible {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| reduced.get(i, n + j).clone()))
    }

    /// Determinants of the top-left `k×k` blocks for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<QuadExt> {
        assert!(self.is_square(), "principal minors require a square matrix");
        (1..=self.rows)
            .map(|k| Self::from_fn(k, k, |i, j| self.get(i, j).clone()).determinant())
            .collect()
    }

    /// Positive definiteness of a symmetric matrix, decided exactly by
    /// Sylvester's criterion (all leading principal minors positive).
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && self
                .leading_principal_minors()
                .iter()
                .all(QuadExt::is_positive)
    }

    /// Inertia `(n₊, n₋, n₀)` of a symmetric matrix: the numbers of
    /// positive, negative and zero eigenvalues, computed exactly by
    /// symmetric (congruent) elimination — Sylvester's law of inertia
    /// makes the diagonal sign counts invariant.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia requires a symmetric matrix");
        let mut m = self.clone();
        let n = m.rows;
        for k in 0..n {
            if m.get(k, k).is_zero() {
                // Prefer swapping in a later nonzero diagonal entry; else
                // fold a row with a nonzero entry in column k onto row k,
                // which makes the (k,k) entry 2·m[i][k] ≠ 0.
                if let Some(i) = (k + 1..n).find(|&i| !m.get(i, i).is_zero()) {
                    m.swap_rows(k, i);
                    m.swap_cols(k, i);
                } else if let Some(i) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    let one = QuadExt::one();
                    m.add_scaled_row(k, i, &one);
                    m.add_scaled_col(k, i, &one);
                } else {
                    continue;
                }
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                if !m.get(i, k).is_zero() {
                    let factor = -(m.get(i, k) / &pivot);
                    m.add_scaled_row(i, k, &factor);
                    m.add_scaled_col(i, k, &factor);
                }
            }
        }
        let mut counts = (0, 0, 0);
        for k in 0..n {
            match m.get(k, k).sign() {
                1 => counts.0 += 1,
                -1 => counts.1 += 1,
                _ => counts.2 += 1,
            }
        }
        counts
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, row: usize, factor: &QuadExt) {
        for j in 0..self.cols {
            let v = self.get(row, j) * factor;
            self.set(row, j, v);
        }
    }

    /// `row[target] += factor · row[source]`.
    fn add_scaled_row(&mut self, target: usize, source: usize, factor: &QuadExt) {
        for j in 0..self.cols {
            let v = self.get(target, j) + self.get(source, j) * factor;
            self.set(target, j, v);
        }
    }

    /// `col[target] += factor · col[source]`.
    fn add_scaled_col(&mut self, target: usize, source: usize, factor: &QuadExt) {
        for i in 0..self.rows {
            let v = self.get(i, target) + self.get(i, source) * factor;
            self.set(i, target, v);
        }
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = QuadExt;
    fn index(&self, (row, col): (usize, usize)) -> &QuadExt {
        self.get(row, col)
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in matrix sum");
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in matrix difference");
        ExactMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        ExactMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(QuadExt::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|e| -e)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| rendered.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        for (i, row) in rendered.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", cell, width = widths[j])?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[QuadExt]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<QuadExt>>::deserialize(deserializer)?;
        ExactMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
