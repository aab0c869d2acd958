//! Small dense matrices, index sets and numerical rank.
//!
//! Empty matrices (zero rows or zero columns) are ordinary values here: stacking,
//! slicing and rank queries all accept them.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, Error, Result};

/// Default relative threshold for numerical rank.
pub const DEFAULT_TOL_RANK: f64 = 1e-10;

/// Row-major dense matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return dim_err(format!("{} entries for a {rows}x{cols} matrix", data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from a list of rows. `cols` fixes the width when `rows` is empty.
    pub fn from_rows(rows: &[Vec<f64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return dim_err(format!("row {i} has {} entries, expected {cols}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Like [`Matrix::from_rows`] but infers the width from the first row.
    pub fn from_nested(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// A single-row matrix.
    pub fn row_vector(v: &[f64]) -> Self {
        Matrix { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn diag(v: &[f64]) -> Self {
        let mut m = Matrix::zeros(v.len(), v.len());
        for (i, x) in v.iter().enumerate() {
            m[(i, i)] = *x;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows_iter().map(<[f64]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return dim_err(format!("vector of length {} times {}x{} matrix", v.len(), self.rows, self.cols));
        }
        Ok(self.rows_iter().map(|r| dot(r, v)).collect())
    }

    /// `selfᵀ v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return dim_err(format!("transpose of {}x{} matrix times vector of length {}", self.rows, self.cols, v.len()));
        }
        let mut out = vec![0.0; self.cols];
        for (r, &vi) in self.rows_iter().zip(v) {
            for (o, a) in out.iter_mut().zip(r) {
                *o += a * vi;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return dim_err(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Stacks matrices vertically. All parts must share the column count `cols`.
    pub fn vstack(parts: &[&Matrix], cols: usize) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols && p.rows > 0 {
                return dim_err(format!("vstack: part has {} columns, expected {cols}", p.cols));
            }
            rows += p.rows;
            data.extend_from_slice(&p.data);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Stacks matrices horizontally. All parts must share the row count `rows`.
    pub fn hstack(parts: &[&Matrix], rows: usize) -> Result<Matrix> {
        for p in parts {
            if p.rows != rows && p.cols > 0 {
                return dim_err(format!("hstack: part has {} rows, expected {rows}", p.rows));
            }
        }
        let cols = parts.iter().map(|p| if p.rows == rows { p.cols } else { 0 }).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            if p.rows != rows {
                continue;
            }
            for i in 0..rows {
                for j in 0..p.cols {
                    out[(i, off + j)] = p[(i, j)];
                }
            }
            off += p.cols;
        }
        Ok(out)
    }

    /// Extracts rows and columns. Indices must be in range.
    pub fn submatrix(&self, rows: Sel<'_>, cols: Sel<'_>) -> Result<Matrix> {
        let ri = rows.resolve(self.rows)?;
        let ci = cols.resolve(self.cols)?;
        Ok(Matrix::from_fn(ri.len(), ci.len(), |i, j| self[(ri[i], ci[j])]))
    }

    pub fn select_rows(&self, rows: &IndexSet) -> Result<Matrix> {
        self.submatrix(Sel::Set(rows), Sel::All)
    }

    pub fn select_cols(&self, cols: &IndexSet) -> Result<Matrix> {
        self.submatrix(Sel::All, Sel::Set(cols))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { 1.0 } else { 0.0 }))
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.rows_iter()).finish()
    }
}

/// Serialized as an array of rows plus, for empty matrices, nothing else:
/// the width of a row-less matrix is recovered from context by the caller.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_nested(&rows).map_err(serde::de::Error::custom)
    }
}

/// Sorted, duplicate-free set of 0-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Indices in `0..n` not in the set.
    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((0..n).filter(|i| !self.contains(*i)).collect())
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|i| !other.contains(*i)).collect())
    }

    /// 1-based indices, as used in human-facing reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn gather(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| v[i]).collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

/// Row or column selector for [`Matrix::submatrix`].
#[derive(Clone, Copy, Debug)]
pub enum Sel<'a> {
    All,
    Set(&'a IndexSet),
}

impl Sel<'_> {
    fn resolve(self, n: usize) -> Result<Vec<usize>> {
        match self {
            Sel::All => Ok((0..n).collect()),
            Sel::Set(s) => {
                if let Some(bad) = s.iter().find(|&i| i >= n) {
                    return dim_err(format!("index {bad} out of range 0..{n}"));
                }
                Ok(s.as_slice().to_vec())
            }
        }
    }
}

/// Numerical rank: the number of singular values above `tol_rank * max(rows, cols) * sigma_max`.
pub fn rank(m: &Matrix, tol_rank: f64) -> Result<usize> {
    if !m.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    if m.is_empty() {
        return Ok(0);
    }
    let sv = m.to_nalgebra().singular_values();
    let smax = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return Ok(0);
    }
    let thresh = tol_rank * (m.rows.max(m.cols) as f64) * smax;
    Ok(sv.iter().filter(|&&s| s > thresh).count())
}

/// True when the columns are linearly independent. A matrix with no columns qualifies.
pub fn full_column_rank(m: &Matrix, tol_rank: f64) -> Result<bool> {
    if m.ncols() == 0 {
        return Ok(true);
    }
    Ok(rank(m, tol_rank)? == m.ncols())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_nested(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&m(&[&[1.0, 1.0], &[-1.0, -1.0]]), DEFAULT_TOL_RANK).unwrap(), 1);
        assert!(full_column_rank(&m(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]), DEFAULT_TOL_RANK).unwrap());
        assert!(full_column_rank(&Matrix::zeros(3, 0), DEFAULT_TOL_RANK).unwrap());
        assert!(!full_column_rank(&Matrix::zeros(0, 2), DEFAULT_TOL_RANK).unwrap());
        assert_eq!(rank(&Matrix::zeros(2, 2), DEFAULT_TOL_RANK).unwrap(), 0);
    }

    #[test]
    fn rank_rejects_nan() {
        let mut a = Matrix::identity(2);
        a[(0, 1)] = f64::NAN;
        assert!(matches!(rank(&a, DEFAULT_TOL_RANK), Err(Error::Input(_))));
    }

    #[test]
    fn submatrix_and_stacking() {
        let a = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let s = a.submatrix(Sel::Set(&IndexSet::new(vec![1])), Sel::Set(&IndexSet::new(vec![2, 0]))).unwrap();
        assert_eq!(s.to_rows(), vec![vec![4.0, 6.0]]);
        let e = a.select_rows(&IndexSet::empty()).unwrap();
        assert_eq!((e.nrows(), e.ncols()), (0, 3));
        let st = Matrix::vstack(&[&a, &e, &Matrix::zeros(0, 3)], 3).unwrap();
        assert_eq!(st, a);
        assert!(a.select_rows(&IndexSet::new(vec![5])).is_err());
        let h = Matrix::hstack(&[&a, &Matrix::identity(2)], 2).unwrap();
        assert_eq!(h.row(1), &[4.0, 5.0, 6.0, 0.0, 1.0]);
    }

    #[test]
    fn index_set_is_sorted_and_unique() {
        let s = IndexSet::new(vec![3, 1, 3, 0]);
        assert_eq!(s.as_slice(), &[0, 1, 3]);
        assert_eq!(s.one_based(), vec![1, 2, 4]);
        assert_eq!(s.complement(5).as_slice(), &[2, 4]);
    }
}
