use std::fmt;

use super::{AlgebraError, FieldElem, FieldSpec};

/// Dense row-major matrix over a small finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{:?}>{}x{} [", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

fn check_indices(set: &[usize], bound: usize) -> Result<(), AlgebraError> {
    match set.iter().find(|&&i| i >= bound) {
        Some(&index) => Err(AlgebraError::IndexOutOfRange { index, bound }),
        None => Ok(()),
    }
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(AlgebraError::NotInField { value: bad.value() as u32, order: field.order() });
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Builds a matrix from integer encodings, one inner vector per row.
    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
            }
            for &v in r {
                data.push(field.elem(v)?);
            }
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Builds a matrix column by column; every column must have length `rows`.
    pub fn from_columns(field: &FieldSpec, rows: usize, columns: &[Vec<FieldElem>]) -> Self {
        let cols = columns.len();
        let mut data = vec![FieldElem::ZERO; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, &v) in c.iter().enumerate() {
                data[i * cols + j] = v;
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = FieldElem::ONE;
        }
        m
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row indices where column `j` is nonzero, ascending.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| !self.get(i, j).is_zero()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Entries as integer encodings, row by row.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.value() as u32).collect()).collect()
    }

    /// The submatrix on rows `row_set` and columns `col_set`, in the order given
    /// (callers pass ascending sets).
    pub fn restrict(&self, row_set: &[usize], col_set: &[usize]) -> Result<Matrix, AlgebraError> {
        check_indices(row_set, self.rows)?;
        check_indices(col_set, self.cols)?;
        let mut data = Vec::with_capacity(row_set.len() * col_set.len());
        for &i in row_set {
            for &j in col_set {
                data.push(self.get(i, j));
            }
        }
        Ok(Matrix { field: self.field.clone(), rows: row_set.len(), cols: col_set.len(), data })
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    /// `self` with `count` all-zero columns appended on the right.
    pub fn pad_zero_columns(&self, count: usize) -> Matrix {
        let cols = self.cols + count;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend(std::iter::repeat_n(FieldElem::ZERO, count));
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols, data }
    }

    /// Row vector times matrix: `x · self`.
    pub fn left_mul(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>, AlgebraError> {
        if x.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(xi, g));
            }
        }
        Ok(out)
    }

    /// Row rank by Gaussian elimination, pivoting on the first nonzero entry of
    /// each column.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    a.swap(p * cols + j, rank * cols + j);
                }
            }
            let pinv = f.inv(a[rank * cols + c]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let v = a[r * cols + c];
                if v.is_zero() {
                    continue;
                }
                let factor = f.mul(v, pinv);
                for j in c..cols {
                    let sub = f.mul(factor, a[rank * cols + j]);
                    a[r * cols + j] = f.sub(a[r * cols + j], sub);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Whether `v` (a column vector of length `rows`) is a linear combination of
    /// the columns of `self`.
    pub fn in_colspace(&self, v: &[FieldElem]) -> Result<bool, AlgebraError> {
        if v.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let span = ColumnSpan::of_columns(self, 0..self.cols);
        Ok(span.contains(v))
    }
}

/// An echelon basis for the span of a set of vectors in F^dim.
///
/// Each stored vector has a leading 1 at its pivot and zeros at the pivots of
/// all vectors stored before it, so reducing in insertion order clears every
/// pivot coordinate.
pub struct ColumnSpan<'f> {
    field: &'f FieldSpec,
    dim: usize,
    basis: Vec<(usize, Vec<FieldElem>)>,
}

impl<'f> ColumnSpan<'f> {
    pub fn new(field: &'f FieldSpec, dim: usize) -> Self {
        ColumnSpan { field, dim, basis: Vec::new() }
    }

    /// The span of the selected columns of `m`.
    pub fn of_columns(m: &'f Matrix, cols: impl IntoIterator<Item = usize>) -> Self {
        let mut span = ColumnSpan::new(&m.field, m.rows);
        for j in cols {
            span.insert(m.column(j));
        }
        span
    }

    fn reduce(&self, v: &mut [FieldElem]) {
        let f = self.field;
        for (pivot, b) in &self.basis {
            let c = v[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }

    /// Adds a vector; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<FieldElem>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = self.field.inv(v[pivot]).expect("nonzero");
        for x in v.iter_mut() {
            *x = self.field.mul(*x, s);
        }
        self.basis.push((pivot, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Whether the standard basis vector e_i lies in the span.
    pub fn contains_unit(&self, i: usize) -> bool {
        let mut w = vec![FieldElem::ZERO; self.dim];
        w[i] = FieldElem::ONE;
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: usize) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let f = gf(2);
        let id = Matrix::identity(&f, 3);
        assert_eq!(id.restrict(&[0, 1], &[0, 1]).unwrap(), Matrix::identity(&f, 2));
        assert_eq!(id.restrict(&[0], &[1]).unwrap(), Matrix::zeros(&f, 1, 1));
        let g = Matrix::from_rows(&f, &[[1, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(g.restrict(&[1], &[2]).unwrap(), Matrix::from_rows(&f, &[[1]]).unwrap());
        assert_eq!(g.restrict(&[], &[]).unwrap().rank(), 0);
        assert!(matches!(g.restrict(&[2], &[0]), Err(AlgebraError::IndexOutOfRange { index: 2, bound: 2 })));
        assert!(g.restrict(&[0], &[3]).is_err());
    }

    #[test]
    fn rank_examples() {
        let f = gf(5);
        assert_eq!(Matrix::identity(&f, 4).rank(), 4);
        assert_eq!(Matrix::zeros(&f, 3, 5).rank(), 0);
        assert_eq!(Matrix::zeros(&f, 0, 0).rank(), 0);
        let m = Matrix::from_rows(&f, &[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap();
        assert_eq!(m.rank(), 2);
        let dup = Matrix::from_rows(&f, &[[1, 2, 3], [2, 4, 1]]).unwrap();
        assert_eq!(dup.rank(), 1);
    }

    #[test]
    fn in_colspace_examples() {
        let f = gf(2);
        let one = FieldElem::ONE;
        let zero = FieldElem::ZERO;
        assert!(Matrix::identity(&f, 2).in_colspace(&[one, one]).unwrap());
        let m = Matrix::from_rows(&f, &[[1], [0]]).unwrap();
        assert!(!m.in_colspace(&[zero, one]).unwrap());
        assert!(m.in_colspace(&[zero, zero]).unwrap());
        let m = Matrix::from_rows(&f, &[[1], [1]]).unwrap();
        assert!(m.in_colspace(&[one, one]).unwrap());
        assert!(m.in_colspace(&[one]).is_err());
    }

    #[test]
    fn left_mul_and_padding() {
        let f = gf(5);
        let g = Matrix::from_rows(&f, &[[1, 1, 1, 1], [0, 1, 2, 3]]).unwrap();
        let x = [FieldElem::ONE, FieldElem::ONE];
        let y: Vec<u8> = g.left_mul(&x).unwrap().iter().map(|v| v.value()).collect();
        assert_eq!(y, vec![1, 2, 3, 4]);
        assert!(g.left_mul(&[FieldElem::ONE]).is_err());
        let p = g.pad_zero_columns(2);
        assert_eq!(p.cols(), 6);
        assert_eq!(p.restrict(&[0, 1], &[4, 5]).unwrap(), Matrix::zeros(&f, 2, 2));
        assert_eq!(p.restrict(&[0, 1], &[0, 1, 2, 3]).unwrap(), g);
    }

    #[test]
    fn constructor_validation() {
        let f = gf(3);
        assert!(Matrix::from_rows(&f, &[vec![1, 2], vec![0]]).is_err());
        assert!(Matrix::from_rows(&f, &[[3]]).is_err());
        assert!(Matrix::new(f.clone(), 2, 2, vec![FieldElem::ZERO; 3]).is_err());
    }
}
