use std::fmt;

use super::Scalar;

/// A dense integer matrix with optional row and column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<Z> {
    rows: usize,
    cols: usize,
    data: Vec<Z>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl<Z: Scalar> Matrix<Z> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Z::zero(); rows * cols], row_labels: Vec::new(), col_labels: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Z::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` fixes the width when
    /// there are no rows.
    pub fn from_rows(rows: Vec<Vec<Z>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
            row_labels: Vec::new(),
            col_labels: Vec::new(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Z::from_i64(x).expect("entry fits")).collect()).collect(),
            cols,
        )
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        assert_eq!(rows.len(), self.rows, "row label count");
        assert_eq!(cols.len(), self.cols, "column label count");
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row(&self, i: usize) -> &[Z] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix<Z>) -> Matrix<Z> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out: Matrix<Z> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &[Z]) -> Vec<Z> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Z::zero(), |acc, i| acc + x[i].clone() * self[(i, j)].clone()))
            .collect()
    }

    pub fn transpose(&self) -> Matrix<Z> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out.row_labels = self.col_labels.clone();
        out.col_labels = self.row_labels.clone();
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<Z> {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Z {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Z::one();
        }
        let mut a = self.clone();
        let mut sign = Z::one();
        let mut prev = Z::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Z::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Whether every entry off the main diagonal is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Z> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q · row[src]`.
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, q: &Z) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * q.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// `col[dst] += q · col[src]`.
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, q: &Z) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * q.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }
}

impl<Z> std::ops::Index<(usize, usize)> for Matrix<Z> {
    type Output = Z;

    fn index(&self, (i, j): (usize, usize)) -> &Z {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<Z> std::ops::IndexMut<(usize, usize)> for Matrix<Z> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Z {
        assert!(i < self.rows && j < self.cols, "matrix index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// A plain grid; labels are shown when present.
impl<Z: Scalar> fmt::Display for Matrix<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labelled = !self.col_labels.is_empty();
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect();
        let mut width = vec![1; self.cols];
        for (j, w) in width.iter_mut().enumerate() {
            if labelled {
                *w = (*w).max(self.col_labels[j].chars().count());
            }
            for row in &cells {
                *w = (*w).max(row[j].len());
            }
        }
        let lead = if labelled { self.row_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0) } else { 0 };
        if labelled {
            write!(f, "{:lead$}", "")?;
            for (j, w) in width.iter().enumerate() {
                write!(f, " {:>w$}", self.col_labels[j])?;
            }
            writeln!(f)?;
        }
        for (i, row) in cells.iter().enumerate() {
            if labelled {
                write!(f, "{:<lead$}", self.row_labels[i])?;
            }
            for (j, w) in width.iter().enumerate() {
                if labelled || j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>w$}", row[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
