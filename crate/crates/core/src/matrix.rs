//! Dense matrices over a level of a field tower.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A dense row-major matrix with entries in `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, a: Elem) -> Matrix {
        Matrix::diagonal(field, &vec![a; n])
    }

    pub fn diagonal(field: &Field, diag: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, &a) in diag.iter().enumerate() {
            m.set(i, i, a);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&a| !field.contains(a)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_columns(field: &Field, columns: &[Vec<Elem>]) -> Result<Matrix> {
        Ok(Matrix::from_rows(field, columns)?.transpose())
    }

    /// Builds a matrix from a function of the position.
    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Assembles a block matrix from a square grid of equally sized blocks.
    pub fn from_blocks(field: &Field, blocks: &[Vec<Matrix>]) -> Result<Matrix> {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        let (h, w) = blocks
            .first()
            .and_then(|r| r.first())
            .map_or((0, 0), |b| (b.rows, b.cols));
        if blocks.iter().flatten().any(|b| b.rows != h || b.cols != w) || blocks.iter().any(|r| r.len() != bc) {
            return Err(Error::DimensionMismatch("blocks must share one shape".into()));
        }
        Ok(Matrix::from_fn(field, br * h, bc * w, |i, j| blocks[i / h][j / w].get(i % h, j % w)))
    }

    pub fn block_diagonal(field: &Field, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Elem) {
        self.data[i * self.cols + j] = a;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Elem]) {
        for (i, &a) in col.iter().enumerate() {
            self.set(i, j, a);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The `h × w` block at block position `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, h: usize, w: usize) -> Matrix {
        Matrix::from_fn(&self.field, h, w, |i, j| self.get(bi * h + i, bj * w + j))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Applies a function to every entry; the result lives in `field`.
    pub fn map(&self, field: &Field, f: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { field: field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field.clone();
        self.map(&f, |a| f.neg(a))
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = self.field.clone();
        self.map(&f, |a| f.mul(c, a))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Row-reduces in place to reduced echelon form; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Matrix {
        let mut m = self.clone();
        m.reduce();
        m
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce().len()
    }

    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return Ok(Elem::ZERO) };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                Elem::ONE
            } else {
                Elem::ZERO
            }
        });
        let pivots = aug.reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(&self.field, n, n, |i, j| aug.get(i, n + j)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A basis of the right kernel `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let mut m = self.clone();
        let pivots = m.reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// The solution of `A x = b` whose free coordinates are all zero, if any.
    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let n = self.cols;
        let mut aug = Matrix::from_fn(&self.field, self.rows, n + 1, |i, j| if j < n { self.get(i, j) } else { b[i] });
        let pivots = aug.reduce();
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![Elem::ZERO; n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, n);
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.literal())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|a| a.0.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}
