//! Dense matrices over GF(q²).
//!
//! Vectors are rows and matrices act on the right: a linear map is stored as
//! the matrix whose i-th row is the image of the i-th basis vector, so the image
//! of `x` is `x·M` and the product `A·B` applies `A` first.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

#[derive(Clone)]
pub struct Matrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.ctx.order())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn same_field(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// J_n, the n×n all-ones matrix.
    pub fn all_ones(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
        Matrix {
            ctx: ctx.clone(),
            rows: n,
            cols: n,
            data: vec![Elem::ONE; n * n],
        }
    }

    pub fn from_fn(
        ctx: &Arc<FieldCtx>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ctx: &Arc<FieldCtx>, rows: &[Vec<Elem>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&e| !ctx.contains(e)) {
            return Err(Error::ContextMismatch);
        }
        Ok(Matrix {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// A 0×cols matrix, the generator of the zero code.
    pub fn empty(ctx: &Arc<FieldCtx>, cols: usize) -> Matrix {
        Matrix::zeros(ctx, 0, cols)
    }

    pub fn diag(ctx: &Arc<FieldCtx>, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(ctx, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn check_ctx(&self, other: &Matrix) -> Result<()> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ctx(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.ctx;
        let mut out = Matrix::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for (t, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(t);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.add(*o, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ctx(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let f = &*self.ctx;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise Frobenius conjugate.
    pub fn conj(&self) -> Matrix {
        self.map(|f, e| f.conj(e))
    }

    pub fn scalar_mul(&self, c: Elem) -> Matrix {
        self.map(|f, e| f.mul(c, e))
    }

    fn map(&self, g: impl Fn(&FieldCtx, Elem) -> Elem) -> Matrix {
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&e| g(&self.ctx, e)).collect(),
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ctx(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        Ok(Matrix::from_fn(
            &self.ctx,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j)
                } else {
                    other.get(i, j - self.cols)
                }
            },
        ))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ctx(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ctx, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ctx, rows.len(), self.cols, |i, j| self.get(rows[i], j))
    }

    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.ctx, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    /// M · conj(M)ᵀ, the Hermitian Gram matrix of the rows.
    pub fn hermitian_gram(&self) -> Matrix {
        self.matmul(&self.conj().transpose())
            .expect("shapes always agree")
    }

    pub fn is_unitary(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.hermitian_gram() == Matrix::identity(&self.ctx, self.rows))
    }

    /// Reduced row echelon form: leftmost pivot column, topmost candidate row,
    /// pivots normalised to 1.
    pub fn echelon_form(&self) -> Echelon {
        let f = &*self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..self.cols {
                    let v = f.add(m.get(i, j), f.mul(neg, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon_form().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// The nonzero rows of the reduced echelon form.
    pub fn row_basis(&self) -> Matrix {
        let e = self.echelon_form();
        let idx: Vec<usize> = (0..e.rank).collect();
        e.matrix.select_rows(&idx)
    }

    /// Basis (as rows) of { y : M·yᵀ = 0 }, one vector per free column with a 1 there.
    pub fn right_kernel(&self) -> Matrix {
        let f = &*self.ctx;
        let e = self.echelon_form();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&self.ctx, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, Elem::ONE);
            for (r, &pc) in e.pivots.iter().enumerate() {
                out.set(k, pc, f.neg(e.matrix.get(r, fc)));
            }
        }
        out
    }

    /// Basis of { y : Mᵢ ∗ y = 0 for every row Mᵢ } with x ∗ y = Σ xᵢ·yᵢ^q.
    pub fn right_kernel_hermitian(&self) -> Matrix {
        self.conj().right_kernel()
    }

    /// Solves for a right inverse X with M·X = I (M of full row rank).
    pub fn right_inverse(&self) -> Result<Matrix> {
        let e = self.echelon_form();
        if e.rank != self.rows {
            return Err(Error::NoRightInverse);
        }
        let square = self.select_columns(&e.pivots);
        let inv = square.inverse()?;
        let mut x = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for (r, &pc) in e.pivots.iter().enumerate() {
            for j in 0..self.rows {
                x.set(pc, j, inv.get(r, j));
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.ctx, n))?;
        let e = aug.echelon_form();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(Error::RankDeficient {
                rank: e.pivots.iter().filter(|&&c| c < n).count(),
                expected: n,
            });
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(e.matrix.select_columns(&cols))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            q2: self.ctx.order() as u64,
            rows: self.rows,
            cols: self.cols,
            data: (0..self.rows)
                .map(|i| self.row(i).iter().map(|e| e.to_string()).collect())
                .collect(),
        }
    }
}

/// Hermitian inner product x ∗ y = Σ xᵢ·yᵢ^q.
pub fn hermitian_dot(ctx: &FieldCtx, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter()
        .zip(y)
        .fold(Elem::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, ctx.conj(b))))
}

/// Euclidean inner product x · y = Σ xᵢ·yᵢ.
pub fn dot(ctx: &FieldCtx, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter()
        .zip(y)
        .fold(Elem::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
}

pub fn weight(x: &[Elem]) -> usize {
    x.iter().filter(|e| !e.is_zero()).count()
}

/// Interchange form of a matrix: `{"q2", "rows", "cols", "data"}` with entries
/// written as "0", "1" or "w^k".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub q2: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn to_matrix(&self, ctx: &Arc<FieldCtx>) -> Result<Matrix> {
        if self.q2 != ctx.order() as u64 {
            return Err(Error::ContextMismatch);
        }
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(Error::DimensionMismatch("matrix JSON shape".into()));
        }
        let rows = self
            .data
            .iter()
            .map(|r| r.iter().map(|s| ctx.parse_elem(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if self.rows == 0 {
            return Ok(Matrix::empty(ctx, self.cols));
        }
        Matrix::from_rows(ctx, &rows)
    }
}
