//! Matrix-product codes [C₁, …, C_l]·A.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{CodeJson, LinearCode};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{Matrix, MatrixJson};

/// Inner codes C₁..C_l of a common length and an l×m mixing matrix of full row rank.
#[derive(Clone, Debug)]
pub struct MatrixProductSpec {
    inner: Vec<LinearCode>,
    a: Matrix,
}

impl MatrixProductSpec {
    pub fn new(inner: Vec<LinearCode>, a: Matrix) -> Result<Self> {
        if inner.len() != a.rows() || a.rows() > a.cols() || inner.is_empty() {
            return Err(Error::LengthMismatch);
        }
        let n = inner[0].length();
        if inner
            .iter()
            .any(|c| c.length() != n || !Arc::ptr_eq(c.ctx(), a.ctx()) && **c.ctx() != **a.ctx())
        {
            return Err(Error::LengthMismatch);
        }
        if a.rank() != a.rows() {
            return Err(Error::RankDeficientA);
        }
        Ok(MatrixProductSpec { inner, a })
    }

    pub fn inner(&self) -> &[LinearCode] {
        &self.inner
    }

    pub fn mixing(&self) -> &Matrix {
        &self.a
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.a.ctx()
    }

    /// l, the number of inner codes.
    pub fn l(&self) -> usize {
        self.a.rows()
    }

    /// m, the number of blocks.
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    /// Inner code length n.
    pub fn inner_length(&self) -> usize {
        self.inner[0].length()
    }

    /// U_A(i): the code spanned by rows 1..=i of A.
    pub fn upper_code(&self, i: usize) -> LinearCode {
        LinearCode::new(self.a.select_rows(&(0..i).collect::<Vec<_>>()))
    }

    /// L_A(i): the code spanned by rows i..=l of A.
    pub fn lower_code(&self, i: usize) -> LinearCode {
        LinearCode::new(self.a.select_rows(&(i - 1..self.l()).collect::<Vec<_>>()))
    }

    pub fn to_json(&self) -> MatrixProductJson {
        MatrixProductJson {
            a: self.a.to_json(),
            inner: self.inner.iter().map(|c| c.to_json(None)).collect(),
        }
    }
}

/// Interchange form `{"A": matrix, "inner": [code, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixProductJson {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    pub inner: Vec<CodeJson>,
}

impl MatrixProductJson {
    pub fn to_spec(&self) -> Result<MatrixProductSpec> {
        let ctx = FieldCtx::from_order(self.a.q2)?;
        let a = self.a.to_matrix(&ctx)?;
        let inner = self
            .inner
            .iter()
            .map(|c| c.to_code(&ctx))
            .collect::<Result<Vec<_>>>()?;
        MatrixProductSpec::new(inner, a)
    }
}

/// Block generator whose (i, j) block is aᵢⱼ·Gᵢ for generators `gens`.
fn assemble(gens: &[&Matrix], a: &Matrix, n: usize) -> Result<Matrix> {
    let ctx = a.ctx();
    let f = &**ctx;
    let m = a.cols();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for r in 0..g.rows() {
            let mut row = Vec::with_capacity(n * m);
            for j in 0..m {
                let c = a.get(i, j);
                row.extend(g.row(r).iter().map(|&x| f.mul(c, x)));
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(Matrix::empty(ctx, n * m));
    }
    Matrix::from_rows(ctx, &rows)
}

/// The [nm, k₁+⋯+k_l] code [C₁, …, C_l]·A.
pub fn mp_code(spec: &MatrixProductSpec) -> Result<LinearCode> {
    let gens: Vec<&Matrix> = spec.inner.iter().map(|c| c.generator()).collect();
    Ok(LinearCode::new(assemble(&gens, &spec.a, spec.inner_length())?))
}

/// Hermitian dual as [C₁^⊥H, …, C_l^⊥H, Fⁿ, …, Fⁿ]·(Bᵀ; H), where A·conj(B) = I
/// and H generates the Hermitian dual of the row space of A.
pub fn mp_hermitian_dual(spec: &MatrixProductSpec) -> Result<LinearCode> {
    let ctx = spec.ctx();
    let n = spec.inner_length();
    let b = spec
        .a
        .right_inverse()
        .map_err(|_| Error::NoRightInverse)?
        .conj();
    let h = spec.a.right_kernel_hermitian();
    let mixing = if h.rows() == 0 {
        b.transpose()
    } else {
        b.transpose().vstack(&h)?
    };
    let duals: Vec<LinearCode> = spec.inner.iter().map(|c| c.hermitian_dual()).collect();
    let full = Matrix::identity(ctx, n);
    let mut gens: Vec<&Matrix> = duals.iter().map(|c| c.generator()).collect();
    gens.extend(std::iter::repeat(&full).take(h.rows()));
    Ok(LinearCode::new(assemble(&gens, &mixing, n)?))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfDualReason {
    /// A is square unitary and every inner code is self-dual.
    Unitary,
    /// A·conj(A)ᵀ is an invertible diagonal, A is square and every inner code is self-dual.
    ConjugateDiagonal,
    /// Decided on the assembled generator.
    Direct,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualVerdict {
    pub self_dual: bool,
    pub reason: SelfDualReason,
}

fn is_invertible_diagonal(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| if i == j { !m.get(i, j).is_zero() } else { m.get(i, j).is_zero() })
    })
}

/// Self-duality via the unitary or conjugate-diagonal criteria, falling back
/// to the direct check. A rectangular A never yields a self-dual code (the
/// dimension is l·n/2 < m·n/2), so it always takes the direct path.
pub fn mp_is_self_dual(spec: &MatrixProductSpec) -> SelfDualVerdict {
    let all_inner = spec.inner.iter().all(|c| c.is_self_dual_h());
    if all_inner && spec.a.is_square() {
        if spec.a.is_unitary().unwrap_or(false) {
            return SelfDualVerdict { self_dual: true, reason: SelfDualReason::Unitary };
        }
        if is_invertible_diagonal(&spec.a.hermitian_gram()) {
            return SelfDualVerdict {
                self_dual: true,
                reason: SelfDualReason::ConjugateDiagonal,
            };
        }
    }
    let direct = mp_code(spec).map(|c| c.is_self_dual_h()).unwrap_or(false);
    SelfDualVerdict { self_dual: direct, reason: SelfDualReason::Direct }
}

/// Lower bound max(minᵢ d(Cᵢ)·d(U_A(i)), minᵢ d(Cᵢ)·d(L_A(i))). Zero inner
/// codes contribute no term.
pub fn mp_distance_lower_bound(spec: &MatrixProductSpec, budget: u128) -> Result<usize> {
    let inner_d: Vec<Option<usize>> = spec
        .inner
        .iter()
        .map(|c| {
            if c.dimension() == 0 {
                Ok(None)
            } else {
                c.min_distance(budget)
                    .map(Some)
                    .map_err(|_| Error::InnerDistanceUnavailable)
            }
        })
        .collect::<Result<_>>()?;
    let l = spec.l();
    let row_d = |code: LinearCode| code.min_distance(budget).map_err(|_| Error::InnerDistanceUnavailable);
    let mut upper = usize::MAX;
    let mut lower = usize::MAX;
    for i in 1..=l {
        if let Some(d) = inner_d[i - 1] {
            upper = upper.min(d * row_d(spec.upper_code(i))?);
            lower = lower.min(d * row_d(spec.lower_code(i))?);
        }
    }
    if upper == usize::MAX {
        return Ok(0);
    }
    Ok(upper.max(lower))
}

/// [C₁, …, C_l]·A⁽ˡ⁾ for the first l rows of a unitary A; self-orthogonal when
/// every Cᵢ is.
pub fn mp_self_orthogonal_submatrix(inner: Vec<LinearCode>, a: &Matrix) -> Result<LinearCode> {
    if !a.is_unitary()? {
        return Err(Error::NotUnitary);
    }
    let l = inner.len();
    if l == 0 || l > a.rows() {
        return Err(Error::LengthMismatch);
    }
    let sub = a.select_rows(&(0..l).collect::<Vec<_>>());
    let code = mp_code(&MatrixProductSpec::new(inner, sub)?)?;
    debug_assert!(code.is_self_orthogonal_h());
    Ok(code)
}
