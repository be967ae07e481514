//! Generators of the unitary group U_n(q²), the N/P/Q/R word family used to
//! enumerate unitary matrices, the group order formula and a BFS closure.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::Matrix;

/// A solution (a, b, c, d) of the transvection system
/// a^(q+1) + b^(q+1) = 1, c^(q+1) + d^(q+1) = 1, a^q·c + b^q·d = 0.
pub type Abcd = [Elem; 4];

pub fn satisfies_transvection(ctx: &FieldCtx, [a, b, c, d]: Abcd) -> bool {
    let one = Elem::ONE;
    ctx.add(ctx.norm(a), ctx.norm(b)) == one
        && ctx.add(ctx.norm(c), ctx.norm(d)) == one
        && ctx
            .add(ctx.mul(ctx.conj(a), c), ctx.mul(ctx.conj(b), d))
            .is_zero()
}

/// Every solution with c = −b and d = a, in (a, b) lexicographic element order.
/// Includes the identity solution (1, 0, 0, 1).
pub fn transvection_solutions(ctx: &FieldCtx) -> Vec<Abcd> {
    let mut out = Vec::new();
    for a in ctx.elements() {
        for b in ctx.elements() {
            let cand = [a, b, ctx.neg(b), a];
            if satisfies_transvection(ctx, cand) {
                out.push(cand);
            }
        }
    }
    out
}

/// The first solution of [`transvection_solutions`] other than (1, 0, 0, 1).
pub fn solve_transvection(ctx: &FieldCtx) -> Result<Abcd> {
    for a in ctx.elements() {
        for b in ctx.elements() {
            if a == Elem::ONE && b.is_zero() {
                continue;
            }
            let cand = [a, b, ctx.neg(b), a];
            if satisfies_transvection(ctx, cand) {
                return Ok(cand);
            }
        }
    }
    Err(Error::NoSolution)
}

/// Every solution of the full system except (1, 0, 0, 1): (c, d) = t·(−b^q, a^q)
/// with t^(q+1) = 1, ordered by (a, b, t).
pub fn all_transvection_solutions(ctx: &FieldCtx) -> Vec<Abcd> {
    let units: Vec<Elem> = ctx
        .elements()
        .filter(|&t| ctx.norm(t) == Elem::ONE)
        .collect();
    let identity = [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE];
    let mut out = Vec::new();
    for a in ctx.elements() {
        for b in ctx.elements() {
            if ctx.add(ctx.norm(a), ctx.norm(b)) != Elem::ONE {
                continue;
            }
            for &t in &units {
                let c = ctx.mul(t, ctx.neg(ctx.conj(b)));
                let d = ctx.mul(t, ctx.conj(a));
                let cand = [a, b, c, d];
                if cand != identity {
                    debug_assert!(satisfies_transvection(ctx, cand));
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// θ = (p−1)/2 for odd p, θ = 1 for p = 2.
pub fn default_theta(ctx: &FieldCtx) -> Elem {
    if ctx.p() == 2 {
        Elem::ONE
    } else {
        ctx.from_int(((ctx.p() - 1) / 2) as i64)
    }
}

/// Transposition of the first two coordinates.
pub fn transposition(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
    permutation_matrix(ctx, &{
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(0, 1);
        p
    })
}

/// The n-cycle b_i ↦ b_(i+1), b_n ↦ b_1.
pub fn cycle(ctx: &Arc<FieldCtx>, n: usize) -> Matrix {
    permutation_matrix(ctx, &(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>())
}

/// Matrix of b_i ↦ b_(perm[i]).
pub fn permutation_matrix(ctx: &Arc<FieldCtx>, perm: &[usize]) -> Matrix {
    let n = perm.len();
    Matrix::from_fn(ctx, n, n, |i, j| {
        if perm[i] == j {
            Elem::ONE
        } else {
            Elem::ZERO
        }
    })
}

/// Matrix of x ↦ x + (x·v)b₁ + (x·w)b₂ with v = (a−1)b₁ + b·b₂, w = c·b₁ + (d−1)b₂.
pub fn tabcd_matrix(ctx: &Arc<FieldCtx>, n: usize, [a, b, c, d]: Abcd) -> Matrix {
    let mut m = Matrix::identity(ctx, n);
    m.set(0, 0, a);
    m.set(0, 1, c);
    m.set(1, 0, b);
    m.set(1, 1, d);
    m
}

/// Matrix of x ↦ x + θ(x·u)u with u = b₁ + b₂ + b₃ + b₄.
pub fn tu_matrix(ctx: &Arc<FieldCtx>, n: usize, theta: Elem) -> Result<Matrix> {
    if n < 4 {
        return Err(Error::TuUnavailable(n));
    }
    let mut m = Matrix::identity(ctx, n);
    for i in 0..4 {
        for j in 0..4 {
            m.set(i, j, ctx.add(m.get(i, j), theta));
        }
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct UnitaryGenSet {
    pub n: usize,
    pub t0: Matrix,
    pub t1: Matrix,
    pub tu: Option<Matrix>,
    pub tabcd: Matrix,
    pub abcd: Abcd,
    pub theta: Elem,
}

impl UnitaryGenSet {
    /// Generators built from the deterministic transvection solution.
    pub fn new(ctx: &Arc<FieldCtx>, n: usize) -> Result<Self> {
        let abcd = solve_transvection(ctx)?;
        Self::with_abcd(ctx, n, abcd)
    }

    pub fn with_abcd(ctx: &Arc<FieldCtx>, n: usize, abcd: Abcd) -> Result<Self> {
        if n < 2 {
            return Err(Error::SizeTooSmall(n));
        }
        if !satisfies_transvection(ctx, abcd) {
            return Err(Error::PreconditionFailed(
                "(a,b,c,d) does not satisfy the transvection system".into(),
            ));
        }
        let theta = default_theta(ctx);
        let gens = UnitaryGenSet {
            n,
            t0: transposition(ctx, n),
            t1: cycle(ctx, n),
            tu: if n >= 4 { Some(tu_matrix(ctx, n, theta)?) } else { None },
            tabcd: tabcd_matrix(ctx, n, abcd),
            abcd,
            theta,
        };
        for m in gens.all() {
            assert!(m.is_unitary()?, "generator is not unitary");
        }
        Ok(gens)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.t0.ctx()
    }

    pub fn all(&self) -> Vec<&Matrix> {
        let mut v = vec![&self.t0, &self.t1, &self.tabcd];
        v.extend(self.tu.as_ref());
        v
    }

    fn tu(&self) -> Result<&Matrix> {
        self.tu.as_ref().ok_or(Error::SizeTooSmall(self.n))
    }
}

/// How the printed words of N, P, Q, R are turned into matrix products.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Left to right as printed: `T_u T_1 T_abcd T_0` is `Tu·T1·Tabcd·T0`.
    Printed,
    /// Right to left: `T_u T_1 T_abcd T_0` is `T0·Tabcd·T1·Tu`.
    Reversed,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Printed, Convention::Reversed];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Printed => "printed",
            Convention::Reversed => "reversed",
        }
    }
}

/// Exponents (i, j, k, l) of L = N^i P^j Q^k R^l.
pub type Exponents = [u32; 4];

/// The four words N, P, Q, R raised to the m-th power, with cached powers.
#[derive(Clone, Debug)]
pub struct WordFamily {
    pub m: u64,
    pub convention: Convention,
    words: [Matrix; 4],
    powers: [Vec<Matrix>; 4],
}

impl WordFamily {
    pub fn new(gens: &UnitaryGenSet, m: u64, convention: Convention) -> Result<Self> {
        if m == 0 {
            return Err(Error::PreconditionFailed("m must be positive".into()));
        }
        let tu = gens.tu()?;
        let (t0, t1, ta) = (&gens.t0, &gens.t1, &gens.tabcd);
        let printed: [[&Matrix; 4]; 4] = [
            [tu, t1, ta, t0],
            [ta, t0, tu, t1],
            [tu, t0, ta, t1],
            [ta, t1, tu, t0],
        ];
        let mut words = Vec::with_capacity(4);
        for w in printed {
            let mut seq = w.to_vec();
            if convention == Convention::Reversed {
                seq.reverse();
            }
            let mut prod = seq[0].clone();
            for f in &seq[1..] {
                prod = prod.matmul(f)?;
            }
            words.push(prod.pow(m)?);
        }
        let words: [Matrix; 4] = words.try_into().expect("four words");
        let powers = words.clone().map(|w| vec![Matrix::identity(w.ctx(), w.rows()), w]);
        Ok(WordFamily {
            m,
            convention,
            words,
            powers,
        })
    }

    pub fn words(&self) -> &[Matrix; 4] {
        &self.words
    }

    /// Extends the power caches so every exponent up to `s` is a lookup.
    pub fn warm(&mut self, s: u32) {
        for (w, pw) in self.words.iter().zip(self.powers.iter_mut()) {
            while pw.len() <= s as usize {
                let next = pw.last().unwrap().matmul(w).expect("square");
                pw.push(next);
            }
        }
    }

    fn power(&self, w: usize, e: u32) -> Matrix {
        match self.powers[w].get(e as usize) {
            Some(m) => m.clone(),
            None => self.words[w].pow(e as u64).expect("square"),
        }
    }

    /// L = N^i P^j Q^k R^l.
    pub fn matrix(&self, e: Exponents) -> Matrix {
        let mut acc = self.power(0, e[0]);
        for w in 1..4 {
            if e[w] > 0 {
                acc = acc.matmul(&self.power(w, e[w])).expect("square");
            }
        }
        acc
    }

    /// All (i, j, k, l) in 0..=s, loop order i outermost.
    pub fn tuples(s: u32) -> impl Iterator<Item = Exponents> {
        let b = s as u64 + 1;
        (0..b.pow(4)).map(move |t| {
            let d = |k: u32| ((t / b.pow(3 - k)) % b) as u32;
            [d(0), d(1), d(2), d(3)]
        })
    }

    /// Streams (tuple, L) for every tuple in the box of side s+1.
    pub fn stream(&mut self, s: u32) -> impl Iterator<Item = (Exponents, Matrix)> + '_ {
        self.warm(s);
        Self::tuples(s).map(move |e| (e, self.matrix(e)))
    }
}

/// |U_n(q²)| = q^((n²−n)/2) · ∏_{i=1..n} (q^i − (−1)^i).
pub fn group_order(n: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut acc = qb.pow((n * n - n) / 2);
    for i in 1..=n {
        let qi = qb.pow(i);
        let term = if i % 2 == 0 { qi - 1u32 } else { qi + 1u32 };
        acc *= term;
    }
    acc
}

/// Outcome of a group closure enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub order: u64,
    pub complete: bool,
}

/// Packs a small square matrix into a u128 (log+1 per entry, 0 for zero).
struct Packer {
    bits: u32,
    n: usize,
}

impl Packer {
    fn new(ctx: &FieldCtx, n: usize) -> Result<Self> {
        let bits = 32 - ctx.order().leading_zeros();
        if bits as usize * n * n > 128 {
            return Err(Error::PreconditionFailed(format!(
                "{n}x{n} matrices over GF({}) do not fit the closure key",
                ctx.order()
            )));
        }
        Ok(Packer { bits, n })
    }

    fn pack(&self, m: &Matrix) -> u128 {
        m.data().iter().fold(0u128, |acc, e| {
            let v = e.log().map_or(0, |k| k + 1) as u128;
            (acc << self.bits) | v
        })
    }

    fn unpack(&self, ctx: &Arc<FieldCtx>, mut key: u128) -> Matrix {
        let nn = self.n * self.n;
        let mask = (1u128 << self.bits) - 1;
        let mut data = vec![Elem::ZERO; nn];
        for slot in data.iter_mut().rev() {
            let v = (key & mask) as u32;
            key >>= self.bits;
            if v > 0 {
                *slot = ctx.omega_pow((v - 1) as i64);
            }
        }
        Matrix::from_fn(ctx, self.n, self.n, |i, j| data[i * self.n + j])
    }
}

/// Default cap on the number of closure states.
pub const DEFAULT_CLOSURE_CAP: u64 = 100_000_000;

/// Enumerates ⟨gens⟩ by BFS from the identity, right-multiplying by generators.
/// Returns the elements in BFS order, stopping once `cap` elements are found.
pub fn group_closure(gens: &[Matrix], cap: u64) -> Result<(Vec<Matrix>, bool)> {
    let mut elems = Vec::new();
    let complete = closure_walk(gens, cap, |m| elems.push(m.clone()))?;
    Ok((elems, complete))
}

/// Order of ⟨gens⟩, or a partial count with `complete = false` past `cap`.
pub fn group_closure_order(gens: &[Matrix], cap: u64) -> Result<Closure> {
    let mut order = 0u64;
    let complete = closure_walk(gens, cap, |_| order += 1)?;
    Ok(Closure { order, complete })
}

fn closure_walk(gens: &[Matrix], cap: u64, mut visit: impl FnMut(&Matrix)) -> Result<bool> {
    let first = gens
        .first()
        .ok_or_else(|| Error::PreconditionFailed("no generators".into()))?;
    let ctx = first.ctx().clone();
    let n = first.rows();
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::DimensionMismatch("generators differ in size".into()));
    }
    let packer = Packer::new(&ctx, n)?;
    let id = Matrix::identity(&ctx, n);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(packer.pack(&id));
    queue.push_back(packer.pack(&id));
    visit(&id);
    let mut count = 1u64;
    while let Some(key) = queue.pop_front() {
        let m = packer.unpack(&ctx, key);
        for g in gens {
            let prod = m.matmul(g)?;
            let k = packer.pack(&prod);
            if seen.insert(k) {
                if count == cap {
                    return Ok(false);
                }
                count += 1;
                visit(&prod);
                queue.push_back(k);
            }
        }
    }
    Ok(true)
}
