//! Linear codes over GF(q²): duals, Hermitian self-duality, minimum distance
//! and MDS certification.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{weight, Matrix, MatrixJson};

/// Default enumeration budget, in (projective words × length) units.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

/// Cap on the number of column subsets examined by [`LinearCode::is_mds`].
pub const MDS_SUBSET_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    /// Keeps `g` as the generator when it has full row rank, otherwise replaces
    /// it by a row basis of its span.
    pub fn new(g: Matrix) -> LinearCode {
        let generator = if g.rank() == g.rows() { g } else { g.row_basis() };
        LinearCode { generator }
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.generator.ctx()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn euclidean_dual(&self) -> LinearCode {
        LinearCode::new(self.generator.right_kernel())
    }

    /// C^⊥H, the conjugate of the Euclidean dual.
    pub fn hermitian_dual(&self) -> LinearCode {
        LinearCode::new(self.generator.right_kernel().conj())
    }

    pub fn is_self_orthogonal_h(&self) -> bool {
        self.generator.hermitian_gram().is_zero()
    }

    pub fn is_self_dual_h(&self) -> bool {
        2 * self.dimension() == self.length() && self.is_self_orthogonal_h()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let Ok(row) = Matrix::from_rows(self.ctx(), &[v.to_vec()]) else {
            return false;
        };
        row.cols() == self.length()
            && self.generator.vstack(&row).map(|m| m.rank()) == Ok(self.dimension())
    }

    /// Equality of row spaces.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.length() == other.length()
            && self.dimension() == other.dimension()
            && (0..other.dimension()).all(|i| self.contains(other.generator.row(i)))
    }

    /// Number of words the exhaustive enumeration visits, (Q^k − 1)/(Q − 1).
    pub fn projective_words(&self) -> u128 {
        let q = self.ctx().order() as u128;
        (0..self.dimension()).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1))
    }

    pub fn enumeration_cost(&self) -> u128 {
        self.projective_words().saturating_mul(self.length() as u128)
    }

    fn check_budget(&self, budget: u128) -> Result<()> {
        let cost = self.enumeration_cost();
        if cost > budget {
            return Err(Error::BudgetExceeded { cost, budget });
        }
        Ok(())
    }

    /// Exact minimum distance by exhaustive enumeration. The zero code has distance 0
    /// by convention here (it has no nonzero words).
    pub fn min_distance(&self, budget: u128) -> Result<usize> {
        self.check_budget(budget)?;
        if self.dimension() == 0 {
            return Ok(0);
        }
        Ok(Enumerator::new(self).min_weight(0))
    }

    /// Decides d ≥ threshold, stopping at the first word lighter than `threshold`.
    pub fn min_distance_at_least(&self, threshold: usize, budget: u128) -> Result<bool> {
        self.check_budget(budget)?;
        if self.dimension() == 0 {
            return Ok(true);
        }
        Ok(Enumerator::new(self).min_weight(threshold) >= threshold)
    }

    /// True iff every k-subset of columns of the generator has rank k.
    pub fn is_mds(&self) -> Result<bool> {
        let (n, k) = (self.length(), self.dimension());
        let count = binomial(n as u128, k as u128);
        if count > MDS_SUBSET_CAP {
            return Err(Error::SubsetCountTooLarge {
                count,
                cap: MDS_SUBSET_CAP,
            });
        }
        if k == 0 {
            return Ok(true);
        }
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        Ok(subsets
            .par_iter()
            .all(|cols| self.generator.select_columns(cols).rank() == k))
    }

    /// Smallest weight among all multiples of single rows and of pairs of rows of
    /// the generator, plus `samples` random messages. An upper bound on d.
    pub fn sampled_min_weight<R: Rng>(&self, samples: usize, rng: &mut R) -> Option<usize> {
        let f = &**self.ctx();
        let g = &self.generator;
        let k = g.rows();
        let mut best: Option<usize> = None;
        let mut note = |w: usize| {
            if w > 0 && best.map_or(true, |b| w < b) {
                best = Some(w);
            }
        };
        for i in 0..k {
            note(weight(g.row(i)));
        }
        let scalars: Vec<Elem> = f.elements().filter(|e| !e.is_zero()).collect();
        for (i, j) in (0..k).tuple_combinations() {
            for &c in &scalars {
                let v: Vec<Elem> = g
                    .row(i)
                    .iter()
                    .zip(g.row(j))
                    .map(|(&a, &b)| f.add(a, f.mul(c, b)))
                    .collect();
                note(weight(&v));
            }
        }
        let all: Vec<Elem> = f.elements().collect();
        for _ in 0..samples {
            let msg: Vec<Elem> = (0..k).map(|_| all[rng.gen_range(0..all.len())]).collect();
            note(weight(&encode(g, &msg)));
        }
        best
    }

    /// Lee–Brickell information-set search: for `iterations` random column
    /// orders, reduce the generator to systematic form there and try every row
    /// and every two-row combination. An upper bound on d.
    pub fn low_weight_search<R: Rng>(&self, iterations: usize, rng: &mut R) -> Option<usize> {
        let f = &**self.ctx();
        let n = self.length();
        let scalars: Vec<Elem> = f.elements().filter(|e| !e.is_zero()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<usize> = None;
        for _ in 0..iterations {
            perm.shuffle(rng);
            let sys = self.generator.select_columns(&perm).echelon_form().matrix;
            let rows = sys.row_vecs();
            let mut note = |w: usize| {
                if w > 0 && best.map_or(true, |b| w < b) {
                    best = Some(w);
                }
            };
            for r in &rows {
                note(weight(r));
            }
            for (a, b) in rows.iter().tuple_combinations() {
                for &c in &scalars {
                    note(a.iter().zip(b).filter(|(&x, &y)| f.add(x, f.mul(c, y)) != Elem::ZERO).count());
                }
            }
        }
        best
    }

    pub fn to_json(&self, claimed_d: Option<usize>) -> CodeJson {
        CodeJson {
            matrix: self.generator.to_json(),
            n: self.length(),
            k: self.dimension(),
            claimed_d,
        }
    }
}

/// Message × generator.
pub fn encode(g: &Matrix, msg: &[Elem]) -> Vec<Elem> {
    let f = &**g.ctx();
    let mut out = vec![Elem::ZERO; g.cols()];
    for (i, &c) in msg.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(g.row(i)) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Interchange form of a code: the matrix schema plus n, k and an optional claimed d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_d: Option<usize>,
}

impl CodeJson {
    pub fn to_code(&self, ctx: &Arc<FieldCtx>) -> Result<LinearCode> {
        Ok(LinearCode::new(self.matrix.to_matrix(ctx)?))
    }
}

/// Additive-encoding addition strategies, fastest first.
enum Adder {
    Xor,
    Table { q: usize, table: Vec<u32> },
    Digits,
}

/// Gray-code enumeration of all codewords whose leading message coefficient is 1.
///
/// Each GF(Q) message coefficient is split into e = log_p Q digits over GF(p);
/// step c of the modular p-ary Gray code adds 1 to digit v_p(c), which adds one
/// precomputed vector x^b · g_t to the running codeword.
struct Enumerator<'a> {
    ctx: &'a FieldCtx,
    n: usize,
    k: usize,
    e: usize,
    p: u32,
    adder: Adder,
    /// basis[t * e + b] = x^b · row t, additive encoding.
    basis: Vec<Vec<u32>>,
    rows: Vec<Vec<u32>>,
}

const TABLE_LIMIT: usize = 1024;

impl<'a> Enumerator<'a> {
    fn new(code: &'a LinearCode) -> Self {
        let ctx = &**code.ctx();
        let g = code.generator();
        let p = ctx.p();
        let e = (2 * ctx.m()) as usize;
        let q = ctx.order() as usize;
        let adder = if p == 2 {
            Adder::Xor
        } else if q <= TABLE_LIMIT {
            let mut table = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = ctx.add_additive(a as u32, b as u32);
                }
            }
            Adder::Table { q, table }
        } else {
            Adder::Digits
        };
        let mut basis = Vec::with_capacity(g.rows() * e);
        let mut rows = Vec::with_capacity(g.rows());
        for t in 0..g.rows() {
            rows.push(g.row(t).iter().map(|&x| ctx.to_additive(x)).collect());
            for b in 0..e {
                let beta = ctx.from_additive((p as u32).pow(b as u32));
                basis.push(
                    g.row(t)
                        .iter()
                        .map(|&x| ctx.to_additive(ctx.mul(beta, x)))
                        .collect(),
                );
            }
        }
        Enumerator {
            ctx,
            n: g.cols(),
            k: g.rows(),
            e,
            p,
            adder,
            basis,
            rows,
        }
    }

    #[inline]
    fn add_into(&self, acc: &mut [u32], v: &[u32]) {
        match &self.adder {
            Adder::Xor => acc.iter_mut().zip(v).for_each(|(a, &b)| *a ^= b),
            Adder::Table { q, table } => acc
                .iter_mut()
                .zip(v)
                .for_each(|(a, &b)| *a = table[*a as usize * q + b as usize]),
            Adder::Digits => acc
                .iter_mut()
                .zip(v)
                .for_each(|(a, &b)| *a = self.ctx.add_additive(*a, b)),
        }
    }

    /// Minimum weight over all nonzero words, or some weight below `stop` as soon
    /// as one is seen (stop = 0 disables early exit).
    fn min_weight(&self, stop: usize) -> usize {
        let best = AtomicUsize::new(self.n + 1);
        let p = self.p as u64;
        // Split the free digits into a parallel prefix and a Gray-coded suffix.
        let mut jobs: Vec<(usize, u64, usize)> = Vec::new();
        for lead in 0..self.k {
            let digits = (self.k - 1 - lead) * self.e;
            let mut split = 0;
            while split < digits && p.pow(split as u32 + 1) <= 4096 && digits - split > 6 {
                split += 1;
            }
            for prefix in 0..p.pow(split as u32) {
                jobs.push((lead, prefix, split));
            }
        }
        jobs.par_iter().for_each(|&(lead, prefix, split)| {
            if stop > 0 && best.load(Ordering::Relaxed) < stop {
                return;
            }
            let w = self.chunk(lead, prefix, split, stop, &best);
            best.fetch_min(w, Ordering::Relaxed);
        });
        best.into_inner()
    }

    /// Enumerates the words with leading row `lead`, top `split` digits fixed to
    /// `prefix` and the remaining digits free.
    fn chunk(&self, lead: usize, prefix: u64, split: usize, stop: usize, best: &AtomicUsize) -> usize {
        let p = self.p as u64;
        let first = (lead + 1) * self.e;
        let digits = (self.k - 1 - lead) * self.e;
        let free = digits - split;
        let mut cur = self.rows[lead].clone();
        let mut rest = prefix;
        for d in free..digits {
            let times = rest % p;
            rest /= p;
            for _ in 0..times {
                self.add_into(&mut cur, &self.basis[first + d]);
            }
        }
        let count_nz = |v: &[u32]| v.iter().filter(|&&x| x != 0).count();
        let mut local = count_nz(&cur);
        if stop > 0 && local < stop {
            return local;
        }
        let total = p.pow(free as u32);
        for c in 1..total {
            let mut t = 0;
            let mut x = c;
            while x % p == 0 {
                x /= p;
                t += 1;
            }
            self.add_into(&mut cur, &self.basis[first + t]);
            let w = count_nz(&cur);
            if w < local {
                local = w;
                if stop > 0 && w < stop {
                    return w;
                }
            }
            if stop > 0 && c & 0xffff == 0 && best.load(Ordering::Relaxed) < stop {
                return local;
            }
        }
        local
    }
}
