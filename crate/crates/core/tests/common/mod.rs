#![allow(dead_code)]

use std::sync::Arc;

use hsd::unitary::{all_transvection_solutions, Convention, UnitaryGenSet, WordFamily};
use hsd::{Elem, FieldCtx, Matrix};
use rand::seq::SliceRandom;
use rand::Rng;

/// Fields used by the randomized suites, as (p, m) with q = p^m.
pub const FIELDS: [(u64, u32); 5] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)];

pub fn field(i: usize) -> Arc<FieldCtx> {
    let (p, m) = FIELDS[i % FIELDS.len()];
    FieldCtx::new(p, m).unwrap()
}

/// A pseudo-random element of U_n: a word-family matrix for n ≥ 4, a random
/// generator product otherwise.
pub fn random_unitary<R: Rng>(ctx: &Arc<FieldCtx>, n: usize, rng: &mut R) -> Matrix {
    let abcd = *all_transvection_solutions(ctx).choose(rng).unwrap();
    let gens = UnitaryGenSet::with_abcd(ctx, n, abcd).unwrap();
    if n >= 4 {
        let conv = *Convention::ALL.choose(rng).unwrap();
        let fam = WordFamily::new(&gens, n as u64, conv).unwrap();
        let e = [0; 4].map(|_| rng.gen_range(0..4));
        fam.matrix(e)
    } else {
        let g = gens.all();
        let mut acc = Matrix::identity(ctx, n);
        for _ in 0..rng.gen_range(0..24) {
            acc = acc.matmul(g.choose(rng).unwrap()).unwrap();
        }
        acc
    }
}

pub fn random_elem<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Elem {
    let k = rng.gen_range(0..ctx.order());
    if k == 0 {
        Elem::ZERO
    } else {
        ctx.omega_pow(k as i64 - 1)
    }
}

pub fn random_nonzero<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Elem {
    ctx.omega_pow(rng.gen_range(0..ctx.group_order() as i64))
}

/// Scalars with a^(q+1) = −1.
pub fn random_alpha<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Elem {
    let all: Vec<Elem> = ctx
        .elements()
        .filter(|&x| ctx.norm(x) == ctx.neg(Elem::ONE))
        .collect();
    *all.choose(rng).unwrap()
}

pub fn random_matrix<R: Rng>(ctx: &Arc<FieldCtx>, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(ctx, rows, cols, |_, _| random_elem(ctx, rng))
}
pub mod suites;
