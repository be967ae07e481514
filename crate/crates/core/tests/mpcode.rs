mod common;

use common::*;
use hsd::code::LinearCode;
use hsd::construct::construct_eq5;
use hsd::mpcode::*;
use hsd::search::load_table;
use hsd::{Elem, FieldCtx, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn self_dual_code(ctx: &std::sync::Arc<FieldCtx>, n: usize, r: &mut ChaCha8Rng) -> LinearCode {
    construct_eq5(&random_unitary(ctx, n, r), random_alpha(ctx, r)).unwrap()
}

#[test]
fn worked_gf4_product_is_self_dual() {
    let t = load_table(8).unwrap();
    let row = &t.mp[0];
    let spec = row.mp.to_spec().unwrap();
    let verdict = mp_is_self_dual(&spec);
    assert_eq!(verdict, SelfDualVerdict { self_dual: true, reason: SelfDualReason::Unitary });
    let code = mp_code(&spec).unwrap();
    assert!(code.is_self_dual_h());
    assert_eq!((code.length(), code.dimension()), (56, 28));
    let bound = mp_distance_lower_bound(&spec, 1 << 32).unwrap();
    assert!(bound <= row.d);
    let mut r = ChaCha8Rng::seed_from_u64(0);
    let w = code.low_weight_search(50, &mut r).unwrap();
    assert!(bound <= w);
    let back = spec.to_json().to_spec().unwrap();
    assert!(mp_code(&back).unwrap().same_code(&code));
}

#[test]
fn identity_mixing() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let inner = vec![self_dual_code(&ctx, 2, &mut r), self_dual_code(&ctx, 2, &mut r)];
    let ds: Vec<usize> = inner.iter().map(|c| c.min_distance(1 << 20).unwrap()).collect();
    let spec = MatrixProductSpec::new(inner, Matrix::identity(&ctx, 2)).unwrap();
    assert!(mp_is_self_dual(&spec).self_dual);
    assert_eq!(mp_distance_lower_bound(&spec, 1 << 20).unwrap(), *ds.iter().min().unwrap());
}

#[test]
fn conjugate_diagonal_mixing() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let m1 = ctx.neg(Elem::ONE);
    let a = Matrix::from_rows(&ctx, &[vec![Elem::ONE, Elem::ONE], vec![Elem::ONE, m1]]).unwrap();
    assert!(!a.is_unitary().unwrap());
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let inner = vec![self_dual_code(&ctx, 3, &mut r), self_dual_code(&ctx, 3, &mut r)];
    let spec = MatrixProductSpec::new(inner, a).unwrap();
    let v = mp_is_self_dual(&spec);
    assert_eq!(v.reason, SelfDualReason::ConjugateDiagonal);
    assert!(v.self_dual && mp_code(&spec).unwrap().is_self_dual_h());
}

#[test]
fn non_orthogonal_inner_code_fails_directly() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let bad = LinearCode::new(Matrix::from_rows(&ctx, &[vec![Elem::ONE, Elem::ZERO]]).unwrap());
    let good = LinearCode::new(Matrix::from_rows(&ctx, &[vec![Elem::ONE, Elem::ONE]]).unwrap());
    assert!(good.is_self_dual_h());
    let inner = vec![good, bad];
    let a = random_unitary(&ctx, 2, &mut r);
    let v = mp_is_self_dual(&MatrixProductSpec::new(inner, a).unwrap());
    assert_eq!(v, SelfDualVerdict { self_dual: false, reason: SelfDualReason::Direct });
}

#[test]
fn single_row_bound() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let c = self_dual_code(&ctx, 3, &mut r);
    let a = Matrix::from_rows(&ctx, &[vec![Elem::ONE, Elem::ZERO, ctx.omega()]]).unwrap();
    let d = c.min_distance(1 << 20).unwrap();
    let spec = MatrixProductSpec::new(vec![c], a).unwrap();
    assert_eq!(mp_distance_lower_bound(&spec, 1 << 20).unwrap(), 2 * d);
}

#[test]
fn rectangular_submatrix_is_self_orthogonal() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let a = random_unitary(&ctx, 3, &mut r);
        let inner = vec![self_dual_code(&ctx, 2, &mut r), self_dual_code(&ctx, 2, &mut r)];
        let code = mp_self_orthogonal_submatrix(inner, &a).unwrap();
        assert!(code.is_self_orthogonal_h());
        assert!(!code.is_self_dual_h());
        let zero = vec![LinearCode::new(Matrix::empty(&ctx, 4)); 2];
        let z = mp_self_orthogonal_submatrix(zero, &a).unwrap();
        assert_eq!(z.dimension(), 0);
        assert!(z.is_self_orthogonal_h());
    }
}

proptest! {
    #[test]
    fn dimensions_add_up(seed in any::<u64>(), fi in 0usize..3, l in 1usize..=3, extra in 0usize..=2) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let m = l + extra;
        let a = loop {
            let a = random_matrix(&ctx, l, m, &mut r);
            if a.rank() == l {
                break a;
            }
        };
        let inner: Vec<LinearCode> = (0..l).map(|_| LinearCode::new(random_matrix(&ctx, 2, 4, &mut r))).collect();
        let total: usize = inner.iter().map(|c| c.dimension()).sum();
        let spec = MatrixProductSpec::new(inner, a).unwrap();
        let c = mp_code(&spec).unwrap();
        prop_assert_eq!(c.dimension(), total);
        prop_assert_eq!(c.length(), 4 * m);
    }
}
