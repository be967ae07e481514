mod common;

use common::*;
use hsd::code::LinearCode;
use hsd::construct::construct_eq5;
use hsd::linalg::hermitian_dot;
use hsd::search::load_table;
use hsd::{Elem, Error, FieldCtx, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn duals_of_extremes() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let full = LinearCode::new(Matrix::identity(&ctx, 4));
    assert_eq!(full.hermitian_dual().dimension(), 0);
    let w = ctx.omega();
    let c = LinearCode::new(Matrix::from_rows(&ctx, &[vec![Elem::ONE, w]]).unwrap());
    let d = c.hermitian_dual();
    assert_eq!(d.dimension(), 1);
    assert!(hermitian_dot(&ctx, c.generator().row(0), d.generator().row(0)).is_zero());
}

#[test]
fn self_duality_predicates() {
    let ctx = FieldCtx::new(5, 1).unwrap();
    let alpha = ctx.alpha_for_minus_one();
    let c = LinearCode::new(Matrix::from_rows(&ctx, &[vec![Elem::ONE, alpha]]).unwrap());
    assert!(c.is_self_dual_h());
    let zero = LinearCode::new(Matrix::empty(&ctx, 2));
    assert!(zero.is_self_orthogonal_h());
    assert!(!zero.is_self_dual_h());
}

#[test]
fn small_distances() {
    let ctx = FieldCtx::new(2, 1).unwrap();
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let c = LinearCode::new(Matrix::from_rows(&ctx, &[vec![o, z, o, z], vec![z, o, z, o]]).unwrap());
    assert_eq!(c.min_distance(1 << 20).unwrap(), 2);
    let l = Matrix::identity(&ctx, 3);
    assert_eq!(construct_eq5(&l, Elem::ONE).unwrap().min_distance(1 << 20).unwrap(), 2);
}

#[test]
fn mds_certificates() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let c = LinearCode::new(Matrix::identity(&ctx, 3).hstack(&Matrix::zeros(&ctx, 3, 2)).unwrap());
    assert!(!c.is_mds().unwrap());
    let t = load_table(8).unwrap();
    for row in &t.rows {
        let ctx = row.spec.ctx().unwrap();
        let code = LinearCode::new(row.spec.generator.as_ref().unwrap().to_matrix(&ctx).unwrap());
        assert!(code.is_self_dual_h(), "{}", row.label);
        assert!(code.is_mds().unwrap(), "{}", row.label);
    }
}

#[test]
fn budget_is_reported() {
    let ctx = FieldCtx::new(2, 2).unwrap();
    let c = LinearCode::new(Matrix::identity(&ctx, 8));
    assert!(matches!(c.min_distance(1000), Err(Error::BudgetExceeded { .. })));
}

proptest! {
    #[test]
    fn dual_of_dual_is_the_code(fi in 0..FIELDS.len(), seed in any::<u64>(), k in 1usize..4, n in 4usize..7) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = LinearCode::new(random_matrix(&ctx, k, n, &mut r));
        let d = c.hermitian_dual();
        prop_assert_eq!(d.dimension(), n - c.dimension());
        prop_assert!(d.hermitian_dual().same_code(&c));
    }

    #[test]
    fn self_dual_codes_obey_singleton_and_isotropy(fi in 0..FIELDS.len(), seed in any::<u64>(), n in 2usize..5) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let l = random_unitary(&ctx, n, &mut r);
        let c = construct_eq5(&l, random_alpha(&ctx, &mut r)).unwrap();
        prop_assert!(c.is_self_dual_h());
        let d = c.min_distance(u128::MAX).unwrap();
        prop_assert!(d <= n + 1);
        prop_assert_eq!(c.is_mds().unwrap(), d == n + 1);
        let msg: Vec<Elem> = (0..n).map(|_| random_elem(&ctx, &mut r)).collect();
        let x = hsd::code::encode(c.generator(), &msg);
        prop_assert!(hermitian_dot(&ctx, &x, &x).is_zero());
    }
}
