mod common;

use common::*;
use hsd::{Elem, FieldCtx};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn primitive_element_has_full_order() {
    for (p, m, order) in [(3u64, 1u32, 8u32), (2, 2, 15), (11, 1, 120)] {
        let ctx = FieldCtx::new(p, m).unwrap();
        let w = ctx.omega();
        let first_one = (1..=order).find(|&k| ctx.pow(w, k as i64) == Elem::ONE);
        assert_eq!(first_one, Some(order));
    }
}

#[test]
fn small_field_identities() {
    let f9 = FieldCtx::new(3, 1).unwrap();
    let w = f9.omega();
    assert!(f9.add(f9.pow(w, 4), Elem::ONE).is_zero());
    assert_eq!(f9.conj(w), f9.pow(w, 3));
    let f4 = FieldCtx::new(2, 1).unwrap();
    let w = f4.omega();
    assert_eq!(f4.add(w, f4.mul(w, w)), Elem::ONE);
    assert_eq!(f4.conj(w), f4.mul(w, w));
    assert_eq!(f4.alpha_for_minus_one(), Elem::ONE);
    for ctx in [f4, f9] {
        assert_eq!(ctx.conj(Elem::ZERO), Elem::ZERO);
        assert_eq!(ctx.conj(Elem::ONE), Elem::ONE);
    }
}

#[test]
fn norm_root_of_minus_one_in_gf9() {
    let ctx = FieldCtx::new(3, 1).unwrap();
    let target = ctx.omega_pow(4);
    let theta = ctx.norm_root(target).unwrap();
    assert_eq!(ctx.pow(theta, 4), target);
    let roots = ctx.elements().filter(|&x| ctx.pow(x, 4) == target).count();
    assert_eq!(roots, 4);
}

#[test]
fn alpha_matches_brute_force_filter() {
    for i in 0..FIELDS.len() {
        let ctx = field(i);
        let alpha = ctx.alpha_for_minus_one();
        let minus_one = ctx.neg(Elem::ONE);
        assert_eq!(ctx.add(ctx.norm(alpha), Elem::ONE), Elem::ZERO);
        assert!(ctx.elements().any(|x| x == alpha && ctx.norm(x) == minus_one));
    }
}

fn ctx_and_elems() -> impl Strategy<Value = (usize, u64)> {
    (0..FIELDS.len(), any::<u64>())
}

proptest! {
    #[test]
    fn field_axioms((fi, seed) in ctx_and_elems()) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_elem(&ctx, &mut r), random_elem(&ctx, &mut r), random_elem(&ctx, &mut r));
        prop_assert_eq!(ctx.add(x, y), ctx.add(y, x));
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.add(x, ctx.neg(x)), Elem::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((fi, seed) in ctx_and_elems()) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_elem(&ctx, &mut r), random_elem(&ctx, &mut r));
        prop_assert_eq!(ctx.conj(ctx.conj(x)), x);
        prop_assert_eq!(ctx.conj(ctx.mul(x, y)), ctx.mul(ctx.conj(x), ctx.conj(y)));
        prop_assert_eq!(ctx.conj(ctx.add(x, y)), ctx.add(ctx.conj(x), ctx.conj(y)));
        prop_assert!(ctx.is_in_subfield(ctx.norm(x)));
    }

    #[test]
    fn norm_root_inverts_the_norm((fi, seed) in ctx_and_elems()) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let x = random_nonzero(&ctx, &mut r);
        let n = ctx.norm(x);
        prop_assert_eq!(ctx.norm(ctx.norm_root(n).unwrap()), n);
    }

    #[test]
    fn element_text_round_trips((fi, seed) in ctx_and_elems()) {
        let ctx = field(fi);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let x = random_elem(&ctx, &mut r);
        prop_assert_eq!(ctx.parse_elem(&x.to_string()).unwrap(), x);
    }
}
