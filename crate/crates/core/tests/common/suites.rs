//! Checks shared by the property suites and the acceptance run. Each takes a
//! seed and panics on a violated invariant.

use hsd::code::LinearCode;
use hsd::construct::*;
use hsd::mpcode::{mp_code, mp_hermitian_dual, MatrixProductSpec};
use hsd::unitary::{all_transvection_solutions, Convention, UnitaryGenSet, WordFamily};
use hsd::{Elem, FieldCtx, Matrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One random word-family matrix over GF(9), GF(16), GF(25) or GF(49).
pub fn word_is_unitary(seed: u64) {
    let mut r = rng(seed);
    let q2 = *[9u64, 16, 25, 49].choose(&mut r).unwrap();
    let ctx = FieldCtx::from_order(q2).unwrap();
    let n = r.gen_range(4..=6);
    let abcd = *all_transvection_solutions(&ctx).choose(&mut r).unwrap();
    let gens = UnitaryGenSet::with_abcd(&ctx, n, abcd).unwrap();
    let conv = *Convention::ALL.choose(&mut r).unwrap();
    let fam = WordFamily::new(&gens, r.gen_range(1..=7), conv).unwrap();
    let l = fam.matrix([0; 4].map(|_| r.gen_range(0..=4)));
    assert!(l.is_unitary().unwrap(), "q2={q2} n={n}");
}

/// Builds `c` on one random valid input and checks the promised properties.
/// Returns false when the drawn field and length cannot host `c`.
pub fn construction_holds(c: Construction, seed: u64) -> bool {
    let mut r = rng(seed);
    let ctx = field(r.gen_range(0..FIELDS.len()));
    let p = ctx.p() as usize;
    let n = r.gen_range(2..=7);
    let code: LinearCode = match c {
        Construction::Eq5 | Construction::Eq6 => {
            let l = random_unitary(&ctx, n, &mut r);
            let a = random_alpha(&ctx, &mut r);
            if c == Construction::Eq5 {
                construct_eq5(&l, a).unwrap()
            } else {
                construct_eq6(&l, a).unwrap()
            }
        }
        Construction::Eq7 | Construction::Eq8 => {
            let ok = if c == Construction::Eq7 { n % p == 2 % p } else { (n + 2) % p == 0 };
            if !ok {
                return false;
            }
            let l = random_unitary(&ctx, n, &mut r);
            let a = random_alpha(&ctx, &mut r);
            if c == Construction::Eq7 {
                construct_eq7(&l, a).unwrap()
            } else {
                construct_eq8(&l, a).unwrap()
            }
        }
        Construction::BorderedMinus | Construction::BorderedPlus => {
            let family = if c == Construction::BorderedMinus { Family::Minus } else { Family::Plus };
            let cases: Vec<BorderedCase> =
                BorderedCase::all().into_iter().filter(|k| k.family == family).collect();
            let case = *cases.choose(&mut r).unwrap();
            let choices = CaseChoices {
                a: Some(random_alpha(&ctx, &mut r)),
                ..Default::default()
            };
            let Ok(params) = solve_bordered_params(&ctx, n, case, choices) else {
                return false;
            };
            let l = random_unitary(&ctx, n, &mut r);
            construct_bordered(&l, &params, family, false).unwrap()
        }
        Construction::Extended => {
            let l = random_unitary(&ctx, n, &mut r);
            let a = random_alpha(&ctx, &mut r);
            let lambdas: Vec<Elem> = (0..n).map(|_| random_elem(&ctx, &mut r)).collect();
            let Ok(xs) = find_extension_vectors(&l, &lambdas, a) else {
                return false;
            };
            let x = xs.choose(&mut r).unwrap().clone();
            construct_extended(&l, &ExtensionSpec { lambdas, x, a }).unwrap()
        }
        Construction::Eq17 => {
            if n % p != 1 % p {
                return false;
            }
            let l = random_unitary(&ctx, n, &mut r);
            let a = random_alpha(&ctx, &mut r);
            let xs = eq17_vectors(&l, a).unwrap();
            construct_eq17(&l, a, Some(xs.choose(&mut r).unwrap())).unwrap()
        }
        Construction::Buildup => {
            let n = n.min(4);
            let l = random_unitary(&ctx, n, &mut r);
            let a = random_alpha(&ctx, &mut r);
            let seed = construct_eq5(&l, a).unwrap();
            let xs = buildup_vectors(&ctx, 2 * n, 64);
            build_up(&seed, xs.choose(&mut r).unwrap(), a).unwrap()
        }
        Construction::Embed => {
            let l = random_unitary(&ctx, n, &mut r);
            let seed = construct_eq5(&l, random_alpha(&ctx, &mut r)).unwrap();
            let keep: Vec<usize> = (0..n - 1).collect();
            embed_lengthen(&LinearCode::new(seed.generator().select_rows(&keep))).unwrap()
        }
    };
    let tag = format!("{c} q2={} n={n}", ctx.order());
    assert!(code.is_self_orthogonal_h(), "{tag}");
    // Every construction here, closed-form bordered cases included, promises self-duality.
    assert!(code.is_self_dual_h(), "{tag}");
    true
}

/// 200 valid inputs for every construction.
pub fn all_constructions_hold(per: usize) {
    for (ci, &c) in Construction::ALL.iter().enumerate() {
        let base = 100_000 * ci as u64;
        let mut done = 0;
        let mut seed = base;
        while done < per {
            seed += 1;
            assert!(seed < base + 100_000, "{c}: too few valid inputs");
            if construction_holds(c, seed) {
                done += 1;
            }
        }
    }
}

/// For every closed-form case, `per` random (field, n) pairs that pass the
/// guards give parameters satisfying the family system exactly.
pub fn closed_forms_hold(per: usize, seed: u64) {
    let mut r = rng(seed);
    let fields: Vec<_> = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)]
        .iter()
        .map(|&(p, m)| FieldCtx::new(p, m).unwrap())
        .collect();
    for case in BorderedCase::all() {
        let mut solved = 0;
        for _ in 0..50_000 {
            let ctx = fields.choose(&mut r).unwrap();
            let n = r.gen_range(2..=40);
            let free_theta = case.delta == 0 && case.case != 2 || case.delta == 1 && case.case == 4;
            let choices = CaseChoices {
                theta: free_theta.then(|| random_nonzero(ctx, &mut r)),
                gamma: None,
                a: Some(random_alpha(ctx, &mut r)),
            };
            if let Ok(params) = solve_bordered_params(ctx, n, case, choices) {
                assert!(params.residuals(ctx, n, case.family).iter().all(|e| e.is_zero()), "{case}");
                solved += 1;
                if solved == per {
                    break;
                }
            }
        }
        assert_eq!(solved, per, "{case}");
    }
}

/// Random small product code: the structured dual equals the direct dual.
pub fn product_dual_holds(seed: u64) {
    let mut r = rng(seed);
    let ctx = field(r.gen_range(0..3));
    let l = r.gen_range(1..=3);
    let m = l + r.gen_range(0..=1);
    let len = r.gen_range(2..=4);
    let a = loop {
        let a = random_matrix(&ctx, l, m, &mut r);
        if a.rank() == l {
            break a;
        }
    };
    let inner: Vec<LinearCode> = (0..l)
        .map(|_| match r.gen_range(0..=len) {
            0 => LinearCode::new(Matrix::empty(&ctx, len)),
            k => LinearCode::new(random_matrix(&ctx, k, len, &mut r)),
        })
        .collect();
    let spec = MatrixProductSpec::new(inner, a).unwrap();
    let direct = mp_code(&spec).unwrap().hermitian_dual();
    assert!(mp_hermitian_dual(&spec).unwrap().same_code(&direct));
}

/// Random code with q^k ≤ 10⁵: min_distance equals a naive scan of every message.
pub fn distance_matches_oracle(seed: u64) {
    let mut r = rng(seed);
    let ctx = field(r.gen_range(0..FIELDS.len()));
    let q = ctx.order() as usize;
    let kmax = (1..=5).take_while(|&k| q.pow(k as u32) <= 100_000).last().unwrap();
    let k = r.gen_range(1..=kmax);
    let n = k + r.gen_range(0..=5);
    let g = random_matrix(&ctx, k, n, &mut r);
    let elems: Vec<Elem> = ctx.elements().collect();
    let mut best = 0;
    for t in 0..q.pow(k as u32) {
        let msg: Vec<Elem> = (0..k).map(|i| elems[(t / q.pow(i as u32)) % q]).collect();
        let w = hsd::linalg::weight(&hsd::code::encode(&g, &msg));
        if w > 0 && (best == 0 || w < best) {
            best = w;
        }
    }
    assert_eq!(LinearCode::new(g).min_distance(u128::MAX).unwrap(), best);
}

/// In even characteristic the minus and plus bordered generators are the same
/// matrix for every solved parameter set. Returns the number of instances.
pub fn even_characteristic_coincidence(seed: u64) -> usize {
    let mut r = rng(seed);
    let mut checked = 0;
    for (p, m) in [(2u64, 1u32), (2, 2), (2, 3)] {
        let ctx = FieldCtx::new(p, m).unwrap();
        for n in 2..=11 {
            for case in BorderedCase::all().into_iter().filter(|c| c.family == Family::Minus) {
                let Ok(params) = solve_bordered_params(&ctx, n, case, CaseChoices::default()) else {
                    continue;
                };
                params.check_system(&ctx, n, Family::Plus).unwrap();
                let l = random_unitary(&ctx, n, &mut r);
                let minus = construct_bordered(&l, &params, Family::Minus, false).unwrap();
                let plus = construct_bordered(&l, &params, Family::Plus, false).unwrap();
                assert_eq!(
                    bordered_matrix(&l, &params, Family::Minus).data(),
                    bordered_matrix(&l, &params, Family::Plus).data()
                );
                assert_eq!(minus.generator().data(), plus.generator().data());
                checked += 1;
            }
        }
    }
    checked
}
