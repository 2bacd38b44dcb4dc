use expmap_core::catalog;
use expmap_core::coeff::{binom_residue, Coefficient, FieldSpec};
use expmap_core::grading::FiltrationContext;
use expmap_core::sample::{random_element, random_in_subalgebra, random_nonzero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CHARS: [u64; 4] = [0, 2, 3, 5];

fn char_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(CHARS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn coefficient_field_laws(a in -50i64..50, b in -50i64..50, c in -50i64..50, p in char_strategy()) {
        let f = FieldSpec::new(p).unwrap();
        let (a, b, c) = (Coefficient::from_i64(a, f), Coefficient::from_i64(b, f), Coefficient::from_i64(c, f));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn lucas_matches_pascal(n in 0u64..80, k in 0u64..80, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(k <= n);
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = (row[i - 1] + row[i]) % p;
            }
            row = next;
        }
        let f = FieldSpec::new(p).unwrap();
        prop_assert_eq!(binom_residue(n, k, f).unwrap(), Coefficient::from_i64(row[k as usize] as i64, f));
    }

    #[test]
    fn normal_forms_are_canonical(seed in any::<u64>(), p in char_strategy()) {
        let r = catalog::russell(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&r.algebra, 4, 4, &mut rng);
        let b = random_element(&r.algebra, 4, 4, &mut rng);
        // reducing a reduced representative changes nothing
        prop_assert_eq!(r.algebra.element(a.rep()).unwrap(), a.clone());
        // adding a multiple of the relation does not change the class
        let shifted = a.rep() + &(b.rep() * r.algebra.relation());
        prop_assert_eq!(r.algebra.element(&shifted).unwrap(), a.clone());
        prop_assert_eq!(&(&a * &b) - &(&b * &a), r.algebra.zero());
    }

    #[test]
    fn top_part_is_multiplicative(seed in any::<u64>(), p in char_strategy()) {
        let r = catalog::russell(p).unwrap();
        let ctx = FiltrationContext::new(&r.algebra, r.weight("w1").unwrap().clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nonzero(&r.algebra, 3, 3, &mut rng);
        let b = random_nonzero(&r.algebra, 3, 3, &mut rng);
        let lhs = ctx.top_part(&(&a * &b)).unwrap();
        let rhs = &ctx.top_part(&a).unwrap() * &ctx.top_part(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grdeg_bound_holds(seed in any::<u64>(), p in char_strategy()) {
        let r = catalog::russell(p).unwrap();
        let ctx = FiltrationContext::new(&r.algebra, r.weight("w1").unwrap().clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in ["phi1", "phi2"] {
            let h = ctx.grade(r.map(m).unwrap()).unwrap();
            prop_assert!(expmap_core::grading::bound_is_sharp(&h).unwrap());
            let a = random_nonzero(&r.algebra, 3, 3, &mut rng);
            prop_assert!(h.degree_bound_holds(&a).unwrap());
        }
    }

    #[test]
    fn power_sum_holds_in_char_zero(seed in any::<u64>()) {
        let r = catalog::russell(0).unwrap();
        let map = r.map("phi1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inv = [r.var("x"), r.var("t")];
        let nonzero_inv = |rng: &mut ChaCha8Rng| loop {
            let c = random_in_subalgebra(&inv, 1, 2, rng);
            if !c.is_zero() {
                break c;
            }
        };
        let c1 = nonzero_inv(&mut rng);
        let c2 = nonzero_inv(&mut rng);
        let a = random_element(&r.algebra, 2, 2, &mut rng);
        let b = random_element(&r.algebra, 2, 2, &mut rng);
        for (n, m) in [(2, 2), (2, 3), (3, 2)] {
            let out = catalog::power_sum_check(map, &c1, &c2, &a, &b, n, m).unwrap();
            prop_assert!(!out.is_violation(), "a = {}, b = {}", a, b);
        }
    }

    #[test]
    fn power_sum_holds_off_prime_powers(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5])) {
        // exponents 2 and 4 are not powers of 3 or 5
        let r = catalog::russell(p).unwrap();
        let map = r.map("phi2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = r.algebra.one();
        let a = random_element(&r.algebra, 2, 2, &mut rng);
        let b = &a + &random_in_subalgebra(&[r.var("x"), r.var("z")], 2, 2, &mut rng);
        for (n, m) in [(2, 2), (2, 4)] {
            prop_assume!(!catalog::is_power_of(n, p) && !catalog::is_power_of(m, p));
            let out = catalog::power_sum_check(map, &one, &one, &a, &b, n, m).unwrap();
            prop_assert!(!out.is_violation());
        }
    }

    #[test]
    fn localization_round_trip(seed in any::<u64>(), p in char_strategy()) {
        let r = catalog::russell(p).unwrap();
        let map = r.map("phi1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&r.algebra, 3, 3, &mut rng);
        let z = r.var("z");
        let rep = expmap_core::expmap::express_in_localization(map, &z, &a).unwrap();
        prop_assert!(rep.reconstructs(&a));
    }
}

#[test]
fn integer_maps_survive_reduction() {
    let r0 = catalog::russell(0).unwrap();
    for p in [2, 3, 5] {
        let rp = catalog::russell(p).unwrap();
        for m in ["phi1", "phi2"] {
            let moved = r0.map(m).unwrap().transfer(&rp.algebra).unwrap();
            assert!(moved.verify().passed(), "{m} mod {p}");
            assert_eq!(&moved, rp.map(m).unwrap());
        }
    }
}

#[test]
fn power_sum_explorer_reports_char2_witnesses() {
    let r = catalog::russell(2).unwrap();
    let map = r.map("phi1").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let found = catalog::power_sum_explore(map, &[r.var("x"), r.var("t")], 60, &mut rng).unwrap();
    // Frobenius makes a^2 + (a + i)^2 = i^2 whenever i is invariant
    assert!(!found.is_empty());
    let one = r.algebra.one();
    for w in &found {
        let out = catalog::power_sum_check(map, &one, &one, &w.a, &w.b, w.n, w.m).unwrap();
        assert!(out.hypotheses_hold && !out.conclusion_holds);
    }
}

#[test]
fn homogenization_idempotent_on_catalog() {
    for p in CHARS {
        let r = catalog::russell(p).unwrap();
        let w = r.weight("w1").unwrap().clone();
        let ctx = FiltrationContext::new(&r.algebra, w.clone()).unwrap();
        for m in ["phi1", "phi2"] {
            let bar = ctx.grade(r.map(m).unwrap()).unwrap().homogenize_map().unwrap();
            let ctx2 = FiltrationContext::new(ctx.graded_model(), w.clone()).unwrap();
            let again = ctx2.grade(&bar).unwrap().homogenize_map().unwrap();
            assert_eq!(bar.images(), again.images());
        }
    }
}
