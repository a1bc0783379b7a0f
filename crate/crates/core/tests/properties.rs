use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigma_core::constructions::random_lifting;
use sigma_core::markov::markov_graph;
use sigma_core::orderings::{baldwin_le, baldwin_tail, sh_le, BValue, ShValue};
use sigma_core::sigmamap::{iterate, SigmaMap};
use sigma_core::space::qi;
use sigma_core::{periods_mod1, rotation_interval};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degree_extension(seed in any::<u64>(), d in -2i64..=2, m in -3i64..=3) {
        let f = random_lifting(&mut ChaCha8Rng::seed_from_u64(seed), d, 7);
        for node in f.nodes() {
            let x = node.point.clone();
            prop_assert_eq!(f.eval(&x.translate(m)), f.eval(&x).translate(m * d));
            prop_assert_eq!(iterate(&f, &x.translate(m), 2), iterate(&f, &x, 2).translate(m * d * d));
        }
    }

    #[test]
    fn shifting_keeps_periods_and_moves_rotation(seed in any::<u64>(), k in -2i64..=2) {
        let f = random_lifting(&mut ChaCha8Rng::seed_from_u64(seed), 1, 6);
        let fk = f.shifted(k);
        prop_assert_eq!(periods_mod1(&fk, 12).unwrap(), periods_mod1(&f, 12).unwrap());
        let r = rotation_interval(&markov_graph(&f)).unwrap();
        let rk = rotation_interval(&markov_graph(&fk)).unwrap();
        prop_assert_eq!(rk.lo, r.lo + qi(k));
        prop_assert_eq!(rk.hi, r.hi + qi(k));
    }

    #[test]
    fn sharkovsky_is_a_total_order(a in 1usize..200, b in 1usize..200) {
        let (a, b) = (ShValue::Nat(a), ShValue::Nat(b));
        prop_assert!(sh_le(a, b) || sh_le(b, a));
        prop_assert_eq!(sh_le(a, b) && sh_le(b, a), a == b);
    }

    #[test]
    fn baldwin_tails_are_downward_closed(t in 2usize..6, m in 1usize..60) {
        prop_assume!(m == 1 || m >= t);
        let tail = baldwin_tail(t, BValue::Nat(m), 60).unwrap();
        prop_assert!(tail.contains(&1) && tail.contains(&m));
        for &k in &tail {
            for j in baldwin_tail(t, BValue::Nat(k), 60).unwrap() {
                prop_assert!(baldwin_le(t, BValue::Nat(j), BValue::Nat(m)).unwrap(), "{} <= {} <= {} but not transitive", j, k, m);
            }
        }
    }
}
