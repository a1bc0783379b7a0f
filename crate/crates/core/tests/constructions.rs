use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigma_core::constructions::{
    branch_family, embed_star_map, example_5_1, random_lifting, stefan_interval_map, StarMap, StarPoint,
};
use sigma_core::orderings::{sh_tail, ShValue};
use sigma_core::periods::{orbit_type_3star, periods_report, DEFAULT_BUDGET};
use sigma_core::space::{q, qi};
use sigma_core::{parse_map, periods_mod1, Q, TruncatedPeriodSet};

fn arm(i: usize, s: Q) -> StarPoint {
    StarPoint::arm(i, s)
}

fn star_nodes() -> Vec<StarPoint> {
    let mut v = vec![StarPoint::Center];
    for i in 0..3 {
        v.push(arm(i, q(1, 2)));
        v.push(arm(i, qi(1)));
    }
    v
}

/// The tips rotate and the center is fixed: a period 3 orbit of type 3.
fn rotating_star() -> StarMap {
    StarMap {
        nodes: vec![
            (StarPoint::Center, StarPoint::Center),
            (arm(0, qi(1)), arm(1, qi(1))),
            (arm(1, qi(1)), arm(2, qi(1))),
            (arm(2, qi(1)), arm(0, qi(1))),
        ],
    }
}

#[test]
fn embedded_star_keeps_its_periods() {
    let f = rotating_star();
    let want = sigma_oracle::star_true_periods(&f, 12);
    let got = periods_mod1(&embed_star_map(&f).unwrap(), 12).unwrap();
    assert_eq!(got, TruncatedPeriodSet::new(12, want));
}

#[test]
fn embedded_random_stars_keep_their_periods() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = star_nodes();
    for i in 0..25 {
        let nodes = pts.iter().map(|p| (p.clone(), pts[rng.gen_range(0..pts.len())].clone())).collect();
        let f = StarMap { nodes };
        let want = TruncatedPeriodSet::new(8, sigma_oracle::star_true_periods(&f, 8));
        let got = periods_mod1(&embed_star_map(&f).unwrap(), 8).unwrap();
        assert_eq!(got, want, "star map {i}: {:?}", f.nodes);
    }
}

#[test]
fn rotating_star_orbit_has_type_three() {
    let f = embed_star_map(&rotating_star()).unwrap();
    let rep = periods_report(&f, 3, DEFAULT_BUDGET).unwrap();
    let o = &rep.witnesses[&3];
    assert!(orbit_type_3star(&f, o).unwrap().contains(&3));
}

#[test]
fn stefan_maps_have_a_cycle_of_the_given_period() {
    for s in [3usize, 5, 7, 6, 12] {
        let f = stefan_interval_map(ShValue::Nat(s)).unwrap();
        let has_cycle = f.nodes.iter().any(|(x, _)| {
            let mut y = x.clone();
            for k in 1..=s {
                y = f.eval(&y);
                if y == *x {
                    return k == s;
                }
            }
            false
        });
        assert!(has_cycle, "no node cycle of period {s}");
    }
}

#[test]
fn branch_family_in_degree_zero_and_one() {
    for d in [0, 1] {
        for s in [3usize, 5, 6] {
            let got = periods_mod1(&branch_family(d, ShValue::Nat(s)).unwrap(), 16).unwrap();
            assert_eq!(got, TruncatedPeriodSet::new(16, sh_tail(ShValue::Nat(s), 16)), "d={d} s={s}");
        }
    }
    assert!(branch_family(1, ShValue::TwoInf).is_err());
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(example_5_1(2, None).is_err());
    assert!(example_5_1(3, Some(vec![q(1, 2)])).is_err());
}

#[test]
fn random_liftings_are_reproducible_and_round_trip() {
    let a = random_lifting(&mut ChaCha8Rng::seed_from_u64(11), 1, 8);
    let b = random_lifting(&mut ChaCha8Rng::seed_from_u64(11), 1, 8);
    assert_eq!(a, b);
    assert_eq!(parse_map(&a.to_map_text()).unwrap(), a);
}
