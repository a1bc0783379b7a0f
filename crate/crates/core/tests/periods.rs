use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigma_core::constructions::{example_5_1, example_5_2, example_6_1, example_6_3, example_6_4, random_lifting};
use sigma_core::periods::{
    enumerate_orbits, node_orbit_periods, periods_for_rotation, periods_report, theorem_shape, PeriodError, Shape,
};
use sigma_core::sigmamap::iterate;
use sigma_core::space::q;
use sigma_core::{periods_mod1, Lifting, LiftedOrbit, TruncatedPeriodSet};

const WINDOW: usize = 8;

fn agree_with_oracle(name: &str, f: &Lifting) {
    let engine = periods_mod1(f, WINDOW).unwrap();
    let oracle = TruncatedPeriodSet::new(WINDOW, sigma_oracle::periods_mod1(f, WINDOW));
    assert_eq!(engine, oracle, "{name}");
}

#[test]
fn examples_agree_with_oracle() {
    agree_with_oracle("5_1", &example_5_1(4, None).unwrap());
    agree_with_oracle("5_2", &example_5_2(None).unwrap());
    agree_with_oracle("6_1", &example_6_1(3, None).unwrap());
    agree_with_oracle("6_3", &example_6_3(3, None, None).unwrap());
}

#[test]
fn random_maps_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..40 {
        let d = [1, 0, -1, 1][i % 4];
        let f = random_lifting(&mut rng, d, 6);
        agree_with_oracle(&format!("random {i}\n{}", f.to_map_text()), &f);
    }
}

#[test]
fn rotation_filtered_periods_agree_with_oracle() {
    let f = example_5_2(None).unwrap();
    for (p, den) in [(0, 1), (1, 3), (-1, 3), (1, 4)] {
        let engine = periods_for_rotation(&f, p, den, WINDOW).unwrap();
        let oracle = TruncatedPeriodSet::new(WINDOW, sigma_oracle::periods_with_rotation(&f, p, den, WINDOW));
        assert_eq!(engine, oracle, "rotation {p}/{den}");
    }
}

#[test]
fn witnesses_are_true_orbits() {
    let f = example_5_1(3, None).unwrap();
    let rep = periods_report(&f, 20, sigma_core::periods::DEFAULT_BUDGET).unwrap();
    assert_eq!(rep.set, TruncatedPeriodSet::new(20, 2..=20));
    for (n, o) in &rep.witnesses {
        assert_eq!(o.period, *n);
        assert_eq!(iterate(&f, &o.representative, *n), o.representative.translate(o.shift));
        assert_eq!(o.rotation, q(o.shift, *n as i64));
        // Minimal: no earlier return mod 1.
        for k in 1..*n {
            assert!(iterate(&f, &o.representative, k).integer_offset(&o.representative).is_none());
        }
    }
}

#[test]
fn exhausted_budget_is_reported() {
    let f = example_6_4();
    match periods_report(&f, 20, 1) {
        Err(PeriodError::Incomplete { period, partial }) => {
            assert!(!partial.contains(period));
            assert!(partial.members.iter().filter(|&&n| n > period).all(|&n| n == 16), "only node orbits beyond the failure");
        }
        other => panic!("expected Incomplete, got {other:?}"),
    }
}

#[test]
fn bad_rotation_arguments() {
    let f = example_5_2(None).unwrap();
    assert!(matches!(periods_for_rotation(&f, 2, 4, 10), Err(PeriodError::BadRotation { .. })));
    let g = random_lifting(&mut ChaCha8Rng::seed_from_u64(1), 2, 4);
    assert_eq!(periods_for_rotation(&g, 0, 1, 10), Err(PeriodError::NotDegreeOne(2)));
}

#[test]
fn node_orbit_of_the_large_example() {
    let orbits = node_orbit_periods(&example_6_4());
    let o = orbits.iter().find(|o| o.period == 16).expect("period 16 node orbit");
    assert_eq!(o.shift, 0);
}

#[test]
fn enumerated_orbits_close_up() {
    let f = example_6_3(4, None, None).unwrap();
    let orbits = enumerate_orbits(&f, 6, false, sigma_core::periods::DEFAULT_BUDGET).unwrap();
    assert!(!orbits.is_empty());
    for o in &orbits {
        assert_eq!(iterate(&f, &o.representative, o.period), o.representative.translate(o.shift));
        assert_eq!(LiftedOrbit::of_point(&f, &o.representative, o.period).as_ref(), Some(o));
    }
}

#[test]
fn shapes() {
    assert_eq!(theorem_shape(&TruncatedPeriodSet::full(9)), Shape::AllN);
    assert_eq!(theorem_shape(&TruncatedPeriodSet::new(9, 2..=9)), Shape::MissingOnlyOne);
    assert_eq!(theorem_shape(&TruncatedPeriodSet::new(9, (1..=9).filter(|&n| n != 2))), Shape::MissingOnlyTwo);
    assert_eq!(theorem_shape(&TruncatedPeriodSet::new(9, 3..=9)), Shape::Other);
}

#[test]
fn set_display_compresses_runs() {
    assert_eq!(TruncatedPeriodSet::new(20, (1..=20).filter(|&n| n != 2)).to_string(), "{1,3,4,...,20}");
    assert_eq!(TruncatedPeriodSet::new(9, [1, 2, 3, 5]).to_string(), "{1,2,3,5}");
}

/// `F(x) = −x`: the one-step loop reflects `[0, 1]`, so every real point
/// off `ℤ/2` has period 2 although no primitive walk of length 2 exists.
#[test]
fn reflecting_loop_doubles_the_period() {
    use sigma_core::sigmamap::build_lifting;
    use sigma_core::space::{qi, SPoint};
    let f = build_lifting(-1, vec![(SPoint::Real(qi(0)), SPoint::Real(qi(0))), (SPoint::top(0), SPoint::top(0))]).unwrap();
    let rep = periods_report(&f, 10, sigma_core::periods::DEFAULT_BUDGET).unwrap();
    assert_eq!(rep.set, TruncatedPeriodSet::new(10, [1, 2]));
    let w = &rep.witnesses[&2];
    assert_eq!(iterate(&f, &w.representative, 2), w.representative.translate(w.shift));
    let orbits = enumerate_orbits(&f, 4, false, sigma_core::periods::DEFAULT_BUDGET).unwrap();
    assert!(orbits.iter().any(|o| o.period == 2));
}
