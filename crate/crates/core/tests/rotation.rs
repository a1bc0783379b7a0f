use sigma_core::constructions::{circle_collapse, example_5_1, example_5_2, example_6_4, CircleMap};
use sigma_core::markov::markov_graph;
use sigma_core::rotation::{cycles_reachable_from_reals, loop_rotation, RotationError};
use sigma_core::sigmamap::build_lifting;
use sigma_core::space::{q, qi, SPoint};
use sigma_core::{rotation_interval, Lifting};

/// Reals translate by `+1` while `B_0` folds onto `B_{-1}`: two separate
/// strongly connected pieces with opposite drift.
fn split_drift() -> Lifting {
    build_lifting(1, vec![(SPoint::Real(qi(0)), SPoint::Real(qi(1))), (SPoint::top(0), SPoint::top(-1))]).unwrap()
}

#[test]
fn extremal_cycles_realise_the_endpoints() {
    for n in 3..=5 {
        let g = markov_graph(&example_5_1(n, None).unwrap());
        let rot = rotation_interval(&g).unwrap();
        assert_eq!((rot.lo.clone(), rot.hi.clone()), (q(-1, n as i64 - 1), q(1, 2)));
        assert_eq!(loop_rotation(&g, &rot.lo_cycle).unwrap(), rot.lo);
        assert_eq!(loop_rotation(&g, &rot.hi_cycle).unwrap(), rot.hi);
    }
}

/// Each periodic point found by the pullback oracle has rotation `m/n`
/// inside the interval, and both endpoints are attained.
#[test]
fn oracle_rotations_lie_in_the_interval() {
    for f in [example_5_1(3, None).unwrap(), example_5_2(None).unwrap()] {
        let rot = rotation_interval(&markov_graph(&f)).unwrap();
        let mut seen = Vec::new();
        for n in 1..=6usize {
            for m in -(n as i64)..=(n as i64) {
                if !sigma_oracle::fixed_points(&f, n, Some(m)).is_empty() {
                    let rho = q(m, n as i64);
                    assert!(rot.contains(&rho), "{m}/{n} outside {rot}");
                    seen.push(rho);
                }
            }
        }
        assert!(seen.contains(&rot.lo) && seen.contains(&rot.hi), "{rot} endpoints not attained");
    }
}

#[test]
fn large_example_interval() {
    let rot = rotation_interval(&markov_graph(&example_6_4())).unwrap();
    assert_eq!((rot.lo, rot.hi), (qi(-5), qi(1)));
}

#[test]
fn circle_rotation_is_preserved_by_collapse() {
    // Both monotone envelopes of this map send 1/2 -> 1/4 + 1 (upper) or
    // 0 -> 1/2 -> 0 + 1 (lower), so the interval collapses to {1/2}.
    let c = CircleMap { nodes: vec![(qi(0), q(1, 2)), (q(1, 4), q(1, 2)), (q(1, 2), q(5, 4)), (q(3, 4), qi(1))] };
    let rot = rotation_interval(&markov_graph(&circle_collapse(&c).unwrap())).unwrap();
    assert_eq!((rot.lo, rot.hi), (q(1, 2), q(1, 2)));
}

#[test]
fn unreachable_branch_cycles_are_detected() {
    let g = markov_graph(&split_drift());
    assert!(!cycles_reachable_from_reals(&g));
    let rot = rotation_interval(&g).unwrap();
    assert_eq!((rot.lo, rot.hi), (qi(-1), qi(1)));
    assert!(cycles_reachable_from_reals(&markov_graph(&example_5_1(3, None).unwrap())));
}

#[test]
fn other_degrees_are_rejected() {
    let f = build_lifting(2, vec![(SPoint::Real(qi(0)), SPoint::Real(qi(0))), (SPoint::top(0), SPoint::top(0))]).unwrap();
    assert_eq!(rotation_interval(&markov_graph(&f)), Err(RotationError::NotDegreeOne(2)));
}
