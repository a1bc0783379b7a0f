use std::collections::BTreeSet;

use sigma_core::constructions::{StarMap, StarPoint};
use sigma_core::sigmamap::build_lifting;
use sigma_core::space::{q, qi, SPoint};
use sigma_oracle::{fixed_points, periods_mod1, periods_with_rotation, star_true_periods};

fn set(v: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    v.into_iter().collect()
}

fn real(x: i64) -> SPoint {
    SPoint::Real(qi(x))
}

#[test]
fn translation_has_only_fixed_points_mod_one() {
    let f = build_lifting(1, vec![(real(0), real(1)), (SPoint::top(0), SPoint::top(1))]).unwrap();
    assert_eq!(periods_mod1(&f, 8), set([1]));
    assert_eq!(periods_with_rotation(&f, 1, 1, 8), set([1]));
    assert!(periods_with_rotation(&f, 0, 1, 8).is_empty());
}

#[test]
fn reflection_has_periods_one_and_two() {
    let f = build_lifting(-1, vec![(real(0), real(0)), (SPoint::top(0), SPoint::top(0))]).unwrap();
    assert_eq!(periods_mod1(&f, 8), set([1, 2]));
}

/// `x ↦ 2x` on the reals: `2^n x = x + k` has solutions `k / (2^n − 1)`,
/// so every period occurs.
#[test]
fn doubling_has_every_period() {
    let f = build_lifting(2, vec![(real(0), real(0)), (SPoint::top(0), SPoint::top(0))]).unwrap();
    assert_eq!(periods_mod1(&f, 7), set(1..=7));
    let sols = fixed_points(&f, 2, None);
    let reals: BTreeSet<_> = sols.iter().map(|s| s.point.reduce().0).filter(|p| !p.is_branch()).collect();
    assert_eq!(reals, [qi(0), q(1, 3), q(2, 3)].map(SPoint::Real).into_iter().collect());
}

#[test]
fn rotating_star_tips() {
    let tip = |i| StarPoint::arm(i, qi(1));
    let f = StarMap { nodes: vec![(StarPoint::Center, StarPoint::Center), (tip(0), tip(1)), (tip(1), tip(2)), (tip(2), tip(0))] };
    assert_eq!(star_true_periods(&f, 9), set([1, 3]));
}
