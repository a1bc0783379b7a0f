//! Oracle for maps of the 3-star `Y`: three unit arms glued at the center.
//! Arm `i` has chart `s ∈ [0, 1]` with `s = 0` the center.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use sigma_core::constructions::{StarMap, StarPoint};
use sigma_core::Q;

use crate::pullback::{search, Hit, Piece, SegmentMap};

fn locate(p: &StarPoint) -> (usize, Q) {
    match p {
        StarPoint::Center => (0, Q::zero()),
        StarPoint::Arm(i, s) => (*i, s.clone()),
    }
}

fn legs(a: &StarPoint, b: &StarPoint) -> Vec<(usize, Q, Q)> {
    let (i, s) = locate(a);
    let (j, t) = locate(b);
    if i == j || s.is_zero() || t.is_zero() {
        let arm = if s.is_zero() { j } else { i };
        return vec![(arm, s, t)];
    }
    vec![(i, s, Q::zero()), (j, Q::zero(), t)]
}

pub(crate) struct StarOracle {
    arms: [Vec<Piece<usize>>; 3],
}

impl StarOracle {
    pub(crate) fn new(f: &StarMap) -> Self {
        let center = f
            .nodes
            .iter()
            .find(|(x, _)| *x == StarPoint::Center)
            .expect("the center is a node")
            .1
            .clone();
        let arms = [0, 1, 2].map(|i| {
            let mut v: Vec<(Q, StarPoint)> = vec![(Q::zero(), center.clone())];
            v.extend(f.nodes.iter().filter_map(|(x, y)| match x {
                StarPoint::Arm(j, s) if *j == i => Some((s.clone(), y.clone())),
                _ => None,
            }));
            v.sort_by(|x, y| x.0.cmp(&y.0));
            v.windows(2).flat_map(|w| pieces_between(&w[0].0, &w[1].0, &w[0].1, &w[1].1)).collect()
        });
        StarOracle { arms }
    }

    pub(crate) fn eval(&self, x: &StarPoint) -> StarPoint {
        let (i, t) = locate(x);
        let p = self.arms[i].iter().find(|p| p.lo <= t && t <= p.hi).expect("pieces cover the arm");
        StarPoint::arm(p.target, &p.a * &t + &p.b)
    }
}

fn pieces_between(u: &Q, v: &Q, fu: &StarPoint, fv: &StarPoint) -> Vec<Piece<usize>> {
    let legs = legs(fu, fv);
    let total: Q = legs.iter().map(|(_, s0, s1)| (s1 - s0).abs()).sum();
    if total.is_zero() {
        let (arm, s) = locate(fu);
        return vec![Piece { lo: u.clone(), hi: v.clone(), target: arm, a: Q::zero(), b: s }];
    }
    let scale = &total / (v - u);
    let mut out = Vec::new();
    let mut c0 = Q::zero();
    for (arm, s0, s1) in legs {
        let c1 = &c0 + (&s1 - &s0).abs();
        let sign = if s1 >= s0 { Q::one() } else { -Q::one() };
        let a = &sign * &scale;
        let b = &s0 - &sign * (u * &scale + &c0);
        out.push(Piece { lo: u + &c0 / &scale, hi: u + &c1 / &scale, target: arm, a, b });
        c0 = c1;
    }
    out
}

impl SegmentMap for StarOracle {
    type Seg = usize;
    type Point = StarPoint;

    fn starts(&self) -> Vec<usize> {
        vec![0, 1, 2]
    }

    fn pieces(&self, seg: &usize) -> &[Piece<usize>] {
        &self.arms[*seg]
    }

    fn place(&self, _seg: &usize, target: &usize) -> usize {
        *target
    }

    fn return_shift(&self, start: &usize, end: &usize) -> Option<i64> {
        (start == end).then_some(0)
    }

    fn point(&self, seg: &usize, t: &Q) -> StarPoint {
        StarPoint::arm(*seg, t.clone())
    }

    fn period(&self, x: &StarPoint, max: usize) -> Option<(usize, i64)> {
        let mut y = x.clone();
        for m in 1..=max {
            y = self.eval(&y);
            if y == *x {
                return Some((m, 0));
            }
        }
        None
    }
}

/// True periods of a 3-star map in `1..=n_max`.
pub fn star_true_periods(f: &StarMap, n_max: usize) -> BTreeSet<usize> {
    let o = StarOracle::new(f);
    let mut found: BTreeSet<usize> = f.nodes.iter().filter_map(|(x, _)| o.period(x, n_max)).map(|(m, _)| m).collect();
    for n in 1..=n_max {
        if found.contains(&n) {
            continue;
        }
        let mut visit = |h: Hit<StarPoint>| {
            found.insert(h.period);
            h.period == n
        };
        search(&o, n, &|_| true, None, &mut visit);
    }
    found
}
