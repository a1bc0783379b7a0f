//! The finite tree `T_P` spanned by a true periodic orbit together with the
//! branches standing on it, and the map `F_P = r ∘ F` where `r` retracts `S`
//! onto `T_P`.
//!
//! The orbit points are first added as nodes, so the ends of `T_P` are node
//! translates and every basic interval translate is either inside `T_P` or
//! outside it. Pieces landing outside are squeezed to an end by `r`.

use std::collections::{BTreeMap, BTreeSet};

use crate::markov::{markov_graph, Chart};
use crate::sigmamap::{Lifting, Node, SigmaMap};
use crate::space::{floor_i64, qi, SPoint};
use crate::Q;

use super::engine::{family_point, Fixed, Piece, System};
use super::{LiftedOrbit, TruncatedPeriodSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("the orbit is not a true periodic orbit")]
    NotTrueOrbit,
    #[error("the orbit tree needs degree 1, got {0}")]
    NotDegreeOne(i64),
    #[error("search budget exhausted while looking for a period-{0} orbit of the tree map")]
    Incomplete(usize),
}

#[derive(Clone, Debug)]
pub struct OrbitTree {
    pub lo: Q,
    pub hi: Q,
    /// Integers in `[lo, hi]`; their full branches belong to the tree.
    pub branches: Vec<i64>,
    /// `F` with the orbit points added as nodes.
    pub refined: Lifting,
    /// True periods of `F_P` in the window.
    pub tper: TruncatedPeriodSet,
    /// One true orbit of `F_P` per period.
    pub witnesses: BTreeMap<usize, Vec<SPoint>>,
}

impl OrbitTree {
    pub fn retract(&self, p: &SPoint) -> SPoint {
        let x = p.re();
        if x < self.lo {
            SPoint::Real(self.lo.clone())
        } else if x > self.hi {
            SPoint::Real(self.hi.clone())
        } else {
            p.clone()
        }
    }

    /// `F_P(x) = r(F(x))`.
    pub fn eval(&self, p: &SPoint) -> SPoint {
        self.retract(&self.refined.eval(p))
    }

    pub fn contains(&self, p: &SPoint) -> bool {
        let x = p.re();
        x >= self.lo && x <= self.hi
    }
}

/// Least `n` with `h^n(x) = x`, if at most `max`.
fn true_period(h: &dyn Fn(&SPoint) -> SPoint, x: &SPoint, max: usize) -> Option<usize> {
    let mut y = x.clone();
    for n in 1..=max {
        y = h(&y);
        if y == *x {
            return Some(n);
        }
    }
    None
}

pub fn orbit_tree_restriction(f: &Lifting, orbit: &LiftedOrbit, n_max: usize, budget: u64) -> Result<OrbitTree, TreeError> {
    if f.degree() != 1 {
        return Err(TreeError::NotDegreeOne(f.degree()));
    }
    if orbit.shift != 0 {
        return Err(TreeError::NotTrueOrbit);
    }
    let pts = orbit.true_points(f);
    let refined = refine(f, &pts);
    let lo = pts.iter().map(SPoint::re).min().expect("nonempty orbit");
    let hi = pts.iter().map(SPoint::re).max().expect("nonempty orbit");
    let branches: Vec<i64> = (floor_i64(&lo)..=floor_i64(&hi)).filter(|m| qi(*m) >= lo).collect();

    let g = markov_graph(&refined);
    // Charts are basic interval translates `(i, k)` inside the tree, in the
    // chart coordinates of `i`.
    let mut charts: Vec<(usize, i64)> = Vec::new();
    for (i, iv) in g.intervals.iter().enumerate() {
        match iv.chart {
            Chart::Real => {
                for k in floor_i64(&lo) - 1..=floor_i64(&hi) + 1 {
                    if &iv.lo + qi(k) >= lo && &iv.hi + qi(k) <= hi {
                        charts.push((i, k));
                    }
                }
            }
            Chart::Branch => charts.extend(branches.iter().map(|&m| (i, m))),
        }
    }
    charts.sort();
    let index: BTreeMap<(usize, i64), usize> = charts.iter().enumerate().map(|(c, &key)| (key, c)).collect();
    let pieces = charts
        .iter()
        .map(|&(i, k)| {
            g.pieces[i]
                .iter()
                .map(|&e| {
                    let ed = &g.edges[e];
                    Piece {
                        target: index.get(&(ed.to, k + ed.disp)).copied(),
                        disp: 0,
                        forward: ed.signs.pos,
                        map: ed.map.clone(),
                    }
                })
                .collect()
        })
        .collect();
    let sys = System {
        charts: charts.iter().map(|&(i, _)| (g.intervals[i].lo.clone(), g.intervals[i].hi.clone())).collect(),
        pieces,
    };

    let mut tree = OrbitTree { lo, hi, branches, refined, tper: TruncatedPeriodSet::new(n_max, []), witnesses: BTreeMap::new() };
    let h = |x: &SPoint| tree.eval(x);
    let mut witnesses: BTreeMap<usize, Vec<SPoint>> = BTreeMap::new();
    let orbit_of = |x: &SPoint, n: usize| {
        let mut v = vec![x.clone()];
        for _ in 1..n {
            let next = h(v.last().expect("nonempty"));
            v.push(next);
        }
        v
    };

    // Orbits through vertices of the tree.
    let mut nodes: BTreeSet<SPoint> = pts.iter().cloned().collect();
    for &(i, k) in &charts {
        nodes.insert(g.intervals[i].lo_point().translate(k));
        nodes.insert(g.intervals[i].hi_point().translate(k));
    }
    for x in &nodes {
        if let Some(n) = true_period(&h, x, n_max) {
            witnesses.entry(n).or_insert_with(|| orbit_of(x, n));
        }
    }

    let all = |_: usize| true;
    let counts = sys.free_primitive_counts(n_max, false, &all);
    for n in 1..=n_max {
        if witnesses.contains_key(&n) || counts[n].is_empty() {
            continue;
        }
        let mut steps = budget;
        let Some((w, fx)) = sys.find_free_walk(n, None, &all, &mut steps) else {
            if steps == 0 {
                return Err(TreeError::Incomplete(n));
            }
            unreachable!("positive primitive count at length {n} without a walk");
        };
        let (i, k) = charts[w[0].0];
        let iv = &g.intervals[i];
        let t = match fx {
            Fixed::Point(t) => t,
            Fixed::Family => family_point(&iv.lo, &iv.hi),
        };
        let x = iv.point(&t).translate(k);
        assert_eq!(true_period(&h, &x, n), Some(n), "tree walk fixed point has the wrong period");
        witnesses.insert(n, orbit_of(&x, n));
    }
    tree.tper = TruncatedPeriodSet::new(n_max, witnesses.keys().copied());
    tree.witnesses = witnesses;
    Ok(tree)
}

/// Adds the points of an orbit as nodes; the map itself is unchanged.
fn refine(f: &Lifting, pts: &[SPoint]) -> Lifting {
    let mut nodes: Vec<Node> = f.nodes().to_vec();
    for (i, p) in pts.iter().enumerate() {
        let p0 = p.reduce().0;
        if nodes.iter().any(|n| n.point == p0) {
            continue;
        }
        let image = f.eval(&p0);
        nodes.push(Node { name: format!("orbit{i}"), point: p0, image });
    }
    let refined = Lifting::new(f.degree(), nodes).expect("orbit points are periodic, so the refinement is Markov");
    debug_assert!(refined.nodes().iter().all(|n| f.eval(&n.point) == n.image));
    refined
}
