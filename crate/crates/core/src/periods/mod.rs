//! Periods mod 1 of a Markov lifting, per rotation number, and the orbit
//! level structure built on top: classification flags, star types, blocks
//! and the orbit tree.
//!
//! Period sets are computed by counting closed walks in the Markov graph
//! (primitive walks by Möbius inversion, minus walks pinned at a node) and
//! merging the periods of node orbits. Every reported period is backed by a
//! concrete orbit whose period is re-checked by exact iteration.

mod engine;
mod structure;
mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::One;

use crate::markov::{markov_graph, Chart, GraphError, MarkovGraph};
use crate::sigmamap::{iterate, Lifting, SigmaMap};
use crate::space::{fmt_q, q, SPoint};
use crate::Q;

pub(crate) use engine::{Fixed, System};
pub use structure::{
    blocks, has_increasing_block_structure, orbit_type_3star, reindex_shift, star_type, BlockError, StarError,
};
pub use tree::{orbit_tree_restriction, OrbitTree, TreeError};

/// Default cap on search nodes spent finding one witness orbit.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// `Per ∩ [1..n_max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPeriodSet {
    pub n_max: usize,
    pub members: BTreeSet<usize>,
}

impl TruncatedPeriodSet {
    pub fn new(n_max: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let members = members.into_iter().filter(|&n| n >= 1 && n <= n_max).collect();
        TruncatedPeriodSet { n_max, members }
    }

    pub fn full(n_max: usize) -> Self {
        Self::new(n_max, 1..=n_max)
    }

    pub fn contains(&self, n: usize) -> bool {
        self.members.contains(&n)
    }

    pub fn missing(&self) -> Vec<usize> {
        (1..=self.n_max).filter(|n| !self.members.contains(n)).collect()
    }

    pub fn restrict(&self, n_max: usize) -> Self {
        Self::new(n_max, self.members.iter().copied())
    }
}

impl fmt::Display for TruncatedPeriodSet {
    /// Runs of four or more consecutive members print as `a,a+1,...,b`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<usize> = self.members.iter().copied().collect();
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < v.len() {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
                j += 1;
            }
            if j - i >= 3 {
                parts.push(format!("{},{},...,{}", v[i], v[i] + 1, v[j]));
            } else {
                parts.extend(v[i..=j].iter().map(|n| n.to_string()));
            }
            i = j + 1;
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A periodic (mod 1) orbit with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedOrbit {
    pub representative: SPoint,
    pub period: usize,
    /// `F^period(representative) = representative + shift`.
    pub shift: i64,
    pub rotation: Q,
    /// The orbit reduced into the fundamental domain, in orbit order.
    pub points: Vec<SPoint>,
    pub lives_in_branches: bool,
    pub large: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitFlags {
    pub lives_in_branches: bool,
    pub large: bool,
}

impl LiftedOrbit {
    /// The orbit of `x` if it is periodic mod 1 with period at most
    /// `max_period`.
    pub fn of_point<F: SigmaMap + ?Sized>(f: &F, x: &SPoint, max_period: usize) -> Option<LiftedOrbit> {
        let mut true_orbit = vec![x.clone()];
        let mut y = x.clone();
        for n in 1..=max_period {
            y = f.eval(&y);
            if let Some(m) = y.integer_offset(x) {
                return Some(Self::assemble(f.degree(), true_orbit, n, m));
            }
            true_orbit.push(y.clone());
        }
        None
    }

    fn assemble(degree: i64, true_orbit: Vec<SPoint>, period: usize, shift: i64) -> LiftedOrbit {
        let lives_in_branches = true_orbit.iter().all(SPoint::in_branches);
        let large = degree == 1 && shift == 0 && {
            let lo = true_orbit.iter().map(SPoint::re).min().expect("nonempty orbit");
            let hi = true_orbit.iter().map(SPoint::re).max().expect("nonempty orbit");
            hi - lo >= Q::one()
        };
        LiftedOrbit {
            representative: true_orbit[0].clone(),
            period,
            shift,
            rotation: q(shift, period as i64),
            points: true_orbit.iter().map(|p| p.reduce().0).collect(),
            lives_in_branches,
            large,
        }
    }

    /// The first `period` points of the actual orbit in `S`.
    pub fn true_points<F: SigmaMap + ?Sized>(&self, f: &F) -> Vec<SPoint> {
        let mut out = vec![self.representative.clone()];
        for _ in 1..self.period {
            let next = f.eval(out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }

    /// Canonical key of the orbit mod 1: its smallest reduced point.
    pub fn key(&self) -> SPoint {
        self.points.iter().min().expect("nonempty orbit").clone()
    }
}

impl fmt::Display for LiftedOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "period {} rot {} [{}]", self.period, fmt_q(&self.rotation), pts.join(" "))?;
        if self.lives_in_branches {
            write!(f, " branches")?;
        }
        if self.large {
            write!(f, " large")?;
        }
        Ok(())
    }
}

pub fn classify_orbit(orbit: &LiftedOrbit) -> OrbitFlags {
    OrbitFlags { lives_in_branches: orbit.lives_in_branches, large: orbit.large }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopSolution {
    Point { point: SPoint, shift: i64 },
    /// Every point of the start interval returns with the same shift.
    IntervalFamily { from: SPoint, to: SPoint, shift: i64 },
}

/// Fixed points of the composite of the piece maps along a loop of edges.
pub fn solve_loop_fixed_points(f: &Lifting, g: &MarkovGraph, lp: &[usize]) -> Result<LoopSolution, GraphError> {
    let c = g.loop_map(lp)?;
    let start = &g.intervals[g.edges[lp[0]].from];
    let shift_of = |x: &SPoint| {
        iterate(f, x, lp.len()).integer_offset(x).expect("loop point returns mod 1")
    };
    if c.is_identity() {
        let (from, to) = (start.lo_point(), start.hi_point());
        let shift = shift_of(&start.point(&start.midpoint()));
        return Ok(LoopSolution::IntervalFamily { from, to, shift });
    }
    let t = &c.b / (Q::one() - &c.a);
    let point = start.point(&t);
    let shift = shift_of(&point);
    Ok(LoopSolution::Point { point, shift })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodError {
    #[error("search budget exhausted while looking for a period-{period} orbit")]
    Incomplete { period: usize, partial: TruncatedPeriodSet },
    #[error("rotation data needs degree 1, got {0}")]
    NotDegreeOne(i64),
    #[error("rotation {p}/{q} is not in lowest terms with q >= 1")]
    BadRotation { p: i64, q: i64 },
}

/// Periods together with one witness orbit per period.
#[derive(Clone, Debug)]
pub struct PeriodReport {
    pub set: TruncatedPeriodSet,
    pub witnesses: BTreeMap<usize, LiftedOrbit>,
}

/// Orbits of nodes that are periodic mod 1, one per orbit.
pub fn node_orbit_periods(f: &Lifting) -> Vec<LiftedOrbit> {
    let pts = f.partition().node_points();
    let mut seen: BTreeSet<SPoint> = BTreeSet::new();
    let mut out = Vec::new();
    for p in pts {
        if seen.contains(&p) {
            continue;
        }
        // Node images are node translates, so every orbit is eventually
        // periodic mod 1 with at most one visit per node.
        let mut x = p.clone();
        let mut path: Vec<SPoint> = Vec::new();
        loop {
            let r = x.reduce().0;
            if let Some(i) = path.iter().position(|y| *y == r) {
                let start = path[i].clone();
                if !seen.contains(&start) {
                    let orbit = LiftedOrbit::of_point(f, &start, path.len() - i).expect("cycle of reduced nodes");
                    seen.extend(orbit.points.iter().cloned());
                    out.push(orbit);
                }
                break;
            }
            if seen.contains(&r) {
                break;
            }
            path.push(r.clone());
            x = f.eval(&r);
        }
    }
    out.sort_by_key(|o| (o.period, o.key()));
    out
}

fn orbit_of_walk(f: &Lifting, sys: &System, walk: &engine::Walk, fx: &Fixed, n: usize) -> LiftedOrbit {
    let s = walk[0].0;
    let iv = &f.partition().intervals[s];
    let t = match fx {
        Fixed::Point(t) => t.clone(),
        Fixed::Family => engine::family_point(&iv.lo, &iv.hi),
    };
    debug_assert_eq!(sys.charts[s].0, iv.lo);
    let x = iv.point(&t);
    let orbit = LiftedOrbit::of_point(f, &x, n).expect("walk fixed point is periodic mod 1");
    assert_eq!(orbit.period, n, "walk fixed point has a smaller period");
    orbit
}

/// `Per(F) ∩ [1..n_max]` with a witness orbit per period.
pub fn periods_report(f: &Lifting, n_max: usize, budget: u64) -> Result<PeriodReport, PeriodError> {
    let g = markov_graph(f);
    let sys = System::from_graph(&g);
    let all = |_: usize| true;
    let counts = sys.free_primitive_counts(n_max, false, &all);
    let mut witnesses: BTreeMap<usize, LiftedOrbit> = BTreeMap::new();
    for o in node_orbit_periods(f) {
        if o.period <= n_max {
            witnesses.entry(o.period).or_insert(o);
        }
    }
    for n in 1..=n_max {
        if witnesses.contains_key(&n) || counts[n].is_empty() {
            continue;
        }
        let mut steps = budget;
        match sys.find_free_walk(n, None, &all, &mut steps) {
            Some((w, fx)) => {
                witnesses.insert(n, orbit_of_walk(f, &sys, &w, &fx, n));
            }
            None if steps == 0 => {
                let partial = TruncatedPeriodSet::new(n_max, witnesses.keys().copied());
                return Err(PeriodError::Incomplete { period: n, partial });
            }
            None => unreachable!("positive primitive count at length {n} without a walk"),
        }
    }
    Ok(PeriodReport { set: TruncatedPeriodSet::new(n_max, witnesses.keys().copied()), witnesses })
}

pub fn periods_mod1(f: &Lifting, n_max: usize) -> Result<TruncatedPeriodSet, PeriodError> {
    periods_report(f, n_max, DEFAULT_BUDGET).map(|r| r.set)
}

/// Periods of orbits with rotation number `p/q`, with witnesses.
pub fn periods_for_rotation_report(
    f: &Lifting,
    p: i64,
    q_den: i64,
    n_max: usize,
    budget: u64,
) -> Result<PeriodReport, PeriodError> {
    if f.degree() != 1 {
        return Err(PeriodError::NotDegreeOne(f.degree()));
    }
    if q_den < 1 || p.gcd(&q_den) != 1 {
        return Err(PeriodError::BadRotation { p, q: q_den });
    }
    let rot = q(p, q_den);
    let g = markov_graph(f);
    let sys = System::from_graph(&g);
    let all = |_: usize| true;
    let counts = sys.free_primitive_counts(n_max, true, &all);
    let mut witnesses: BTreeMap<usize, LiftedOrbit> = BTreeMap::new();
    for o in node_orbit_periods(f) {
        if o.period <= n_max && o.rotation == rot {
            witnesses.entry(o.period).or_insert(o);
        }
    }
    let q_den = q_den as usize;
    for n in (q_den..=n_max).step_by(q_den) {
        let m = p * (n / q_den) as i64;
        if witnesses.contains_key(&n) || !counts[n].contains_key(&m) {
            continue;
        }
        let mut steps = budget;
        match sys.find_free_walk(n, Some(m), &all, &mut steps) {
            Some((w, fx)) => {
                let o = orbit_of_walk(f, &sys, &w, &fx, n);
                assert_eq!(o.rotation, rot, "walk displacement disagrees with the orbit shift");
                witnesses.insert(n, o);
            }
            None if steps == 0 => {
                let partial = TruncatedPeriodSet::new(n_max, witnesses.keys().copied());
                return Err(PeriodError::Incomplete { period: n, partial });
            }
            None => unreachable!("positive primitive count at ({n}, {m}) without a walk"),
        }
    }
    Ok(PeriodReport { set: TruncatedPeriodSet::new(n_max, witnesses.keys().copied()), witnesses })
}

pub fn periods_for_rotation(f: &Lifting, p: i64, q_den: i64, n_max: usize) -> Result<TruncatedPeriodSet, PeriodError> {
    periods_for_rotation_report(f, p, q_den, n_max, DEFAULT_BUDGET).map(|r| r.set)
}

/// Every periodic orbit mod 1 of period at most `max_len`, one entry per
/// orbit. With `branches_only`, just the orbits living in the branches.
pub fn enumerate_orbits(f: &Lifting, max_len: usize, branches_only: bool, budget: u64) -> Result<Vec<LiftedOrbit>, PeriodError> {
    let g = markov_graph(f);
    let sys = System::from_graph(&g);
    let allowed = |v: usize| !branches_only || g.intervals[v].chart == Chart::Branch;
    let mut steps = budget;
    let walks = sys.all_free_walks(max_len, &allowed, &mut steps).ok_or_else(|| PeriodError::Incomplete {
        period: max_len,
        partial: TruncatedPeriodSet::new(max_len, []),
    })?;
    let mut out: Vec<LiftedOrbit> = node_orbit_periods(f)
        .into_iter()
        .filter(|o| o.period <= max_len && (!branches_only || o.lives_in_branches))
        .collect();
    for (w, fx) in walks {
        out.push(orbit_of_walk(f, &sys, &w, &fx, w.len()));
    }
    out.sort_by(|a, b| (a.period, a.key()).cmp(&(b.period, b.key())));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    AllN,
    MissingOnlyOne,
    MissingOnlyTwo,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::AllN => "AllN",
            Shape::MissingOnlyOne => "MissingOnlyOne",
            Shape::MissingOnlyTwo => "MissingOnlyTwo",
            Shape::Other => "Other",
        };
        f.write_str(s)
    }
}

pub fn theorem_shape(periods: &TruncatedPeriodSet) -> Shape {
    match periods.missing().as_slice() {
        [] => Shape::AllN,
        [1] => Shape::MissingOnlyOne,
        [2] => Shape::MissingOnlyTwo,
        _ => Shape::Other,
    }
}

/// Count of free primitive walks, exposed for diagnostics.
pub fn primitive_walk_counts(f: &Lifting, n_max: usize) -> Vec<i128> {
    let g = markov_graph(f);
    let sys = System::from_graph(&g);
    let counts = sys.free_primitive_counts(n_max, false, &|_| true);
    counts.iter().map(|row| row.values().sum::<i128>()).collect()
}
