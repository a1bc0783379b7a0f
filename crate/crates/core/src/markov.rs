//! Basic intervals of a node set, coverings between them, and the Markov
//! graph whose edges carry an integer displacement and a covering sign.
//!
//! Vertices are the basic intervals of the fundamental domain `[0, 1] ∪ B_0`.
//! Each interval has a chart coordinate: the real coordinate on real
//! intervals, the height on branch intervals. An edge `I -> J` with
//! displacement `k` says that a subinterval of `I` is mapped affinely onto
//! `J + k`; the affine map in chart coordinates is stored with the edge.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_traits::{One, Zero};

use crate::sigmamap::Lifting;
use crate::space::{floor_i64, hull, qi, SInterval, SPoint, Segment};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chart {
    Real,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInterval {
    pub index: usize,
    pub chart: Chart,
    pub lo: Q,
    pub hi: Q,
    pub name: String,
}

impl BasicInterval {
    pub fn point(&self, t: &Q) -> SPoint {
        match self.chart {
            Chart::Real => SPoint::Real(t.clone()),
            Chart::Branch => SPoint::branch(0, t.clone()),
        }
    }

    pub fn lo_point(&self) -> SPoint {
        self.point(&self.lo)
    }

    pub fn hi_point(&self) -> SPoint {
        self.point(&self.hi)
    }

    pub fn len(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / qi(2)
    }

    pub fn interval(&self) -> SInterval {
        hull(&self.lo_point(), &self.hi_point())
    }

    pub fn contains_coord(&self, t: &Q) -> bool {
        &self.lo <= t && t <= &self.hi
    }
}

/// Partition of the fundamental domain by a node set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicPartition {
    /// Real nodes in `[0, 1)`, sorted, starting with `0`.
    pub reals: Vec<Q>,
    /// Branch node heights, sorted, from `0` to `1`.
    pub heights: Vec<Q>,
    pub intervals: Vec<BasicInterval>,
}

pub fn basic_intervals(nodes: &[SPoint]) -> BasicPartition {
    let mut reals = BTreeSet::new();
    let mut heights = BTreeSet::new();
    reals.insert(Q::zero());
    heights.insert(Q::zero());
    heights.insert(Q::one());
    for p in nodes {
        match p.reduce().0 {
            SPoint::Real(x) => {
                reals.insert(x);
            }
            SPoint::Branch(_, h) => {
                heights.insert(h);
            }
        }
    }
    let reals: Vec<Q> = reals.into_iter().collect();
    let heights: Vec<Q> = heights.into_iter().collect();
    let mut intervals = Vec::new();
    for (i, lo) in reals.iter().enumerate() {
        let hi = reals.get(i + 1).cloned().unwrap_or_else(Q::one);
        intervals.push(BasicInterval {
            index: intervals.len(),
            chart: Chart::Real,
            lo: lo.clone(),
            hi,
            name: format!("A_{}", i + 1),
        });
    }
    let nb = heights.len() - 1;
    for j in 0..nb {
        intervals.push(BasicInterval {
            index: intervals.len(),
            chart: Chart::Branch,
            lo: heights[j].clone(),
            hi: heights[j + 1].clone(),
            name: if nb == 1 { "B_0".to_string() } else { format!("B_0_{}", j + 1) },
        });
    }
    BasicPartition { reals, heights, intervals }
}

impl BasicPartition {
    pub fn n_real(&self) -> usize {
        self.reals.len()
    }

    pub fn real_hi(&self, i: usize) -> Q {
        self.reals.get(i + 1).cloned().unwrap_or_else(Q::one)
    }

    /// Interval index and chart coordinate of a point of the fundamental
    /// domain. Nodes resolve to the interval on their left or below.
    pub fn locate(&self, p0: &SPoint) -> (usize, Q) {
        match p0 {
            SPoint::Real(x) => {
                let i = match self.reals.binary_search(x) {
                    Ok(0) => 0,
                    Ok(i) => i - 1,
                    Err(i) => i - 1,
                };
                (i, x.clone())
            }
            SPoint::Branch(_, h) => {
                let j = match self.heights.binary_search(h) {
                    Ok(j) => j - 1,
                    Err(j) => j - 1,
                };
                (self.n_real() + j, h.clone())
            }
        }
    }

    /// Whether a point of `S` is a node translate.
    pub fn is_node(&self, p: &SPoint) -> bool {
        match p.reduce().0 {
            SPoint::Real(x) => self.reals.binary_search(&x).is_ok(),
            SPoint::Branch(_, h) => self.heights.binary_search(&h).is_ok(),
        }
    }

    pub fn node_points(&self) -> Vec<SPoint> {
        let mut v: Vec<SPoint> = self.reals.iter().cloned().map(SPoint::Real).collect();
        v.extend(self.heights.iter().skip(1).map(|h| SPoint::branch(0, h.clone())));
        v
    }

    /// Real node translates strictly between `lo` and `hi`.
    fn real_breaks(&self, lo: &Q, hi: &Q) -> Vec<Q> {
        let mut out = Vec::new();
        let mut n = floor_i64(lo);
        loop {
            let base = qi(n);
            if &base >= hi {
                break;
            }
            for r in &self.reals {
                let t = &base + r;
                if &t > lo && &t < hi {
                    out.push(t);
                }
            }
            n += 1;
        }
        out
    }

    fn real_cell(&self, u: &Q) -> (usize, i64) {
        let k = floor_i64(u);
        let off = u - qi(k);
        let i = match self.reals.binary_search(&off) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (i, k)
    }

    fn branch_cell(&self, h: &Q) -> usize {
        let j = match self.heights.binary_search(h) {
            Ok(j) => j,
            Err(j) => j - 1,
        };
        self.n_real() + j
    }
}

/// A piece of an image arc that runs along one basic interval translate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ArcPiece {
    pub target: usize,
    pub disp: i64,
    pub forward: bool,
    pub s0: Q,
    pub s1: Q,
}

/// Splits an arc at node translates. Pieces come in traversal order with
/// their arclength range.
pub(crate) fn decompose(part: &BasicPartition, arc: &SInterval) -> Vec<ArcPiece> {
    let mut out = Vec::new();
    let mut s = Q::zero();
    for seg in arc.segments() {
        match &seg {
            Segment::Line { from, to } => {
                let up = to > from;
                let (lo, hi) = if up { (from, to) } else { (to, from) };
                let mut cuts = vec![lo.clone()];
                cuts.extend(part.real_breaks(lo, hi));
                cuts.push(hi.clone());
                let mut pieces: Vec<ArcPiece> = cuts
                    .windows(2)
                    .map(|w| {
                        let (target, disp) = part.real_cell(&w[0]);
                        let (s0, s1) = if up {
                            (&s + (&w[0] - from), &s + (&w[1] - from))
                        } else {
                            (&s + (from - &w[1]), &s + (from - &w[0]))
                        };
                        ArcPiece { target, disp, forward: up, s0, s1 }
                    })
                    .collect();
                if !up {
                    pieces.reverse();
                }
                out.extend(pieces);
            }
            Segment::Stub { base, from, to } => {
                let up = to > from;
                let (lo, hi) = if up { (from, to) } else { (to, from) };
                let mut cuts = vec![lo.clone()];
                cuts.extend(part.heights.iter().filter(|h| *h > lo && *h < hi).cloned());
                cuts.push(hi.clone());
                let mut pieces: Vec<ArcPiece> = cuts
                    .windows(2)
                    .map(|w| {
                        let target = part.branch_cell(&w[0]);
                        let (s0, s1) = if up {
                            (&s + (&w[0] - from), &s + (&w[1] - from))
                        } else {
                            (&s + (from - &w[1]), &s + (from - &w[0]))
                        };
                        ArcPiece { target, disp: *base, forward: up, s0, s1 }
                    })
                    .collect();
                if !up {
                    pieces.reverse();
                }
                out.extend(pieces);
            }
        }
        s += seg.len();
    }
    out
}

/// Set of achievable covering signs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSet {
    pub pos: bool,
    pub neg: bool,
}

impl SignSet {
    pub const PLUS: SignSet = SignSet { pos: true, neg: false };
    pub const MINUS: SignSet = SignSet { pos: false, neg: true };

    pub fn of(positive: bool) -> Self {
        if positive {
            Self::PLUS
        } else {
            Self::MINUS
        }
    }

    pub fn flip(self) -> Self {
        SignSet { pos: self.neg, neg: self.pos }
    }

    pub fn times(self, o: SignSet) -> SignSet {
        SignSet {
            pos: (self.pos && o.pos) || (self.neg && o.neg),
            neg: (self.pos && o.neg) || (self.neg && o.pos),
        }
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.pos, self.neg) {
            (true, true) => write!(f, "±"),
            (true, false) => write!(f, "+"),
            (false, true) => write!(f, "-"),
            (false, false) => write!(f, "0"),
        }
    }
}

/// `t ↦ a·t + b` between chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: Q,
    pub b: Q,
}

impl Affine {
    pub fn identity() -> Self {
        Affine { a: Q::one(), b: Q::zero() }
    }

    pub fn apply(&self, t: &Q) -> Q {
        &self.a * t + &self.b
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Affine) -> Affine {
        Affine { a: &self.a * &inner.a, b: &self.a * &inner.b + &self.b }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub disp: i64,
    pub signs: SignSet,
    /// Subinterval of `from`, in its chart, mapped onto `to + disp`.
    pub domain: (Q, Q),
    pub map: Affine,
}

#[derive(Clone, Debug)]
pub struct MarkovGraph {
    pub degree: i64,
    pub intervals: Vec<BasicInterval>,
    /// Sorted by `(from, to, disp)`.
    pub edges: Vec<Edge>,
    /// For each vertex, its out-edges in the order the image arc runs.
    pub pieces: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge sequence does not close into a loop")]
    NotALoop,
    #[error("edge index {0} out of range")]
    NoSuchEdge(usize),
}

pub(crate) fn piece_map(src: &BasicInterval, dst: &BasicInterval, arc_len: &Q, pc: &ArcPiece) -> (Affine, (Q, Q)) {
    let w = src.len();
    let t0 = &src.lo + &pc.s0 / arc_len * &w;
    let t1 = &src.lo + &pc.s1 / arc_len * &w;
    let slope = arc_len / &w;
    let map = if pc.forward {
        Affine { b: &dst.lo - &slope * &t0, a: slope }
    } else {
        Affine { b: &dst.hi + &slope * &t0, a: -slope }
    };
    (map, (t0, t1))
}

pub fn markov_graph(f: &Lifting) -> MarkovGraph {
    let part = f.partition();
    let mut raw: Vec<Edge> = Vec::new();
    let mut raw_pieces: Vec<Vec<usize>> = vec![Vec::new(); part.intervals.len()];
    for (i, iv) in part.intervals.iter().enumerate() {
        let arc = f.image_arc(i);
        let len = arc.len();
        if len.is_zero() {
            continue;
        }
        for pc in decompose(part, &arc) {
            let dst = &part.intervals[pc.target];
            let (map, domain) = piece_map(iv, dst, &len, &pc);
            raw_pieces[i].push(raw.len());
            raw.push(Edge {
                from: i,
                to: pc.target,
                disp: pc.disp,
                signs: SignSet::of(pc.forward),
                domain,
                map,
            });
        }
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by_key(|&e| (raw[e].from, raw[e].to, raw[e].disp));
    let mut rank = vec![0; raw.len()];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    let edges = order.iter().map(|&e| raw[e].clone()).collect();
    let pieces = raw_pieces.into_iter().map(|v| v.into_iter().map(|e| rank[e]).collect()).collect();
    MarkovGraph { degree: f.degree(), intervals: part.intervals.clone(), edges, pieces }
}

impl MarkovGraph {
    pub fn n_vertices(&self) -> usize {
        self.intervals.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.intervals[v].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.name == name)
    }

    pub fn edges_between(&self, from: usize, to: usize) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.from == from && e.to == to)
    }

    pub fn find_edge(&self, from: usize, to: usize, disp: i64) -> Option<usize> {
        self.edges.iter().position(|e| e.from == from && e.to == to && e.disp == disp)
    }

    /// Checks that the edges chain head to tail and close up.
    pub fn check_loop(&self, lp: &[usize]) -> Result<(), GraphError> {
        if lp.is_empty() {
            return Err(GraphError::NotALoop);
        }
        for &e in lp {
            if e >= self.edges.len() {
                return Err(GraphError::NoSuchEdge(e));
            }
        }
        for w in 0..lp.len() {
            let next = lp[(w + 1) % lp.len()];
            if self.edges[lp[w]].to != self.edges[next].from {
                return Err(GraphError::NotALoop);
            }
        }
        Ok(())
    }

    pub fn loop_displacement(&self, lp: &[usize]) -> Result<i64, GraphError> {
        self.check_loop(lp)?;
        Ok(lp.iter().map(|&e| self.edges[e].disp).sum())
    }

    /// Composite chart map of a loop, from the first vertex back to itself.
    pub fn loop_map(&self, lp: &[usize]) -> Result<Affine, GraphError> {
        self.check_loop(lp)?;
        Ok(lp.iter().fold(Affine::identity(), |acc, &e| self.edges[e].map.after(&acc)))
    }
}

/// Displacements `k` such that `I` covers `J + k`.
pub fn covers(g: &MarkovGraph, i: usize, j: usize) -> BTreeSet<i64> {
    g.edges_between(i, j).map(|(_, e)| e.disp).collect()
}

/// Covering signs of `I -> J + k` when `I` and `J` carry the given
/// orientations (`true` is the standard increasing one).
pub fn signed_cover(g: &MarkovGraph, i: usize, i_forward: bool, j: usize, j_forward: bool, k: i64) -> SignSet {
    let mut s = SignSet::default();
    for (_, e) in g.edges_between(i, j).filter(|(_, e)| e.disp == k) {
        s.pos |= e.signs.pos;
        s.neg |= e.signs.neg;
    }
    if i_forward != j_forward {
        s.flip()
    } else {
        s
    }
}

/// Product of the edge signs along a loop.
pub fn loop_sign(g: &MarkovGraph, lp: &[usize]) -> Result<SignSet, GraphError> {
    loop_sign_oriented(g, lp, &vec![true; g.n_vertices()])
}

/// Loop sign computed with an arbitrary choice of orientation per vertex.
pub fn loop_sign_oriented(g: &MarkovGraph, lp: &[usize], forward: &[bool]) -> Result<SignSet, GraphError> {
    g.check_loop(lp)?;
    Ok(lp.iter().fold(SignSet::PLUS, |acc, &e| {
        let ed = &g.edges[e];
        let s = if forward[ed.from] != forward[ed.to] { ed.signs.flip() } else { ed.signs };
        acc.times(s)
    }))
}

pub fn to_dot(g: &MarkovGraph) -> String {
    let mut out = String::from("digraph markov {\n");
    for iv in &g.intervals {
        let _ = writeln!(out, "  {};", iv.name);
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}/{}\"];",
            g.intervals[e.from].name,
            g.intervals[e.to].name,
            e.disp,
            e.signs
        );
    }
    out.push_str("}\n");
    out
}
