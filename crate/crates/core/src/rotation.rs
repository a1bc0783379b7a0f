//! Rotation numbers of loops and the rotation interval of a degree one
//! lifting, read off the Markov graph as the extremal mean displacement of
//! its cycles.

use std::fmt;

use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::markov::{Chart, GraphError, MarkovGraph};
use crate::space::{fmt_q, q, qi};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationInterval {
    pub lo: Q,
    pub hi: Q,
    /// Simple cycle (edge indices) realising `lo`.
    pub lo_cycle: Vec<usize>,
    /// Simple cycle (edge indices) realising `hi`.
    pub hi_cycle: Vec<usize>,
}

impl RotationInterval {
    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn interior_contains(&self, x: &Q) -> bool {
        &self.lo < x && x < &self.hi
    }
}

impl fmt::Display for RotationInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot = [{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RotationError {
    #[error("the graph has no cycle")]
    NoCycle,
    #[error("rotation numbers need degree 1, got {0}")]
    NotDegreeOne(i64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Mean displacement of a loop.
pub fn loop_rotation(g: &MarkovGraph, lp: &[usize]) -> Result<Q, GraphError> {
    let m = g.loop_displacement(lp)?;
    Ok(q(m, lp.len() as i64))
}

/// Vertex sequence of a cycle given by edges.
pub fn cycle_vertices(g: &MarkovGraph, lp: &[usize]) -> Vec<usize> {
    lp.iter().map(|&e| g.edges[e].from).collect()
}

/// Whether every cycle of the graph can be reached from a real basic
/// interval. A real point can then follow any cycle, so the interval is the
/// set of rotation numbers of real points, not just of the symbolic system.
/// This holds when `F(ℝ) = S` and when the branches are collapsed.
pub fn cycles_reachable_from_reals(g: &MarkovGraph) -> bool {
    let n = g.n_vertices();
    let mut pg = DiGraph::<(), ()>::new();
    let idx: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
    for e in &g.edges {
        pg.add_edge(idx[e.from], idx[e.to], ());
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| g.intervals[v].chart == Chart::Real).collect();
    while let Some(v) = stack.pop() {
        if !std::mem::replace(&mut seen[v], true) {
            stack.extend(g.edges.iter().filter(|e| e.from == v).map(|e| e.to));
        }
    }
    tarjan_scc(&pg).iter().all(|scc| {
        let on_cycle = scc.len() > 1 || g.edges.iter().any(|e| e.from == scc[0].index() && e.to == e.from);
        !on_cycle || scc.iter().all(|v| seen[v.index()])
    })
}

pub fn rotation_interval(g: &MarkovGraph) -> Result<RotationInterval, RotationError> {
    if g.degree != 1 {
        return Err(RotationError::NotDegreeOne(g.degree));
    }
    let (lo, lo_cycle) = extremal_mean(g, 1).ok_or(RotationError::NoCycle)?;
    let (neg_hi, hi_cycle) = extremal_mean(g, -1).ok_or(RotationError::NoCycle)?;
    Ok(RotationInterval { lo, hi: -neg_hi, lo_cycle, hi_cycle })
}

/// Minimum cycle mean of `sign * disp`, with the lexicographically smallest
/// optimal simple cycle.
fn extremal_mean(g: &MarkovGraph, sign: i64) -> Option<(Q, Vec<usize>)> {
    let n = g.n_vertices();
    let mut pg = DiGraph::<(), ()>::new();
    let idx: Vec<_> = (0..n).map(|_| pg.add_node(())).collect();
    for e in &g.edges {
        pg.add_edge(idx[e.from], idx[e.to], ());
    }
    let mut comp = vec![usize::MAX; n];
    let sccs = tarjan_scc(&pg);
    for (c, scc) in sccs.iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    let mut best: Option<Q> = None;
    let mut per_comp: Vec<Option<Q>> = vec![None; sccs.len()];
    for (c, scc) in sccs.iter().enumerate() {
        let verts: Vec<usize> = scc.iter().map(|v| v.index()).collect();
        let inner: Vec<(usize, usize, i64)> = g
            .edges
            .iter()
            .filter(|e| comp[e.from] == c && comp[e.to] == c)
            .map(|e| (e.from, e.to, sign * e.disp))
            .collect();
        if inner.is_empty() {
            continue;
        }
        let mean = karp(&verts, &inner);
        if best.as_ref().map_or(true, |b| mean < *b) {
            best = Some(mean.clone());
        }
        per_comp[c] = Some(mean);
    }
    let lambda = best?;
    let mut witness: Option<Vec<usize>> = None;
    for (c, m) in per_comp.iter().enumerate() {
        if m.as_ref() != Some(&lambda) {
            continue;
        }
        let cyc = tight_cycle(g, &comp, c, sign, &lambda);
        let key = |lp: &Vec<usize>| cycle_vertices(g, lp);
        if witness.as_ref().map_or(true, |w| key(&cyc) < key(w)) {
            witness = Some(cyc);
        }
    }
    Some((lambda, witness.expect("optimal component has a cycle")))
}

/// Karp's dynamic program on one strongly connected component.
fn karp(verts: &[usize], edges: &[(usize, usize, i64)]) -> Q {
    let n = verts.len();
    let pos = |v: usize| verts.iter().position(|&u| u == v).expect("vertex in component");
    let mut d: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n + 1];
    d[0][0] = Some(0);
    for k in 1..=n {
        for &(a, b, w) in edges {
            if let Some(x) = d[k - 1][pos(a)] {
                let cand = x + w;
                let slot = &mut d[k][pos(b)];
                if slot.map_or(true, |y| cand < y) {
                    *slot = Some(cand);
                }
            }
        }
    }
    let mut best: Option<Q> = None;
    for v in 0..n {
        let Some(dn) = d[n][v] else { continue };
        let mut worst: Option<Q> = None;
        for k in 0..n {
            if let Some(dk) = d[k][v] {
                let r = q(dn - dk, (n - k) as i64);
                if worst.as_ref().map_or(true, |w| r > *w) {
                    worst = Some(r);
                }
            }
        }
        if let Some(w) = worst {
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
    }
    best.expect("strongly connected component with an edge has a cycle")
}

/// Lexicographically smallest simple cycle of mean `lambda` inside component
/// `c`, found among edges that are tight for a feasible potential.
fn tight_cycle(g: &MarkovGraph, comp: &[usize], c: usize, sign: i64, lambda: &Q) -> Vec<usize> {
    let n = g.n_vertices();
    let inner: Vec<usize> =
        (0..g.edges.len()).filter(|&e| comp[g.edges[e].from] == c && comp[g.edges[e].to] == c).collect();
    let w = |e: usize| qi(sign * g.edges[e].disp) - lambda;
    let mut pot: Vec<Q> = vec![Q::zero(); n];
    for _ in 0..n {
        let mut changed = false;
        for &e in &inner {
            let (a, b) = (g.edges[e].from, g.edges[e].to);
            let cand = &pot[a] + w(e);
            if cand < pot[b] {
                pot[b] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let tight: Vec<usize> = inner.into_iter().filter(|&e| pot[g.edges[e].from].clone() + w(e) == pot[g.edges[e].to]).collect();
    let mut verts: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
    verts.sort_unstable();
    for &s in &verts {
        let allowed = |v: usize| v >= s;
        let reach_back = |from: usize, blocked: &[bool]| -> bool {
            let mut seen = vec![false; n];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(v) = stack.pop() {
                for &e in &tight {
                    let ed = &g.edges[e];
                    if ed.from != v || !allowed(ed.to) {
                        continue;
                    }
                    if ed.to == s {
                        return true;
                    }
                    if !blocked[ed.to] && !seen[ed.to] {
                        seen[ed.to] = true;
                        stack.push(ed.to);
                    }
                }
            }
            false
        };
        let mut blocked = vec![false; n];
        blocked[s] = true;
        if !reach_back(s, &blocked) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = s;
        loop {
            let mut outs: Vec<usize> = tight.iter().copied().filter(|&e| g.edges[e].from == v && allowed(g.edges[e].to)).collect();
            outs.sort_by_key(|&e| (g.edges[e].to != s, g.edges[e].to, e));
            let next = outs
                .into_iter()
                .find(|&e| {
                    let u = g.edges[e].to;
                    u == s || (!blocked[u] && {
                        let mut b = blocked.clone();
                        b[u] = true;
                        reach_back(u, &b)
                    })
                })
                .expect("a tight continuation exists");
            cycle.push(next);
            let u = g.edges[next].to;
            if u == s {
                return cycle;
            }
            blocked[u] = true;
            v = u;
        }
    }
    unreachable!("component of optimal mean contains a tight cycle")
}
