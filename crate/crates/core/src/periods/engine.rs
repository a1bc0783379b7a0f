//! Loop machinery shared by liftings and orbit trees.
//!
//! A `System` is a finite set of chart intervals together with, for each
//! interval, the pieces of its image in traversal order. A piece either runs
//! along another interval (an edge, with an affine chart map and an integer
//! displacement) or is squeezed to a point (no edge).
//!
//! Periodic points whose orbit avoids the interval endpoints correspond one
//! to one with primitive closed walks; a walk pinned at an endpoint is
//! followed deterministically from that endpoint, which lets us count and
//! discard those walks exactly.
//!
//! One exception to the correspondence: a deterministic cycle whose composite
//! has slope `−1` reflects its start interval, so its square is the identity
//! and every other point of the interval has twice the cycle's period. That
//! square is not primitive, so those orbits are added by hand.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::markov::{Affine, MarkovGraph};
use crate::Q;

#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub target: Option<usize>,
    pub disp: i64,
    pub forward: bool,
    pub map: Affine,
}

#[derive(Clone, Debug)]
pub(crate) struct System {
    pub charts: Vec<(Q, Q)>,
    pub pieces: Vec<Vec<Piece>>,
}

/// A closed walk: `(vertex, piece index)` per step.
pub(crate) type Walk = Vec<(usize, usize)>;

/// Representative of a family: off the midpoint, which is the fixed point of
/// a reflecting cycle.
pub(crate) fn family_point(lo: &Q, hi: &Q) -> Q {
    lo + (hi - lo) / Q::from_integer(3.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Fixed {
    /// Unique fixed chart coordinate in the first vertex.
    Point(Q),
    /// The composite is the identity on the first vertex.
    Family,
}

impl System {
    pub fn from_graph(g: &MarkovGraph) -> System {
        let charts = g.intervals.iter().map(|iv| (iv.lo.clone(), iv.hi.clone())).collect();
        let pieces = g
            .pieces
            .iter()
            .map(|es| {
                es.iter()
                    .map(|&e| {
                        let ed = &g.edges[e];
                        Piece {
                            target: Some(ed.to),
                            disp: ed.disp,
                            forward: ed.signs.pos,
                            map: ed.map.clone(),
                        }
                    })
                    .collect()
            })
            .collect();
        System { charts, pieces }
    }

    pub fn n(&self) -> usize {
        self.charts.len()
    }

    fn edges_from(&self, v: usize) -> impl Iterator<Item = (usize, &Piece, usize)> {
        self.pieces[v].iter().enumerate().filter_map(|(k, p)| p.target.map(|t| (k, p, t)))
    }

    pub fn composite(&self, w: &Walk) -> Affine {
        w.iter().fold(Affine::identity(), |acc, &(v, k)| self.pieces[v][k].map.after(&acc))
    }

    pub fn walk_disp(&self, w: &Walk) -> i64 {
        w.iter().map(|&(v, k)| self.pieces[v][k].disp).sum()
    }

    pub fn fixed(&self, w: &Walk) -> Fixed {
        let c = self.composite(w);
        if c.is_identity() {
            Fixed::Family
        } else {
            Fixed::Point(&c.b / (Q::one() - &c.a))
        }
    }

    /// Cycles through single-piece vertices whose composite reverses the
    /// start interval, each listed once from its smallest vertex.
    pub fn reflecting_cycles(&self, allowed: &dyn Fn(usize) -> bool) -> Vec<Walk> {
        let mut out = Vec::new();
        for v0 in (0..self.n()).filter(|&v| allowed(v)) {
            let mut walk = Walk::new();
            let mut v = v0;
            while walk.len() < self.n() {
                let [p] = self.pieces[v].as_slice() else { break };
                let Some(t) = p.target.filter(|&t| allowed(t) && t >= v0) else { break };
                walk.push((v, 0));
                v = t;
                if v == v0 {
                    break;
                }
            }
            if v == v0 && !walk.is_empty() && self.composite(&walk).a == -Q::one() {
                out.push(walk);
            }
        }
        out
    }

    /// Based closed walk counts: `out[n][m]` for `1 <= n <= n_max`, graded by
    /// displacement when `graded`, otherwise all under `0`.
    pub fn closed_walk_counts(&self, n_max: usize, graded: bool, allowed: &dyn Fn(usize) -> bool) -> Vec<BTreeMap<i64, u128>> {
        let mut out: Vec<BTreeMap<i64, u128>> = vec![BTreeMap::new(); n_max + 1];
        for s in (0..self.n()).filter(|&v| allowed(v)) {
            let mut cur: Vec<BTreeMap<i64, u128>> = vec![BTreeMap::new(); self.n()];
            cur[s].insert(0, 1);
            for n in 1..=n_max {
                let mut next: Vec<BTreeMap<i64, u128>> = vec![BTreeMap::new(); self.n()];
                for v in 0..self.n() {
                    if cur[v].is_empty() {
                        continue;
                    }
                    for (_, p, t) in self.edges_from(v) {
                        if !allowed(t) {
                            continue;
                        }
                        let d = if graded { p.disp } else { 0 };
                        for (m, c) in &cur[v] {
                            let slot = next[t].entry(m + d).or_insert(0);
                            *slot = slot.checked_add(*c).expect("walk count overflow");
                        }
                    }
                }
                cur = next;
                for (m, c) in &cur[s] {
                    let slot = out[n].entry(*m).or_insert(0);
                    *slot = slot.checked_add(*c).expect("walk count overflow");
                }
            }
        }
        out
    }

    /// Walks that start at an interval endpoint, each followed until it
    /// first returns to its starting state (within `n_max` steps).
    pub fn endpoint_walks(&self, n_max: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Walk> {
        let mut out = Vec::new();
        for v0 in (0..self.n()).filter(|&v| allowed(v)) {
            for hi0 in [false, true] {
                let (mut v, mut hi) = (v0, hi0);
                let mut walk = Walk::new();
                for _ in 0..n_max {
                    let ps = &self.pieces[v];
                    if ps.is_empty() {
                        break;
                    }
                    let k = if hi { ps.len() - 1 } else { 0 };
                    let p = &ps[k];
                    let Some(t) = p.target else { break };
                    if !allowed(t) {
                        break;
                    }
                    walk.push((v, k));
                    // The endpoint of the piece lands on an endpoint of the target.
                    hi = hi == p.forward;
                    v = t;
                    if v == v0 && hi == hi0 {
                        out.push(walk.clone());
                        break;
                    }
                }
            }
        }
        out
    }

    /// Number of based primitive closed walks with a periodic point off the
    /// endpoints, per `(length, displacement)`.
    pub fn free_primitive_counts(&self, n_max: usize, graded: bool, allowed: &dyn Fn(usize) -> bool) -> Vec<BTreeMap<i64, i128>> {
        let w = self.closed_walk_counts(n_max, graded, allowed);
        let mut out: Vec<BTreeMap<i64, i128>> = vec![BTreeMap::new(); n_max + 1];
        for n in 1..=n_max {
            let mut keys: BTreeSet<i64> = BTreeSet::new();
            for r in divisors(n) {
                for m in w[n / r].keys() {
                    keys.insert(m * r as i64);
                }
            }
            for m in keys {
                let mut total: i128 = 0;
                for r in divisors(n) {
                    if m % r as i64 != 0 {
                        continue;
                    }
                    let mu = mobius(r);
                    if mu == 0 {
                        continue;
                    }
                    let c = *w[n / r].get(&(m / r as i64)).unwrap_or(&0) as i128;
                    total += mu as i128 * c;
                }
                if total != 0 {
                    out[n].insert(m, total);
                }
            }
        }
        for w in self.reflecting_cycles(allowed) {
            let n = 2 * w.len();
            if n <= n_max {
                let m = if graded { 2 * self.walk_disp(&w) } else { 0 };
                *out[n].entry(m).or_insert(0) += n as i128;
            }
        }
        for walk in self.endpoint_walks(n_max, allowed) {
            if self.fixed(&walk) == Fixed::Family {
                continue;
            }
            let m = if graded { self.walk_disp(&walk) } else { 0 };
            let slot = out[walk.len()].entry(m).or_insert(0);
            *slot -= 1;
        }
        for row in out.iter_mut() {
            row.retain(|_, c| {
                assert!(*c >= 0, "endpoint walks exceed primitive walks");
                *c > 0
            });
        }
        out
    }

    /// Finds a primitive closed walk of length `n` (with displacement `m`
    /// when given) whose periodic point is not an interval endpoint.
    /// `steps` is decremented per search node; `None` with `steps == 0`
    /// means the budget ran out.
    pub fn find_free_walk(&self, n: usize, m: Option<i64>, allowed: &dyn Fn(usize) -> bool, steps: &mut u64) -> Option<(Walk, Fixed)> {
        for w in self.reflecting_cycles(allowed) {
            if 2 * w.len() == n && m.is_none_or(|m| m == 2 * self.walk_disp(&w)) {
                return Some(([w.clone(), w].concat(), Fixed::Family));
            }
        }
        for s in (0..self.n()).filter(|&v| allowed(v)) {
            // back[r][v]: displacements of walks v -> s of length r.
            let mut back: Vec<Vec<BTreeSet<i64>>> = vec![vec![BTreeSet::new(); self.n()]; n + 1];
            back[0][s].insert(0);
            for r in 1..=n {
                for v in (0..self.n()).filter(|&v| allowed(v)) {
                    let mut acc = BTreeSet::new();
                    for (_, p, t) in self.edges_from(v) {
                        if !allowed(t) {
                            continue;
                        }
                        for d in &back[r - 1][t] {
                            acc.insert(d + if m.is_some() { p.disp } else { 0 });
                        }
                    }
                    back[r][v] = acc;
                }
            }
            let target = m.unwrap_or(0);
            if !back[n][s].contains(&target) {
                continue;
            }
            let mut walk = Walk::new();
            if let Some(hit) = self.dfs(s, s, n, target, m.is_some(), &back, allowed, &mut walk, steps) {
                return Some(hit);
            }
            if *steps == 0 {
                return None;
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        s: usize,
        v: usize,
        left: usize,
        need: i64,
        graded: bool,
        back: &[Vec<BTreeSet<i64>>],
        allowed: &dyn Fn(usize) -> bool,
        walk: &mut Walk,
        steps: &mut u64,
    ) -> Option<(Walk, Fixed)> {
        if *steps == 0 {
            return None;
        }
        *steps -= 1;
        if left == 0 {
            if !is_primitive(walk) {
                return None;
            }
            let fx = self.fixed(walk);
            if let Fixed::Point(t) = &fx {
                let (lo, hi) = &self.charts[s];
                if t == lo || t == hi {
                    return None;
                }
            }
            return Some((walk.clone(), fx));
        }
        for (k, p, t) in self.edges_from(v) {
            if !allowed(t) {
                continue;
            }
            let d = if graded { p.disp } else { 0 };
            if !back[left - 1][t].contains(&(need - d)) {
                continue;
            }
            walk.push((v, k));
            let hit = self.dfs(s, t, left - 1, need - d, graded, back, allowed, walk, steps);
            walk.pop();
            if hit.is_some() {
                return hit;
            }
            if *steps == 0 {
                return None;
            }
        }
        None
    }

    /// All primitive closed walks up to length `n_max`, one per cyclic class,
    /// with their fixed point data. Walks pinned at endpoints are skipped.
    pub fn all_free_walks(&self, n_max: usize, allowed: &dyn Fn(usize) -> bool, steps: &mut u64) -> Option<Vec<(Walk, Fixed)>> {
        let mut out = Vec::new();
        for s in (0..self.n()).filter(|&v| allowed(v)) {
            let mut walk = Walk::new();
            if !self.collect(s, s, n_max, allowed, &mut walk, &mut out, steps) {
                return None;
            }
        }
        for w in self.reflecting_cycles(allowed) {
            if 2 * w.len() <= n_max {
                out.push(([w.clone(), w].concat(), Fixed::Family));
            }
        }
        Some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn collect(
        &self,
        s: usize,
        v: usize,
        left: usize,
        allowed: &dyn Fn(usize) -> bool,
        walk: &mut Walk,
        out: &mut Vec<(Walk, Fixed)>,
        steps: &mut u64,
    ) -> bool {
        if *steps == 0 {
            return false;
        }
        *steps -= 1;
        if !walk.is_empty() && v == s && is_primitive(walk) && is_least_rotation(walk) {
            let fx = self.fixed(walk);
            let pinned = matches!(&fx, Fixed::Point(t) if *t == self.charts[s].0 || *t == self.charts[s].1);
            if !pinned {
                out.push((walk.clone(), fx));
            }
        }
        if left == 0 {
            return true;
        }
        for (k, _, t) in self.edges_from(v) {
            // Cyclic classes are represented from their smallest vertex.
            if !allowed(t) || t < s {
                continue;
            }
            walk.push((v, k));
            let ok = self.collect(s, t, left - 1, allowed, walk, out, steps);
            walk.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

pub(crate) fn is_primitive<T: PartialEq>(w: &[T]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n % d == 0).all(|d| (0..n).any(|i| w[i] != w[(i + d) % n]))
}

fn is_least_rotation<T: Ord>(w: &[T]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rot = w[r..].iter().chain(w[..r].iter());
        w.iter().cmp(rot) != std::cmp::Ordering::Greater
    })
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub(crate) fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&[1, 2, 3]));
        assert!(!is_primitive(&[1, 2, 1, 2]));
        assert!(is_primitive(&[1]));
        assert!(is_least_rotation(&[1, 2, 3]));
        assert!(!is_least_rotation(&[2, 1, 3]));
    }
}
