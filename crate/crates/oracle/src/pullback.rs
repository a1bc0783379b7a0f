//! Depth-first pullback over a map that is affine on finitely many pieces of
//! finitely many kinds of segment.

use num_traits::{One, Zero};
use sigma_core::Q;

/// `t ∈ [lo, hi]` of the source chart goes to `a·t + b` in the chart of
/// `target`.
#[derive(Clone, Debug)]
pub(crate) struct Piece<S> {
    pub lo: Q,
    pub hi: Q,
    pub target: S,
    pub a: Q,
    pub b: Q,
}

pub(crate) trait SegmentMap {
    type Seg: Clone + PartialEq;
    type Point: Clone;

    /// Segments whose charts cover a fundamental domain.
    fn starts(&self) -> Vec<Self::Seg>;
    /// Pieces on the reference copy of `seg`.
    fn pieces(&self, seg: &Self::Seg) -> &[Piece<Self::Seg>];
    /// Moves a target of the reference copy of `seg` to where it lands from
    /// `seg` itself.
    fn place(&self, seg: &Self::Seg, target: &Self::Seg) -> Self::Seg;
    /// `Some(k)` when the chart of `end` is the chart of `start` moved by `k`.
    fn return_shift(&self, start: &Self::Seg, end: &Self::Seg) -> Option<i64>;
    fn point(&self, seg: &Self::Seg, t: &Q) -> Self::Point;
    /// Translation index of a segment and the largest change of it in one
    /// step, when steps add a bounded amount (degree one).
    fn drift(&self, _seg: &Self::Seg) -> Option<(i64, i64)> {
        None
    }
    /// Least `m <= max` with `f^m(x) = x + k`, as `(m, k)`.
    fn period(&self, x: &Self::Point, max: usize) -> Option<(usize, i64)>;
}

pub(crate) struct Hit<P> {
    pub point: P,
    pub period: usize,
    pub shift: i64,
}

/// Visits the solutions of `f^n(x) = x + k` piece by piece. `keep(k)` prunes
/// by shift, and when `only` is set branches that cannot end at shift `only`
/// are cut early. `visit` returns `true` to stop the search.
pub(crate) fn search<M: SegmentMap>(
    m: &M,
    n: usize,
    keep: &dyn Fn(i64) -> bool,
    only: Option<i64>,
    visit: &mut dyn FnMut(Hit<M::Point>) -> bool,
) -> bool {
    for start in m.starts() {
        let mut ctx = Ctx { m, n, keep, only, visit, start: start.clone() };
        if ctx.go(Q::zero(), Q::one(), Q::one(), Q::zero(), &start, 0) {
            return true;
        }
    }
    false
}

struct Ctx<'a, M: SegmentMap> {
    m: &'a M,
    n: usize,
    keep: &'a dyn Fn(i64) -> bool,
    only: Option<i64>,
    visit: &'a mut dyn FnMut(Hit<M::Point>) -> bool,
    start: M::Seg,
}

impl<M: SegmentMap> Ctx<'_, M> {
    /// `[jl, jh]` in the start chart goes to `a·t + b` in the chart of `seg`.
    fn go(&mut self, jl: Q, jh: Q, a: Q, b: Q, seg: &M::Seg, depth: usize) -> bool {
        if depth == self.n {
            return self.leaf(&jl, &jh, &a, &b, seg);
        }
        if let (Some(k), Some((at, step))) = (self.only, self.m.drift(seg)) {
            if (at - k).abs() > step * (self.n - depth) as i64 {
                return false;
            }
        }
        let y1 = &a * &jl + &b;
        let y2 = &a * &jh + &b;
        let (ylo, yhi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
        let m = self.m;
        for p in m.pieces(seg) {
            if a.is_zero() {
                if p.lo <= ylo && ylo <= p.hi {
                    let nb = &p.a * &b + &p.b;
                    let to = m.place(seg, &p.target);
                    if self.go(jl.clone(), jh.clone(), Q::zero(), nb, &to, depth + 1) {
                        return true;
                    }
                }
                continue;
            }
            let lo = if p.lo > ylo { p.lo.clone() } else { ylo.clone() };
            let hi = if p.hi < yhi { p.hi.clone() } else { yhi.clone() };
            if lo >= hi {
                continue;
            }
            let t1 = (&lo - &b) / &a;
            let t2 = (&hi - &b) / &a;
            let (nl, nh) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let na = &p.a * &a;
            let nb = &p.a * &b + &p.b;
            let to = m.place(seg, &p.target);
            if self.go(nl, nh, na, nb, &to, depth + 1) {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self, jl: &Q, jh: &Q, a: &Q, b: &Q, seg: &M::Seg) -> bool {
        let Some(k) = self.m.return_shift(&self.start, seg) else { return false };
        if !(self.keep)(k) {
            return false;
        }
        if a.is_one() {
            if !b.is_zero() {
                return false;
            }
            return self.family(jl, jh);
        }
        let t = b / (Q::one() - a);
        if &t < jl || &t > jh {
            return false;
        }
        let x = self.m.point(&self.start, &t);
        let (period, shift) = self.m.period(&x, self.n).expect("a fixed point of an iterate is periodic");
        (self.visit)(Hit { point: x, period, shift })
    }

    /// `f^n` is a translation on the whole piece. All but finitely many of
    /// its points share one period; two samples agreeing on it pin it down.
    fn family(&mut self, jl: &Q, jh: &Q) -> bool {
        let mut seen: Vec<(usize, i64)> = Vec::new();
        for j in 2i64.. {
            let t = jl + (jh - jl) / Q::from_integer(j.into());
            let x = self.m.point(&self.start, &t);
            let p = self.m.period(&x, self.n).expect("a point of a translation family is periodic");
            if seen.contains(&p) {
                return (self.visit)(Hit { point: x, period: p.0, shift: p.1 });
            }
            seen.push(p);
        }
        unreachable!()
    }
}
