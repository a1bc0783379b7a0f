//! Points and arcs of the covering space `S`: the real line with a branch of
//! length one standing on every integer.
//!
//! A point is either `Real(x)` or `Branch(m, h)` with `0 < h <= 1`. The height
//! zero point of a branch is the integer itself and is always stored as
//! `Real(m)`, so structural equality is point equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SPoint {
    Real(Q),
    Branch(i64, Q),
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Floor of a rational as a machine integer.
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("integer part out of range")
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

impl SPoint {
    pub fn real(x: Q) -> Self {
        SPoint::Real(x)
    }

    /// Canonical branch point; height zero collapses to the integer.
    ///
    /// Panics unless `0 <= h <= 1`.
    pub fn branch(m: i64, h: Q) -> Self {
        Self::try_branch(m, h).expect("branch height must lie in [0, 1]")
    }

    pub fn try_branch(m: i64, h: Q) -> Option<Self> {
        if h.is_negative() || h > Q::one() {
            None
        } else if h.is_zero() {
            Some(SPoint::Real(qi(m)))
        } else {
            Some(SPoint::Branch(m, h))
        }
    }

    /// Top of the branch `B_m`.
    pub fn top(m: i64) -> Self {
        SPoint::Branch(m, Q::one())
    }

    pub fn re(&self) -> Q {
        match self {
            SPoint::Real(x) => x.clone(),
            SPoint::Branch(m, _) => qi(*m),
        }
    }

    pub fn height(&self) -> Q {
        match self {
            SPoint::Real(_) => Q::zero(),
            SPoint::Branch(_, h) => h.clone(),
        }
    }

    /// The integer whose branch contains this point, if any.
    pub fn base(&self) -> Option<i64> {
        match self {
            SPoint::Real(x) if x.is_integer() => x.to_integer().to_i64(),
            SPoint::Real(_) => None,
            SPoint::Branch(m, _) => Some(*m),
        }
    }

    /// Membership in `B`, the union of all branches including their bases.
    pub fn in_branches(&self) -> bool {
        self.base().is_some()
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, SPoint::Branch(..))
    }

    pub fn translate(&self, k: i64) -> Self {
        match self {
            SPoint::Real(x) => SPoint::Real(x + qi(k)),
            SPoint::Branch(m, h) => SPoint::Branch(m + k, h.clone()),
        }
    }

    /// Splits `p` as `p0 + k` with `p0` in the fundamental domain
    /// `[0, 1) ∪ B_0`.
    pub fn reduce(&self) -> (SPoint, i64) {
        match self {
            SPoint::Real(x) => {
                let k = floor_i64(x);
                (SPoint::Real(x - qi(k)), k)
            }
            SPoint::Branch(m, h) => (SPoint::Branch(0, h.clone()), *m),
        }
    }

    /// `p − q` when the two points differ by an integer translation.
    pub fn integer_offset(&self, other: &SPoint) -> Option<i64> {
        let (a, ka) = self.reduce();
        let (b, kb) = other.reduce();
        (a == b).then_some(ka - kb)
    }
}

impl fmt::Display for SPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SPoint::Real(x) => write!(f, "R({})", fmt_q(x)),
            SPoint::Branch(m, h) => write!(f, "B({},{})", m, fmt_q(h)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse point `{0}`")]
pub struct PointParseError(pub String);

impl FromStr for SPoint {
    type Err = PointParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PointParseError(s.to_string());
        let t = s.trim();
        let inner = |prefix: char| -> Option<&str> {
            t.strip_prefix(prefix)?.trim_start().strip_prefix('(')?.strip_suffix(')')
        };
        if let Some(body) = inner('R') {
            return parse_q(body).map(SPoint::Real).ok_or_else(err);
        }
        if let Some(body) = inner('B') {
            let (m, h) = body.split_once(',').ok_or_else(err)?;
            let m: i64 = m.trim().parse().map_err(|_| err())?;
            let h = parse_q(h).ok_or_else(err)?;
            return SPoint::try_branch(m, h).ok_or_else(err);
        }
        Err(err())
    }
}

/// Taxicab distance along the unique arc.
pub fn dist(p: &SPoint, q: &SPoint) -> Q {
    match (p.base(), q.base()) {
        (Some(a), Some(b)) if a == b => (p.height() - q.height()).abs(),
        _ => p.height() + (p.re() - q.re()).abs() + q.height(),
    }
}

/// One chart piece of an arc, traversed from the first coordinate to the
/// second. Stubs are parametrised by height, lines by the real coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Stub { base: i64, from: Q, to: Q },
    Line { from: Q, to: Q },
}

impl Segment {
    pub fn len(&self) -> Q {
        match self {
            Segment::Stub { from, to, .. } | Segment::Line { from, to } => (to - from).abs(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_zero()
    }

    pub fn start(&self) -> SPoint {
        match self {
            Segment::Stub { base, from, .. } => SPoint::branch(*base, from.clone()),
            Segment::Line { from, .. } => SPoint::Real(from.clone()),
        }
    }

    pub fn end(&self) -> SPoint {
        match self {
            Segment::Stub { base, to, .. } => SPoint::branch(*base, to.clone()),
            Segment::Line { to, .. } => SPoint::Real(to.clone()),
        }
    }

    /// Point at arclength `s` from the start; `0 <= s <= len`.
    pub fn at(&self, s: &Q) -> SPoint {
        match self {
            Segment::Stub { base, from, to } => {
                let h = if to >= from { from + s } else { from - s };
                SPoint::branch(*base, h)
            }
            Segment::Line { from, to } => {
                SPoint::Real(if to >= from { from + s } else { from - s })
            }
        }
    }

    fn contains(&self, p: &SPoint) -> bool {
        let between = |x: &Q, a: &Q, b: &Q| (a <= x && x <= b) || (b <= x && x <= a);
        match self {
            Segment::Stub { base, from, to } => {
                p.base() == Some(*base) && between(&p.height(), from, to)
            }
            Segment::Line { from, to } => match p {
                SPoint::Real(x) => between(x, from, to),
                SPoint::Branch(..) => false,
            },
        }
    }
}

/// The arc `hull{a, b}`, stored by its endpoints in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SInterval {
    pub a: SPoint,
    pub b: SPoint,
}

pub fn hull(a: &SPoint, b: &SPoint) -> SInterval {
    SInterval { a: a.clone(), b: b.clone() }
}

impl SInterval {
    /// Chart decomposition from `a` to `b`: at most a stub, a line and a stub.
    /// Empty pieces are dropped, so a degenerate arc has no segments.
    pub fn segments(&self) -> Vec<Segment> {
        let (a, b) = (&self.a, &self.b);
        let mut out = Vec::with_capacity(3);
        match (a.base(), b.base()) {
            (Some(m), Some(n)) if m == n => {
                out.push(Segment::Stub { base: m, from: a.height(), to: b.height() });
            }
            _ => {
                if let SPoint::Branch(m, h) = a {
                    out.push(Segment::Stub { base: *m, from: h.clone(), to: Q::zero() });
                }
                out.push(Segment::Line { from: a.re(), to: b.re() });
                if let SPoint::Branch(m, h) = b {
                    out.push(Segment::Stub { base: *m, from: Q::zero(), to: h.clone() });
                }
            }
        }
        out.retain(|s| !s.is_empty());
        out
    }

    pub fn len(&self) -> Q {
        dist(&self.a, &self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn contains(&self, p: &SPoint) -> bool {
        if self.is_degenerate() {
            return *p == self.a;
        }
        self.segments().iter().any(|s| s.contains(p))
    }

    /// Point at arclength `s` from `a`.
    pub fn point_at(&self, s: &Q) -> SPoint {
        let mut rest = s.clone();
        let segs = self.segments();
        for seg in &segs {
            let l = seg.len();
            if rest <= l {
                return seg.at(&rest);
            }
            rest -= l;
        }
        self.b.clone()
    }

    pub fn reversed(&self) -> SInterval {
        hull(&self.b, &self.a)
    }

    /// True when some integer lies in the arc but is not one of its
    /// endpoints; every integer is a point of valence three in `S`.
    pub fn interior_contains_branchpoint(&self) -> bool {
        let inner = |x: &Q| {
            let p = SPoint::Real(x.clone());
            p != self.a && p != self.b
        };
        for seg in self.segments() {
            match seg {
                Segment::Stub { base, from, to } => {
                    if from.is_zero() || to.is_zero() {
                        if inner(&qi(base)) {
                            return true;
                        }
                    }
                }
                Segment::Line { from, to } => {
                    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
                    let mut k = lo.ceil();
                    while k <= hi {
                        if inner(&k) {
                            return true;
                        }
                        k += Q::one();
                    }
                }
            }
        }
        false
    }

    /// Nearest point of the arc to `p`; the identity on the arc.
    pub fn retract(&self, p: &SPoint) -> SPoint {
        if self.contains(p) {
            return p.clone();
        }
        let mut best: Option<(Q, SPoint)> = None;
        let mut consider = |c: SPoint| {
            let d = dist(p, &c);
            if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                best = Some((d, c));
            }
        };
        consider(self.a.clone());
        consider(self.b.clone());
        for seg in self.segments() {
            match seg {
                Segment::Line { from, to } => {
                    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
                    let x = p.re().clamp(lo, hi);
                    consider(SPoint::Real(x));
                }
                Segment::Stub { base, from, to } => {
                    let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
                    if p.base() == Some(base) {
                        consider(SPoint::branch(base, p.height().clamp(lo, hi)));
                    } else {
                        consider(SPoint::branch(base, lo));
                    }
                }
            }
        }
        best.expect("arc has endpoints").1
    }
}

pub fn retract_to(i: &SInterval, p: &SPoint) -> SPoint {
    i.retract(p)
}

/// An arc with one of its two linear orders. `forward` means `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedInterval {
    pub interval: SInterval,
    pub forward: bool,
}

impl OrderedInterval {
    pub fn new(interval: SInterval, forward: bool) -> Self {
        OrderedInterval { interval, forward }
    }

    pub fn reverse(&self) -> Self {
        OrderedInterval { interval: self.interval.clone(), forward: !self.forward }
    }

    pub fn min(&self) -> &SPoint {
        if self.forward {
            &self.interval.a
        } else {
            &self.interval.b
        }
    }

    pub fn max(&self) -> &SPoint {
        if self.forward {
            &self.interval.b
        } else {
            &self.interval.a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SPoint {
        s.parse().unwrap()
    }

    #[test]
    fn real_part() {
        assert_eq!(p("B(2,1/3)").re(), qi(2));
        assert_eq!(p("R(7/2)").re(), q(7, 2));
        assert_eq!(p("B(-1,1)").re(), qi(-1));
    }

    #[test]
    fn zero_height_is_canonical() {
        assert_eq!(SPoint::branch(3, Q::zero()), SPoint::Real(qi(3)));
        assert_eq!(p("B(3,0)"), p("R(3)"));
        assert!(SPoint::try_branch(0, q(3, 2)).is_none());
    }

    #[test]
    fn distances() {
        assert_eq!(dist(&p("R(0)"), &p("R(3/2)")), q(3, 2));
        assert_eq!(dist(&p("B(0,1/2)"), &p("B(0,1/4)")), q(1, 4));
        assert_eq!(dist(&p("B(0,1/2)"), &p("B(1,1/3)")), q(11, 6));
        assert_eq!(dist(&p("R(0)"), &p("B(0,1/3)")), q(1, 3));
    }

    #[test]
    fn hull_segments() {
        let h = hull(&p("R(1/4)"), &p("R(3/4)"));
        assert_eq!(h.segments(), vec![Segment::Line { from: q(1, 4), to: q(3, 4) }]);
        let h = hull(&p("B(0,1/2)"), &p("R(1/2)"));
        assert_eq!(
            h.segments(),
            vec![
                Segment::Stub { base: 0, from: q(1, 2), to: qi(0) },
                Segment::Line { from: qi(0), to: q(1, 2) },
            ]
        );
        let h = hull(&p("B(0,1)"), &p("B(1,1)"));
        assert_eq!(h.segments().len(), 3);
        assert_eq!(h.len(), qi(3));
    }

    #[test]
    fn branchpoint_interior() {
        assert!(hull(&p("B(0,1/2)"), &p("R(1/2)")).interior_contains_branchpoint());
        assert!(!hull(&p("R(0)"), &p("R(1)")).interior_contains_branchpoint());
        assert!(hull(&p("R(-1/4)"), &p("R(1/4)")).interior_contains_branchpoint());
        assert!(!hull(&p("R(0)"), &p("B(0,1)")).interior_contains_branchpoint());
    }

    #[test]
    fn retraction() {
        let i = hull(&p("R(0)"), &p("R(1)"));
        assert_eq!(i.retract(&p("B(0,1/2)")), p("R(0)"));
        assert_eq!(i.retract(&p("R(3/2)")), p("R(1)"));
        assert_eq!(i.retract(&p("R(1/3)")), p("R(1/3)"));
        let j = hull(&p("B(2,1/2)"), &p("R(3)"));
        assert_eq!(j.retract(&p("B(2,1)")), p("B(2,1/2)"));
        assert_eq!(j.retract(&p("B(3,1)")), p("R(3)"));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["R(0)", "R(-7/3)", "B(0,1)", "B(-2,1/5)"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("R( 2/4 )").to_string(), "R(1/2)");
    }

    #[test]
    fn point_at_walks_corners() {
        let h = hull(&p("B(0,1)"), &p("R(5/3)"));
        assert_eq!(h.point_at(&q(1, 2)), p("B(0,1/2)"));
        assert_eq!(h.point_at(&qi(1)), p("R(0)"));
        assert_eq!(h.point_at(&q(2, 1)), p("R(1)"));
    }
}
