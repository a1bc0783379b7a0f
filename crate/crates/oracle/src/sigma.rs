//! Oracle for liftings on `S`. Segments are the unit real intervals
//! `[j, j + 1]` and the branches `B_j`; the reference copies are `j = 0`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use sigma_core::{Lifting, SPoint, Q};

use crate::pullback::{search, Hit, Piece, SegmentMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Seg {
    Re(i64),
    Br(i64),
}

impl Seg {
    fn index(self) -> i64 {
        match self {
            Seg::Re(j) | Seg::Br(j) => j,
        }
    }

    fn moved(self, k: i64) -> Seg {
        match self {
            Seg::Re(j) => Seg::Re(j + k),
            Seg::Br(j) => Seg::Br(j + k),
        }
    }
}

fn floor(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("small integer part")
}

fn int(j: i64) -> Q {
    Q::from_integer(j.into())
}

/// Segment and chart coordinate of a point (integers go to the real side).
fn locate(p: &SPoint) -> (Seg, Q) {
    match p {
        SPoint::Real(x) => {
            let j = floor(x);
            (Seg::Re(j), x - int(j))
        }
        SPoint::Branch(m, h) => (Seg::Br(*m), h.clone()),
    }
}

fn at(seg: Seg, t: &Q) -> SPoint {
    match seg {
        Seg::Re(j) => SPoint::Real(int(j) + t),
        Seg::Br(j) if t.is_zero() => SPoint::Real(int(j)),
        Seg::Br(j) => SPoint::Branch(j, t.clone()),
    }
}

/// The arc from `a` to `b` as chart runs `(segment, from, to)`.
fn legs(a: &SPoint, b: &SPoint) -> Vec<(Seg, Q, Q)> {
    if let (SPoint::Branch(m, ha), SPoint::Branch(n, hb)) = (a, b) {
        if m == n {
            return vec![(Seg::Br(*m), ha.clone(), hb.clone())];
        }
    }
    let mut out = Vec::new();
    let foot = |p: &SPoint| match p {
        SPoint::Real(x) => x.clone(),
        SPoint::Branch(m, _) => int(*m),
    };
    if let SPoint::Branch(m, h) = a {
        out.push((Seg::Br(*m), h.clone(), Q::zero()));
    }
    let (ra, rb) = (foot(a), foot(b));
    let mut x = ra.clone();
    while x < rb {
        let j = floor(&x);
        let next = if int(j + 1) < rb { int(j + 1) } else { rb.clone() };
        out.push((Seg::Re(j), &x - int(j), &next - int(j)));
        x = next;
    }
    while x > rb {
        let j = x.ceil().to_integer().to_i64().expect("small integer part") - 1;
        let next = if int(j) > rb { int(j) } else { rb.clone() };
        out.push((Seg::Re(j), &x - int(j), &next - int(j)));
        x = next;
    }
    if let SPoint::Branch(m, h) = b {
        out.push((Seg::Br(*m), Q::zero(), h.clone()));
    }
    out
}

/// Pieces of `F` on `[u, v]` given the images of the two ends.
fn pieces_between(u: &Q, v: &Q, fu: &SPoint, fv: &SPoint) -> Vec<Piece<Seg>> {
    let legs = legs(fu, fv);
    let total: Q = legs.iter().map(|(_, s0, s1)| (s1 - s0).abs()).sum();
    if total.is_zero() {
        let (seg, s) = locate(fu);
        return vec![Piece { lo: u.clone(), hi: v.clone(), target: seg, a: Q::zero(), b: s }];
    }
    let scale = &total / (v - u);
    let mut out = Vec::new();
    let mut c0 = Q::zero();
    for (seg, s0, s1) in legs {
        let len = (&s1 - &s0).abs();
        let c1 = &c0 + &len;
        let sign = if s1 >= s0 { Q::one() } else { -Q::one() };
        // s = s0 + sign·((t − u)·scale − c0)
        let a = &sign * &scale;
        let b = &s0 - &sign * (u * &scale + &c0);
        out.push(Piece { lo: u + &c0 / &scale, hi: u + &c1 / &scale, target: seg, a, b });
        c0 = c1;
    }
    out
}

pub(crate) struct SigmaOracle {
    degree: i64,
    real: Vec<Piece<Seg>>,
    branch: Vec<Piece<Seg>>,
    max_step: i64,
}

impl SigmaOracle {
    pub(crate) fn new(f: &Lifting) -> Self {
        let d = f.degree();
        let zero_image = f
            .nodes()
            .iter()
            .find(|n| n.point == SPoint::Real(Q::zero()))
            .expect("R(0) is a node")
            .image
            .clone();
        let mut reals: Vec<(Q, SPoint)> = Vec::new();
        let mut heights: Vec<(Q, SPoint)> = vec![(Q::zero(), zero_image.clone())];
        for n in f.nodes() {
            match &n.point {
                SPoint::Real(x) => reals.push((x.clone(), n.image.clone())),
                SPoint::Branch(_, h) => heights.push((h.clone(), n.image.clone())),
            }
        }
        reals.push((Q::one(), zero_image.translate(d)));
        reals.sort_by(|x, y| x.0.cmp(&y.0));
        heights.sort_by(|x, y| x.0.cmp(&y.0));
        let chain = |v: &[(Q, SPoint)]| {
            v.windows(2).flat_map(|w| pieces_between(&w[0].0, &w[1].0, &w[0].1, &w[1].1)).collect()
        };
        let (real, branch): (Vec<Piece<Seg>>, Vec<Piece<Seg>>) = (chain(&reals), chain(&heights));
        let max_step = real.iter().chain(&branch).map(|p| p.target.index().abs()).max().unwrap_or(0);
        SigmaOracle { degree: d, real, branch, max_step }
    }

    /// `F(x)` straight from the node data.
    pub(crate) fn eval(&self, x: &SPoint) -> SPoint {
        let (seg, t) = locate(x);
        let pieces = self.pieces(&seg);
        let p = pieces.iter().find(|p| p.lo <= t && t <= p.hi).expect("pieces cover the chart");
        at(self.place(&seg, &p.target), &(&p.a * &t + &p.b))
    }
}

impl SegmentMap for SigmaOracle {
    type Seg = Seg;
    type Point = SPoint;

    fn starts(&self) -> Vec<Seg> {
        vec![Seg::Re(0), Seg::Br(0)]
    }

    fn pieces(&self, seg: &Seg) -> &[Piece<Seg>] {
        match seg {
            Seg::Re(_) => &self.real,
            Seg::Br(_) => &self.branch,
        }
    }

    fn place(&self, seg: &Seg, target: &Seg) -> Seg {
        target.moved(self.degree * seg.index())
    }

    fn drift(&self, seg: &Seg) -> Option<(i64, i64)> {
        (self.degree == 1).then_some((seg.index(), self.max_step))
    }

    fn return_shift(&self, start: &Seg, end: &Seg) -> Option<i64> {
        match (start, end) {
            (Seg::Re(0), Seg::Re(k)) | (Seg::Br(0), Seg::Br(k)) => Some(*k),
            _ => None,
        }
    }

    fn point(&self, seg: &Seg, t: &Q) -> SPoint {
        at(*seg, t)
    }

    fn period(&self, x: &SPoint, max: usize) -> Option<(usize, i64)> {
        let mut y = x.clone();
        for m in 1..=max {
            y = self.eval(&y);
            let k = match (x, &y) {
                (SPoint::Real(a), SPoint::Real(b)) if (b - a).is_integer() => Some(b - a),
                (SPoint::Branch(i, h), SPoint::Branch(j, g)) if h == g => Some(int(j - i)),
                _ => None,
            };
            if let Some(k) = k {
                return Some((m, k.to_integer().to_i64().expect("small shift")));
            }
        }
        None
    }
}

/// A solution of `F^n(x) = x + k`, with the exact period mod 1 of `x` and
/// the shift after that many steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    pub point: SPoint,
    pub period: usize,
    pub shift: i64,
}

fn node_hits(o: &SigmaOracle, f: &Lifting, n_max: usize) -> Vec<OracleSolution> {
    f.nodes()
        .iter()
        .filter_map(|n| o.period(&n.point, n_max).map(|(period, shift)| OracleSolution { point: n.point.clone(), period, shift }))
        .collect()
}

/// Periods mod 1 of `f` in `1..=n_max`.
pub fn periods_mod1(f: &Lifting, n_max: usize) -> BTreeSet<usize> {
    periods_where(f, n_max, 1, &|_, _| true, &|_| None)
}

/// Periods mod 1 in `1..=n_max` of points with rotation number `p/q`.
pub fn periods_with_rotation(f: &Lifting, p: i64, q: i64, n_max: usize) -> BTreeSet<usize> {
    assert!(q > 0, "positive denominator");
    let step = q / num_integer_gcd(p.abs(), q);
    periods_where(f, n_max, step as usize, &|n, k| k * q == p * n as i64, &|n| Some(p * n as i64 / q))
}

fn num_integer_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn periods_where(
    f: &Lifting,
    n_max: usize,
    step: usize,
    rot: &dyn Fn(usize, i64) -> bool,
    only: &dyn Fn(usize) -> Option<i64>,
) -> BTreeSet<usize> {
    let o = SigmaOracle::new(f);
    let mut found: BTreeSet<usize> = node_hits(&o, f, n_max)
        .into_iter()
        .filter(|s| rot(s.period, s.shift))
        .map(|s| s.period)
        .collect();
    for n in (step..=n_max).step_by(step) {
        if found.contains(&n) {
            continue;
        }
        let keep = |k: i64| rot(n, k);
        let mut visit = |h: Hit<SPoint>| {
            if rot(h.period, h.shift) {
                found.insert(h.period);
            }
            h.period == n && rot(n, h.shift)
        };
        search(&o, n, &keep, only(n), &mut visit);
    }
    found
}

/// Every solution of `F^n(x) = x + k` (any `k` when `shift` is `None`):
/// isolated ones and one representative per translation family.
pub fn fixed_points(f: &Lifting, n: usize, shift: Option<i64>) -> Vec<OracleSolution> {
    let o = SigmaOracle::new(f);
    let mut out: Vec<OracleSolution> = Vec::new();
    let keep = |k: i64| shift.map_or(true, |s| s == k);
    let mut visit = |h: Hit<SPoint>| {
        let s = OracleSolution { point: h.point, period: h.period, shift: h.shift };
        if !out.contains(&s) {
            out.push(s);
        }
        false
    };
    search(&o, n, &keep, shift, &mut visit);
    out
}

/// `F(x)` evaluated by the oracle's own piece tables.
pub fn eval(f: &Lifting, x: &SPoint) -> SPoint {
    SigmaOracle::new(f).eval(x)
}
