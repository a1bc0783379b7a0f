//! Orbit shapes: the type of an orbit whose hull is a 3-star, and the block
//! decomposition of an orbit of rotation `p/q` into true orbits of
//! `G = F^q − p`.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::sigmamap::{iterate, SigmaMap};
use crate::space::{dist, floor_i64, qi, SPoint};
use crate::Q;

use super::LiftedOrbit;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StarError {
    #[error("the hull of the orbit is not a 3-star")]
    NotAStarOrbit,
    #[error("the orbit is not a true periodic orbit")]
    NotTrueOrbit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Arm {
    Left,
    Right,
    Up,
}

/// The branching point of the hull of `pts`, if the hull is a 3-star.
fn star_center(pts: &[SPoint]) -> Option<i64> {
    let lo = pts.iter().map(SPoint::re).min()?;
    let hi = pts.iter().map(SPoint::re).max()?;
    let centers: BTreeSet<i64> = pts
        .iter()
        .filter_map(|p| match p {
            SPoint::Branch(m, _) if qi(*m) > lo && qi(*m) < hi => Some(*m),
            _ => None,
        })
        .collect();
    (centers.len() == 1).then(|| *centers.iter().next().expect("one center"))
}

fn arm(m: i64, p: &SPoint) -> Option<Arm> {
    match p {
        SPoint::Branch(b, _) if *b == m => Some(Arm::Up),
        _ if p.re() < qi(m) => Some(Arm::Left),
        _ if p.re() > qi(m) => Some(Arm::Right),
        _ => None,
    }
}

/// Types of a cyclic orbit `pts` of `map` whose hull is a 3-star: the
/// periods of the induced map on arms, read off at the point of each arm
/// closest to the center.
pub fn star_type(pts: &[SPoint], map: &dyn Fn(&SPoint) -> SPoint) -> Result<BTreeSet<usize>, StarError> {
    let m = star_center(pts).ok_or(StarError::NotAStarOrbit)?;
    let center = SPoint::Real(qi(m));
    if pts.contains(&center) {
        return Ok(BTreeSet::from([1]));
    }
    let arms = [Arm::Left, Arm::Right, Arm::Up];
    let mut phi: [Option<Arm>; 3] = [None; 3];
    for (k, a) in arms.iter().enumerate() {
        let closest = pts
            .iter()
            .filter(|p| arm(m, p) == Some(*a))
            .min_by(|x, y| dist(x, &center).cmp(&dist(y, &center)))
            .expect("every arm of a 3-star hull holds orbit points");
        let img = map(closest);
        if !pts.contains(&img) {
            return Err(StarError::NotTrueOrbit);
        }
        phi[k] = arm(m, &img);
    }
    let idx = |a: Arm| arms.iter().position(|b| *b == a).expect("known arm");
    let mut types = BTreeSet::new();
    for start in 0..3 {
        // Periodic arms of the induced self map, with their cycle lengths.
        let mut x = start;
        let mut path = vec![x];
        loop {
            x = idx(phi[x].expect("image off the center"));
            if let Some(i) = path.iter().position(|&y| y == x) {
                if i == 0 {
                    types.insert(path.len());
                }
                break;
            }
            path.push(x);
        }
    }
    Ok(types)
}

pub fn orbit_type_3star<F: SigmaMap>(f: &F, orbit: &LiftedOrbit) -> Result<BTreeSet<usize>, StarError> {
    if orbit.shift != 0 {
        return Err(StarError::NotTrueOrbit);
    }
    let pts = orbit.true_points(f);
    star_type(&pts, &|p| f.eval(p))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("orbit of period {period} and shift {shift} does not have rotation {p}/{q}")]
    BadRotationData { period: usize, shift: i64, p: i64, q: usize },
}

/// Blocks `P_i(x) = {G^s(F^i x)}` for `0 <= i < q`, each listed in `G` order.
pub fn blocks<F: SigmaMap>(f: &F, orbit: &LiftedOrbit, p: i64, q: usize) -> Result<Vec<Vec<SPoint>>, BlockError> {
    let bad = || BlockError::BadRotationData { period: orbit.period, shift: orbit.shift, p, q };
    if q == 0 || orbit.period % q != 0 {
        return Err(bad());
    }
    let n = orbit.period / q;
    if orbit.shift != p * n as i64 {
        return Err(bad());
    }
    let g = |x: &SPoint| iterate(f, x, q).translate(-p);
    let mut out = Vec::with_capacity(q);
    let mut start = orbit.representative.clone();
    for _ in 0..q {
        let mut block = vec![start.clone()];
        for _ in 1..n {
            let next = g(block.last().expect("nonempty"));
            block.push(next);
        }
        assert_eq!(g(block.last().expect("nonempty")), start, "block is not a true G orbit");
        out.push(block);
        start = f.eval(&start);
    }
    Ok(out)
}

fn re_range(b: &[SPoint]) -> (Q, Q) {
    let lo = b.iter().map(SPoint::re).min().expect("nonempty block");
    let hi = b.iter().map(SPoint::re).max().expect("nonempty block");
    (lo, hi)
}

/// Strict left to right ordering of blocks, closing up with `P_0 + p`.
pub fn has_increasing_block_structure(blocks: &[Vec<SPoint>], p: i64) -> bool {
    let q = blocks.len();
    if q <= 1 {
        return true;
    }
    (0..q).all(|i| {
        let (_, hi) = re_range(&blocks[i]);
        let (lo, _) = re_range(&blocks[(i + 1) % q]);
        let wrap = if i + 1 == q { qi(p) } else { Q::zero() };
        hi < lo + wrap
    })
}

/// Smallest `ℓ` for which the blocks of `F + ℓ`, namely `P_i + iℓ`, are
/// increasing.
pub fn reindex_shift(blocks: &[Vec<SPoint>], p: i64) -> i64 {
    let q = blocks.len();
    if q <= 1 {
        return 0;
    }
    let gap = (0..q)
        .map(|i| {
            let (_, hi) = re_range(&blocks[i]);
            let (lo, _) = re_range(&blocks[(i + 1) % q]);
            let wrap = if i + 1 == q { qi(p) } else { Q::zero() };
            hi - lo - wrap
        })
        .max()
        .expect("q >= 2");
    floor_i64(&gap) + 1
}
