//! Builders for the explicit liftings used throughout: the worked examples,
//! liftings of circle maps with the branch collapsed, star maps embedded
//! around `0`, and Štefan interval maps placed on the branch.

use num_traits::{One, Zero};
use rand::Rng;

use crate::orderings::ShValue;
use crate::sigmamap::{Lifting, MapError, Node};
use crate::space::{q, qi, SPoint};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("bad parameters: {0}")]
    BadPartition(String),
    #[error("2^inf has no finite Markov realization; use a power of two")]
    UnrepresentableTail,
    #[error(transparent)]
    Map(#[from] MapError),
}

fn lifting(degree: i64, named: Vec<(&str, SPoint, SPoint)>) -> Result<Lifting, BuildError> {
    let nodes = named
        .into_iter()
        .map(|(name, point, image)| Node { name: name.to_string(), point, image })
        .collect();
    Ok(Lifting::new(degree, nodes)?)
}

fn strictly_increasing(v: &[Q]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn r(x: Q) -> SPoint {
    SPoint::Real(x)
}

/// Example with `Per = {n >= 2}`: `F(a_i) = a_{i−1}` for `i >= 3`,
/// `F(a_2) = max B_0`, `F(a_1) = 0`, `F(max B_0) = a_2 + 1`.
/// `a` lists `a_1 .. a_{n−1}`; `None` spaces them evenly.
pub fn example_5_1(n: usize, a: Option<Vec<Q>>) -> Result<Lifting, BuildError> {
    if n < 3 {
        return Err(BuildError::BadPartition(format!("n = {n} < 3")));
    }
    let inner = a.unwrap_or_else(|| (1..n).map(|i| q(i as i64, n as i64)).collect());
    let mut pts = vec![Q::zero()];
    pts.extend(inner);
    pts.push(Q::one());
    if pts.len() != n + 1 || !strictly_increasing(&pts) {
        return Err(BuildError::BadPartition("need 0 < a_1 < ... < a_{n-1} < 1".into()));
    }
    let mut nodes = Vec::new();
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    for i in 0..n {
        let image = match i {
            0 => r(&pts[n - 1] - Q::one()),
            1 => r(Q::zero()),
            2 => SPoint::top(0),
            _ => r(pts[i - 1].clone()),
        };
        nodes.push((names[i].as_str(), r(pts[i].clone()), image));
    }
    nodes.push(("top", SPoint::top(0), r(&pts[2] + Q::one())));
    lifting(1, nodes)
}

/// Example with `Per = ℕ ∖ {2}`. `t = (t_2, t_1, t_0, z_0, z_1)`, increasing.
pub fn example_5_2(t: Option<[Q; 5]>) -> Result<Lifting, BuildError> {
    let t = t.unwrap_or_else(|| std::array::from_fn(|i| q(i as i64 + 1, 6)));
    if t[0] <= Q::zero() || t[4] >= Q::one() || !strictly_increasing(&t) {
        return Err(BuildError::BadPartition("need 0 < t_2 < t_1 < t_0 < z_0 < z_1 < 1".into()));
    }
    let [t2, t1, t0, z0, z1] = t;
    lifting(
        1,
        vec![
            ("zero", r(Q::zero()), r(Q::zero())),
            ("t2", r(t2.clone()), r(&t0 - Q::one())),
            ("t1", r(t1.clone()), r(t2)),
            ("t0", r(t0), r(t1)),
            ("z0", r(z0.clone()), r(z1.clone())),
            ("z1", r(z1), SPoint::top(1)),
            ("top", SPoint::top(0), r(z0)),
        ],
    )
}

/// Example with `Rot(F) = [−(n−2), 1]` and `Per(0, F) = {k >= n}`:
/// `F(0) = −1`, `F(b) = b + 1` for `b = max B_0`, and `F(a) = b − n + 1`
/// with `a ∈ (−1, 0)`. Sending `a` to `b − n − 1` instead gives
/// `[−n, 1]` and `{k >= n + 2}`, i.e. the same example for `n + 2`.
pub fn example_6_1(n: usize, a: Option<Q>) -> Result<Lifting, BuildError> {
    if n < 3 {
        return Err(BuildError::BadPartition(format!("n = {n} < 3")));
    }
    let a = a.unwrap_or_else(|| q(-1, 2));
    if a <= qi(-1) || a >= Q::zero() {
        return Err(BuildError::BadPartition("need -1 < a < 0".into()));
    }
    lifting(
        1,
        vec![
            ("zero", r(Q::zero()), r(qi(-1))),
            ("a", r(&a + Q::one()), SPoint::top(2 - n as i64)),
            ("top", SPoint::top(0), SPoint::top(1)),
        ],
    )
}

/// Example whose orbit tree is a `k`-star model: a true orbit
/// `x_i = i + b_i ∈ B_i` (`0 <= i < k`), `x_k = a + k − 2`, with
/// `F(x_i) = x_{i+1}`, `F(x_k) = x_0` and `F(1) = 0`.
/// `heights` lists `b_1 > ... > b_{k−1}`.
pub fn example_6_3(k: usize, heights: Option<Vec<Q>>, a: Option<Q>) -> Result<Lifting, BuildError> {
    if k < 3 {
        return Err(BuildError::BadPartition(format!("k = {k} < 3")));
    }
    let kk = k as i64;
    let mut b = vec![Q::one()];
    b.extend(heights.unwrap_or_else(|| (1..kk).map(|i| q(kk - i, kk)).collect()));
    let a = a.unwrap_or_else(|| q(1, 2));
    let decreasing = b.windows(2).all(|w| w[0] > w[1]);
    if b.len() != k || !decreasing || b[k - 1] <= Q::zero() || a <= Q::zero() || a >= Q::one() {
        return Err(BuildError::BadPartition("need 1 = b_0 > ... > b_{k-1} > 0 and 0 < a < 1".into()));
    }
    let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
    let mut nodes = vec![("zero", r(Q::zero()), r(qi(-1))), ("xk", r(a.clone()), SPoint::branch(2 - kk, Q::one()))];
    for i in 0..k {
        // x_i − i = B(0, b_i) maps to x_{i+1} − i.
        let image = if i + 1 < k { SPoint::branch(1, b[i + 1].clone()) } else { r(&a - Q::one()) };
        nodes.push((names[i].as_str(), SPoint::branch(0, b[i].clone()), image));
    }
    lifting(1, nodes)
}

/// Branch of `x_1 .. x_15` in the two-glued-stars example.
pub const EX64_BRANCHES: [i64; 15] = [-4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 4, -1, 0, 1];

/// Rank of the height of `x_1 .. x_15` (15 is the top of the branch).
/// Found by search over itineraries and height orders and frozen once the
/// rotation interval, the 16-orbit and `Per(0, G)` all came out right.
pub const EX64_HEIGHT_RANKS: [usize; 15] = [5, 13, 14, 4, 3, 15, 2, 9, 8, 7, 11, 1, 12, 10, 6];

/// Degree one lifting with a true orbit `x_0 ∈ (0, 1)`, `x_1, .., x_15` in
/// the branches `B_{−4} .. B_6`, `G(x_i) = x_{i+1}` cyclically and
/// `G(0) = −5`, affine between consecutive points of `(P ∪ {0}) + ℤ`.
pub fn example_6_4() -> Lifting {
    let heights = EX64_HEIGHT_RANKS.map(|k| q(k as i64, 15));
    example_6_4_with(q(1, 2), heights).expect("default coordinates are valid")
}

/// Same combinatorics with other coordinates: `heights` must be ordered as
/// [`EX64_HEIGHT_RANKS`] with the rank 15 height equal to 1.
pub fn example_6_4_with(x0: Q, heights: [Q; 15]) -> Result<Lifting, BuildError> {
    if x0 <= Q::zero() || x0 >= Q::one() {
        return Err(BuildError::BadPartition("need 0 < x_0 < 1".into()));
    }
    let same_order = (0..15).all(|i| {
        (0..15).all(|j| (EX64_HEIGHT_RANKS[i] < EX64_HEIGHT_RANKS[j]) == (heights[i] < heights[j]))
    });
    let top = EX64_HEIGHT_RANKS.iter().position(|&k| k == 15).expect("rank 15 present");
    if !same_order || heights[top] != Q::one() || heights.iter().any(|h| *h <= Q::zero()) {
        return Err(BuildError::BadPartition("heights must follow the fixed order with the top at 1".into()));
    }
    let mut orbit = vec![r(x0)];
    orbit.extend(EX64_BRANCHES.iter().zip(heights).map(|(&m, h)| SPoint::branch(m, h)));
    let names: Vec<String> = (0..16).map(|i| format!("x{i}")).collect();
    let mut nodes = vec![("zero", r(Q::zero()), r(qi(-5)))];
    for i in 0..16 {
        let (p0, k) = orbit[i].reduce();
        nodes.push((names[i].as_str(), p0, orbit[(i + 1) % 16].translate(-k)));
    }
    lifting(1, nodes)
}

/// A lifting with an orbit of rotation `1/2` and period 6 whose first block
/// `P_0 = {−3/4, 1/2, B(0, 1/2)}` spans a 3-star centered at `0` and is a
/// type 3 orbit of `G = F² − 1` (left to right to up), while the second block
/// `P_1 = {3/8, 5/8, 7/8}` sits in `[0, 1]`. The center satisfies
/// `F(0) = 3/4 ∈ hull(P_1)` and `G(0) = 0`. The blocks interleave
/// (`max Re P_0 = 1/2 > 3/8`). Returns the map and the point `−3/4`.
pub fn type3_block_fixture() -> (Lifting, SPoint) {
    let f = lifting(
        1,
        vec![
            ("zero", r(Q::zero()), r(q(3, 4))),
            ("a", r(q(1, 4)), r(q(15, 8))),
            ("yb", r(q(3, 8)), SPoint::branch(1, q(1, 2))),
            ("b", r(q(1, 2)), r(q(3, 8))),
            ("yc", r(q(5, 8)), r(q(1, 4))),
            ("z", r(q(3, 4)), r(qi(1))),
            ("ya", r(q(7, 8)), r(q(3, 2))),
            ("c", SPoint::branch(0, q(1, 2)), r(q(5, 8))),
            ("top", SPoint::top(0), r(q(5, 8))),
        ],
    )
    .expect("fixture is Markov");
    (f, r(q(-3, 4)))
}

/// A degree one circle lifting, Markov on its nodes in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleMap {
    /// `(x, F̃(x))` with `x ∈ [0, 1)`; must include `x = 0`.
    pub nodes: Vec<(Q, Q)>,
}

/// Extends a circle lifting to `S` by collapsing each branch `B_m` to
/// `F̃(m)`.
pub fn circle_collapse(c: &CircleMap) -> Result<Lifting, BuildError> {
    let f0 = c
        .nodes
        .iter()
        .find(|(x, _)| x.is_zero())
        .map(|(_, y)| y.clone())
        .ok_or_else(|| BuildError::BadPartition("circle map needs the node 0".into()))?;
    let names: Vec<String> = (0..c.nodes.len()).map(|i| format!("c{i}")).collect();
    let mut nodes: Vec<(&str, SPoint, SPoint)> =
        c.nodes.iter().zip(&names).map(|((x, y), nm)| (nm.as_str(), r(x.clone()), r(y.clone()))).collect();
    nodes.push(("top", SPoint::top(0), r(f0)));
    lifting(1, nodes)
}

/// A point of the 3-star `Y`: the center or a point at distance `s ∈ (0, 1]`
/// along arm 0, 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarPoint {
    Center,
    Arm(usize, Q),
}

impl StarPoint {
    pub fn arm(i: usize, s: Q) -> Self {
        if s.is_zero() {
            StarPoint::Center
        } else {
            StarPoint::Arm(i, s)
        }
    }
}

/// A Markov map of the 3-star, affine in arclength between consecutive
/// nodes of each arm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarMap {
    /// Must include the center and the three arm tips.
    pub nodes: Vec<(StarPoint, StarPoint)>,
}

/// Arm length of the embedded star.
fn star_scale() -> Q {
    q(1, 4)
}

/// The isometric copy of `Y` (scaled by `1/4`) around `0`: arm 0 to the
/// left, arm 1 to the right, arm 2 up the branch.
pub fn star_embedding(p: &StarPoint) -> SPoint {
    let c = star_scale();
    match p {
        StarPoint::Center => r(Q::zero()),
        StarPoint::Arm(0, s) => r(-(s * c)),
        StarPoint::Arm(1, s) => r(s * c),
        StarPoint::Arm(_, s) => SPoint::branch(0, s * c),
    }
}

/// Degree one lifting with `Rot = {0}` and `Per = TPer(f)`: the star sits
/// around each integer, `[1/4, 3/8]` and `[5/8, 3/4]` run from the star
/// to fixed points, `F = Id` on `[3/8, 5/8]`, and the top `[1/4, 1]` of
/// the branch is squeezed to the image of its bottom.
pub fn embed_star_map(f: &StarMap) -> Result<Lifting, BuildError> {
    let has = |p: &StarPoint| f.nodes.iter().any(|(x, _)| x == p);
    let required = [StarPoint::Center, StarPoint::Arm(0, Q::one()), StarPoint::Arm(1, Q::one()), StarPoint::Arm(2, Q::one())];
    if let Some(missing) = required.iter().find(|p| !has(p)) {
        return Err(BuildError::BadPartition(format!("star map misses node {missing:?}")));
    }
    let mut nodes: Vec<(String, SPoint, SPoint)> = Vec::new();
    let mut upper = None;
    for (i, (x, y)) in f.nodes.iter().enumerate() {
        let img = star_embedding(y);
        let pt = star_embedding(x);
        match x {
            // The left arm lives at `1 − s/4` in the fundamental domain.
            StarPoint::Arm(0, _) => nodes.push((format!("s{i}"), pt.translate(1), img.translate(1))),
            _ => nodes.push((format!("s{i}"), pt, img.clone())),
        }
        if *x == StarPoint::Arm(2, Q::one()) {
            upper = Some(img);
        }
    }
    nodes.push(("top".into(), SPoint::top(0), upper.expect("tip of arm 2 present")));
    nodes.push(("fix_lo".into(), r(q(3, 8)), r(q(3, 8))));
    nodes.push(("fix_hi".into(), r(q(5, 8)), r(q(5, 8))));
    Ok(Lifting::new(1, nodes.into_iter().map(|(name, point, image)| Node { name, point, image }).collect())?)
}

/// An interval map of `[0, 1]`, linear between consecutive nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalMap {
    /// `(x, f(x))`, sorted by `x`, from `0` to `1`.
    pub nodes: Vec<(Q, Q)>,
}

impl IntervalMap {
    pub fn eval(&self, x: &Q) -> Q {
        let i = self.nodes.partition_point(|(a, _)| a <= x).clamp(1, self.nodes.len() - 1);
        let (x0, y0) = &self.nodes[i - 1];
        let (x1, y1) = &self.nodes[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Connect-the-dots map of the Štefan cycle of odd period `s = 2k + 1` on
/// positions `1..=s`: `k+1 → k+2 → k → k+3 → k−1 → ... → s → 1 → k+1`.
fn stefan_cycle(s: usize) -> IntervalMap {
    let k = (s - 1) / 2;
    let mut orbit = vec![k + 1];
    for j in 1..=k {
        orbit.push(k + 1 + j);
        orbit.push(k + 1 - j);
    }
    let scale = |p: usize| q(p as i64 - 1, s as i64 - 1);
    let mut nodes: Vec<(Q, Q)> = (0..s).map(|i| (scale(orbit[i]), scale(orbit[(i + 1) % s]))).collect();
    nodes.sort();
    IntervalMap { nodes }
}

/// `g` with `TPer(g) = {1} ∪ 2·TPer(f)`: `[0, 1/3]` is sent to `[2/3, 1]` by
/// a copy of `f`, `[2/3, 1]` slides back onto `[0, 1/3]`, and the middle third
/// is linear.
fn double(f: &IntervalMap) -> IntervalMap {
    let third = q(1, 3);
    let two = q(2, 3);
    let mut nodes: Vec<(Q, Q)> = f.nodes.iter().map(|(x, y)| (x * &third, &two + y * &third)).collect();
    nodes.extend(f.nodes.iter().map(|(x, _)| (&two + x * &third, x * &third)));
    nodes.sort();
    nodes.dedup();
    IntervalMap { nodes }
}

/// An interval map with `TPer = Shs(s)`.
pub fn stefan_interval_map(s: ShValue) -> Result<IntervalMap, BuildError> {
    let ShValue::Nat(n) = s else { return Err(BuildError::UnrepresentableTail) };
    let twos = n.trailing_zeros();
    let odd = n >> twos;
    let mut f = if odd == 1 {
        IntervalMap { nodes: vec![(Q::zero(), Q::zero()), (Q::one(), Q::zero())] }
    } else {
        stefan_cycle(odd)
    };
    for _ in 0..twos {
        f = double(&f);
    }
    Ok(f)
}

/// Degree `d` lifting acting on `B_0` as the Štefan map for `s` and sending
/// `[0, 1]` expansively onto the arc from `F(0)` to `F(0) + d`.
pub fn branch_family(d: i64, s: ShValue) -> Result<Lifting, BuildError> {
    let f = stefan_interval_map(s)?;
    let mut nodes = Vec::new();
    for (i, (h, y)) in f.nodes.iter().enumerate() {
        nodes.push(Node { name: format!("h{i}"), point: SPoint::branch(0, h.clone()), image: SPoint::branch(0, y.clone()) });
    }
    Ok(Lifting::new(d, nodes)?)
}

/// A random Markov lifting of degree `d` for property suites: the required
/// nodes `0` and `max B_0` plus up to `max_nodes − 2` more on a `1/16` grid of
/// `(0, 1) ∪ B_0`, each sent to a random node translated by `−2..=2`.
pub fn random_lifting<R: Rng + ?Sized>(rng: &mut R, degree: i64, max_nodes: usize) -> Lifting {
    let mut points = vec![r(Q::zero()), SPoint::top(0)];
    let extra = rng.gen_range(0..=max_nodes.saturating_sub(2));
    while points.len() < 2 + extra {
        let k = rng.gen_range(1..16);
        let p = if rng.gen_bool(0.5) { r(q(k, 16)) } else { SPoint::branch(0, q(k, 16)) };
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let nodes = (0..points.len())
        .map(|i| {
            let target = points[rng.gen_range(0..points.len())].translate(rng.gen_range(-2..=2));
            Node { name: format!("n{i}"), point: points[i].clone(), image: target }
        })
        .collect();
    Lifting::new(degree, nodes).expect("images are node translates and no node sits on a base")
}
