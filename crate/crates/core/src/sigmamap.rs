//! Piecewise-affine Markov liftings, their evaluation, and the derived maps
//! `F + k`, `F^q − p` and `F_0`.
//!
//! A lifting is given by its degree and the images of finitely many nodes in
//! the fundamental domain. On each basic interval the map runs along the arc
//! between the two endpoint images at constant speed, measured in taxicab
//! arclength. Everything else follows from `F(z + 1) = F(z) + d`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::markov::{basic_intervals, BasicPartition};
use crate::space::{hull, qi, SInterval, SPoint};
use crate::Q;

/// Anything that can be evaluated pointwise on `S`.
pub trait SigmaMap {
    fn eval(&self, p: &SPoint) -> SPoint;
    fn degree(&self) -> i64;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub point: SPoint,
    pub image: SPoint,
}

#[derive(Clone, Debug)]
pub struct Lifting {
    degree: i64,
    nodes: Vec<Node>,
    partition: BasicPartition,
    /// Images of the two endpoints of every basic interval.
    ends: Vec<(SPoint, SPoint)>,
}

impl PartialEq for Lifting {
    fn eq(&self, other: &Self) -> bool {
        let key = |f: &Lifting| {
            f.nodes.iter().map(|n| (n.point.clone(), n.image.clone())).collect::<BTreeMap<_, _>>()
        };
        self.degree == other.degree && key(self) == key(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("image of node `{0}` is not a node translate")]
    NotMarkov(String),
    #[error("node `{0}` sits on the branch base with an image different from the base's")]
    DiscontinuousAtBase(String),
    #[error("node `{0}` given twice")]
    DuplicateNode(String),
    #[error("node `{0}` is outside the fundamental domain [0,1) ∪ B_0")]
    OutsideDomain(String),
    #[error("required node {0} is missing")]
    MissingNode(String),
}

/// Builds a lifting from unnamed `(node, image)` pairs.
pub fn build_lifting(degree: i64, pairs: Vec<(SPoint, SPoint)>) -> Result<Lifting, MapError> {
    let nodes = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (point, image))| Node { name: format!("n{i}"), point, image })
        .collect();
    Lifting::new(degree, nodes)
}

fn in_domain(p: &SPoint) -> bool {
    match p {
        SPoint::Real(x) => *x >= Q::zero() && *x < Q::one(),
        SPoint::Branch(m, _) => *m == 0,
    }
}

impl Lifting {
    /// Validates a named node list. `B(0,0)` is accepted as a spelling of the
    /// base point `R(0)`; giving both with different images is a
    /// discontinuity at the base.
    pub fn new(degree: i64, nodes: Vec<Node>) -> Result<Lifting, MapError> {
        let mut seen_names = HashSet::new();
        let mut by_point: BTreeMap<SPoint, usize> = BTreeMap::new();
        let mut kept: Vec<Node> = Vec::new();
        for n in nodes {
            if !seen_names.insert(n.name.clone()) {
                return Err(MapError::DuplicateNode(n.name));
            }
            if !in_domain(&n.point) {
                return Err(MapError::OutsideDomain(n.name));
            }
            if let Some(&k) = by_point.get(&n.point) {
                if kept[k].image != n.image && n.point.base().is_some() {
                    return Err(MapError::DiscontinuousAtBase(n.name));
                }
                return Err(MapError::DuplicateNode(n.name));
            }
            by_point.insert(n.point.clone(), kept.len());
            kept.push(n);
        }
        let zero = SPoint::Real(Q::zero());
        let top = SPoint::top(0);
        if !by_point.contains_key(&zero) {
            return Err(MapError::MissingNode("R(0)".into()));
        }
        if !by_point.contains_key(&top) {
            return Err(MapError::MissingNode("B(0,1)".into()));
        }
        for n in &kept {
            if !by_point.contains_key(&n.image.reduce().0) {
                return Err(MapError::NotMarkov(n.name.clone()));
            }
        }
        kept.sort_by(|a, b| a.point.cmp(&b.point));
        let points: Vec<SPoint> = kept.iter().map(|n| n.point.clone()).collect();
        let partition = basic_intervals(&points);
        let image_of = |p: &SPoint| -> SPoint {
            let (p0, k) = p.reduce();
            let n = &kept[kept.binary_search_by(|n| n.point.cmp(&p0)).expect("endpoint is a node")];
            n.image.translate(degree * k)
        };
        let ends = partition
            .intervals
            .iter()
            .map(|iv| (image_of(&iv.lo_point()), image_of(&iv.hi_point())))
            .collect();
        Ok(Lifting { degree, nodes: kept, partition, ends })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn partition(&self) -> &BasicPartition {
        &self.partition
    }

    pub fn node_image(&self, p0: &SPoint) -> Option<&SPoint> {
        self.nodes.iter().find(|n| n.point == *p0).map(|n| &n.image)
    }

    /// Image arc of basic interval `i`, from the image of its lower end.
    pub fn image_arc(&self, i: usize) -> SInterval {
        let (a, b) = &self.ends[i];
        hull(a, b)
    }

    /// The lifting `F + k` as a lifting in its own right.
    pub fn shifted(&self, k: i64) -> Lifting {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node { name: n.name.clone(), point: n.point.clone(), image: n.image.translate(k) })
            .collect();
        Lifting::new(self.degree, nodes).expect("shift preserves validity")
    }

    /// Text in the map file format; parses back to an equal lifting.
    pub fn to_map_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree {}", self.degree);
        for n in &self.nodes {
            let _ = writeln!(out, "node {} = {}", n.name, n.point);
        }
        for n in &self.nodes {
            let _ = writeln!(out, "image {} -> {}", n.name, n.image);
        }
        out
    }
}

impl SigmaMap for Lifting {
    fn eval(&self, p: &SPoint) -> SPoint {
        let (p0, k) = p.reduce();
        let (i, t) = self.partition.locate(&p0);
        let iv = &self.partition.intervals[i];
        let (a, b) = &self.ends[i];
        let img = if t == iv.lo {
            a.clone()
        } else if t == iv.hi {
            b.clone()
        } else {
            let arc = hull(a, b);
            let s = (&t - &iv.lo) / iv.len() * arc.len();
            arc.point_at(&s)
        };
        img.translate(self.degree * k)
    }

    fn degree(&self) -> i64 {
        self.degree
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivedForm {
    /// `F + k`.
    Shifted(i64),
    /// `F^q − p`.
    PowerShifted { q: u32, p: i64 },
    /// `F_0(x) = F(x) − Re F(x)`.
    FZero,
}

#[derive(Clone, Copy, Debug)]
pub struct Derived<'a, F: SigmaMap> {
    pub base: &'a F,
    pub form: DerivedForm,
}

impl<F: SigmaMap> SigmaMap for Derived<'_, F> {
    fn eval(&self, x: &SPoint) -> SPoint {
        match self.form {
            DerivedForm::Shifted(k) => self.base.eval(x).translate(k),
            DerivedForm::PowerShifted { q, p } => iterate(self.base, x, q as usize).translate(-p),
            DerivedForm::FZero => {
                let y = self.base.eval(x);
                match y {
                    SPoint::Real(_) => SPoint::Real(Q::zero()),
                    SPoint::Branch(_, h) => SPoint::Branch(0, h),
                }
            }
        }
    }

    fn degree(&self) -> i64 {
        match self.form {
            DerivedForm::Shifted(_) => self.base.degree(),
            DerivedForm::PowerShifted { q, .. } => self.base.degree().pow(q),
            DerivedForm::FZero => 0,
        }
    }
}

pub fn eval<F: SigmaMap>(f: &F, p: &SPoint) -> SPoint {
    f.eval(p)
}

pub fn iterate<F: SigmaMap + ?Sized>(f: &F, p: &SPoint, n: usize) -> SPoint {
    let mut x = p.clone();
    for _ in 0..n {
        x = f.eval(&x);
    }
    x
}

pub fn shift_lifting<F: SigmaMap>(f: &F, k: i64) -> Derived<'_, F> {
    Derived { base: f, form: DerivedForm::Shifted(k) }
}

pub fn power_shift<F: SigmaMap>(f: &F, q: u32, p: i64) -> Derived<'_, F> {
    assert!(q >= 1, "power must be positive");
    Derived { base: f, form: DerivedForm::PowerShifted { q, p } }
}

pub fn power_shift_eval<F: SigmaMap>(f: &F, q: u32, p: i64, x: &SPoint) -> SPoint {
    power_shift(f, q, p).eval(x)
}

pub fn f0<F: SigmaMap>(f: &F, p: &SPoint) -> SPoint {
    Derived { base: f, form: DerivedForm::FZero }.eval(p)
}

/// `(Re F^n(p) − Re p) / n`.
pub fn rho_estimate<F: SigmaMap>(f: &F, p: &SPoint, n: usize) -> Q {
    assert!(n >= 1);
    (iterate(f, p, n).re() - p.re()) / qi(n as i64)
}

/// Parses the line-oriented map file format.
///
/// ```text
/// degree 1
/// node a = R(1/3)      # comment
/// image a -> B(0,1)
/// ```
pub fn parse_map(text: &str) -> Result<Lifting, MapError> {
    let mut degree: Option<i64> = None;
    let mut order: Vec<String> = Vec::new();
    let mut points: BTreeMap<String, (SPoint, usize)> = BTreeMap::new();
    let mut images: BTreeMap<String, SPoint> = BTreeMap::new();
    let syntax = |line: usize, msg: String| MapError::SyntaxError { line, msg };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match kw {
            "degree" => {
                if degree.is_some() {
                    return Err(syntax(line, "`degree` given twice".into()));
                }
                degree = Some(rest.parse().map_err(|_| syntax(line, format!("bad degree `{rest}`")))?);
            }
            "node" => {
                let (name, pt) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected `node <name> = <point>`".into()))?;
                let name = name.trim().to_string();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(line, format!("bad node name `{name}`")));
                }
                let p: SPoint = pt.parse().map_err(|e| syntax(line, format!("{e}")))?;
                if points.contains_key(&name) {
                    return Err(MapError::DuplicateNode(name));
                }
                order.push(name.clone());
                points.insert(name, (p, line));
            }
            "image" => {
                let (name, pt) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line, "expected `image <name> -> <point>`".into()))?;
                let name = name.trim().to_string();
                let p: SPoint = pt.parse().map_err(|e| syntax(line, format!("{e}")))?;
                if !points.contains_key(&name) {
                    return Err(syntax(line, format!("image for undeclared node `{name}`")));
                }
                if images.insert(name.clone(), p).is_some() {
                    return Err(syntax(line, format!("second image for node `{name}`")));
                }
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let degree = degree.ok_or_else(|| syntax(0, "missing `degree` line".into()))?;
    let mut nodes = Vec::new();
    for name in order {
        let (point, line) = points[&name].clone();
        let image = images
            .remove(&name)
            .ok_or_else(|| syntax(line, format!("node `{name}` has no image")))?;
        nodes.push(Node { name, point, image });
    }
    Lifting::new(degree, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::q;

    fn p(s: &str) -> SPoint {
        s.parse().unwrap()
    }

    fn ex51() -> Lifting {
        build_lifting(
            1,
            vec![
                (p("R(0)"), p("R(-1/3)")),
                (p("R(1/3)"), p("R(0)")),
                (p("R(2/3)"), p("B(0,1)")),
                (p("B(0,1)"), p("R(5/3)")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluates_the_three_interval_example() {
        let f = ex51();
        assert_eq!(f.eval(&p("R(1/3)")), p("R(0)"));
        assert_eq!(f.eval(&p("B(0,1)")), p("R(5/3)"));
        assert_eq!(f.eval(&p("R(1/2)")), p("B(0,1/2)"));
        assert_eq!(f.eval(&p("R(1)")), p("R(2/3)"));
        assert_eq!(f.eval(&p("B(3,1)")), p("R(14/3)"));
    }

    #[test]
    fn derived_maps() {
        let f = ex51();
        assert_eq!(shift_lifting(&f, 1).eval(&p("R(1/3)")), p("R(1)"));
        assert_eq!(power_shift_eval(&f, 2, 1, &p("R(1/3)")), p("R(-4/3)"));
        assert_eq!(power_shift_eval(&f, 1, 0, &p("R(1/2)")), f.eval(&p("R(1/2)")));
        assert_eq!(f0(&f, &p("R(2/3)")), p("B(0,1)"));
        assert_eq!(f0(&f, &p("R(1/3)")), p("R(0)"));
        assert_eq!(f0(&f, &p("R(7/3)")), p("R(0)"));
    }

    #[test]
    fn rejects_bad_node_data() {
        let bad = build_lifting(1, vec![(p("R(0)"), p("R(1/5)")), (p("B(0,1)"), p("B(0,1)"))]);
        assert_eq!(bad.unwrap_err(), MapError::NotMarkov("n0".into()));
        let dup = build_lifting(1, vec![(p("R(0)"), p("R(0)")), (p("R(0)"), p("R(0)")), (p("B(0,1)"), p("R(0)"))]);
        assert!(matches!(dup.unwrap_err(), MapError::DuplicateNode(_)));
        let base = build_lifting(1, vec![(p("R(0)"), p("R(0)")), (p("B(0,0)"), p("R(1)")), (p("B(0,1)"), p("R(0)"))]);
        assert!(matches!(base.unwrap_err(), MapError::DiscontinuousAtBase(_)));
        let missing = build_lifting(1, vec![(p("R(0)"), p("R(0)"))]);
        assert!(matches!(missing.unwrap_err(), MapError::MissingNode(_)));
    }

    #[test]
    fn identity_on_nodes() {
        let f = build_lifting(1, vec![(p("R(0)"), p("R(0)")), (p("B(0,1)"), p("B(0,1)"))]).unwrap();
        assert_eq!(f.eval(&p("R(2/7)")), p("R(2/7)"));
        assert_eq!(f.eval(&p("B(-3,1/9)")), p("B(-3,1/9)"));
    }

    #[test]
    fn map_text_roundtrip_and_errors() {
        let f = ex51();
        assert_eq!(parse_map(&f.to_map_text()).unwrap(), f);
        let e = parse_map("node a = R(0)\nimage a -> R(0)\n").unwrap_err();
        assert!(matches!(e, MapError::SyntaxError { .. }));
        let e = parse_map("degree 1\nnode z = R(0)\nnode t = B(0,1)\nnode a = R(1/2)\nimage z -> R(0)\nimage t -> R(0)\nimage a -> R(1/3)\n")
            .unwrap_err();
        assert_eq!(e, MapError::NotMarkov("a".into()));
        let e = parse_map("degree 1\nnode z = R(0)\nbogus\n").unwrap_err();
        assert_eq!(e, MapError::SyntaxError { line: 3, msg: "unknown keyword `bogus`".into() });
    }

    #[test]
    fn rho_of_a_translated_point() {
        let f = build_lifting(1, vec![(p("R(0)"), p("R(-1)")), (p("B(0,1)"), p("B(-1,1)"))]).unwrap();
        assert_eq!(rho_estimate(&f, &p("R(0)"), 5), qi(-1));
        assert_eq!(rho_estimate(&f, &p("R(1/2)"), 3), q(-1, 1));
    }
}
