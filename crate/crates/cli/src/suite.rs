//! The thirteen acceptance criteria as runnable checks. Criteria 1 to 5 reuse
//! the `verify-example` claims; the others run fixtures, seeded random
//! liftings and the pullback oracle.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigma_core::constructions::{
    branch_family, circle_collapse, example_5_1, example_5_2, example_6_1, example_6_3, example_6_4,
    random_lifting, type3_block_fixture, CircleMap,
};
use sigma_core::markov::{loop_sign, loop_sign_oriented, markov_graph, MarkovGraph, SignSet};
use sigma_core::orderings::{
    baldwin_le, baldwin_tail, is_tail, lambda_set, m_interval, misiurewicz_expr, sh_le, sh_tail, BValue, Rho,
    ShValue,
};
use sigma_core::periods::{
    blocks, enumerate_orbits, has_increasing_block_structure, periods_for_rotation_report, periods_report,
    reindex_shift, star_type, theorem_shape, LiftedOrbit, PeriodError, Shape, DEFAULT_BUDGET,
};
use sigma_core::sigmamap::{iterate, power_shift, SigmaMap};
use sigma_core::space::{q, qi};
use sigma_core::rotation::cycles_reachable_from_reals;
use sigma_core::{rotation_interval, Lifting, SPoint, TruncatedPeriodSet, Q};

use crate::claims::{self, all_pass, Verdict};

pub const N_MAX: usize = 20;
const ORACLE_N: usize = 12;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(120);
const RANDOM_MAPS: usize = 200;
const INVARIANT_MAPS: usize = 50;
const MAX_NODES: usize = 8;
/// Longest iterate solved exhaustively by the oracle in the converse block
/// check; piece counts grow about tenfold per iterate on the glued stars.
const CONVERSE_N: usize = 4;

#[derive(Clone, Debug)]
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub summary: String,
    /// Failing checks, then informational lines.
    pub details: Vec<String>,
}

impl Report {
    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("criterion {:>2} {tag}: {} ({})", self.id, self.title, self.summary)
    }
}

/// Accumulates failures for one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn into_report(self, id: u8, title: &'static str, summary: String) -> Report {
        let pass = self.failures.is_empty();
        let mut details = self.failures;
        details.extend(self.notes);
        Report { id, title, pass, summary, details }
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "three-interval examples: rotation interval and periods",
        2 => "example missing period 2",
        3 => "rotation-0 periods from n on",
        4 => "n-star model: containment and set descriptions",
        5 => "two glued stars",
        6 => "engine agrees with the pullback oracle",
        7 => "branch orbits force Sharkovsky tails",
        8 => "large branch orbits force every period",
        9 => "0 inside the rotation interval: at most 1 or 2 missing",
        10 => "branch family realises Sharkovsky tails",
        11 => "structural invariants of liftings, loops and blocks",
        12 => "orderings and the Misiurewicz formula",
        13 => "type 3 block orbit gives multiples of q",
        _ => "unknown criterion",
    }
}

pub fn run(id: u8, seed: u64) -> Report {
    match id {
        1..=5 => examples(id, seed),
        6 => oracle_equivalence(),
        7 => branch_tails(seed),
        8 => large_branch_orbits(seed),
        9 => missing_shapes(seed),
        10 => branch_family_tails(),
        11 => invariants(seed),
        12 => orderings(),
        13 => block_fixture(),
        _ => Report { id, title: title(id), pass: false, summary: "no such criterion".into(), details: vec![] },
    }
}

pub fn run_all(seed: u64) -> Vec<Report> {
    (1..=13).map(|id| run(id, seed)).collect()
}

/// Per-criterion RNG, so criteria can be run alone with the same maps.
fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ u64::from(id))
}

fn examples(id: u8, seed: u64) -> Report {
    let ex = claims::EXAMPLES[usize::from(id) - 1];
    let opts = claims::Options { n_max: N_MAX, budget: DEFAULT_BUDGET, seed, oracle: false };
    match claims::verify_example(ex, &opts) {
        Ok(cs) => {
            let pass = all_pass(&cs);
            let asserted = cs.iter().filter(|c| c.verdict != Verdict::Info).count();
            let mut details: Vec<String> = cs.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.to_string()).collect();
            details.extend(cs.iter().filter(|c| c.verdict == Verdict::Info).map(|c| c.to_string()));
            let failed = cs.iter().filter(|c| c.verdict == Verdict::Fail).count();
            Report { id, title: title(id), pass, summary: format!("{} of {asserted} claims hold", asserted - failed), details }
        }
        Err(e) => Report { id, title: title(id), pass: false, summary: e.to_string(), details: vec![] },
    }
}

/// Every example map at default coordinates.
pub fn example_maps() -> Vec<(String, Lifting)> {
    let mut v: Vec<(String, Lifting)> = Vec::new();
    for n in 3..=5 {
        v.push((format!("5_1 n={n}"), example_5_1(n, None).expect("default coordinates")));
    }
    v.push(("5_2".into(), example_5_2(None).expect("default coordinates")));
    for n in 3..=4 {
        v.push((format!("6_1 n={n}"), example_6_1(n, None).expect("default coordinates")));
    }
    for k in 3..=4 {
        v.push((format!("6_3 k={k}"), example_6_3(k, None, None).expect("default coordinates")));
    }
    v.push(("6_4".into(), example_6_4()));
    v
}

fn oracle_equivalence() -> Report {
    let start = Instant::now();
    let mut t = Tally::default();
    for (name, f) in example_maps() {
        match periods_report(&f, ORACLE_N, DEFAULT_BUDGET) {
            Ok(rep) => {
                let oracle = TruncatedPeriodSet::new(ORACLE_N, sigma_oracle::periods_mod1(&f, ORACLE_N));
                t.check(rep.set == oracle, || format!("{name}: engine {} oracle {oracle}", rep.set));
            }
            Err(e) => t.check(false, || format!("{name}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    t.check(elapsed <= ORACLE_TIME_LIMIT, || format!("took {elapsed:?}, limit {ORACLE_TIME_LIMIT:?}"));
    let maps = t.checks - 1;
    t.into_report(6, title(6), format!("{maps} maps, n <= {ORACLE_N}, {:.1}s", elapsed.as_secs_f64()))
}

fn incomplete(t: &mut Tally, what: &str, e: PeriodError) {
    t.check(false, || format!("{what}: {e}"));
}

fn branch_tails(seed: u64) -> Report {
    let mut rng = rng_for(seed, 7);
    let mut t = Tally::default();
    let mut with_orbits = 0;
    for i in 0..RANDOM_MAPS {
        let d = [-1, 0, 1, 2][i % 4];
        let f = random_lifting(&mut rng, d, MAX_NODES);
        let orbits = match enumerate_orbits(&f, 7, true, DEFAULT_BUDGET) {
            Ok(o) => o,
            Err(e) => {
                incomplete(&mut t, &format!("map {i}"), e);
                continue;
            }
        };
        if orbits.is_empty() {
            continue;
        }
        with_orbits += 1;
        let per = match periods_report(&f, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => r.set,
            Err(e) => {
                incomplete(&mut t, &format!("map {i}"), e);
                continue;
            }
        };
        let periods: BTreeSet<usize> = orbits.iter().map(|o| o.period).collect();
        for p in periods {
            let tail = sh_tail(ShValue::Nat(p), N_MAX);
            t.check(tail.is_subset(&per.members), || {
                format!("map {i} (degree {d}): branch orbit of period {p} but periods = {per}\n{}", f.to_map_text())
            });
        }
    }
    let checks = t.checks;
    t.into_report(7, title(7), format!("{RANDOM_MAPS} maps, {with_orbits} with branch orbits, {checks} tail checks"))
}

fn large_branch_orbits(seed: u64) -> Report {
    let mut rng = rng_for(seed, 8);
    let mut t = Tally::default();
    let mut hits = 0;
    for i in 0..RANDOM_MAPS {
        let f = random_lifting(&mut rng, 1, MAX_NODES);
        let large = match enumerate_orbits(&f, 7, true, DEFAULT_BUDGET) {
            Ok(o) => o.into_iter().find(|o| o.large && o.lives_in_branches),
            Err(e) => {
                incomplete(&mut t, &format!("map {i}"), e);
                continue;
            }
        };
        let Some(o) = large else { continue };
        hits += 1;
        match periods_report(&f, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => t.check(r.set == TruncatedPeriodSet::full(N_MAX), || {
                format!("map {i}: large branch orbit {o} but periods = {}\n{}", r.set, f.to_map_text())
            }),
            Err(e) => incomplete(&mut t, &format!("map {i}"), e),
        }
    }
    t.check(hits > 0, || "no random map had a large orbit living in the branches".into());
    t.into_report(8, title(8), format!("{RANDOM_MAPS} maps, {hits} with a large branch orbit"))
}

fn allowed_shape(s: Shape) -> bool {
    matches!(s, Shape::AllN | Shape::MissingOnlyOne | Shape::MissingOnlyTwo)
}

/// Circle lifting on the quarter grid: `F(i/4) = images[i]/4`.
fn quarter_circle(images: [i64; 4]) -> Lifting {
    let nodes = (0..4).map(|i| (q(i, 4), q(images[i as usize], 4))).collect();
    circle_collapse(&CircleMap { nodes }).expect("quarter grid circle maps are Markov")
}

/// `rot = [−1/2, 1/2]`, every period.
pub fn circle_all_periods() -> Lifting {
    quarter_circle([-2, 2, 5, 0])
}

/// `rot = [1/3, 1/2]`.
pub fn circle_third_half() -> Lifting {
    quarter_circle([1, 2, 3, 6])
}

/// `rot = [−1/3, 0]`.
pub fn circle_minus_third_zero() -> Lifting {
    quarter_circle([-2, -1, 1, 3])
}

fn missing_shapes(seed: u64) -> Report {
    let mut rng = rng_for(seed, 9);
    let mut t = Tally::default();
    let mut used = 0;
    let mut tried = 0;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    while used < RANDOM_MAPS && tried < 100 * RANDOM_MAPS {
        tried += 1;
        let f = random_lifting(&mut rng, 1, MAX_NODES);
        // Otherwise the graph's interval can exceed the rotation set of
        // real points, which is what the shape statement is about.
        if !cycles_reachable_from_reals(&markov_graph(&f)) {
            continue;
        }
        let Ok(rot) = rotation_interval(&markov_graph(&f)) else { continue };
        if !rot.interior_contains(&Q::zero()) {
            continue;
        }
        used += 1;
        match periods_report(&f, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => {
                let shape = theorem_shape(&r.set);
                seen.insert(shape.to_string());
                t.check(allowed_shape(shape), || format!("map {tried}: {rot}, periods = {}\n{}", r.set, f.to_map_text()));
            }
            Err(e) => incomplete(&mut t, &format!("map {tried}"), e),
        }
    }
    t.check(used == RANDOM_MAPS, || format!("only {used} of {tried} random maps had 0 inside the rotation interval"));
    let witnesses = [
        ("5_1 n=3", example_5_1(3, None).expect("default coordinates"), Shape::MissingOnlyOne),
        ("5_2", example_5_2(None).expect("default coordinates"), Shape::MissingOnlyTwo),
        ("circle", circle_all_periods(), Shape::AllN),
    ];
    for (name, f, want) in witnesses {
        let rot = rotation_interval(&markov_graph(&f));
        let inside = cycles_reachable_from_reals(&markov_graph(&f)) && rot.as_ref().map_or(false, |r| r.interior_contains(&Q::zero()));
        t.check(inside, || format!("{name}: rotation interval not realised by real points or 0 not inside the rotation interval"));
        match periods_report(&f, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => t.check(theorem_shape(&r.set) == want, || format!("{name}: shape {} expected {want}", theorem_shape(&r.set))),
            Err(e) => incomplete(&mut t, name, e),
        }
    }
    let seen: Vec<String> = seen.into_iter().collect();
    t.into_report(9, title(9), format!("{used} random maps (shapes seen: {}), 3 witnesses", seen.join(", ")))
}

fn branch_family_tails() -> Report {
    let mut t = Tally::default();
    for d in 0..=2 {
        for s in [3, 5, 6, 4] {
            let want = TruncatedPeriodSet::new(N_MAX, sh_tail(ShValue::Nat(s), N_MAX));
            match branch_family(d, ShValue::Nat(s)).map_err(|e| e.to_string()).and_then(|f| {
                periods_report(&f, N_MAX, DEFAULT_BUDGET).map_err(|e| e.to_string())
            }) {
                Ok(r) => t.check(r.set == want, || format!("d={d} s={s}: periods = {}, expected {want}", r.set)),
                Err(e) => t.check(false, || format!("d={d} s={s}: {e}")),
            }
        }
    }
    let failed = t.failures.len();
    let checks = t.checks;
    t.into_report(10, title(10), format!("{} of {checks} (d, s) pairs match", checks - failed))
}

/// Nodes and basic interval midpoints, with a couple of translates.
fn sample_points(f: &Lifting) -> Vec<SPoint> {
    let mut v = Vec::new();
    for iv in &f.partition().intervals {
        v.push(iv.lo_point());
        v.push(iv.point(&iv.midpoint()));
    }
    v.push(SPoint::Real(q(-7, 3)));
    v
}

fn fixtures() -> Vec<(String, Lifting)> {
    let mut v = example_maps();
    v.push(("type3_block".into(), type3_block_fixture().0));
    v.push(("circle all".into(), circle_all_periods()));
    v.push(("circle [1/3,1/2]".into(), circle_third_half()));
    v.push(("circle [-1/3,0]".into(), circle_minus_third_zero()));
    v.push(("branch_family(1,5)".into(), branch_family(1, ShValue::Nat(5)).expect("odd tail")));
    v.push(("branch_family(0,6)".into(), branch_family(0, ShValue::Nat(6)).expect("even tail")));
    v
}

/// Least `n <= max` with `F^n(x) = x`.
fn true_period<F: SigmaMap + ?Sized>(f: &F, x: &SPoint, max: usize) -> Option<usize> {
    let mut y = x.clone();
    (1..=max).find(|_| {
        y = f.eval(&y);
        y == *x
    })
}

/// Rationals `p/q` in lowest terms with `q <= 3` inside `[lo, hi]`.
fn small_rotations(lo: &Q, hi: &Q) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for den in 1..=3i64 {
        let first = (lo * qi(den)).ceil().to_integer().to_i64().expect("small");
        let last = (hi * qi(den)).floor().to_integer().to_i64().expect("small");
        for num in first..=last {
            if *q(num, den).denom() == den.into() {
                out.push((num, den));
            }
        }
    }
    out
}

/// Loops of length at most 3 plus the extremal cycles.
fn some_loops(g: &MarkovGraph) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let from = |v: usize| g.edges.iter().enumerate().filter(move |(_, e)| e.from == v).map(|(i, _)| i);
    for (a, ea) in g.edges.iter().enumerate() {
        if ea.to == ea.from {
            out.push(vec![a]);
        }
        for b in from(ea.to) {
            let eb = &g.edges[b];
            if eb.to == ea.from {
                out.push(vec![a, b]);
            }
            for c in from(eb.to) {
                if g.edges[c].to == ea.from {
                    out.push(vec![a, b, c]);
                }
            }
        }
        if out.len() > 400 {
            break;
        }
    }
    if let Ok(r) = rotation_interval(g) {
        out.push(r.lo_cycle);
        out.push(r.hi_cycle);
    }
    out
}

fn check_invariants(t: &mut Tally, name: &str, f: &Lifting, rng: &mut ChaCha8Rng) {
    let d = f.degree();
    let pts = sample_points(f);

    // Degree extension: F^n(x + m) = F^n(x) + m d^n.
    for x in &pts {
        for m in [-1i64, 2] {
            for n in 1..=3u32 {
                let lhs = iterate(f, &x.translate(m), n as usize);
                let rhs = iterate(f, x, n as usize).translate(m * d.pow(n));
                t.check(lhs == rhs, || format!("{name}: F^{n}({x} + {m}) = {lhs}, expected {rhs}"));
            }
        }
    }

    let per = match periods_report(f, N_MAX, DEFAULT_BUDGET) {
        Ok(r) => r,
        Err(e) => return incomplete(t, name, e),
    };

    // Loop signs do not depend on the orientation chosen at each vertex,
    // and agree with the slope of the composed loop map.
    let g = markov_graph(f);
    for lp in some_loops(&g) {
        let base = loop_sign(&g, &lp).expect("enumerated loops close up");
        let slope = g.loop_map(&lp).expect("loop").a;
        t.check(base == SignSet::of(slope.is_positive()), || format!("{name}: loop {lp:?} sign {base} vs slope {slope}"));
        let mut forward = vec![true; g.n_vertices()];
        for v in 0..g.n_vertices() {
            forward[v] = false;
            let s = loop_sign_oriented(&g, &lp, &forward).expect("loop");
            t.check(s == base, || format!("{name}: loop {lp:?} sign changes when vertex {v} is flipped"));
            forward[v] = true;
        }
        let random: Vec<bool> = (0..g.n_vertices()).map(|_| rng.gen_bool(0.5)).collect();
        let s = loop_sign_oriented(&g, &lp, &random).expect("loop");
        t.check(s == base, || format!("{name}: loop {lp:?} sign depends on orientations {random:?}"));
    }

    if d != 1 {
        return;
    }

    // Shifted liftings: (F+k)^n(x) = F^n(x) + kn, Per(F+k) = Per(F),
    // Rot(F+k) = Rot(F) + k.
    let rot = match rotation_interval(&g) {
        Ok(r) => r,
        Err(e) => return t.check(false, || format!("{name}: {e}")),
    };
    for k in [-1i64, 1] {
        let fk = f.shifted(k);
        for x in &pts {
            for n in 1..=3usize {
                let lhs = iterate(&fk, x, n);
                let rhs = iterate(f, x, n).translate(k * n as i64);
                t.check(lhs == rhs, || format!("{name}: (F{k:+})^{n}({x}) = {lhs}, expected {rhs}"));
            }
        }
        match periods_report(&fk, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => t.check(r.set == per.set, || format!("{name}: Per(F{k:+}) = {} but Per(F) = {}", r.set, per.set)),
            Err(e) => incomplete(t, name, e),
        }
        match rotation_interval(&markov_graph(&fk)) {
            Ok(r) => t.check(r.lo == &rot.lo + qi(k) && r.hi == &rot.hi + qi(k), || format!("{name}: Rot(F{k:+}) = {r}, Rot(F) = {rot}")),
            Err(e) => t.check(false, || format!("{name}: {e}")),
        }
    }

    // Orbits of rotation 0 with a short true orbit have true period equal
    // to their period mod 1.
    let zero = periods_for_rotation_report(f, 0, 1, N_MAX, DEFAULT_BUDGET);
    let mut rot0: Vec<LiftedOrbit> = per.witnesses.values().filter(|o| o.shift == 0).cloned().collect();
    if let Ok(r) = &zero {
        rot0.extend(r.witnesses.values().cloned());
    }
    for o in &rot0 {
        let pts = o.true_points(f);
        let lo = pts.iter().map(SPoint::re).min().expect("nonempty");
        let hi = pts.iter().map(SPoint::re).max().expect("nonempty");
        if hi - lo < Q::one() {
            let tp = true_period(f, &o.representative, o.period);
            t.check(tp == Some(o.period), || format!("{name}: short orbit {o} has true period {tp:?}"));
        }
    }

    for (p, qd) in small_rotations(&rot.lo, &rot.hi) {
        let qd_u = qd as usize;
        let rep = match periods_for_rotation_report(f, p, qd, ORACLE_N, DEFAULT_BUDGET) {
            Ok(r) => r,
            Err(e) => {
                incomplete(t, name, e);
                continue;
            }
        };
        let gmap = power_shift(f, qd as u32, p);
        for o in rep.witnesses.values() {
            // F-orbit of rotation p/q and period mq is a true period m
            // orbit of F^q − p.
            t.check(o.period % qd_u == 0, || format!("{name}: period {} with rotation {p}/{qd}", o.period));
            let m = o.period / qd_u;
            let tp = true_period(&gmap, &o.representative, m);
            t.check(tp == Some(m), || format!("{name}: {o} has period {tp:?} under F^{qd} - {p}, expected {m}"));

            // Block structure and the reindexing shift.
            if qd >= 2 {
                check_blocks(t, name, f, o, p, qd_u);
            }
        }
        // Conversely, true period m points of F^q − p found by the oracle
        // have period mq mod 1 and rotation p/q.
        for m in 1..=(CONVERSE_N / qd_u) {
            for s in sigma_oracle::fixed_points(f, qd_u * m, Some(p * m as i64)) {
                if true_period(&gmap, &s.point, m) != Some(m) {
                    continue;
                }
                let o = LiftedOrbit::of_point(f, &s.point, qd_u * m);
                let ok = o.as_ref().map_or(false, |o| o.period == qd_u * m && o.rotation == q(p, qd));
                t.check(ok, || format!("{name}: oracle point {} of F^{qd} - {p} has F-orbit {o:?}", s.point));
            }
        }
    }
}

fn check_blocks(t: &mut Tally, name: &str, f: &Lifting, o: &LiftedOrbit, p: i64, qd: usize) {
    let bs = match blocks(f, o, p, qd) {
        Ok(b) => b,
        Err(e) => return t.check(false, || format!("{name}: {e}")),
    };
    let n = o.period / qd;
    t.check(bs.iter().all(|b| b.len() == n), || format!("{name}: blocks of unequal size for {o}"));
    let l = reindex_shift(&bs, p);
    let moved = |l: i64| -> Vec<Vec<SPoint>> {
        bs.iter().enumerate().map(|(i, b)| b.iter().map(|x| x.translate(i as i64 * l)).collect()).collect()
    };
    let p_l = p + qd as i64 * l;
    t.check(has_increasing_block_structure(&moved(l), p_l), || format!("{name}: shift {l} does not order the blocks of {o}"));
    t.check(!has_increasing_block_structure(&moved(l - 1), p_l - qd as i64), || {
        format!("{name}: shift {} already orders the blocks of {o}", l - 1)
    });
    // The same blocks computed from F + l directly.
    let fl = f.shifted(l);
    match LiftedOrbit::of_point(&fl, &o.representative, o.period) {
        Some(ol) => match blocks(&fl, &ol, p_l, qd) {
            Ok(bl) => t.check(bl == moved(l), || format!("{name}: blocks of F{l:+} differ from P_i + i*{l}")),
            Err(e) => t.check(false, || format!("{name}: F{l:+}: {e}")),
        },
        None => t.check(false, || format!("{name}: {o} is not periodic for F{l:+}")),
    }
}

fn invariants(seed: u64) -> Report {
    let mut rng = rng_for(seed, 11);
    let mut t = Tally::default();
    let fx = fixtures();
    for (name, f) in &fx {
        check_invariants(&mut t, name, f, &mut rng);
    }
    for i in 0..INVARIANT_MAPS {
        let d = [1, 1, 0, -1, 2][i % 5];
        let f = random_lifting(&mut rng, d, MAX_NODES);
        check_invariants(&mut t, &format!("random map {i} (degree {d})"), &f, &mut rng);
    }
    let checks = t.checks;
    t.into_report(11, title(11), format!("{} fixtures + {INVARIANT_MAPS} random maps, {checks} checks", fx.len()))
}

/// Sharkovsky-largest element of `a`.
fn sh_max(a: &BTreeSet<usize>) -> Option<ShValue> {
    a.iter().map(|&n| ShValue::Nat(n)).reduce(|x, y| if sh_le(x, y) { y } else { x })
}

fn orderings() -> Report {
    use BValue::Nat;
    let mut t = Tally::default();
    let n = |k| ShValue::Nat(k);
    t.check(sh_le(n(5), n(3)), || "5 <=Sh 3".into());
    t.check(!sh_le(n(3), n(5)), || "not 3 <=Sh 5".into());
    t.check((0..12).all(|k| sh_le(n(1 << k), ShValue::TwoInf)), || "2^k <=Sh 2^inf".into());
    t.check((1..=200).all(|x| sh_le(n(1), n(x))), || "1 <=Sh x".into());
    t.check(sh_tail(n(3), 6) == (1..=6).collect(), || "sh_tail(3, 6)".into());
    t.check(sh_tail(ShValue::TwoInf, 10) == [1, 2, 4, 8].into(), || "sh_tail(2^inf, 10)".into());
    t.check(sh_tail(n(6), 10) == [1, 2, 4, 6, 8, 10].into(), || "sh_tail(6, 10)".into());
    t.check(baldwin_le(3, Nat(7), Nat(4)) == Ok(true), || "7 <=_3 4".into());
    t.check(baldwin_le(3, Nat(6), Nat(4)) == Ok(true), || "6 <=_3 4".into());
    t.check(baldwin_le(3, Nat(8), Nat(4)) == Ok(false), || "not 8 <=_3 4".into());
    t.check(baldwin_le(3, Nat(2), Nat(4)).is_err(), || "2 outside the domain of <=_3".into());
    t.check((2..8).all(|tt| is_tail(tt, &[1].into(), N_MAX) == Ok(true)), || "{1} is a tail".into());
    t.check(baldwin_tail(2, Nat(6), 10) == Ok([1, 2, 4, 6, 8, 10].into()), || "baldwin_tail(2, 6, 10)".into());
    t.check(is_tail(3, &[1, 3, 6, 12].into(), N_MAX) == Ok(true), || "{1,3,6,12} is a tail of <=_3".into());
    t.check(m_interval(&q(1, 3), &q(1, 3), 50).is_empty(), || "M(c, c) empty".into());
    t.check(m_interval(&qi(0), &q(1, 2), 10) == (3..=10).collect(), || "M(0, 1/2)".into());
    t.check(m_interval(&q(-1, 3), &q(1, 3), 6) == (1..=6).collect(), || "M(-1/3, 1/3)".into());
    t.check(lambda_set(&Rho::Rational(q(1, 2)), &[1, 2, 3].into(), 10) == [2, 4, 6].into(), || "L(1/2, {1,2,3})".into());
    t.check(lambda_set(&Rho::Rational(q(2, 4)), &[1].into(), 10) == [2].into(), || "L(2/4, {1})".into());
    t.check(lambda_set(&Rho::Irrational(q(1, 5)), &[1, 2].into(), 10).is_empty(), || "L(irrational)".into());
    let zero = || Rho::Rational(qi(0));
    let e = misiurewicz_expr(zero(), zero(), n(3), n(3));
    t.check(e.eval(N_MAX) == Ok((1..=N_MAX).collect()), || "Misiurewicz c = d = 0".into());
    let e = misiurewicz_expr(zero(), Rho::Rational(q(1, 2)), n(1), n(1));
    t.check(e.eval(N_MAX) == Ok((1..=N_MAX).collect()), || "Misiurewicz 0, 1/2".into());
    let e = misiurewicz_expr(Rho::Irrational(q(1, 5)), Rho::Rational(q(1, 2)), n(3), n(1));
    t.check(e.terms[0].eval(N_MAX) == Ok(BTreeSet::new()), || "irrational endpoint drops its term".into());
    let unit = t.checks;

    // The formula against circle-collapse maps. The Sharkovsky types at the
    // endpoints come from the oracle's per-rotation sets, the full period
    // set from the engine.
    for (name, f) in [("circle [1/3,1/2]", circle_third_half()), ("circle [-1/3,0]", circle_minus_third_zero())] {
        let rot = rotation_interval(&markov_graph(&f)).expect("degree one with cycles");
        let endpoint = |c: &Q| -> Option<ShValue> {
            let (p, den) = (c.numer().to_i64()?, c.denom().to_i64()?);
            let set = sigma_oracle::periods_with_rotation(&f, p, den, N_MAX);
            sh_max(&set.iter().map(|k| k / den as usize).collect())
        };
        let (Some(sc), Some(sd)) = (endpoint(&rot.lo), endpoint(&rot.hi)) else {
            t.check(false, || format!("{name}: no periodic orbit at an endpoint of {rot}"));
            continue;
        };
        let e = misiurewicz_expr(Rho::Rational(rot.lo.clone()), Rho::Rational(rot.hi.clone()), sc, sd);
        let want = TruncatedPeriodSet::new(N_MAX, e.eval(N_MAX).expect("rational data"));
        match periods_report(&f, N_MAX, DEFAULT_BUDGET) {
            Ok(r) => t.check(r.set == want, || format!("{name}: {e} = {want} but periods = {}", r.set)),
            Err(err) => incomplete(&mut t, name, err),
        }
        t.notes.push(format!("{name}: {rot}, {e} = {want}"));
    }
    let checks = t.checks;
    t.into_report(12, title(12), format!("{unit} ordering checks, {} circle maps", checks - unit))
}

fn block_fixture() -> Report {
    let mut t = Tally::default();
    let (f, x) = type3_block_fixture();
    let (p, qd) = (1i64, 2usize);
    match LiftedOrbit::of_point(&f, &x, 40) {
        Some(o) => {
            t.check(o.period == 6 && o.rotation == q(p, qd as i64), || format!("orbit {o} is not of period 6 and rotation 1/2"));
            match blocks(&f, &o, p, qd) {
                Ok(bs) => {
                    let gmap = power_shift(&f, qd as u32, p);
                    let types = star_type(&bs[0], &|y| gmap.eval(y));
                    t.check(types.as_ref().map_or(false, |s| s.contains(&3)), || format!("P_0 has star type {types:?}"));
                    t.check(gmap.eval(&SPoint::Real(Q::zero())) == SPoint::Real(Q::zero()), || "G(0) != 0".into());
                    let in_hull = bs[1].iter().map(SPoint::re).min() < Some(f.eval(&SPoint::Real(Q::zero())).re())
                        && Some(f.eval(&SPoint::Real(Q::zero())).re()) < bs[1].iter().map(SPoint::re).max();
                    t.check(in_hull, || "F(0) outside the hull of P_1".into());
                }
                Err(e) => t.check(false, || e.to_string()),
            }
        }
        None => t.check(false, || "fixture point is not periodic".into()),
    }
    let want = TruncatedPeriodSet::new(N_MAX, (qd..=N_MAX).step_by(qd));
    match periods_for_rotation_report(&f, p, qd as i64, N_MAX, DEFAULT_BUDGET) {
        Ok(r) => {
            t.check(r.set == want, || format!("periods(1/2) = {}, expected {want}", r.set));
            let oracle = TruncatedPeriodSet::new(ORACLE_N, sigma_oracle::periods_with_rotation(&f, p, qd as i64, ORACLE_N));
            t.check(oracle == r.set.restrict(ORACLE_N), || format!("oracle periods(1/2) = {oracle}"));
        }
        Err(e) => incomplete(&mut t, "fixture", e),
    }
    t.into_report(13, title(13), format!("periods(1/2)[1..{N_MAX}] = {want}"))
}
