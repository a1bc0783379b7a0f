use num_traits::Signed;
use sigma_core::markov::{loop_sign, markov_graph, to_dot, Chart, SignSet};
use sigma_core::sigmamap::{build_lifting, SigmaMap};
use sigma_core::space::{q, qi, SPoint};
use sigma_core::{basic_intervals, constructions, Lifting};

fn r(x: sigma_core::Q) -> SPoint {
    SPoint::Real(x)
}

#[test]
fn partition_of_mixed_nodes() {
    let p = basic_intervals(&[r(q(1, 2)), SPoint::branch(0, q(1, 3)), SPoint::top(0), r(qi(0))]);
    assert_eq!(p.reals, vec![qi(0), q(1, 2)]);
    assert_eq!(p.heights, vec![qi(0), q(1, 3), qi(1)]);
    let shape: Vec<(Chart, _, _)> = p.intervals.iter().map(|i| (i.chart, i.lo.clone(), i.hi.clone())).collect();
    assert_eq!(
        shape,
        vec![
            (Chart::Real, qi(0), q(1, 2)),
            (Chart::Real, q(1, 2), qi(1)),
            (Chart::Branch, qi(0), q(1, 3)),
            (Chart::Branch, q(1, 3), qi(1)),
        ]
    );
}

/// `x ↦ x + 1` with the branches carried along.
fn translation() -> Lifting {
    build_lifting(1, vec![(r(qi(0)), r(qi(1))), (SPoint::top(0), SPoint::top(1))]).unwrap()
}

#[test]
fn translation_graph_is_two_self_loops() {
    let g = markov_graph(&translation());
    assert_eq!(g.n_vertices(), 2);
    assert_eq!(g.edges.len(), 2);
    for e in &g.edges {
        assert_eq!((e.from, e.to, e.disp), (e.from, e.from, 1));
        assert_eq!(e.signs, SignSet::PLUS);
    }
}

/// Every edge is checked against direct evaluation: the affine chart map
/// must agree with the lifting at the two ends of its domain and at the
/// midpoint, landing in the target interval translated by the displacement.
fn check_edges_by_evaluation(f: &Lifting) {
    let g = markov_graph(f);
    for e in &g.edges {
        let src = &g.intervals[e.from];
        let dst = &g.intervals[e.to];
        let (s0, s1) = &e.domain;
        for s in [s0.clone(), s1.clone(), (s0 + s1) / qi(2)] {
            let direct = f.eval(&src.point(&s));
            let via_oracle = sigma_oracle::sigma::eval(f, &src.point(&s));
            assert_eq!(direct, via_oracle, "evaluators disagree at {s}");
            let predicted = dst.point(&e.map.apply(&s)).translate(e.disp);
            assert_eq!(direct, predicted, "edge {} -> {} disp {} at {s}", g.name(e.from), g.name(e.to), e.disp);
        }
    }
}

#[test]
fn edges_agree_with_evaluation_on_examples() {
    check_edges_by_evaluation(&constructions::example_5_1(3, None).unwrap());
    check_edges_by_evaluation(&constructions::example_5_2(None).unwrap());
    check_edges_by_evaluation(&constructions::example_6_3(3, None, None).unwrap());
    check_edges_by_evaluation(&constructions::example_6_4());
    check_edges_by_evaluation(&constructions::type3_block_fixture().0);
}

#[test]
fn self_loop_signs_follow_slopes() {
    let f = constructions::example_5_1(4, None).unwrap();
    let g = markov_graph(&f);
    for (i, e) in g.edges.iter().enumerate() {
        if e.from == e.to {
            let s = loop_sign(&g, &[i]).unwrap();
            assert_eq!(s, SignSet::of(e.map.a.is_positive()), "self-loop {}", g.name(e.from));
        }
    }
}

#[test]
fn dot_output_names_every_vertex() {
    let g = markov_graph(&constructions::example_5_2(None).unwrap());
    let dot = to_dot(&g);
    assert!(dot.starts_with("digraph"));
    for v in 0..g.n_vertices() {
        assert!(dot.contains(g.name(v)), "{} missing from dot output", g.name(v));
    }
}
