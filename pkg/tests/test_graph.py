"""Vertex, edge and window graph types, unrolling and DMAG validation.

Expected values are tagged by provenance: ``derived`` values come from the
independent oracles in ``oracles.py``, ``published`` values restate a
worked example from the literature, ``trivial`` ones follow from definitions.
"""

import pytest

from oracles import ancestors, unroll_parents
from tsgraph import (
    CIRCLE,
    HEAD,
    TAIL,
    GraphError,
    GraphKind,
    ObservationScheme,
    TsDagTemplate,
    Vertex,
    WindowGraph,
    ancestors_in,
    induced_window,
    unroll,
    validate_dmag,
)
from tsgraph.graph import edge_difference, is_subgraph, scale_times, shift_times

V = Vertex


def test_edges_are_stored_in_canonical_order():
    # trivial: (time, var) ordering puts the earlier endpoint first
    g = WindowGraph(2, [-1, 0], [(V(0, 0), V(1, -1), "<--")])
    assert g.edge_list() == [(V(1, -1), V(0, 0), TAIL, HEAD)]
    assert g.edge_type(V(0, 0), V(1, -1)) == "<--"
    assert g.edge_type(V(1, -1), V(0, 0)) == "-->"


@pytest.mark.parametrize("ma,mb", [(TAIL, TAIL), (TAIL, CIRCLE), (CIRCLE, TAIL)])
def test_forbidden_mark_combinations(ma, mb):
    with pytest.raises(GraphError):
        WindowGraph(2, [0], [(V(0, 0), V(1, 0), ma, mb)])


def test_rejects_foreign_endpoint_and_self_loop():
    with pytest.raises(GraphError):
        WindowGraph(2, [0], [(V(0, 0), V(1, -1), "-->")])
    with pytest.raises(GraphError):
        WindowGraph(2, [0], [(V(0, 0), V(0, 0), "-->")])


def test_conflicting_duplicate_edges_rejected():
    with pytest.raises(GraphError):
        WindowGraph(2, [0], [(V(0, 0), V(1, 0), "-->"), (V(1, 0), V(0, 0), "-->")])


def test_dag_kind_is_validated():
    with pytest.raises(GraphError):
        WindowGraph(2, [0], [(V(0, 0), V(1, 0), "<->")], kind=GraphKind.DAG)
    cyc = [(V(0, 0), V(1, 0), "-->"), (V(1, 0), V(2, 0), "-->"), (V(2, 0), V(0, 0), "-->")]
    with pytest.raises(GraphError):
        WindowGraph(3, [0], cyc, kind=GraphKind.DAG)


def test_equality_ignores_names_and_kind():
    a = WindowGraph(2, [0], [(V(0, 0), V(1, 0), "-->")], names=("A", "B"))
    b = WindowGraph(2, [0], {(V(0, 0), V(1, 0)): (TAIL, HEAD)}, kind=GraphKind.DMAG)
    assert a == b and hash(a) == hash(b)


def test_neighbourhood_queries():
    g = WindowGraph(3, [0], [(V(0, 0), V(1, 0), "-->"), (V(1, 0), V(2, 0), "<->")])
    assert g.parents(V(1, 0)) == [V(0, 0)]
    assert g.spouses(V(1, 0)) == [V(2, 0)]
    assert g.children(V(0, 0)) == [V(1, 0)]
    assert g.skeleton() == frozenset({(V(0, 0), V(1, 0)), (V(1, 0), V(2, 0))})


# -- templates and unrolling -------------------------------------------------


def test_template_invariants():
    with pytest.raises(GraphError):
        TsDagTemplate(1, frozenset({(0, 0, 0)}))
    with pytest.raises(GraphError):
        TsDagTemplate(2, frozenset({(0, 1, 0), (1, 0, 0)}))
    with pytest.raises(GraphError):
        TsDagTemplate(2, frozenset({(0, 1, -1)}))
    assert TsDagTemplate(2, frozenset()).order == 0


def test_unroll_self_lag_chain():
    # trivial: a single lag-1 self edge unrolls into a chain
    g = unroll(TsDagTemplate(1, frozenset({(0, 0, 1)})), 2)
    assert g.edge_list() == [(V(0, -2), V(0, -1), TAIL, HEAD), (V(0, -1), V(0, 0), TAIL, HEAD)]


def test_unroll_d_a(d_a):
    # derived: hand expansion of the template
    g = unroll(d_a, 2)
    assert len(g.vertices) == 6
    assert {(a, b) for a, b, *_ in g.edge_list()} == {
        (V(0, -2), V(0, -1)),
        (V(0, -1), V(0, 0)),
        (V(0, -2), V(1, -1)),
        (V(0, -1), V(1, 0)),
    }


def test_unroll_depth_zero_keeps_contemporaneous_edges():
    t = TsDagTemplate(3, frozenset({(0, 1, 0), (1, 2, 1), (2, 2, 2)}))
    g = unroll(t, 0)
    assert g.edge_list() == [(V(0, 0), V(1, 0), TAIL, HEAD)]


def test_unroll_matches_oracle(corpus):
    for template, _ in corpus[:100]:
        g = unroll(template, 3)
        parents = unroll_parents(template, 3)
        for v in g.vertices:
            assert set(g.parents(v)) == parents[tuple(v)]


# -- ancestry ----------------------------------------------------------------


def test_ancestors_in_d_a(d_a):
    g = unroll(d_a, 2)
    # derived: BFS oracle over the template expansion
    assert ancestors_in(g, V(1, 0)) == {V(1, 0), V(0, -1), V(0, -2)}
    assert ancestors_in(g, V(0, -2)) == {V(0, -2)}
    assert ancestors_in(WindowGraph(1, [0]), V(0, 0)) == {V(0, 0)}


def test_ancestors_match_bfs_oracle(corpus):
    for template, _ in corpus[:100]:
        g = unroll(template, 3)
        parents = unroll_parents(template, 3)
        for v in g.vertices:
            assert {tuple(u) for u in ancestors_in(g, v)} == ancestors(parents, tuple(v))


def test_ancestry_rejects_circles():
    g = WindowGraph(2, [0], [(V(0, 0), V(1, 0), "o->")])
    with pytest.raises(GraphError):
        ancestors_in(g, V(1, 0))


# -- DMAG validation -----------------------------------------------------------


def test_dag_windows_are_dmags(corpus):
    # trivial: DAGs are ancestral and maximal
    for template, _ in corpus[:60]:
        assert validate_dmag(unroll(template, 2)).valid


def test_almost_directed_cycle_detected():
    # derived: A -> C -> B together with A <-> B
    a, b, c = V(0, 0), V(1, 0), V(2, 0)
    g = WindowGraph(3, [0], [(a, b, "<->"), (a, c, "-->"), (c, b, "-->")])
    rep = validate_dmag(g)
    assert not rep.ancestral
    assert rep.violations[0][0] == "almost_directed_cycle"


def test_collider_without_ancestry_is_not_inducing():
    # derived: A <-> B <-> C, B has no children
    a, b, c = V(0, 0), V(1, 0), V(2, 0)
    rep = validate_dmag(WindowGraph(3, [0], [(a, b, "<->"), (b, c, "<->")]))
    assert rep.ancestral and rep.maximal


def test_inducing_path_found():
    # derived: a <-> b <-> c <-> d with b -> d and c -> a; the colliders b and c
    # are ancestors of d and a, which are not adjacent
    a, b, c, d = V(0, 0), V(1, 0), V(2, 0), V(3, 0)
    g = WindowGraph(4, [0], [(a, b, "<->"), (b, c, "<->"), (c, d, "<->"), (b, d, "-->"), (c, a, "-->")])
    rep = validate_dmag(g)
    assert rep.ancestral and not rep.maximal
    assert rep.violations == (("inducing_path", (a, b, c, d)),)
    assert validate_dmag(g.replace(edges={**g.edges, (a, d): (HEAD, HEAD)})).valid


def test_directed_cycle_reported():
    a, b = V(0, 0), V(1, 0)
    c = V(2, 0)
    g = WindowGraph(3, [0], [(a, b, "-->"), (b, c, "-->"), (c, a, "-->")])
    rep = validate_dmag(g)
    assert not rep.ancestral and rep.violations[0][0] == "directed_cycle"


def test_validate_rejects_circles():
    with pytest.raises(GraphError):
        validate_dmag(WindowGraph(2, [0], [(V(0, 0), V(1, 0), "o-o")]))


# -- windows -------------------------------------------------------------------


def test_induced_window_full_range_is_identity(m_a):
    assert induced_window(m_a, -2, 0) == m_a


def test_induced_window_of_unroll(d_a):
    # derived: the latest two steps of a depth-2 unroll equal a depth-1 unroll
    assert induced_window(unroll(d_a, 2), -1, 0) == unroll(d_a, 1)
    assert shift_times(induced_window(unroll(d_a, 2), -2, -1), 1) == unroll(d_a, 1)


def test_induced_single_step(m_a):
    # derived: brute-force marginal oracle gives a lone O1 <-> O2 at -2
    g = induced_window(m_a, -2, -2)
    assert g.edge_list() == [(V(0, -2), V(1, -2), HEAD, HEAD)]


def test_induced_window_errors(m_a):
    with pytest.raises(GraphError):
        induced_window(m_a, 0, -1)
    with pytest.raises(GraphError):
        induced_window(m_a, 3, 5)


def test_induced_window_of_dmag_is_dmag(corpus):
    from tsgraph import ts_dmag

    for template, scheme in corpus[:80]:
        m = ts_dmag(template, scheme)
        for t1 in m.times:
            for t2 in m.times:
                if t1 <= t2:
                    assert validate_dmag(induced_window(m, t1, t2)).valid


def test_scale_times_round_trip(m_a):
    from fractions import Fraction

    assert scale_times(scale_times(m_a, 2), Fraction(1, 2)) == m_a
    with pytest.raises(GraphError):
        scale_times(m_a, Fraction(1, 2))


def test_subgraph_and_difference(m_a):
    from tsgraph import stationarify

    st = stationarify(m_a)
    assert is_subgraph(st, m_a)
    assert not is_subgraph(m_a, st)
    assert edge_difference(m_a, st) == [(V(0, -2), V(1, -2), "<->")]


def test_observation_scheme_times():
    assert ObservationScheme((0,), 4, 2).times == (-4, -2, 0)
    assert ObservationScheme((0,), 5, 2).times == (-4, -2, 0)
    with pytest.raises(GraphError):
        ObservationScheme((), 1)
