import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rideshare.matching import SavingsGraph, build_savings_graph, max_weight_matching
from rideshare.roadnet import build_grid
from rideshare.sharing import Passenger, make_passenger
from oracles import feasible_orders, greedy_matching_total, matching_optimum


def graph(edges, nodes=None):
    g = SavingsGraph(sorted(nodes or {x for e in edges for x in e}))
    for (i, j), w in edges.items():
        g.add_edge(i, j, w)
    return g


def test_empty_edge_set():
    m = max_weight_matching(graph({}, nodes=[1, 2, 3]))
    assert m.pairs == () and m.unmatched == (1, 2, 3)


def test_path_beats_greedy():
    g = graph({(0, 1): 2, (1, 2): 3, (2, 3): 2})
    m = max_weight_matching(g)
    assert m.pairs == ((0, 1), (2, 3))
    assert m.total(g) == 4
    assert greedy_matching_total(g.edges) == 3


def test_triangle():
    g = graph({(0, 1): 3, (1, 2): 2, (0, 2): 1})
    m = max_weight_matching(g)
    assert m.pairs == ((0, 1),) and m.unmatched == (2,)


def test_odd_cycle_equal_weights():
    g = graph({(i, (i + 1) % 5): 1.0 for i in range(5)})
    assert len(max_weight_matching(g).pairs) == 2


def test_graph_rejects_bad_edges():
    g = SavingsGraph([0, 1])
    with pytest.raises(ValueError):
        g.add_edge(0, 0, 1.0)
    with pytest.raises(ValueError):
        g.add_edge(0, 1, 0.0)


def random_graph(rng, n, p=0.5, integer=True):
    edges = {}
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges[(i, j)] = float(rng.integers(1, 20)) if integer else float(rng.uniform(0.1, 10))
    return graph(edges, nodes=range(n))


def test_matches_brute_force_on_random_graphs():
    rng = np.random.default_rng(42)
    for _ in range(60):
        g = random_graph(rng, int(rng.integers(1, 11)), p=float(rng.uniform(0.2, 0.9)), integer=False)
        m = max_weight_matching(g)
        best, _ = matching_optimum(g.nodes, g.edges)
        assert m.total(g) == pytest.approx(best, abs=1e-9)
        assert m.total(g) >= greedy_matching_total(g.edges) - 1e-9
        assert all(m.total(g) >= w - 1e-9 for w in g.edges.values())
        covered = [x for pr in m.pairs for x in pr] + list(m.unmatched)
        assert sorted(covered) == sorted(g.nodes)


def test_deterministic():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 10)
    assert max_weight_matching(g) == max_weight_matching(g)


NET5 = build_grid(5)


def test_savings_graph_single_and_identical():
    a = make_passenger(NET5, 0, 0, 24, 0.5, t=0.0)
    assert build_savings_graph([a], 0.0, NET5).edges == {}
    b = make_passenger(NET5, 1, 0, 24, 0.5, t=0.0)
    g = build_savings_graph([a, b], 0.0, NET5)
    assert g.edges == {(0, 1): a.pi}


def test_savings_graph_matches_pairwise_check():
    rng = np.random.default_rng(8)
    for trial in range(20):
        pool = []
        for k in range(5):
            s, d = (int(x) for x in rng.choice(25, 2, replace=False))
            pool.append(make_passenger(NET5, k, s, d, float(rng.uniform(0.2, 1.0)), t=float(rng.uniform(0, 2))))
        now = max(p.t for p in pool)
        g = build_savings_graph(pool, now, NET5)
        expected = {}
        for a, b in itertools.combinations(pool, 2):
            qs = feasible_orders(NET5, a, b, now - a.t, now - b.t)
            if qs:
                saving = a.pi + b.pi - min(q.total for q in qs)
                if saving > 1e-9:
                    expected[(a.id, b.id)] = saving
        assert g.edges == pytest.approx(expected)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 24), st.integers(0, 24), st.floats(0, 1)), min_size=1, max_size=8))
def test_cost_equivalence(trips):
    pool = [make_passenger(NET5, k, s, d, e) for k, (s, d, e) in enumerate(trips) if s != d]
    if not pool:
        return
    g = build_savings_graph(pool, 0.0, NET5)
    m = max_weight_matching(g)
    by_id = {p.id: p for p in pool}
    cost = sum(g.quotes[pr].total for pr in m.pairs) + sum(by_id[i].pi for i in m.unmatched)
    assert cost == pytest.approx(sum(p.pi for p in pool) - m.total(g))
    # no other matching is cheaper
    best, _ = matching_optimum(g.nodes, g.edges)
    assert m.total(g) == pytest.approx(best)
