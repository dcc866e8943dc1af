import csv
import io
import itertools

import numpy as np
import pytest

from rideshare import metrics
from rideshare.demand import ArrivalProcess, ODDistribution
from rideshare.engine import generate_stream, simulate
from rideshare.roadnet import build_grid
from rideshare.sharing import make_passenger
from oracles import feasible_orders, matching_optimum

NET = build_grid(6)
DIST = ODDistribution.uniform(6)


@pytest.fixture(scope="module")
def stream():
    return generate_stream(NET, DIST, ArrivalProcess(2.0, 4), 300, 0.6)


def test_cost_reduction_extremes():
    a = make_passenger(NET, 0, 0, 35, 0.5, t=0.0)
    b = make_passenger(NET, 1, 0, 35, 0.5, t=0.0)
    assert metrics.cost_reduction(simulate(NET, [a], lambda p: 0.0)) == 0.0
    assert metrics.cost_reduction(simulate(NET, [a, b], lambda p: 0.0)) == pytest.approx(0.5)


def test_cost_reduction_from_passenger_csv(stream):
    rep = metrics.online_run(stream, NET, DIST, 2.0).report
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    vehicle = sum(float(r["vehicle_share"]) for r in rows)
    solo = sum(float(r["pi"]) for r in rows)
    assert 1 - vehicle / solo == pytest.approx(metrics.cost_reduction(rep), abs=1e-12)


def test_wait_stats_and_histogram():
    hist = metrics.wait_histogram([0.0, 0.4, 0.5, 1.2], 0.5)
    assert hist["counts"] == [2, 1, 1]
    assert hist["edges"] == [0.0, 0.5, 1.0, 1.5]
    with pytest.raises(ValueError):
        metrics.wait_histogram([1.0], 0.0)
    a = make_passenger(NET, 0, 0, 35, 0.5, t=0.0)
    rep = simulate(NET, [a], lambda p: 2.0)
    mean_wait, hist, inc = metrics.wait_stats(rep, 1.0)
    assert mean_wait == 2.0 and inc == 0.0 and sum(hist["counts"]) == 1


def test_constant_zero_wait_on_distinct_times_never_pairs(stream):
    r = metrics.constant_wait_run(0.0, stream, NET)
    assert r.cost_reduction == 0.0 and r.mean_wait == 0.0


def test_zero_flexibility_equals_zero_wait(stream):
    rigid = metrics.with_epsilon(stream, 0.0)
    a = metrics.constant_wait_run(3.0, rigid, NET).report
    b = metrics.constant_wait_run(0.0, rigid, NET).report
    assert a.to_csv() == b.to_csv()


def test_constant_wait_clamps_to_budget(stream):
    r = metrics.constant_wait_run(100.0, stream, NET)
    for log in r.report.passengers:
        assert log.tau == pytest.approx(log.epsilon * log.pi)


def brute_offline(stream, net):
    edges = {}
    for a, b in itertools.combinations(sorted(stream, key=lambda p: (p.t, p.id)), 2):
        qs = feasible_orders(net, a, b, b.t - a.t, 0.0)
        if qs:
            s = a.pi + b.pi - min(q.total for q in qs)
            if s > 1e-9:
                edges[(min(a.id, b.id), max(a.id, b.id))] = s
    value, _ = matching_optimum([p.id for p in stream], edges)
    return 1 - (sum(p.pi for p in stream) - value) / sum(p.pi for p in stream)


@pytest.mark.parametrize("seed", range(5))
def test_offline_matches_brute_force(seed):
    s = generate_stream(NET, DIST, ArrivalProcess(2.0, seed), 8, 0.6)
    r = metrics.offline_greedy(s, NET)
    assert r.cost_reduction == pytest.approx(brute_offline(s, NET), abs=1e-12)
    for log in r.report.passengers:
        assert log.wait + log.omega <= (1 + log.epsilon) * log.pi + 1e-9


def test_offline_dominates_online(stream):
    on = metrics.online_run(stream, NET, DIST, 2.0)
    off = metrics.offline_greedy(stream, NET)
    assert off.cost_reduction >= on.cost_reduction - 1e-12
    assert on.cost_reduction > 0


def test_epsilon_sweep(stream, tmp_path):
    eps = [round(0.1 * k, 1) for k in range(11)]
    res = metrics.epsilon_sweep(eps, stream[:150], NET, DIST, 2.0, params={"seed": 4})
    assert [r.params["epsilon"] for r in res] == eps
    assert res[0].cost_reduction == 0.0
    assert res[-1].cost_reduction >= res[0].cost_reduction
    path = metrics.write_results_csv(res, tmp_path / "sweep.csv", "epsilon_sweep", "epsilon")
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 11 and rows[3]["value"] == "0.3" and rows[3]["seed"] == "4"
    with pytest.raises(ValueError):
        metrics.epsilon_sweep([1.5], stream[:10], NET, DIST, 2.0)
