import numpy as np
import pytest

from rideshare.demand import ArrivalProcess, ODDistribution
from rideshare.engine import commit_pair, commit_solo, generate_stream, run, simulate
from rideshare.roadnet import build_grid
from rideshare.sharing import TOL, make_passenger
from rideshare.waiting import WaitOptimizer
from oracles import straight_line_pool

NET5 = build_grid(5)


def weighted_grid(q, seed):
    rng = np.random.default_rng(seed)
    w = {}
    for r in range(q):
        for c in range(q):
            if c + 1 < q:
                w[((r, c), (r, c + 1))] = float(rng.uniform(0.5, 1.5))
            if r + 1 < q:
                w[((r, c), (r + 1, c))] = float(rng.uniform(0.5, 1.5))
    return build_grid(q, edge_weights=w)


def test_single_passenger_goes_solo_after_its_wait():
    p = make_passenger(NET5, 0, 0, 24, 0.5, t=1.0)
    rep = simulate(NET5, [p], lambda _: 1.5)
    (log,) = rep.passengers
    assert log.partner_id is None and log.order == "SOLO"
    assert log.wait == 1.5 and log.omega == p.pi and log.departure == 2.5


def test_identical_trips_share_one_vehicle():
    a = make_passenger(NET5, 0, 0, 24, 0.5, t=0.0)
    b = make_passenger(NET5, 1, 0, 24, 0.5, t=0.5)
    rep = simulate(NET5, [a, b], lambda p: 1.0)
    (asg,) = rep.assignments
    assert asg.kind == "pair" and asg.vehicle_distance == pytest.approx(a.pi)
    assert asg.departure == 1.0
    assert [p.wait for p in rep.passengers] == [1.0, 0.5]


def test_commit_pair_and_solo():
    a = make_passenger(NET5, 0, (0, 0), (2, 2), 0.6)
    b = make_passenger(NET5, 1, (0, 1), (1, 2), 0.6)
    asg, quote = commit_pair(NET5, a, b, 0.0)
    assert quote.order.value == "IJ" and asg.vehicle_distance == 4
    assert asg.rides == (4, 2)
    with pytest.raises(ValueError):
        commit_pair(NET5, a, b, 3.0)  # wait 3 exceeds 0.6 * 4
    with pytest.raises(ValueError):
        commit_pair(NET5, a, b, -1.0)
    s = commit_solo(a, 2.0)
    assert s.waits == (2.0,) and s.vehicle_distance == a.pi


def test_rejects_wait_outside_budget():
    p = make_passenger(NET5, 0, 0, 24, 0.5)
    with pytest.raises(ValueError):
        simulate(NET5, [p], lambda _: p.max_wait + 1)
    with pytest.raises(ValueError):
        simulate(NET5, [], lambda _: 0.0)


@pytest.mark.parametrize("seed", range(6))
def test_matches_literal_event_loop(seed):
    net = weighted_grid(5, seed)
    dist = ODDistribution.uniform(5)
    stream = generate_stream(net, dist, ArrivalProcess(2.0, seed), 20, 0.6)
    rng = np.random.default_rng(100 + seed)
    taus = {p.id: float(rng.uniform(0, p.max_wait)) for p in stream}
    rep = simulate(net, stream, lambda p: taus[p.id])
    got = sorted((a.departure, tuple(sorted(a.ids))) for a in rep.assignments)
    want = sorted((t, tuple(sorted(ids))) for t, ids in straight_line_pool(net, stream, taus))
    assert got == want


@pytest.fixture(scope="module")
def uniform_run():
    net = build_grid(8)
    dist = ODDistribution.uniform(8)
    return net, run(net, dist, ArrivalProcess(2.0, 3), 400, epsilon=0.6)


def test_budget_invariant_and_conservation(uniform_run):
    net, rep = uniform_run
    ids = [i for a in rep.assignments for i in a.ids]
    assert sorted(ids) == list(range(400))
    for log in rep.passengers:
        assert log.wait + log.omega <= (1 + log.epsilon) * log.pi + TOL
        assert 0 <= log.wait <= log.tau + TOL
        assert log.tau <= log.epsilon * log.pi + TOL
        assert log.departure == pytest.approx(log.t + log.wait)
    for a in rep.assignments:
        if a.kind == "pair":
            assert sum(rep.passengers[i].vehicle_share for i in a.ids) == pytest.approx(a.vehicle_distance)


def test_pool_size_stays_bounded(uniform_run):
    net, rep = uniform_run
    events = sorted([(p.t, 1) for p in rep.passengers] + [(p.departure, -1) for p in rep.passengers],
                    key=lambda e: (e[0], -e[1]))
    size = peak = 0
    for _, step in events:
        size += step
        peak = max(peak, size)
    mean_pi = np.mean([p.pi for p in rep.passengers])
    assert peak <= max(10, 10 * 2.0 * 0.6 * mean_pi)


def test_deterministic():
    net = build_grid(6)
    dist = ODDistribution.uniform(6)
    a = run(net, dist, ArrivalProcess(2.0, 11), 150)
    b = run(net, dist, ArrivalProcess(2.0, 11), 150)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_zero_flexibility_never_waits():
    net = build_grid(6)
    dist = ODDistribution.uniform(6)
    rep = run(net, dist, ArrivalProcess(2.0, 5), 200, epsilon=0.0)
    for log in rep.passengers:
        assert log.tau == 0 and log.wait == 0 and log.omega == pytest.approx(log.pi)


def test_stream_generation():
    dist = ODDistribution.uniform(5)
    s = generate_stream(NET5, dist, ArrivalProcess(3.0, 1), 500, 0.4)
    t = np.array([p.t for p in s])
    assert np.all(np.diff(t) > 0)
    assert all(p.s != p.d for p in s)
    assert np.mean(np.diff(t, prepend=0.0)) == pytest.approx(1 / 3.0, rel=0.15)
    with pytest.raises(ValueError):
        generate_stream(build_grid(4), dist, ArrivalProcess(3.0, 1), 5, 0.4)
