"""Event-driven simulation of the online pool.

Each arriving passenger gets a waiting time on arrival and joins the pool.
When the earliest deadline ``t + tau`` in the pool (the leaving candidate)
comes due, the whole pool is matched on savings; every matched pair departs
at that instant and the candidate leaves alone if it was not matched.
Arrivals at exactly the deadline are processed before the departure.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .demand import ArrivalProcess, ODDistribution, next_interarrival, sample_passenger
from .matching import build_savings_graph, max_weight_matching
from .roadnet import GridNetwork
from .sharing import Passenger, RideOrder, SharedQuote, best_feasible
from .waiting import WaitOptimizer

logger = logging.getLogger(__name__)

LOG_COLUMNS = (
    "id", "s", "d", "epsilon", "t", "pi", "tau", "wait", "omega",
    "partner_id", "order", "vehicle_share", "departure",
)


@dataclass(frozen=True)
class Assignment:
    kind: str  # "pair" or "solo"
    ids: tuple
    order: str
    vehicle_distance: float
    waits: tuple
    rides: tuple
    departure: float


@dataclass(frozen=True)
class PassengerLog:
    id: int
    s: int
    d: int
    epsilon: float
    t: float
    pi: float
    tau: float
    wait: float
    omega: float
    partner_id: Optional[int]
    order: str
    vehicle_share: float
    departure: float


@dataclass
class SimReport:
    assignments: list[Assignment]
    passengers: list[PassengerLog]
    config: dict = field(default_factory=dict)

    def metrics(self, bin_width: float = 0.5) -> dict:
        from .metrics import summarize

        return summarize(self, bin_width)

    def to_dict(self, bin_width: float = 0.5) -> dict:
        return {
            "config": self.config,
            "metrics": self.metrics(bin_width),
            "assignments": [asdict(a) for a in self.assignments],
            "passengers": [asdict(p) for p in self.passengers],
        }

    def to_json(self, bin_width: float = 0.5) -> str:
        return json.dumps(self.to_dict(bin_width), sort_keys=True, indent=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LOG_COLUMNS)
        for p in self.passengers:
            row = asdict(p)
            w.writerow(["" if row[c] is None else row[c] for c in LOG_COLUMNS])
        return buf.getvalue()


def generate_stream(
    net: GridNetwork,
    dist: ODDistribution,
    proc: ArrivalProcess,
    n_passengers: int,
    epsilon: float,
    rng: Optional[np.random.Generator] = None,
) -> list[Passenger]:
    """Draw ``n_passengers`` with cumulative exponential arrival times.

    Per passenger the interarrival gap is drawn first, then origin and
    destination, all from one stream seeded by ``proc.seed`` unless ``rng``
    is given.
    """
    if n_passengers < 1:
        raise ValueError("need at least one passenger")
    if dist.q != net.q:
        raise ValueError(f"distribution is for q={dist.q}, network has q={net.q}")
    rng = np.random.default_rng(proc.seed) if rng is None else rng
    t = 0.0
    out = []
    for i in range(n_passengers):
        t += next_interarrival(proc, rng)
        s, d = sample_passenger(dist, rng)
        out.append(Passenger(i, s, d, float(epsilon), t, net.shortest_len(s, d)))
    return out


def commit_pair(net: GridNetwork, pi_: Passenger, pj: Passenger, now: float) -> tuple[Assignment, SharedQuote]:
    """Dispatch ``pi_`` and ``pj`` together at ``now`` on their cheapest feasible order."""
    wait_i, wait_j = now - pi_.t, now - pj.t
    if wait_i < 0 or wait_j < 0:
        raise ValueError("cannot dispatch a passenger before it arrives")
    quote = best_feasible(net, pi_, pj, wait_i, wait_j)
    if quote is None:
        raise ValueError(f"passengers {pi_.id} and {pj.id} cannot share at t={now}")
    a = Assignment(
        "pair", (pi_.id, pj.id), quote.order.value, quote.total,
        (wait_i, wait_j), (quote.ride_i, quote.ride_j), now,
    )
    return a, quote


def commit_solo(p: Passenger, now: float) -> Assignment:
    return Assignment("solo", (p.id,), RideOrder.SOLO.value, p.pi, (now - p.t,), (p.pi,), now)


def simulate(
    net: GridNetwork,
    stream: Sequence[Passenger],
    tau_fn: Callable[[Passenger], float],
    config: Optional[dict] = None,
) -> SimReport:
    """Run the online pool over a fixed passenger stream (sorted by arrival time)."""
    if not stream:
        raise ValueError("empty passenger stream")
    n = len(stream)
    pool: dict[int, Passenger] = {}
    deadline: dict[int, float] = {}
    taus: dict[int, float] = {}
    assignments: list[Assignment] = []
    logs: dict[int, PassengerLog] = {}
    nxt = 0

    def admit(p: Passenger):
        tau = float(tau_fn(p))
        if tau < 0 or tau > p.max_wait + 1e-9:
            raise ValueError(f"waiting time {tau} outside [0, {p.max_wait}] for passenger {p.id}")
        pool[p.id] = p
        taus[p.id] = tau
        deadline[p.id] = p.t + tau

    def candidate():
        return min(pool, key=lambda i: (deadline[i], i))

    while len(logs) < n:
        if not pool:
            admit(stream[nxt])
            nxt += 1
        k = candidate()
        theta = deadline[k]
        while nxt < n and stream[nxt].t <= theta:
            admit(stream[nxt])
            nxt += 1
            k = candidate()
            theta = deadline[k]

        members = list(pool.values())
        matching = max_weight_matching(build_savings_graph(members, theta, net))
        for i, j in matching.pairs:
            a, quote = commit_pair(net, pool[i], pool[j], theta)
            assignments.append(a)
            for me, other, wait, ride in ((i, j, a.waits[0], quote.ride_i), (j, i, a.waits[1], quote.ride_j)):
                p = pool[me]
                logs[me] = PassengerLog(
                    p.id, p.s, p.d, p.epsilon, p.t, p.pi, taus[me], wait, ride,
                    other, a.order, a.vehicle_distance / 2.0, theta,
                )
        departed = [x for pr in matching.pairs for x in pr]
        if k not in departed:
            p = pool[k]
            a = commit_solo(p, theta)
            assignments.append(a)
            logs[k] = PassengerLog(
                p.id, p.s, p.d, p.epsilon, p.t, p.pi, taus[k], a.waits[0], p.pi,
                None, a.order, p.pi, theta,
            )
            departed.append(k)
        for x in departed:
            del pool[x], deadline[x]

    ordered = [logs[p.id] for p in stream]
    return SimReport(assignments, ordered, dict(config or {}))


def run(
    net: GridNetwork,
    dist: ODDistribution,
    proc: ArrivalProcess,
    n_passengers: int,
    epsilon: float = 0.6,
    cdf_mode: str = "paper",
    waiting_mode: str = "auto",
    samples: int = 20000,
    delta_u_fraction: float = 1.0 / 50.0,
    config: Optional[dict] = None,
) -> SimReport:
    """Generate a passenger stream and simulate it with optimal waiting times."""
    stream = generate_stream(net, dist, proc, n_passengers, epsilon)
    optimizer = WaitOptimizer(
        net, dist, proc.lam, cdf_mode=cdf_mode, mode=waiting_mode, samples=samples,
        delta_u_fraction=delta_u_fraction, seed=proc.seed if proc.seed is not None else 0,
    )
    echo = {
        "arrivals.lambda": proc.lam, "arrivals.seed": proc.seed, "cdf.mode": cdf_mode,
        "grid.q": net.q, "passengers.epsilon": epsilon, "passengers.n": n_passengers,
        "waiting.delta_u_fraction": delta_u_fraction, "waiting.mode": optimizer.mode,
        "waiting.samples": samples,
    }
    echo.update(config or {})
    return simulate(net, stream, optimizer, echo)
