"""Evaluation quantities, baselines and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .demand import ODDistribution
from .engine import Assignment, PassengerLog, SimReport, simulate
from .matching import SavingsGraph, max_weight_matching, pair_saving
from .roadnet import GridNetwork
from .sharing import TOL, Passenger
from .waiting import WaitOptimizer

RESULT_COLUMNS = ("experiment", "param", "value", "cost_reduction", "mean_wait", "mean_travel_increase", "seed")


@dataclass
class ExperimentResult:
    cost_reduction: float
    mean_wait: float
    mean_travel_increase: float
    wait_histogram: dict
    params: dict = field(default_factory=dict)
    report: Optional[SimReport] = field(default=None, repr=False, compare=False)

    def row(self) -> dict:
        return {
            "cost_reduction": self.cost_reduction,
            "mean_wait": self.mean_wait,
            "mean_travel_increase": self.mean_travel_increase,
            **self.params,
        }


def cost_reduction(report: SimReport) -> float:
    """``1 - vehicle distance / sum of solo shortest paths``."""
    if not report.passengers:
        raise ValueError("empty report")
    vehicle = sum(a.vehicle_distance for a in report.assignments)
    solo = sum(p.pi for p in report.passengers)
    return 1.0 - vehicle / solo


def wait_histogram(waits: Sequence[float], bin_width: float) -> dict:
    if not bin_width > 0:
        raise ValueError("bin width must be positive")
    waits = np.asarray(waits, dtype=float)
    n_bins = max(1, int(np.floor(waits.max() / bin_width + 1e-9)) + 1) if waits.size else 1
    counts = np.bincount(np.floor(waits / bin_width + 1e-9).astype(int), minlength=n_bins)
    return {"bin_width": bin_width, "edges": [k * bin_width for k in range(n_bins + 1)], "counts": counts.tolist()}


def wait_stats(report: SimReport, bin_width: float = 0.5) -> tuple[float, dict, float]:
    """Mean realized wait, wait histogram and mean ride-time increase over the shortest path."""
    if not report.passengers:
        raise ValueError("empty report")
    waits = [p.wait for p in report.passengers]
    increase = [p.omega - p.pi for p in report.passengers]
    return float(np.mean(waits)), wait_histogram(waits, bin_width), float(np.mean(increase))


def summarize(report: SimReport, bin_width: float = 0.5) -> dict:
    mean_wait, hist, increase = wait_stats(report, bin_width)
    n_pairs = sum(1 for a in report.assignments if a.kind == "pair")
    return {
        "cost_reduction": cost_reduction(report),
        "mean_wait": mean_wait,
        "mean_travel_increase": increase,
        "mean_tau": float(np.mean([p.tau for p in report.passengers])),
        "n_passengers": len(report.passengers),
        "n_pairs": n_pairs,
        "n_solo": len(report.assignments) - n_pairs,
        "wait_histogram": hist,
    }


def result_from_report(report: SimReport, params: dict, bin_width: float = 0.5) -> ExperimentResult:
    mean_wait, hist, increase = wait_stats(report, bin_width)
    return ExperimentResult(cost_reduction(report), mean_wait, increase, hist, dict(params), report)


def online_run(
    stream: Sequence[Passenger],
    net: GridNetwork,
    dist: ODDistribution,
    lam: float,
    cdf_mode: str = "paper",
    waiting_mode: str = "auto",
    samples: int = 20000,
    delta_u_fraction: float = 1.0 / 50.0,
    seed: int = 0,
    bin_width: float = 0.5,
    params: Optional[dict] = None,
) -> ExperimentResult:
    opt = WaitOptimizer(net, dist, lam, cdf_mode, waiting_mode, samples, delta_u_fraction, seed)
    config = {"policy": "optimal", "cdf.mode": cdf_mode, "waiting.mode": opt.mode, "seed": seed}
    config.update(params or {})
    report = simulate(net, stream, opt, config)
    return result_from_report(report, config, bin_width)


def constant_wait_run(
    tau_const: float, stream: Sequence[Passenger], net: GridNetwork, bin_width: float = 0.5,
    params: Optional[dict] = None,
) -> ExperimentResult:
    """Same pool dynamics with every waiting time set to ``min(tau_const, epsilon * pi)``."""
    if tau_const < 0:
        raise ValueError("constant waiting time must be non-negative")
    config = {"policy": "constant", "tau_const": tau_const}
    config.update(params or {})
    report = simulate(net, stream, lambda p: min(tau_const, p.max_wait), config)
    return result_from_report(report, config, bin_width)


def offline_graph(stream: Sequence[Passenger], net: GridNetwork) -> SavingsGraph:
    """Savings graph over the whole stream with hindsight waits.

    The earlier passenger of a pair waits until the later one arrives and the
    later one does not wait.  Pairs further apart than the earlier
    passenger's slack ``epsilon * pi`` can never fit and are skipped.
    """
    ordered = sorted(stream, key=lambda p: (p.t, p.id))
    g = SavingsGraph(sorted(p.id for p in stream))
    for a, early in enumerate(ordered):
        for late in ordered[a + 1:]:
            gap = late.t - early.t
            if gap > early.max_wait + TOL:
                break
            hit = pair_saving(net, early, late, gap, 0.0)
            if hit is not None and hit[0] > TOL:
                g.add_edge(early.id, late.id, hit[0], hit[1])
    return g


def offline_greedy(
    stream: Sequence[Passenger], net: GridNetwork, bin_width: float = 0.5, params: Optional[dict] = None
) -> ExperimentResult:
    """One global maximum-saving matching with all arrival times known in advance."""
    by_id = {p.id: p for p in stream}
    g = offline_graph(stream, net)
    m = max_weight_matching(g)
    assignments, logs = [], {}
    for i, j in m.pairs:
        early, late = sorted((by_id[i], by_id[j]), key=lambda p: (p.t, p.id))
        hit = pair_saving(net, early, late, late.t - early.t, 0.0)
        _, quote = hit
        waits = (late.t - early.t, 0.0)
        a = Assignment("pair", (early.id, late.id), quote.order.value, quote.total, waits,
                       (quote.ride_i, quote.ride_j), late.t)
        assignments.append(a)
        for p, other, wait, ride in ((early, late, waits[0], quote.ride_i), (late, early, 0.0, quote.ride_j)):
            logs[p.id] = PassengerLog(p.id, p.s, p.d, p.epsilon, p.t, p.pi, wait, wait, ride,
                                      other.id, a.order, quote.total / 2.0, late.t)
    for i in m.unmatched:
        p = by_id[i]
        assignments.append(Assignment("solo", (i,), "SOLO", p.pi, (0.0,), (p.pi,), p.t))
        logs[i] = PassengerLog(p.id, p.s, p.d, p.epsilon, p.t, p.pi, 0.0, 0.0, p.pi, None, "SOLO", p.pi, p.t)
    config = {"policy": "offline_greedy"}
    config.update(params or {})
    report = SimReport(assignments, [logs[p.id] for p in stream], config)
    return result_from_report(report, config, bin_width)


def with_epsilon(stream: Iterable[Passenger], epsilon: float) -> list[Passenger]:
    return [dataclasses.replace(p, epsilon=float(epsilon)) for p in stream]


def epsilon_sweep(
    epsilons: Sequence[float],
    stream: Sequence[Passenger],
    net: GridNetwork,
    dist: ODDistribution,
    lam: float,
    **kwargs,
) -> list[ExperimentResult]:
    """One online run per flexibility value on the same passengers."""
    base = dict(kwargs.pop("params", None) or {})
    out = []
    for eps in epsilons:
        if not 0 <= eps <= 1:
            raise ValueError(f"epsilon {eps} outside [0, 1]")
        params = dict(base)
        params["epsilon"] = float(eps)
        out.append(online_run(with_epsilon(stream, eps), net, dist, lam, params=params, **kwargs))
    return out


def write_results_csv(results: Sequence[ExperimentResult], path, experiment: str, param: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in results:
            w.writerow([experiment, param, r.params.get(param, ""), r.cost_reduction, r.mean_wait,
                        r.mean_travel_increase, r.params.get("seed", "")])
    return path


def write_results_json(results: Sequence[ExperimentResult], path, config: Optional[dict] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [
        {"params": r.params, "cost_reduction": r.cost_reduction, "mean_wait": r.mean_wait,
         "mean_travel_increase": r.mean_travel_increase, "wait_histogram": r.wait_histogram}
        for r in results
    ]
    payload = {"config": config or {}, "results": rows}
    path.write_text(json.dumps(payload, sort_keys=True, indent=1))
    return path
