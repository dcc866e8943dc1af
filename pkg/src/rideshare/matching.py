"""Pool matching on a savings graph.

Pairing ``i`` with ``j`` saves ``pi_i + pi_j - total`` vehicle distance over
sending both alone.  A maximum-weight matching on positive savings is the
same as a minimum-cost assignment in which every unmatched passenger pays its
solo trip, shifted by the constant ``sum(pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .roadnet import GridNetwork
from .sharing import TOL, Passenger, SharedQuote, best_feasible


@dataclass
class SavingsGraph:
    nodes: list[int]
    edges: dict[tuple[int, int], float] = field(default_factory=dict)
    quotes: dict[tuple[int, int], SharedQuote] = field(default_factory=dict)

    def add_edge(self, i: int, j: int, saving: float, quote: SharedQuote | None = None):
        if i == j:
            raise ValueError("self edges are not allowed")
        if not saving > 0:
            raise ValueError("savings edges must be strictly positive")
        key = (i, j) if i < j else (j, i)
        self.edges[key] = float(saving)
        if quote is not None:
            self.quotes[key] = quote

    def weight(self, i: int, j: int) -> float:
        return self.edges[(i, j) if i < j else (j, i)]


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    unmatched: tuple[int, ...]

    def total(self, g: SavingsGraph) -> float:
        return sum(g.weight(i, j) for i, j in self.pairs)

    def partner(self, i: int):
        for a, b in self.pairs:
            if a == i:
                return b
            if b == i:
                return a
        return None


def pair_saving(
    net: GridNetwork, pi_: Passenger, pj: Passenger, wait_i: float, wait_j: float
) -> tuple[float, SharedQuote] | None:
    """Saving of the cheapest feasible order, or None when no order fits both budgets."""
    quote = best_feasible(net, pi_, pj, wait_i, wait_j)
    if quote is None:
        return None
    return pi_.pi + pj.pi - quote.total, quote


def build_savings_graph(pool: Sequence[Passenger], now: float, net: GridNetwork) -> SavingsGraph:
    """Edges between pool members that could depart together at ``now`` with positive saving.

    Each member's wait is ``now - t``; a pair's saving uses its cheapest order
    that satisfies both detour budgets at those waits.
    """
    if not pool:
        raise ValueError("pool is empty")
    members = sorted(pool, key=lambda p: p.id)
    g = SavingsGraph([p.id for p in members])
    waits = [max(0.0, now - p.t) for p in members]
    for a in range(len(members)):
        pa = members[a]
        for b in range(a + 1, len(members)):
            pb = members[b]
            hit = pair_saving(net, pa, pb, waits[a], waits[b])
            if hit is not None and hit[0] > TOL:
                g.add_edge(pa.id, pb.id, hit[0], hit[1])
    return g


def max_weight_matching(g: SavingsGraph) -> Matching:
    """Maximum total saving matching (Edmonds' blossom algorithm via networkx).

    Nodes and edges are inserted in sorted order so the result is
    reproducible for a given graph.
    """
    G = nx.Graph()
    G.add_nodes_from(sorted(g.nodes))
    for (i, j) in sorted(g.edges):
        G.add_edge(i, j, weight=g.edges[(i, j)])
    mate = nx.max_weight_matching(G, maxcardinality=False)
    pairs = tuple(sorted((min(a, b), max(a, b)) for a, b in mate))
    matched = {x for pr in pairs for x in pr}
    unmatched = tuple(sorted(n for n in g.nodes if n not in matched))
    return Matching(pairs, unmatched)

