"""Shared-ride cost model for two passengers in one vehicle.

A ride order is named by two letters: who is picked up first and who is
dropped off first.  Every leg between stops follows a shortest path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .roadnet import GridNetwork

TOL = 1e-9


class RideOrder(str, enum.Enum):
    IJ = "IJ"  # s_i -> s_j -> d_j -> d_i
    II = "II"  # s_i -> s_j -> d_i -> d_j
    JI = "JI"  # s_j -> s_i -> d_i -> d_j
    JJ = "JJ"  # s_j -> s_i -> d_j -> d_i
    SOLO = "SOLO"

    def swapped(self) -> "RideOrder":
        return _SWAP[self]


_SWAP = {
    RideOrder.IJ: RideOrder.JI,
    RideOrder.JI: RideOrder.IJ,
    RideOrder.II: RideOrder.JJ,
    RideOrder.JJ: RideOrder.II,
    RideOrder.SOLO: RideOrder.SOLO,
}
SHARED_ORDERS = (RideOrder.IJ, RideOrder.II, RideOrder.JI, RideOrder.JJ)


@dataclass(frozen=True)
class Passenger:
    id: int
    s: int
    d: int
    epsilon: float
    t: float
    pi: float

    def __post_init__(self):
        if self.s == self.d:
            raise ValueError(f"passenger {self.id}: origin equals destination")
        if not self.pi > 0:
            raise ValueError(f"passenger {self.id}: trip length must be positive")
        if self.epsilon < 0:
            raise ValueError(f"passenger {self.id}: negative flexibility")

    @property
    def budget(self) -> float:
        """Longest tolerated wait plus ride time."""
        return (1.0 + self.epsilon) * self.pi

    @property
    def max_wait(self) -> float:
        return self.epsilon * self.pi


def make_passenger(net: GridNetwork, id: int, s, d, epsilon: float, t: float = 0.0) -> Passenger:
    s, d = net.index(s), net.index(d)
    return Passenger(id, s, d, float(epsilon), float(t), net.shortest_len(s, d))


@dataclass(frozen=True)
class SharedQuote:
    order: RideOrder
    total: float
    ride_i: float
    ride_j: float


def order_cost(net: GridNetwork, pi_: Passenger, pj: Passenger, order: RideOrder) -> SharedQuote:
    if order is RideOrder.SOLO:
        raise ValueError("SOLO is not a two-passenger order")
    if pi_.id == pj.id:
        raise ValueError("a passenger cannot share with itself")
    D = net.dist
    si, di, sj, dj = pi_.s, pi_.d, pj.s, pj.d
    if order is RideOrder.IJ:
        inner = D[sj, dj]
        total = D[si, sj] + inner + D[dj, di]
        ride_i, ride_j = total, inner
    elif order is RideOrder.II:
        ride_i = D[si, sj] + D[sj, di]
        ride_j = D[sj, di] + D[di, dj]
        total = D[si, sj] + ride_j
    elif order is RideOrder.JI:
        inner = D[si, di]
        total = D[sj, si] + inner + D[di, dj]
        ride_i, ride_j = inner, total
    else:
        ride_j = D[sj, si] + D[si, dj]
        ride_i = D[si, dj] + D[dj, di]
        total = D[sj, si] + ride_i
    return SharedQuote(order, float(total), float(ride_i), float(ride_j))


def solo_cost(p: Passenger) -> float:
    return p.pi


def solo_quote(p: Passenger) -> SharedQuote:
    return SharedQuote(RideOrder.SOLO, p.pi, p.pi, p.pi)


def best_shared(net: GridNetwork, pi_: Passenger, pj: Passenger) -> SharedQuote:
    """Cheapest of the four orders; ties go to the earlier of IJ, II, JI, JJ."""
    quotes = [order_cost(net, pi_, pj, o) for o in SHARED_ORDERS]
    return min(quotes, key=lambda q: q.total)


def pair_cost(quote: SharedQuote) -> float:
    """Per-passenger cost under an even split; the full trip for SOLO."""
    if quote.order is RideOrder.SOLO:
        return quote.total
    return quote.total / 2.0


def is_feasible_pair(
    quote: SharedQuote, pi_: Passenger, pj: Passenger, wait_i: float, wait_j: float
) -> bool:
    """Both passengers finish within (1 + epsilon) times their own shortest trip."""
    if wait_i < 0 or wait_j < 0:
        raise ValueError("waits must be non-negative")
    return (
        wait_i + quote.ride_i <= pi_.budget + TOL
        and wait_j + quote.ride_j <= pj.budget + TOL
    )


def best_feasible(
    net: GridNetwork, pi_: Passenger, pj: Passenger, wait_i: float, wait_j: float
) -> Optional[SharedQuote]:
    """Cheapest order that respects both detour budgets, or None."""
    best = None
    for o in SHARED_ORDERS:
        q = order_cost(net, pi_, pj, o)
        if is_feasible_pair(q, pi_, pj, wait_i, wait_j) and (best is None or q.total < best.total):
            best = q
    return best


def compatible(net: GridNetwork, pi_: Passenger, pj: Passenger, wait_i: float = 0.0, wait_j: float = 0.0) -> bool:
    return best_feasible(net, pi_, pj, wait_i, wait_j) is not None
