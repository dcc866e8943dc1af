"""Optimal waiting time for an arriving passenger.

For every possible partner type (origin, destination) the expected overhead
splits into an unmatched part ``psi`` (the solo trip, paid when the type is
incompatible or does not arrive in time) and a matched part ``gamma`` (the
even-split shared cost, paid when a compatible partner arrives within the
window).  Waiting ``u`` consumes the passenger's detour budget, so the set of
compatible types shrinks as ``u`` grows.  The waiting time is the smallest
minimizer of ``psi + gamma`` over a grid on ``[0, epsilon * pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .demand import ODDistribution, window_arrival_prob
from .roadnet import GridNetwork
from .sharing import TOL, Passenger

EXACT_MAX_Q = 15
DEFAULT_SAMPLES = 20000
DEFAULT_DELTA_FRACTION = 1.0 / 50.0


@dataclass(frozen=True, eq=False)
class PartnerTypes:
    """Candidate partner types with their probability weights (summing to 1 or 0)."""

    s: np.ndarray
    d: np.ndarray
    weight: np.ndarray

    def __len__(self):
        return self.s.size


def exact_types(dist: ODDistribution) -> PartnerTypes:
    w = dist.type_weights()
    s, d = np.nonzero(w)
    return PartnerTypes(s, d, w[s, d])


def sampled_types(dist: ODDistribution, n_samples: int, rng: np.random.Generator) -> PartnerTypes:
    """Monte-Carlo partner types drawn as passengers are (origin != destination)."""
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if dist.type_weights().sum() == 0:
        raise ValueError("distribution has no trip with distinct endpoints")
    n = dist.q * dist.q
    pick_cdf, drop_cdf = dist.cdfs()
    s_out, d_out = [], []
    have = 0
    while have < n_samples:
        k = 2 * (n_samples - have) + 16
        s = np.minimum(np.searchsorted(pick_cdf, rng.random(k), side="right"), n - 1)
        d = np.minimum(np.searchsorted(drop_cdf, rng.random(k), side="right"), n - 1)
        keep = s != d
        s_out.append(s[keep])
        d_out.append(d[keep])
        have += int(keep.sum())
    s = np.concatenate(s_out)[:n_samples]
    d = np.concatenate(d_out)[:n_samples]
    return PartnerTypes(s, d, np.full(n_samples, 1.0 / n_samples))


def type_table(
    p: Passenger, types: PartnerTypes, net: GridNetwork, partner_epsilon: Optional[float] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-type wait slack and shared cost for passenger ``p``.

    ``slack[k]`` is the longest wait of ``p`` for which some ride order with
    type ``k`` (itself waiting zero) fits both budgets, or ``-inf`` when none
    does.  ``share[k]`` is half the cheapest joint-route distance.
    """
    eps_j = p.epsilon if partner_epsilon is None else partner_epsilon
    D = net.dist
    si, di = p.s, p.d
    sj, dj = types.s, types.d
    pi_j = D[sj, dj]
    budget_j = (1.0 + eps_j) * pi_j + TOL
    budget_i = p.budget

    a = D[si, sj]  # s_i -> s_j
    b = D[sj, di]  # s_j -> d_i
    c = D[dj, di]  # d_j -> d_i
    e = D[di, dj]  # d_i -> d_j
    f = D[si, dj]  # s_i -> d_j
    pi_i = D[si, di]

    # (total, ride_i, ride_j) per order IJ, II, JI, JJ
    orders = (
        (a + pi_j + c, a + pi_j + c, pi_j),
        (a + b + e, a + b, b + e),
        (a + pi_i + e, np.full_like(a, pi_i), a + pi_i + e),
        (a + f + c, f + c, a + f),
    )
    totals = np.stack([o[0] for o in orders])
    slack = np.full(sj.shape, -np.inf)
    for _, ride_i, ride_j in orders:
        ok = ride_j <= budget_j
        slack = np.where(ok, np.maximum(slack, budget_i - ride_i), slack)
    return slack, totals.min(axis=0) / 2.0


def _terms(p, types, u, lam, net, cdf_mode, partner_epsilon):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u < -TOL) or np.any(u > p.max_wait + TOL):
        raise ValueError(f"window must lie in [0, {p.max_wait}]")
    slack, share = type_table(p, types, net, partner_epsilon)
    compat = slack[:, None] >= u[None, :] - TOL
    F = window_arrival_prob(lam, np.clip(u, 0.0, None), cdf_mode)
    psi_k = np.where(compat, (1.0 - F)[None, :] * p.pi, p.pi)
    gamma_k = np.where(compat, F[None, :] * share[:, None], 0.0)
    return psi_k, gamma_k


def per_type_terms(
    p: Passenger,
    types: PartnerTypes,
    u,
    lam: float,
    net: GridNetwork,
    cdf_mode: str = "paper",
    partner_epsilon: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Unweighted psi and gamma contributions, shape ``(len(types), len(u))``."""
    return _terms(p, types, u, lam, net, cdf_mode, partner_epsilon)


def _objective(p, types, u_grid, lam, net, cdf_mode, partner_epsilon):
    """psi and gamma over an ascending ``u_grid`` without a per-type matrix."""
    slack, share = type_table(p, types, net, partner_epsilon)
    # a type stays compatible for the first ``count`` grid points
    count = np.searchsorted(u_grid, slack + TOL, side="right")
    m = u_grid.size
    w_by_count = np.bincount(count, weights=types.weight, minlength=m + 1)
    ws_by_count = np.bincount(count, weights=types.weight * share, minlength=m + 1)
    # mass compatible at grid point k: types with count > k
    w_compat = np.cumsum(w_by_count[::-1])[::-1][1:]
    share_compat = np.cumsum(ws_by_count[::-1])[::-1][1:]
    w_total = types.weight.sum()
    F = window_arrival_prob(lam, u_grid, cdf_mode)
    psi_vals = p.pi * ((w_total - w_compat) + w_compat * (1.0 - F))
    gamma_vals = F * share_compat
    return psi_vals, gamma_vals


def _check_window(p: Passenger, u: float):
    if u < 0 or u > p.max_wait + TOL:
        raise ValueError(f"window {u} outside [0, {p.max_wait}]")


def psi(p, u, dist, lam, net, cdf_mode="paper", types=None, partner_epsilon=None) -> float:
    """Expected solo cost: incompatible partner types plus compatible ones that miss the window."""
    _check_window(p, u)
    types = exact_types(dist) if types is None else types
    return float(_objective(p, types, np.array([float(u)]), lam, net, cdf_mode, partner_epsilon)[0][0])


def gamma(p, u, dist, lam, net, cdf_mode="paper", types=None, partner_epsilon=None) -> float:
    """Expected shared cost from compatible partner types arriving within the window."""
    _check_window(p, u)
    types = exact_types(dist) if types is None else types
    return float(_objective(p, types, np.array([float(u)]), lam, net, cdf_mode, partner_epsilon)[1][0])


@dataclass(frozen=True, eq=False)
class WaitObjectiveCurve:
    u_grid: np.ndarray
    psi: np.ndarray
    gamma: np.ndarray
    tau: float

    @property
    def objective(self) -> np.ndarray:
        return self.psi + self.gamma

    @property
    def tau_index(self) -> int:
        return first_argmin(self.objective)


def first_argmin(values: np.ndarray, rtol: float = 1e-12) -> int:
    """Index of the first value within rounding noise of the minimum."""
    lo = values.min()
    return int(np.flatnonzero(values <= lo + rtol * max(1.0, abs(lo)))[0])


def _default_delta(p: Passenger, fraction: float) -> float:
    delta = p.max_wait * fraction
    return delta if delta > 0 else max(p.max_wait, 1.0)


def wait_grid(max_wait: float, delta_u: float) -> np.ndarray:
    """``0, delta, 2*delta, ...`` up to and including ``max_wait``."""
    if not delta_u > 0:
        raise ValueError("delta_u must be positive")
    if max_wait <= 0:
        return np.zeros(1)
    k = int(math.floor(max_wait / delta_u + 1e-9))
    grid = delta_u * np.arange(k + 1)
    if grid[-1] < max_wait * (1 - 1e-12):
        grid = np.append(grid, max_wait)
    return np.minimum(grid, max_wait)


def optimal_wait(
    p: Passenger,
    dist: ODDistribution,
    lam: float,
    net: GridNetwork,
    delta_u: Optional[float] = None,
    cdf_mode: str = "paper",
    types: Optional[PartnerTypes] = None,
    partner_epsilon: Optional[float] = None,
) -> WaitObjectiveCurve:
    if delta_u is None:
        delta_u = _default_delta(p, DEFAULT_DELTA_FRACTION)
    types = exact_types(dist) if types is None else types
    grid = wait_grid(p.max_wait, delta_u)
    ps, gm = _objective(p, types, grid, lam, net, cdf_mode, partner_epsilon)
    k = first_argmin(ps + gm)
    return WaitObjectiveCurve(grid, ps, gm, float(grid[k]))


class WaitOptimizer:
    """Waiting-time oracle for a simulation run, caching curves by (origin, destination, epsilon).

    ``mode`` is ``exact`` (sum over every partner type), ``sampled`` (one
    common Monte-Carlo type sample drawn from ``seed``) or ``auto``, which
    is exact for grids up to 15 per side.
    """

    def __init__(
        self,
        net: GridNetwork,
        dist: ODDistribution,
        lam: float,
        cdf_mode: str = "paper",
        mode: str = "auto",
        samples: int = DEFAULT_SAMPLES,
        delta_u_fraction: float = DEFAULT_DELTA_FRACTION,
        seed: int = 0,
        partner_epsilon: Optional[float] = None,
    ):
        if mode == "auto":
            mode = "exact" if net.q <= EXACT_MAX_Q else "sampled"
        if mode not in ("exact", "sampled"):
            raise ValueError(f"unknown waiting mode {mode!r}")
        if not 0 < delta_u_fraction <= 1:
            raise ValueError("delta_u_fraction must be in (0, 1]")
        if dist.q != net.q:
            raise ValueError(f"distribution is for q={dist.q}, network has q={net.q}")
        self.net = net
        self.dist = dist
        self.lam = lam
        self.cdf_mode = cdf_mode
        self.mode = mode
        self.delta_u_fraction = delta_u_fraction
        self.partner_epsilon = partner_epsilon
        if mode == "exact":
            self.types = exact_types(dist)
        else:
            self.types = sampled_types(dist, samples, np.random.default_rng(seed))
        self._cache: dict = {}

    def curve(self, p: Passenger) -> WaitObjectiveCurve:
        key = (p.s, p.d, p.epsilon)
        hit = self._cache.get(key)
        if hit is None:
            delta = _default_delta(p, self.delta_u_fraction)
            hit = optimal_wait(
                p, self.dist, self.lam, self.net, delta, self.cdf_mode, self.types, self.partner_epsilon
            )
            self._cache[key] = hit
        return hit

    def __call__(self, p: Passenger) -> float:
        return self.curve(p).tau
