"""Weighted q-by-q grid road network with precomputed shortest-path distances.

Nodes are addressed either as ``(row, col)`` tuples or by their flat index
``row * q + col``.  Travel is at unit speed, so a distance is also a travel
time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

NodeId = Tuple[int, int]
Node = Union[int, NodeId]

# expansion order for path reconstruction: up, down, left, right
_MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))
_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GridNetwork:
    """An undirected grid with positive edge weights.

    ``h_weights[r, c]`` is the edge (r, c)-(r, c+1) and ``v_weights[r, c]``
    the edge (r, c)-(r+1, c).  ``dist`` is the all-pairs distance table over
    flat node indices.
    """

    q: int
    h_weights: np.ndarray
    v_weights: np.ndarray
    dist: np.ndarray = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return self.q * self.q

    @property
    def n_edges(self) -> int:
        return self.h_weights.size + self.v_weights.size

    def index(self, node: Node) -> int:
        if isinstance(node, (int, np.integer)):
            idx = int(node)
            if not 0 <= idx < self.n_nodes:
                raise IndexError(f"node index {idx} outside {self.q}x{self.q} grid")
            return idx
        r, c = node
        if not (0 <= r < self.q and 0 <= c < self.q):
            raise IndexError(f"node {node} outside {self.q}x{self.q} grid")
        return int(r) * self.q + int(c)

    def coords(self, idx: int) -> NodeId:
        return divmod(int(idx), self.q)

    def edge_weight(self, a: Node, b: Node) -> float:
        (r1, c1), (r2, c2) = self.coords(self.index(a)), self.coords(self.index(b))
        if r1 == r2 and abs(c1 - c2) == 1:
            return float(self.h_weights[r1, min(c1, c2)])
        if c1 == c2 and abs(r1 - r2) == 1:
            return float(self.v_weights[min(r1, r2), c1])
        raise ValueError(f"{(r1, c1)} and {(r2, c2)} are not adjacent")

    def neighbors(self, node: Node):
        """Adjacent nodes in the fixed order up, down, left, right."""
        r, c = self.coords(self.index(node))
        for dr, dc in _MOVES:
            rr, cc = r + dr, c + dc
            if 0 <= rr < self.q and 0 <= cc < self.q:
                yield (rr, cc)

    def shortest_len(self, a: Node, b: Node) -> float:
        return float(self.dist[self.index(a), self.index(b)])

    def shortest_path(self, a: Node, b: Node) -> list[NodeId]:
        """Shortest path from ``a`` to ``b`` as a list of ``(row, col)``.

        At every step the first neighbor (up, down, left, right) that stays on
        a shortest path is taken, so among equal-cost routes the one that
        changes row first wins.
        """
        ia, ib = self.index(a), self.index(b)
        path = [self.coords(ia)]
        cur = ia
        while cur != ib:
            remaining = self.dist[cur, ib]
            for nb in self.neighbors(cur):
                j = self.index(nb)
                step = self.edge_weight(cur, j)
                if abs(step + self.dist[j, ib] - remaining) <= _TOL * max(1.0, remaining):
                    cur = j
                    path.append(nb)
                    break
            else:  # pragma: no cover - distance table is always consistent
                raise RuntimeError("distance table inconsistent with edge weights")
        return path

    def path_length(self, path: Sequence[Node]) -> float:
        return float(sum(self.edge_weight(u, v) for u, v in zip(path, path[1:])))


def _all_pairs(q: int, h: np.ndarray, v: np.ndarray) -> np.ndarray:
    idx = np.arange(q * q).reshape(q, q)
    rows = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    cols = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    w = np.concatenate([h.ravel(), v.ravel()])
    graph = coo_matrix((w, (rows, cols)), shape=(q * q, q * q)).tocsr()
    return dijkstra(graph, directed=False)


def build_grid(
    q: int,
    weight: float = 1.0,
    edge_weights: Mapping[tuple[NodeId, NodeId], float] | None = None,
) -> GridNetwork:
    """Build a q-by-q grid with uniform ``weight`` and optional per-edge overrides.

    ``edge_weights`` maps ``((r1, c1), (r2, c2))`` pairs of adjacent nodes to a
    weight; either orientation is accepted.
    """
    if int(q) != q or q < 2:
        raise ValueError(f"grid dimension must be an integer >= 2, got {q}")
    q = int(q)
    if not weight > 0:
        raise ValueError(f"edge weight must be positive, got {weight}")
    h = np.full((q, q - 1), float(weight))
    v = np.full((q - 1, q), float(weight))
    for (a, b), w in (edge_weights or {}).items():
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w} for {a}-{b}")
        (r1, c1), (r2, c2) = sorted([tuple(a), tuple(b)])
        for r, c in ((r1, c1), (r2, c2)):
            if not (0 <= r < q and 0 <= c < q):
                raise ValueError(f"edge endpoint {(r, c)} outside grid")
        if r1 == r2 and c2 - c1 == 1:
            h[r1, c1] = w
        elif c1 == c2 and r2 - r1 == 1:
            v[r1, c1] = w
        else:
            raise ValueError(f"{a} and {b} are not adjacent grid nodes")
    h.setflags(write=False)
    v.setflags(write=False)
    dist = _all_pairs(q, h, v)
    dist.setflags(write=False)
    return GridNetwork(q=q, h_weights=h, v_weights=v, dist=dist)


def load_edge_weights(path: str | Path) -> dict[tuple[NodeId, NodeId], float]:
    """Read ``row1,col1,row2,col2,weight`` lines.  Blank lines and ``#`` comments are skipped."""
    weights = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
            r1, c1, r2, c2 = (int(p) for p in parts[:4])
            weights[((r1, c1), (r2, c2))] = float(parts[4])
    return weights


def shortest_len(net: GridNetwork, a: Node, b: Node) -> float:
    return net.shortest_len(a, b)


def shortest_path(net: GridNetwork, a: Node, b: Node) -> list[NodeId]:
    return net.shortest_path(a, b)
