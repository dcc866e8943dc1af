"""
Matching a waiting pool
=======================

Each pair that can share a ride without breaking either passenger's budget
becomes an edge weighted by the distance saved.  A maximum-weight matching
picks the pairs.
"""

from rideshare import build_grid, build_savings_graph, make_passenger, max_weight_matching

net = build_grid(6)
pool = [
    make_passenger(net, 0, (0, 0), (5, 5), 0.5, t=0.0),
    make_passenger(net, 1, (0, 1), (5, 4), 0.5, t=0.3),
    make_passenger(net, 2, (5, 0), (0, 5), 0.5, t=0.6),
    make_passenger(net, 3, (4, 0), (0, 4), 0.5, t=0.9),
    make_passenger(net, 4, (2, 2), (2, 3), 0.5, t=1.0),
]

g = build_savings_graph(pool, now=1.0, net=net)
for (i, j), w in sorted(g.edges.items()):
    print(f"{i}-{j}: saves {w:.1f} via {g.quotes[(i, j)].order.value}")

m = max_weight_matching(g)
print("pairs", m.pairs, "alone", m.unmatched, "saved", m.total(g))
