"""
Grid road network and shortest paths
====================================

A q-by-q grid with positive edge weights; every distance is precomputed once.
"""

import numpy as np
from rideshare import build_grid

# a uniform 6x6 grid: distances are Manhattan distances
net = build_grid(6)
print(net.shortest_len((0, 0), (5, 5)))
print(net.shortest_path((0, 0), (2, 3)))

# slow down one avenue and watch the path route around it
slow = {((r, 2), (r + 1, 2)): 5.0 for r in range(5)}
net2 = build_grid(6, edge_weights=slow)
path = net2.shortest_path((0, 2), (5, 2))
print(path, net2.path_length(path))

# the distance matrix is symmetric with a zero diagonal
D = net2.dist
print(D.shape, np.allclose(D, D.T), D.diagonal().max())
