"""
Demand from trip records
========================

Trip records inside a bounding box are turned into pickup and drop-off
probabilities per grid cell with a Gaussian kernel density estimate.
"""

import numpy as np
from rideshare import BBox, TripRecord, estimate_kde, sample_passenger

box = BBox(-74.02, -73.93, 40.70, 40.82)
rng = np.random.default_rng(0)

# fake a morning commute: pickups uptown, drop-offs downtown
n = 2000
pick = np.column_stack([rng.normal(-73.96, 0.01, n), rng.normal(40.79, 0.01, n)])
drop = np.column_stack([rng.normal(-74.00, 0.01, n), rng.normal(40.72, 0.01, n)])
records = [TripRecord(*p, *d) for p, d in zip(pick, drop) if box.contains(*p) and box.contains(*d)]
print(len(records), "records in the box")

dist = estimate_kde(records, q=8, bbox=box)
print(dist.pickup_pmf.reshape(8, 8).round(3))
print("sums", dist.pickup_pmf.sum(), dist.dropoff_pmf.sum())

# passengers drawn from it start in the north and end in the south
trips = np.array([sample_passenger(dist, rng) for _ in range(5)])
print(trips)
