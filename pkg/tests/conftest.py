import csv

import numpy as np
import pytest

from rideshare.demand import BBox

NYC_BBOX = BBox(-74.02, -73.93, 40.70, 40.82)
HEADER = [
    "VendorID", "tpep_pickup_datetime", "tpep_dropoff_datetime", "passenger_count",
    "pickup_longitude", "pickup_latitude", "dropoff_longitude", "dropoff_latitude", "fare_amount",
]


def write_trips(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(HEADER)
        for plon, plat, dlon, dlat in rows:
            w.writerow([2, "2016-01-01 00:00:00", "2016-01-01 00:10:00", 1, plon, plat, dlon, dlat, 9.5])


def synthetic_trips(n, seed=0, bbox=NYC_BBOX):
    """Clustered pickups and drop-offs inside ``bbox``, loosely Manhattan-like."""
    rng = np.random.default_rng(seed)
    centers = np.array([[-73.985, 40.755], [-74.005, 40.715], [-73.96, 40.79]])
    out = []
    while len(out) < n:
        a, b = centers[rng.integers(3)], centers[rng.integers(3)]
        plon, plat = a + rng.normal(0, [0.01, 0.012])
        dlon, dlat = b + rng.normal(0, [0.01, 0.012])
        if bbox.contains(plon, plat) and bbox.contains(dlon, dlat):
            out.append((plon, plat, dlon, dlat))
    return out


@pytest.fixture
def trip_file(tmp_path):
    def make(rows, name="trips.csv"):
        path = tmp_path / name
        write_trips(path, rows)
        return path
    return make


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
