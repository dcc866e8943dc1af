"""Travel demand: trip-record ingestion, KDE origin/destination estimates,
passenger sampling and the Poisson arrival stream."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = (
    "tpep_pickup_datetime",
    "pickup_longitude",
    "pickup_latitude",
    "dropoff_longitude",
    "dropoff_latitude",
)
CDF_MODES = ("paper", "standard")
MAX_REJECTIONS = 1000


class BBox(NamedTuple):
    lon_min: float
    lon_max: float
    lat_min: float
    lat_max: float

    def contains(self, lon: float, lat: float) -> bool:
        return self.lon_min <= lon <= self.lon_max and self.lat_min <= lat <= self.lat_max


@dataclass(frozen=True)
class TripRecord:
    pickup_lon: float
    pickup_lat: float
    dropoff_lon: float
    dropoff_lat: float
    pickup_time: datetime | None = None


@dataclass(frozen=True, eq=False)
class ODDistribution:
    """Pickup and drop-off probability mass over the q*q grid nodes (flat index)."""

    q: int
    pickup_pmf: np.ndarray
    dropoff_pmf: np.ndarray

    def __post_init__(self):
        for name in ("pickup_pmf", "dropoff_pmf"):
            pmf = np.asarray(getattr(self, name), dtype=float)
            if pmf.shape != (self.q * self.q,):
                raise ValueError(f"{name} must have {self.q * self.q} entries, got {pmf.shape}")
            if np.any(pmf < 0) or not np.all(np.isfinite(pmf)):
                raise ValueError(f"{name} must be finite and non-negative")
            if abs(pmf.sum() - 1.0) > 1e-9:
                raise ValueError(f"{name} sums to {pmf.sum()}, not 1")
            pmf = pmf.copy()
            pmf.setflags(write=False)
            object.__setattr__(self, name, pmf)

    @classmethod
    def uniform(cls, q: int) -> "ODDistribution":
        pmf = np.full(q * q, 1.0 / (q * q))
        return cls(q, pmf, pmf)

    @classmethod
    def point_mass(cls, q: int, pickup: int, dropoff: int) -> "ODDistribution":
        p = np.zeros(q * q)
        d = np.zeros(q * q)
        p[pickup] = 1.0
        d[dropoff] = 1.0
        return cls(q, p, d)

    def cdfs(self) -> tuple[np.ndarray, np.ndarray]:
        cached = self.__dict__.get("_cdfs")
        if cached is None:
            cached = (np.cumsum(self.pickup_pmf), np.cumsum(self.dropoff_pmf))
            object.__setattr__(self, "_cdfs", cached)
        return cached

    def type_weights(self) -> np.ndarray:
        """Probability of each (origin, destination) type as actually sampled.

        Equal to ``pickup[s] * dropoff[d]`` conditioned on ``s != d``; shape
        ``(q*q, q*q)``.  All zeros when no type with ``s != d`` has mass.
        """
        w = np.outer(self.pickup_pmf, self.dropoff_pmf)
        np.fill_diagonal(w, 0.0)
        total = w.sum()
        return w / total if total > 0 else w


@dataclass(frozen=True)
class ArrivalProcess:
    lam: float
    seed: int | None = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"arrival rate must be positive, got {self.lam}")


def _parse_time(value: str) -> datetime | None:
    try:
        return datetime.fromisoformat(value.strip())
    except ValueError:
        return None


def ingest_records(path: str | Path, bbox: BBox, limit: int | None = None) -> list[TripRecord]:
    """Read trip records from a yellow-cab style CSV, keeping in-bbox rows in file order.

    Malformed rows are skipped and counted in a log warning.  Raises
    ``FileNotFoundError`` for a missing file and ``ValueError`` when the
    header lacks a required column or no record survives.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    records: list[TripRecord] = []
    malformed = 0
    outside = 0
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        reader.fieldnames = header
        for row in reader:
            if limit is not None and len(records) >= limit:
                break
            try:
                vals = [float(row[c]) for c in REQUIRED_COLUMNS[1:]]
            except (TypeError, ValueError):
                malformed += 1
                continue
            if not all(math.isfinite(v) for v in vals):
                malformed += 1
                continue
            plon, plat, dlon, dlat = vals
            if not (bbox.contains(plon, plat) and bbox.contains(dlon, dlat)):
                outside += 1
                continue
            records.append(TripRecord(plon, plat, dlon, dlat, _parse_time(row[REQUIRED_COLUMNS[0]] or "")))
    if malformed:
        logger.warning("%s: skipped %d malformed rows", path, malformed)
    logger.info("%s: kept %d records, dropped %d outside bbox", path, len(records), outside)
    if not records:
        raise ValueError(f"{path}: no records inside {bbox}")
    return records


def cell_centers(q: int, bbox: BBox) -> tuple[np.ndarray, np.ndarray]:
    """Longitude of each column center and latitude of each row center."""
    lon = bbox.lon_min + (np.arange(q) + 0.5) * (bbox.lon_max - bbox.lon_min) / q
    lat = bbox.lat_min + (np.arange(q) + 0.5) * (bbox.lat_max - bbox.lat_min) / q
    return lon, lat


def _kde_pmf(lon: np.ndarray, lat: np.ndarray, q: int, bbox: BBox, bandwidth) -> np.ndarray:
    n = lon.size
    if bandwidth is None:
        # Scott's rule in two dimensions, per axis
        factor = n ** (-1.0 / 6.0)
        h_lon = np.std(lon, ddof=1) * factor if n > 1 else 0.0
        h_lat = np.std(lat, ddof=1) * factor if n > 1 else 0.0
        # degenerate spread falls back to a quarter cell
        h_lon = h_lon if h_lon > 0 else 0.25 * (bbox.lon_max - bbox.lon_min) / q
        h_lat = h_lat if h_lat > 0 else 0.25 * (bbox.lat_max - bbox.lat_min) / q
    else:
        h_lon = h_lat = float(bandwidth)
    clon, clat = cell_centers(q, bbox)
    # product kernel is separable: density[row, col] = sum_k Klat[row, k] * Klon[col, k]
    k_lon = np.exp(-0.5 * ((clon[:, None] - lon[None, :]) / h_lon) ** 2)
    k_lat = np.exp(-0.5 * ((clat[:, None] - lat[None, :]) / h_lat) ** 2)
    dens = k_lat @ k_lon.T
    total = dens.sum()
    if not total > 0:
        raise ValueError("kernel density underflows at every cell center; increase the bandwidth")
    return (dens / total).ravel()


def estimate_kde(
    records: Iterable[TripRecord], q: int, bbox: BBox, bandwidth: float | None = None
) -> ODDistribution:
    """Gaussian-kernel density of pickups and drop-offs at the grid cell centers.

    Rows of the grid follow latitude and columns follow longitude, so node
    ``row * q + col`` covers the cell ``(lat row, lon col)``.  ``bandwidth`` is
    in degrees on both axes; by default Scott's rule is applied per axis.
    """
    if bandwidth is not None and not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    records = list(records)
    if not records:
        raise ValueError("no records to estimate from")
    arr = np.array([(r.pickup_lon, r.pickup_lat, r.dropoff_lon, r.dropoff_lat) for r in records])
    pickup = _kde_pmf(arr[:, 0], arr[:, 1], q, bbox, bandwidth)
    dropoff = _kde_pmf(arr[:, 2], arr[:, 3], q, bbox, bandwidth)
    return ODDistribution(q, pickup, dropoff)


def sample_passenger(dist: ODDistribution, rng: np.random.Generator) -> tuple[int, int]:
    """Draw an (origin, destination) pair of flat node indices with origin != destination."""
    pick_cdf, drop_cdf = dist.cdfs()
    last = dist.q * dist.q - 1
    for _ in range(MAX_REJECTIONS):
        s = min(int(np.searchsorted(pick_cdf, rng.random(), side="right")), last)
        d = min(int(np.searchsorted(drop_cdf, rng.random(), side="right")), last)
        if s != d:
            return s, d
    raise RuntimeError(f"no trip with distinct endpoints after {MAX_REJECTIONS} draws")


def next_interarrival(proc: ArrivalProcess, rng: np.random.Generator) -> float:
    return float(rng.exponential(1.0 / proc.lam))


def window_arrival_prob(lam: float, u, mode: str = "paper"):
    """Probability that a partner shows up within a window of length ``u``.

    ``paper`` mode uses ``1 - exp(-lam*u)/2``; ``standard`` mode uses the
    exponential CDF ``1 - exp(-lam*u)``.  ``u`` may be an array.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0):
        raise ValueError("window length must be non-negative")
    if mode == "paper":
        out = 1.0 - 0.5 * np.exp(-lam * u_arr)
    elif mode == "standard":
        out = -np.expm1(-lam * u_arr)
    else:
        raise ValueError(f"unknown CDF mode {mode!r}; expected one of {CDF_MODES}")
    return float(out) if out.ndim == 0 else out
