"""On-disk formats: OD distributions, passenger streams and simulation reports."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .demand import ODDistribution
from .engine import SimReport
from .roadnet import GridNetwork
from .sharing import Passenger


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save_distribution(dist: ODDistribution, path, meta: dict | None = None) -> Path:
    body = {
        "q": dist.q,
        "pickup_pmf": [float(x) for x in dist.pickup_pmf],
        "dropoff_pmf": [float(x) for x in dist.dropoff_pmf],
    }
    doc = {**body, "meta": meta or {}, "checksum": _checksum(body)}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1))
    return path


def load_distribution(path) -> ODDistribution:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"distribution file {path} not found")
    doc = json.loads(path.read_text())
    body = {k: doc[k] for k in ("q", "pickup_pmf", "dropoff_pmf")}
    if doc.get("checksum") != _checksum(body):
        raise ValueError(f"{path}: checksum mismatch")
    return ODDistribution(int(body["q"]), np.array(body["pickup_pmf"]), np.array(body["dropoff_pmf"]))


def save_stream(stream: Sequence[Passenger], path, meta: dict | None = None) -> Path:
    doc = {
        "meta": meta or {},
        "passengers": [{"id": p.id, "t": p.t, "s": p.s, "d": p.d, "epsilon": p.epsilon} for p in stream],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1))
    return path


def load_stream(path, net: GridNetwork) -> list[Passenger]:
    """Passengers from a saved stream; trip lengths are recomputed on ``net``."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"stream file {path} not found")
    doc = json.loads(path.read_text())
    out = []
    for row in doc["passengers"]:
        s, d = net.index(int(row["s"])), net.index(int(row["d"]))
        out.append(Passenger(int(row["id"]), s, d, float(row["epsilon"]), float(row["t"]), net.shortest_len(s, d)))
    return sorted(out, key=lambda p: (p.t, p.id))


def write_report(report: SimReport, out_dir, name: str = "report", bin_width: float = 0.5) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{name}.json"
    csv_path = out_dir / f"{name}_passengers.csv"
    json_path.write_text(report.to_json(bin_width))
    csv_path.write_text(report.to_csv())
    return json_path, csv_path
