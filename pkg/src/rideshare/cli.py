"""Command-line entry point: ``rideshare {estimate,simulate,baseline,sweep,replay}``.

Times inside the simulator are in grid units (one unit of distance at unit
speed); ``grid.minutes_per_unit`` converts the minute-valued config keys.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import metrics
from .config import ConfigError, load_config, parse_override
from .demand import ArrivalProcess, BBox, ODDistribution, estimate_kde, ingest_records
from .engine import generate_stream, simulate
from .roadnet import build_grid, load_edge_weights
from .storage import load_distribution, load_stream, save_distribution, save_stream, write_report
from .waiting import WaitOptimizer

logger = logging.getLogger("rideshare")


def _bbox(cfg) -> BBox:
    return BBox(cfg["bbox.lon_min"], cfg["bbox.lon_max"], cfg["bbox.lat_min"], cfg["bbox.lat_max"])


def _network(cfg):
    weights = load_edge_weights(cfg["grid.weights_file"]) if cfg["grid.weights_file"] else None
    return build_grid(int(cfg["grid.q"]), edge_weights=weights)


def _distribution(cfg) -> ODDistribution:
    src = cfg["demand.distribution"]
    if src is None:
        raise ConfigError("demand.distribution is required (a file from `estimate`, or \"uniform\")")
    if src == "uniform":
        return ODDistribution.uniform(int(cfg["grid.q"]))
    dist = load_distribution(src)
    if dist.q != cfg["grid.q"]:
        raise ConfigError(f"distribution {src} is for q={dist.q}, config has grid.q={cfg['grid.q']}")
    return dist


def _stream(cfg, net, dist, stream_path=None):
    if stream_path:
        return load_stream(stream_path, net)
    proc = ArrivalProcess(float(cfg["arrivals.lambda"]), int(cfg["arrivals.seed"]))
    return generate_stream(net, dist, proc, int(cfg["passengers.n"]), float(cfg["passengers.epsilon"]))


def _optimizer(cfg, net, dist):
    return WaitOptimizer(
        net, dist, float(cfg["arrivals.lambda"]), cdf_mode=cfg["cdf.mode"], mode=cfg["waiting.mode"],
        samples=int(cfg["waiting.samples"]), delta_u_fraction=float(cfg["waiting.delta_u_fraction"]),
        seed=int(cfg["arrivals.seed"]),
    )


def _bin_width(cfg) -> float:
    return cfg["metrics.bin_width_minutes"] / cfg["grid.minutes_per_unit"]


def _load(args) -> dict:
    overrides = dict(parse_override(s) for s in args.set or [])
    return load_config(args.config, overrides)


def cmd_estimate(args) -> int:
    cfg = _load(args)
    path = args.records or cfg["records.path"]
    if not path:
        raise ConfigError("no trip record file given (--records or records.path)")
    bbox = _bbox(cfg)
    records = ingest_records(path, bbox, cfg["records.limit"])
    dist = estimate_kde(records, int(cfg["grid.q"]), bbox, cfg["kde.bandwidth"])
    meta = {"records": str(path), "n_records": len(records), "config": cfg}
    out = save_distribution(dist, args.output, meta)
    print(f"wrote {out} from {len(records)} records")
    return 0


def cmd_simulate(args) -> int:
    cfg = _load(args)
    net = _network(cfg)
    dist = _distribution(cfg)
    stream = _stream(cfg, net, dist, getattr(args, "stream", None))
    report = simulate(net, stream, _optimizer(cfg, net, dist), cfg)
    out_dir = Path(cfg["output.dir"])
    name = args.name
    json_path, csv_path = write_report(report, out_dir, name, _bin_width(cfg))
    stream_path = save_stream(stream, out_dir / f"{name}_stream.json", {"config": cfg})
    m = report.metrics(_bin_width(cfg))
    print(f"{len(report.passengers)} passengers, {m['n_pairs']} pairs, cost reduction {m['cost_reduction']:.4f}")
    print(f"wrote {json_path}, {csv_path}, {stream_path}")
    return 0


def cmd_replay(args) -> int:
    args.name = args.name or "replay"
    return cmd_simulate(args)


def cmd_baseline(args) -> int:
    cfg = _load(args)
    net = _network(cfg)
    dist = _distribution(cfg)
    stream = _stream(cfg, net, dist, args.stream)
    bw = _bin_width(cfg)
    seed = cfg["arrivals.seed"]
    out_dir = Path(cfg["output.dir"])
    if args.kind == "constant":
        results = []
        for minutes in cfg["baseline.tau_minutes"]:
            tau = minutes / cfg["grid.minutes_per_unit"]
            results.append(metrics.constant_wait_run(tau, stream, net, bw, {"tau_minutes": minutes, "seed": seed}))
        experiment, param = "constant_wait", "tau_minutes"
    else:
        online = metrics.online_run(
            stream, net, dist, float(cfg["arrivals.lambda"]), cfg["cdf.mode"], cfg["waiting.mode"],
            int(cfg["waiting.samples"]), float(cfg["waiting.delta_u_fraction"]), int(seed), bw,
            {"policy": "online", "seed": seed},
        )
        offline = metrics.offline_greedy(stream, net, bw, {"policy": "offline", "seed": seed})
        results = [online, offline]
        experiment, param = "offline_greedy", "policy"
    csv_path = metrics.write_results_csv(results, out_dir / f"{experiment}_{param}.csv", experiment, param)
    json_path = metrics.write_results_json(results, out_dir / f"{experiment}_{param}.json", cfg)
    for r in results:
        print(f"{param}={r.params[param]}: cost reduction {r.cost_reduction:.4f}")
    print(f"wrote {csv_path}, {json_path}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    net = _network(cfg)
    dist = _distribution(cfg)
    stream = _stream(cfg, net, dist, args.stream)
    seed = cfg["arrivals.seed"]
    results = metrics.epsilon_sweep(
        cfg["sweep.epsilons"], stream, net, dist, float(cfg["arrivals.lambda"]),
        cdf_mode=cfg["cdf.mode"], waiting_mode=cfg["waiting.mode"], samples=int(cfg["waiting.samples"]),
        delta_u_fraction=float(cfg["waiting.delta_u_fraction"]), seed=int(seed), bin_width=_bin_width(cfg),
        params={"seed": seed},
    )
    out_dir = Path(cfg["output.dir"])
    csv_path = metrics.write_results_csv(results, out_dir / "epsilon_sweep_epsilon.csv", "epsilon_sweep", "epsilon")
    json_path = metrics.write_results_json(results, out_dir / "epsilon_sweep_epsilon.json", cfg)
    for r in results:
        print(f"epsilon={r.params['epsilon']:.2f}: cost reduction {r.cost_reduction:.4f}")
    print(f"wrote {csv_path}, {json_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rideshare", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("config", help="JSON config file")
        else:
            p.add_argument("--config", help="JSON config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    p = sub.add_parser("estimate", help="estimate pickup/drop-off distributions from trip records")
    common(p, config_required=False)
    p.add_argument("--records", help="trip record CSV (overrides records.path)")
    p.add_argument("-o", "--output", required=True, help="distribution file to write")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="run the online matching simulation")
    common(p)
    p.add_argument("--name", default="report", help="output file stem")
    p.set_defaults(func=cmd_simulate, stream=None)

    p = sub.add_parser("replay", help="simulate a saved passenger stream")
    common(p)
    p.add_argument("stream", help="stream file written by simulate")
    p.add_argument("--name", default=None, help="output file stem (default: replay)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("baseline", help="constant-wait or offline baseline")
    common(p)
    p.add_argument("--kind", choices=("constant", "offline"), required=True)
    p.add_argument("--stream", help="saved stream to evaluate on")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("sweep", help="flexibility sweep on one passenger stream")
    common(p)
    p.add_argument("--stream", help="saved stream to evaluate on")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s:%(name)s:%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
