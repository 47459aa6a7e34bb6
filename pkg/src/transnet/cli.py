"""Command-line entry point.

    transnet run      --config cfg.json [--out DIR] [--threads N] [--format F]
    transnet coverage --config cfg.json --sweep 0.01:0.5:0.01 [--format csv|json]
    transnet path     --config cfg.json --from N --to N
    transnet walk     --config cfg.json --start N --steps K --seed S
    transnet reduce   --config cfg.json [--format json|dot]
    transnet render   --config cfg.json [--out DIR]

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .basis import ConfigurationError
from .config import FORMATS, ConfigError, load_config
from .coverage import coverage_sweep, fit_table, parse_sweep, reports_to_csv
from .export import dumps, network_to_dot, network_to_graphml, network_to_json, reduced_to_dot
from .graphops import random_walk, shortest_paths
from .grid import GridError, labels_to_values
from .layout import fruchterman_reingold, render_svg
from .netbuild import reduce_network
from .pipeline import build, run_pipeline, style_from_config

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", help="output directory (default: config output_dir, or stdout)")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument("--format", choices=FORMATS, help="restrict output format")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transnet", description="Transition networks of quantized signals.")
    common = _common()
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="full pipeline")
    c = sub.add_parser("coverage", parents=[common], help="coverage report or tolerance sweep")
    c.add_argument("--sweep", help="lo:hi:step tolerance grid (inclusive)")
    p = sub.add_parser("path", parents=[common], help="shortest transitions between two signals")
    p.add_argument("--from", dest="source", type=int, required=True)
    p.add_argument("--to", dest="target", type=int, required=True)
    p.add_argument("--cap", type=int, default=None, help="max paths listed")
    w = sub.add_parser("walk", parents=[common], help="self-avoiding random walk")
    w.add_argument("--start", type=int, required=True)
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--seed", type=int, default=None)
    sub.add_parser("reduce", parents=[common], help="type-level reduced network")
    sub.add_parser("render", parents=[common], help="force-directed SVG drawing")
    return parser


def _emit(text: str, out: str | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text, encoding="utf-8")
    print(d / name)


def _signals(state, labels) -> dict:
    labels = sorted(set(labels))
    return dict(zip(labels, labels_to_values(labels, state.cfg.grid))) if labels else {}


def dispatch(args) -> int:
    cfg = load_config(args.config)
    fmt = args.format

    if args.command == "run":
        if fmt:
            cfg.emit_formats = (fmt,)
        bundle = run_pipeline(cfg, args.out, threads=args.threads)
        for name in sorted(bundle.files):
            print(bundle.files[name])
        return EXIT_OK

    if args.command == "coverage":
        engine = cfg.build_engine()
        table = fit_table(engine, threads=args.threads)
        taus = parse_sweep(args.sweep) if args.sweep else [cfg.tau_s]
        reports = coverage_sweep(engine, cfg.grid, taus, unique=cfg.unique_assignment, table=table)
        if fmt == "json":
            _emit(dumps([r.to_dict() for r in reports]), args.out, "coverage.json")
        elif fmt in (None, "csv"):
            _emit(reports_to_csv(reports), args.out, "coverage.csv")
        else:
            raise ConfigError("format", f"coverage supports csv or json, not {fmt}")
        return EXIT_OK

    state = build(cfg, threads=args.threads)
    net = state.net

    if args.command == "path":
        for lab in (args.source, args.target):
            if lab not in net:
                raise ConfigError("from/to", f"signal {lab} is not a node of the network")
        cap = cfg.path_cap if args.cap is None else args.cap
        res = shortest_paths(net, args.source, args.target, cap)
        doc = res.to_dict(_signals(state, [n for p in res.paths for n in p]))
        _emit(dumps(doc), args.out, "path.json")
    elif args.command == "walk":
        if args.start not in net:
            raise ConfigError("start", f"signal {args.start} is not a node of the network")
        seed = cfg.seed if args.seed is None else args.seed
        trace = random_walk(net, args.start, args.steps, seed)
        doc = trace.to_dict(_signals(state, trace.steps))
        doc["types"] = [net.node(k).best_type for k in trace.steps]
        _emit(dumps(doc), args.out, "walk.json")
    elif args.command == "reduce":
        red = reduce_network(net)
        if fmt == "dot":
            _emit(reduced_to_dot(red), args.out, "reduced.dot")
        else:
            _emit(dumps(red.to_dict()), args.out, "reduced.json")
    elif args.command == "render":
        if fmt in (None, "svg"):
            lay = fruchterman_reingold(net, cfg.layout_iterations, cfg.seed, cfg.layout_area)
            _emit(render_svg(net, lay, style_from_config(cfg)), args.out, "layout.svg")
        elif fmt == "dot":
            _emit(network_to_dot(net), args.out, "network.dot")
        elif fmt == "graphml":
            _emit(network_to_graphml(net), args.out, "network.graphml")
        else:
            _emit(network_to_json(net), args.out, "network.json")
    return EXIT_OK


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return dispatch(args)
    except (ConfigError, ConfigurationError, GridError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
