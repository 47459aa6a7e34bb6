"""enumerate -> fit -> gate -> build -> analyze -> export."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .coverage import (
    AdjustableSets, CoverageReport, compute_adjustable, coverage_report, coverage_sweep,
    fit_table, parse_sweep, reports_to_csv,
)
from .basis import FitEngine
from .export import (
    dumps, network_to_dot, network_to_graphml, network_to_json, reduced_to_dot,
)
from .graphops import betweenness, degree, path_length_statistics
from .layout import SvgStyle, fruchterman_reingold, render_svg
from .netbuild import ReducedNetwork, TransitionNetwork, build_network, connected_components, reduce_network

log = logging.getLogger(__name__)


@dataclass
class BuildState:
    cfg: RunConfig
    engine: FitEngine
    table: np.ndarray
    sets: AdjustableSets
    net: TransitionNetwork


def build(cfg: RunConfig, threads: int = 1) -> BuildState:
    engine = cfg.build_engine()
    table = fit_table(engine, threads=threads)
    sets = compute_adjustable(engine, cfg.grid, cfg.tau_s, table=table)
    net = build_network(
        sets, cfg.grid, cfg.link_threshold, threads=threads,
        extra_params={"normalization": cfg.normalization,
                      "functions": [f.to_dict() for f in cfg.functions]},
    )
    log.info("%d signals, %d nodes, %d edges", cfg.grid.n_total, net.n_nodes, net.n_edges)
    return BuildState(cfg, engine, table, sets, net)


def style_from_config(cfg: RunConfig) -> SvgStyle:
    kw = {}
    if "palette" in cfg.style:
        kw["palette"] = tuple(cfg.style["palette"])
    if "radius" in cfg.style:
        kw["radius"] = float(cfg.style["radius"])
    if "size" in cfg.style:
        kw["size"] = int(cfg.style["size"])
    return SvgStyle(**kw)


def analysis_dict(state: BuildState) -> dict:
    cfg, net = state.cfg, state.net
    comps = connected_components(net)
    out = {
        "n_signals": cfg.grid.n_total,
        "n_nodes": net.n_nodes,
        "n_edges": net.n_edges,
        "type_counts": dict(zip(net.names, net.type_counts())),
        "components": [{"smallest_label": c[0], "size": len(c)} for c in comps],
        "degree": {str(k): v for k, v in degree(net).items()},
    }
    if cfg.betweenness:
        out["betweenness"] = {str(k): v for k, v in betweenness(net).items()}
    if cfg.path_statistics:
        out["path_statistics"] = path_length_statistics(net).to_dict()
    return out


@dataclass
class Bundle:
    out_dir: Path
    files: dict[str, Path]
    hashes: dict[str, str]
    state: BuildState
    reduced: ReducedNetwork
    coverage: list[CoverageReport] = field(default_factory=list)


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def run_pipeline(cfg: RunConfig, out_dir: str | Path | None = None, threads: int = 1) -> Bundle:
    """Run every stage and write the artifacts plus ``manifest.json``.

    All artifact texts are produced in memory before anything is written.
    """
    state = build(cfg, threads=threads)
    net = state.net
    formats = set(cfg.emit_formats)
    reduced = reduce_network(net)
    reports = [coverage_report(state.sets, unique=cfg.unique_assignment)]

    texts: dict[str, str] = {}
    if "json" in formats:
        texts["network.json"] = network_to_json(net)
        texts["reduced.json"] = dumps(reduced.to_dict())
        texts["analysis.json"] = dumps(analysis_dict(state))
    if "dot" in formats:
        texts["network.dot"] = network_to_dot(net)
        texts["reduced.dot"] = reduced_to_dot(reduced)
    if "graphml" in formats:
        texts["network.graphml"] = network_to_graphml(net)
    if "csv" in formats:
        texts["coverage.csv"] = reports_to_csv(reports)
        if cfg.sweep:
            sweep = coverage_sweep(state.engine, cfg.grid, parse_sweep(cfg.sweep),
                                   unique=cfg.unique_assignment, table=state.table)
            texts["coverage_sweep.csv"] = reports_to_csv(sweep)
    if "svg" in formats:
        lay = fruchterman_reingold(net, cfg.layout_iterations, cfg.seed, cfg.layout_area)
        texts["layout.svg"] = render_svg(net, lay, style_from_config(cfg))

    hashes = {name: sha256(t) for name, t in sorted(texts.items())}
    manifest = {
        "tool": "transnet",
        "version": __version__,
        "config": cfg.to_dict(),
        "summary": {"n_signals": cfg.grid.n_total, "n_nodes": net.n_nodes, "n_edges": net.n_edges},
        "outputs": hashes,
    }
    texts["manifest.json"] = dumps(manifest)

    out = Path(out_dir if out_dir is not None else cfg.output_dir)
    files = {}
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in texts.items():
            p = out / name
            p.write_text(text, encoding="utf-8")
            files[name] = p
    except OSError as e:
        raise OSError(f"writing artifacts to {out}: {e}") from e
    return Bundle(out, files, hashes, state, reduced, reports)
