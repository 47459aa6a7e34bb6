"""Adjustable sets and coverage statistics.

A signal is adjustable by function ``i`` when its fit reaches similarity
``sigma >= tau_s``. Fitting is done once for every signal on the grid
(:func:`fit_table`); thresholds are applied afterwards, which makes
tolerance sweeps cheap.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._parallel import DEFAULT_CHUNK, map_ranges
from .basis import FitEngine, similarity
from .grid import GridSpec, labels_to_values, signal_block


class EmptyCoverageError(ZeroDivisionError):
    """No signal is adjustable at the requested tolerance."""


def tau_d_from_tau_s(tau_s: float, alpha: float) -> float:
    return -math.log(tau_s) / alpha


def tau_s_from_tau_d(tau_d: float, alpha: float) -> float:
    return math.exp(-alpha * tau_d)


def fit_table(engine: FitEngine, threads: int = 1, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """Deltas of every signal against every function, shape ``(N_T, n_functions)``."""
    g = engine.grid

    def work(lo, hi):
        return engine.delta_block(signal_block(g, lo, hi))

    parts = map_ranges(work, 0, g.n_total, threads=threads, chunk=chunk)
    return np.concatenate(parts, axis=0)


def passing_mask(deltas: np.ndarray, alpha: float, tau_s: float) -> np.ndarray:
    return similarity(deltas, alpha) >= tau_s


@dataclass
class AdjustableSets:
    """Adjustable signals for one tolerance.

    ``labels`` is the sorted union of all ``S_i``. Row ``k`` of ``deltas``,
    ``passing`` and ``coefficients`` belongs to ``labels[k]``.
    """

    tau_s: float
    alpha: float
    n_total: int
    names: list[str]
    labels: np.ndarray
    deltas: np.ndarray
    passing: np.ndarray
    coefficients: list[np.ndarray]

    @property
    def tau_d(self) -> float:
        return tau_d_from_tau_s(self.tau_s, self.alpha)

    @property
    def n_functions(self) -> int:
        return len(self.names)

    def members(self, i: int) -> np.ndarray:
        """Sorted labels of ``S_i``."""
        return self.labels[self.passing[:, i]]

    def sizes(self) -> list[int]:
        return [int(c) for c in self.passing.sum(axis=0)]

    @property
    def n_adjustable(self) -> int:
        """``N_a``: total membership count, with multiplicity."""
        return int(self.passing.sum())

    def sigmas(self) -> np.ndarray:
        return similarity(self.deltas, self.alpha)


def compute_adjustable(engine: FitEngine, grid: GridSpec | None = None, tau_s: float = 0.2,
                       threads: int = 1, table: np.ndarray | None = None) -> AdjustableSets:
    grid = engine.grid if grid is None else grid
    if grid != engine.grid:
        raise ValueError("engine was built for a different grid")
    if not 0 < tau_s <= 1:
        raise ValueError(f"tau_s must be in (0, 1], got {tau_s!r}")
    if table is None:
        table = fit_table(engine, threads=threads)
    mask = passing_mask(table, engine.alpha, tau_s)
    rows = np.flatnonzero(mask.any(axis=1))
    values = labels_to_values(rows, grid)
    coefs = []
    for i in range(len(engine)):
        coefs.append(engine.fit_block(values, i)[0] if rows.size
                     else np.zeros((0, engine.specs[i].m)))
    return AdjustableSets(
        tau_s=float(tau_s),
        alpha=engine.alpha,
        n_total=grid.n_total,
        names=engine.names,
        labels=rows.astype(np.int64),
        deltas=table[rows],
        passing=mask[rows],
        coefficients=coefs,
    )


def relative_coverage(sets: AdjustableSets, exact: bool = False) -> list:
    """``r_i = |S_i| / N_a``. Fractions when ``exact`` is set."""
    n_a = sets.n_adjustable
    if n_a == 0:
        raise EmptyCoverageError(f"no adjustable signals at tau_s={sets.tau_s}")
    fr = [Fraction(k, n_a) for k in sets.sizes()]
    return fr if exact else [float(x) for x in fr]


def coverage_index(sets: AdjustableSets, n_total: int | None = None, unique: bool = False) -> list[float]:
    """``q_i = |S_i| / N_T`` (or ``|unique S_i| / N_T`` when ``unique``)."""
    n_total = sets.n_total if n_total is None else n_total
    sizes = [len(s) for s in unique_sets(sets)] if unique else sets.sizes()
    return [k / n_total for k in sizes]


def unique_sets(sets: AdjustableSets) -> list[np.ndarray]:
    """Labels adjustable by function ``i`` and by no other function."""
    single = sets.passing.sum(axis=1) == 1
    return [sets.labels[single & sets.passing[:, i]] for i in range(sets.n_functions)]


@dataclass(frozen=True)
class CoverageRow:
    function: str
    size: int
    r: float | None
    q: float


@dataclass(frozen=True)
class CoverageReport:
    tau_s: float
    tau_d: float
    n_total: int
    n_adjustable: int
    unique: bool
    rows: tuple[CoverageRow, ...]

    @property
    def empty(self) -> bool:
        return self.n_adjustable == 0

    def to_dict(self) -> dict:
        return {
            "tau_s": self.tau_s,
            "tau_d": self.tau_d,
            "n_total": self.n_total,
            "n_adjustable": self.n_adjustable,
            "unique": self.unique,
            "functions": [
                {"function": r.function, "size": r.size, "r": r.r, "q": r.q} for r in self.rows
            ],
        }


def _report(names: Sequence[str], sizes: Sequence[int], tau_s: float, alpha: float,
            n_total: int, unique: bool) -> CoverageReport:
    n_a = int(sum(sizes))
    rows = tuple(
        CoverageRow(name, int(k), float(Fraction(int(k), n_a)) if n_a else None, k / n_total)
        for name, k in zip(names, sizes)
    )
    return CoverageReport(float(tau_s), tau_d_from_tau_s(tau_s, alpha), n_total, n_a, unique, rows)


def coverage_report(sets: AdjustableSets, unique: bool = False) -> CoverageReport:
    sizes = [len(s) for s in unique_sets(sets)] if unique else sets.sizes()
    return _report(sets.names, sizes, sets.tau_s, sets.alpha, sets.n_total, unique)


def coverage_sweep(engine: FitEngine, grid: GridSpec | None = None, tau_values: Iterable[float] = (),
                   unique: bool = False, threads: int = 1,
                   table: np.ndarray | None = None) -> list[CoverageReport]:
    """One report per tolerance, all computed from a single fitting pass."""
    grid = engine.grid if grid is None else grid
    if table is None:
        table = fit_table(engine, threads=threads)
    sig = similarity(table, engine.alpha)
    reports = []
    for tau_s in tau_values:
        if not 0 < tau_s <= 1:
            raise ValueError(f"tau_s must be in (0, 1], got {tau_s!r}")
        mask = sig >= tau_s
        if unique:
            mask = mask & (mask.sum(axis=1) == 1)[:, None]
        sizes = [int(c) for c in mask.sum(axis=0)]
        reports.append(_report(engine.names, sizes, tau_s, engine.alpha, grid.n_total, unique))
    return reports


CSV_COLUMNS = ("tau_s", "tau_d", "function", "size", "r", "q")


def reports_to_csv(reports: Sequence[CoverageReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        for row in rep.rows:
            w.writerow([repr(rep.tau_s), repr(rep.tau_d), row.function, row.size,
                        "" if row.r is None else repr(row.r), repr(row.q)])
    return buf.getvalue()


def parse_sweep(text: str) -> list[float]:
    """``"lo:hi:step"`` to an inclusive list of tolerances."""
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise ValueError(f"sweep must look like lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise ValueError(f"invalid sweep {text!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(n)]
