"""Reference functions linear in their coefficients, and their least-squares fits.

Each reference function is an ordered list of basis terms. A fit of a
signal returns the coefficients in term order, the range-normalized RMS
error ``delta`` and the similarity ``sigma = exp(-alpha * delta)``.

The presets list the constant term first so that coefficient 0 is the
offset ``a_0`` and coefficient 1 is the shape coefficient ``a_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import DiscreteSignal, GridSpec

DEFAULT_ALPHA = 10.0

# Deltas below this are reported as exactly zero (signal representable in the basis).
ZERO_DELTA_TOL = 1e-10

TERM_KINDS = ("constant", "power", "sine", "cosine")

# "range": divide the squared error sum by x_max - x_min (default).
# "samples": divide by n_x, i.e. the conventional RMS.
NORMALIZATIONS = ("range", "samples")


class ConfigurationError(ValueError):
    """Reference function set cannot be fitted on the given grid."""


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class BasisTerm:
    kind: str
    parameter: float = 0.0

    def __post_init__(self):
        if self.kind not in TERM_KINDS:
            raise ConfigurationError(f"unknown term kind {self.kind!r}; expected one of {TERM_KINDS}")
        if self.kind == "power":
            p = self.parameter
            if p < 0 or float(p) != int(p):
                raise ConfigurationError(f"power exponent must be a non-negative integer, got {p!r}")
            object.__setattr__(self, "parameter", int(p))
        elif self.kind == "constant":
            object.__setattr__(self, "parameter", 0)
        else:
            object.__setattr__(self, "parameter", float(self.parameter))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.ones_like(x)
        if self.kind == "power":
            return x ** self.parameter
        if self.kind == "sine":
            return np.sin(self.parameter * x)
        return np.cos(self.parameter * x)

    def describe(self) -> str:
        if self.kind == "constant":
            return "1"
        if self.kind == "power":
            return "x" if self.parameter == 1 else f"x^{self.parameter}"
        fn = "sin" if self.kind == "sine" else "cos"
        return f"{fn}({self.parameter:g}x)"

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant"}
        return {"kind": self.kind, "parameter": self.parameter}


@dataclass(frozen=True)
class ReferenceFunctionSpec:
    name: str
    terms: tuple[BasisTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ConfigurationError(f"function {self.name!r} has no terms")
        if len(set(terms)) != len(terms):
            raise ConfigurationError(f"function {self.name!r} has duplicate terms")

    @property
    def m(self) -> int:
        return len(self.terms)

    def describe(self) -> str:
        return " + ".join(f"a{k}*{t.describe()}" if t.kind != "constant" else f"a{k}"
                          for k, t in enumerate(self.terms))

    def to_dict(self) -> dict:
        return {"name": self.name, "terms": [t.to_dict() for t in self.terms]}


CONST = BasisTerm("constant")


def power_function(p: int, name: str | None = None) -> ReferenceFunctionSpec:
    """``a_1 x^p + a_0``."""
    return ReferenceFunctionSpec(name or f"x^{p}", (CONST, BasisTerm("power", p)))


def sine_function(w: float, name: str | None = None) -> ReferenceFunctionSpec:
    """``a_1 sin(w x) + a_0``."""
    return ReferenceFunctionSpec(name or f"sin({w:g}x)", (CONST, BasisTerm("sine", w)))


def cosine_function(w: float, name: str | None = None) -> ReferenceFunctionSpec:
    return ReferenceFunctionSpec(name or f"cos({w:g}x)", (CONST, BasisTerm("cosine", w)))


def polynomial_function(order: int, name: str | None = None) -> ReferenceFunctionSpec:
    """Complete polynomial ``a_P x^P + ... + a_1 x + a_0``."""
    terms = (CONST,) + tuple(BasisTerm("power", p) for p in range(1, order + 1))
    return ReferenceFunctionSpec(name or f"poly{order}", terms)


def four_power_set() -> list[ReferenceFunctionSpec]:
    return [power_function(p, f"g{p}") for p in (1, 2, 3, 4)]


def hybrid_set() -> list[ReferenceFunctionSpec]:
    return [power_function(1, "g1"), power_function(2, "g2"),
            sine_function(3, "g3"), sine_function(5, "g4")]


def hybrid_extended_set() -> list[ReferenceFunctionSpec]:
    return [power_function(1, "g1"), power_function(2, "g2"),
            power_function(3, "g3"), power_function(4, "g4"),
            sine_function(3, "g5"), sine_function(5, "g6")]


PRESET_SETS = {
    "four_power": four_power_set,
    "hybrid": hybrid_set,
    "hybrid_extended": hybrid_extended_set,
    "poly4": lambda: [polynomial_function(4, "g1")],
}


@dataclass(frozen=True)
class FitOutcome:
    function_index: int
    coefficients: tuple[float, ...]
    delta: float
    sigma: float


def error_denominator(g: GridSpec, normalization: str = "range") -> float:
    if normalization == "range":
        return g.x_range
    if normalization == "samples":
        return float(g.n_x)
    raise ConfigurationError(f"unknown normalization {normalization!r}; expected one of {NORMALIZATIONS}")


def rms_difference(f, h, g: GridSpec, normalization: str = "range") -> float:
    """RMS difference ``sqrt(sum((f - h)^2) / (x_max - x_min))``.

    With ``normalization="samples"`` the sum is divided by ``n_x`` instead.
    """
    f = f.as_array() if isinstance(f, DiscreteSignal) else np.asarray(f, dtype=float)
    h = h.as_array() if isinstance(h, DiscreteSignal) else np.asarray(h, dtype=float)
    if f.shape != h.shape or f.ndim != 1:
        raise ShapeError(f"shape mismatch: {f.shape} vs {h.shape}")
    if f.size != g.n_x:
        raise ShapeError(f"expected {g.n_x} samples, got {f.size}")
    d = f - h
    return math.sqrt(float(d @ d) / error_denominator(g, normalization))


def similarity(delta, alpha: float = DEFAULT_ALPHA):
    """``exp(-alpha * delta)``; accepts scalars or arrays."""
    out = np.exp(-alpha * np.asarray(delta, dtype=float))
    return float(out) if out.ndim == 0 else out


class _Solver:
    """Thin-QR least-squares solver for one design matrix."""

    def __init__(self, spec: ReferenceFunctionSpec, x: np.ndarray):
        n_x = x.size
        if spec.m > n_x:
            raise ConfigurationError(
                f"function {spec.name!r} has {spec.m} terms but the grid has only {n_x} samples"
            )
        self.spec = spec
        self.design = np.column_stack([t.evaluate(x) for t in spec.terms])
        q, r = np.linalg.qr(self.design)
        diag = np.abs(np.diag(r))
        if diag.min() <= 1e-10 * max(diag.max(), 1.0):
            raise ConfigurationError(f"function {spec.name!r} has a rank-deficient design matrix on this grid")
        # coefficients = signals @ coef_map.T ; coef_map = R^-1 Q^T
        self.coef_map = np.linalg.solve(r, q.T)

    def fit_block(self, signals: np.ndarray, denom: float) -> tuple[np.ndarray, np.ndarray]:
        # Column-by-column accumulation in fixed order: every row gets the same
        # arithmetic regardless of block shape or position, so results are
        # bit-identical across chunkings and exactly odd under negation.
        n, n_x = signals.shape
        m = self.coef_map.shape[0]
        coefs = np.zeros((n, m))
        for k in range(m):
            for j in range(n_x):
                coefs[:, k] += signals[:, j] * self.coef_map[k, j]
        sse = np.zeros(n)
        for j in range(n_x):
            recon = np.zeros(n)
            for k in range(m):
                recon += coefs[:, k] * self.design[j, k]
            r = signals[:, j] - recon
            sse += r * r
        delta = np.sqrt(sse / denom)
        delta[delta < ZERO_DELTA_TOL] = 0.0
        return coefs, delta


class FitEngine:
    """Precomputed least-squares solvers for a set of reference functions on one grid."""

    def __init__(self, specs: Sequence[ReferenceFunctionSpec], grid: GridSpec,
                 alpha: float = DEFAULT_ALPHA, normalization: str = "range"):
        self.denominator = error_denominator(grid, normalization)
        self.normalization = normalization
        if not alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha!r}")
        if not specs:
            raise ConfigurationError("at least one reference function is required")
        self.specs = tuple(specs)
        self.grid = grid
        self.alpha = float(alpha)
        x = grid.abscissae
        self._solvers = [_Solver(s, x) for s in self.specs]

    def __len__(self) -> int:
        return len(self.specs)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def design_matrix(self, i: int) -> np.ndarray:
        return self._solvers[i].design.copy()

    def fit(self, f, i: int) -> FitOutcome:
        values = f.as_array() if isinstance(f, DiscreteSignal) else np.asarray(f, dtype=float)
        if values.shape != (self.grid.n_x,):
            raise ShapeError(f"expected {self.grid.n_x} samples, got shape {values.shape}")
        coefs, delta = self._solvers[i].fit_block(values[None, :], self.denominator)
        d = float(delta[0])
        return FitOutcome(i, tuple(float(c) for c in coefs[0]), d, similarity(d, self.alpha))

    def fit_all(self, f) -> list[FitOutcome]:
        return [self.fit(f, i) for i in range(len(self.specs))]

    def fit_block(self, signals: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients ``(n, m)`` and deltas ``(n,)`` of function ``i`` for a batch."""
        return self._solvers[i].fit_block(np.asarray(signals, dtype=float), self.denominator)

    def delta_block(self, signals: np.ndarray) -> np.ndarray:
        """Deltas for a batch of signals, shape ``(len(signals), n_functions)``."""
        out = np.empty((signals.shape[0], len(self._solvers)))
        for i, s in enumerate(self._solvers):
            out[:, i] = s.fit_block(signals, self.denominator)[1]
        return out

    def reconstruct(self, coefficients: Sequence[float], i: int) -> np.ndarray:
        return self._solvers[i].design @ np.asarray(coefficients, dtype=float)

    def fingerprint(self) -> list[dict]:
        return [s.to_dict() for s in self.specs]


def build_engine(specs: Sequence[ReferenceFunctionSpec], grid: GridSpec,
                 alpha: float = DEFAULT_ALPHA, normalization: str = "range") -> FitEngine:
    return FitEngine(specs, grid, alpha, normalization)
