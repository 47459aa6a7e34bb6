"""Discretized region and the label <-> signal radix codec.

A signal over an ``n_x`` by ``n_y`` grid is a vector of ``n_x`` ordinates,
each taken from the ``n_y`` evenly spaced levels between ``y_min`` and
``y_max``. Signals are numbered by writing the label in radix ``n_y`` with
``n_x`` digits; the least significant digit gives the first sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

# Tolerance used to decide whether an ordinate sits on a grid level.
LEVEL_TOL = 1e-9

_U64_MAX = 2**64 - 1


class GridError(ValueError):
    """Invalid grid configuration."""


class LabelRangeError(IndexError):
    """Label outside ``[0, N_T)``."""


class ConformanceError(ValueError):
    """Signal values do not lie on the grid."""


@dataclass(frozen=True)
class GridSpec:
    n_x: int
    n_y: int
    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0

    def __post_init__(self):
        for name in ("n_x", "n_y"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 2:
                raise GridError(f"{name} must be an integer >= 2, got {v!r}")
        if not self.x_min < self.x_max:
            raise GridError(f"x_min ({self.x_min}) must be below x_max ({self.x_max})")
        if not self.y_min < self.y_max:
            raise GridError(f"y_min ({self.y_min}) must be below y_max ({self.y_max})")
        if self.n_total > _U64_MAX:
            raise GridError(
                f"n_y**n_x = {self.n_y}**{self.n_x} does not fit in an unsigned 64-bit integer"
            )

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_x - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.n_y - 1)

    @property
    def x_range(self) -> float:
        return self.x_max - self.x_min

    @property
    def n_total(self) -> int:
        """Number of distinct signals, ``n_y ** n_x``."""
        return int(self.n_y) ** int(self.n_x)

    @property
    def abscissae(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x) * self.dx

    @property
    def levels(self) -> np.ndarray:
        return self.y_min + np.arange(self.n_y) * self.dy

    @property
    def is_symmetric(self) -> bool:
        """True when negating a grid signal yields another grid signal."""
        return self.n_y % 2 == 1 and abs(self.y_min + self.y_max) <= LEVEL_TOL

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "y_min": self.y_min,
            "y_max": self.y_max,
            "n_x": int(self.n_x),
            "n_y": int(self.n_y),
        }


@dataclass(frozen=True)
class DiscreteSignal:
    label: int
    values: tuple[float, ...] = field(compare=True)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _check_label(n: int, g: GridSpec) -> int:
    n = int(n)
    if not 0 <= n < g.n_total:
        raise LabelRangeError(f"label {n} outside [0, {g.n_total})")
    return n


def label_to_digits(n: int, g: GridSpec) -> list[int]:
    """Radix-``n_y`` digits of ``n``, least significant (first sample) first."""
    n = _check_label(n, g)
    digits = []
    for _ in range(g.n_x):
        n, p = divmod(n, g.n_y)
        digits.append(p)
    return digits


def digits_to_label(digits: Sequence[int], g: GridSpec) -> int:
    n = 0
    for p in reversed(digits):
        n = n * g.n_y + int(p)
    return n


def label_to_signal(n: int, g: GridSpec) -> DiscreteSignal:
    digits = label_to_digits(n, g)
    values = tuple(float(p * g.dy + g.y_min) for p in digits)
    return DiscreteSignal(int(n), values)


def values_to_digits(values: Sequence[float], g: GridSpec) -> list[int]:
    """Map ordinates back to level indices, validating conformance."""
    if len(values) != g.n_x:
        raise ConformanceError(f"expected {g.n_x} values, got {len(values)}")
    digits = []
    for j, v in enumerate(values):
        k = (float(v) - g.y_min) / g.dy
        p = round(k)
        if abs(k - p) > LEVEL_TOL or not 0 <= p < g.n_y:
            raise ConformanceError(f"value {v!r} at position {j} is not a grid level")
        digits.append(int(p))
    return digits


def signal_to_label(s: DiscreteSignal | Sequence[float], g: GridSpec) -> int:
    values = s.values if isinstance(s, DiscreteSignal) else s
    return digits_to_label(values_to_digits(values, g), g)


def negate_label(n: int, g: GridSpec) -> int:
    """Label of the mirrored signal ``-f`` on a symmetric grid."""
    if not g.is_symmetric:
        raise GridError("negation requires odd n_y and y_min == -y_max")
    return digits_to_label([g.n_y - 1 - p for p in label_to_digits(n, g)], g)


def _check_range(lo: int, hi: int, g: GridSpec) -> None:
    if not 0 <= lo <= hi <= g.n_total:
        raise LabelRangeError(f"range [{lo}, {hi}) not within [0, {g.n_total}]")


def iterate_signals(g: GridSpec, lo: int = 0, hi: int | None = None) -> Iterator[DiscreteSignal]:
    """Yield the signals for labels ``lo .. hi-1`` in ascending order."""
    hi = g.n_total if hi is None else hi
    _check_range(lo, hi, g)
    for n in range(lo, hi):
        yield label_to_signal(n, g)


def digit_block(g: GridSpec, lo: int, hi: int) -> np.ndarray:
    """Digit matrix, shape ``(hi - lo, n_x)``, for a contiguous label range."""
    _check_range(lo, hi, g)
    labels = np.arange(lo, hi, dtype=np.uint64)
    out = np.empty((hi - lo, g.n_x), dtype=np.int64)
    base = np.uint64(g.n_y)
    for j in range(g.n_x):
        out[:, j] = labels % base
        labels //= base
    return out


def signal_block(g: GridSpec, lo: int, hi: int) -> np.ndarray:
    """Vectorized ``label_to_signal`` over ``[lo, hi)``; shape ``(hi - lo, n_x)``."""
    return digit_block(g, lo, hi) * g.dy + g.y_min


def labels_to_values(labels: Sequence[int] | np.ndarray, g: GridSpec) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.uint64)
    out = np.empty((labels.size, g.n_x), dtype=np.int64)
    base = np.uint64(g.n_y)
    rest = labels.copy()
    for j in range(g.n_x):
        out[:, j] = rest % base
        rest //= base
    return out * g.dy + g.y_min


def values_to_labels(values: np.ndarray, g: GridSpec) -> np.ndarray:
    """Vectorized ``signal_to_label`` over the rows of ``values`` (uint64)."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[1] != g.n_x:
        raise ConformanceError(f"expected shape (N, {g.n_x}), got {values.shape}")
    k = (values - g.y_min) / g.dy
    p = np.rint(k)
    bad = (np.abs(k - p) > LEVEL_TOL) | (p < 0) | (p >= g.n_y)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ConformanceError(f"value {values[row, col]!r} at row {row}, position {col} is not a grid level")
    out = np.zeros(values.shape[0], dtype=np.uint64)
    base = np.uint64(g.n_y)
    for j in range(g.n_x - 1, -1, -1):
        out = out * base + p[:, j].astype(np.uint64)
    return out
