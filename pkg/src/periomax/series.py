"""
Time-series container, Fourier grid and raw periodogram.

The periodogram follows the one-based convention

    I(w) = n^{-1} |sum_{k=1}^{n} X_k exp(i w k)|^2 .

Internally the FFT sums over k = 0..n-1; at a Fourier frequency the two sums
differ by the unit-modulus factor exp(i w_j), so the ordinates agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from .errors import InvalidDataError, InvalidLengthError

__all__ = [
    "MIN_LENGTH",
    "TimeSeries",
    "FourierGrid",
    "Periodogram",
    "as_series",
    "fourier_grid",
    "periodogram",
    "naive_periodogram",
    "parseval_check",
]

MIN_LENGTH = 4


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeSeries:
    """A finite real sample path ``X_1, ..., X_n``.

    ``meta`` is a free-form provenance record; the simulators store the
    source tag and seed there.
    """

    values: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1:
            raise InvalidDataError(f"series must be one-dimensional, got shape {v.shape}")
        try:
            v = v.astype(float)
        except (TypeError, ValueError) as exc:
            raise InvalidDataError("series contains non-numeric values") from exc
        if v.size < MIN_LENGTH:
            raise InvalidLengthError(f"series length {v.size} < {MIN_LENGTH}")
        if not np.all(np.isfinite(v)):
            raise InvalidDataError("series contains NaN or Inf")
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def centered(self) -> "TimeSeries":
        meta = dict(self.meta)
        meta["centered"] = True
        return TimeSeries(self.values - self.values.mean(), meta)


def as_series(x) -> TimeSeries:
    """Coerce an array-like or :class:`TimeSeries` to a :class:`TimeSeries`."""
    if isinstance(x, TimeSeries):
        return x
    return TimeSeries(np.asarray(x))


@dataclass(frozen=True)
class FourierGrid:
    """Interior Fourier frequencies ``w_j = 2 pi j / n`` for ``j = 1..q``."""

    n: int
    q: int
    omegas: np.ndarray

    @property
    def indices(self) -> np.ndarray:
        return np.arange(1, self.q + 1)

    def index_of(self, omega: float) -> int:
        """Index ``j`` of the grid frequency nearest to ``omega``."""
        j = int(np.rint(omega * self.n / (2 * np.pi)))
        return min(max(j, 1), self.q)


def fourier_grid(n: int) -> FourierGrid:
    """Build the grid of Fourier frequencies strictly inside ``(0, pi)``.

    ``q = max{j : 0 < 2 pi j / n < pi}``, i.e. ``n // 2 - 1`` for even ``n`` and
    ``(n - 1) // 2`` for odd ``n``. The Nyquist frequency is excluded.

    Examples
    --------
    >>> fourier_grid(8).q
    3
    >>> fourier_grid(9).q
    4
    """
    n = int(n)
    if n < MIN_LENGTH:
        raise InvalidLengthError(f"n = {n} < {MIN_LENGTH}")
    q = (n - 1) // 2
    omegas = 2 * np.pi * np.arange(1, q + 1) / n
    return FourierGrid(n, q, _frozen(omegas))


@dataclass(frozen=True)
class Periodogram:
    """Ordinates ``I(w_j)``, ``j = 1..q``, with the full circle kept for checks."""

    grid: FourierGrid
    ordinates: np.ndarray
    full: Optional[np.ndarray] = None

    @property
    def q(self) -> int:
        return self.grid.q


def periodogram(series, keep_full: bool = False) -> Periodogram:
    """Raw (untapered) periodogram at the interior Fourier frequencies.

    Parameters
    ----------
    series : TimeSeries or array_like
        Sample ``X_1..X_n``. No mean removal is done here.
    keep_full : bool
        Also keep ordinates at all ``j = 0..n-1`` (used for Parseval checks).
    """
    ts = as_series(series)
    grid = fourier_grid(ts.n)
    full = np.abs(np.fft.fft(ts.values)) ** 2 / ts.n
    ords = _frozen(full[1 : grid.q + 1])
    return Periodogram(grid, ords, _frozen(full) if keep_full else None)


def naive_periodogram(series, omegas=None) -> np.ndarray:
    """Direct O(n q) evaluation of the defining sum (reference path).

    Sums over ``k = 1..n`` exactly as written, at ``omegas`` (default: the
    interior Fourier grid).
    """
    x = as_series(series).values
    n = x.size
    if omegas is None:
        omegas = fourier_grid(n).omegas
    k = np.arange(1, n + 1)
    phase = np.exp(1j * np.outer(np.asarray(omegas, dtype=float), k))
    return np.abs(phase @ x) ** 2 / n


def parseval_check(series, floor: float = 1e-300) -> float:
    """Relative gap between ``sum_j I(2 pi j/n)`` over the full circle and ``sum X_k^2``."""
    ts = as_series(series)
    full = np.abs(np.fft.fft(ts.values)) ** 2 / ts.n
    energy = float(np.dot(ts.values, ts.values))
    return abs(float(full.sum()) - energy) / max(energy, floor)
