"""
Hidden-periodicity tests on normalized periodogram ordinates.

All statistics act on ``V_j = I(w_j) / (2 pi f(w_j))``. The maximum test and
Fisher's ratio are calibrated by the standard Gumbel law; the order-statistic
tests ``U(r)`` and ``R(beta)`` are calibrated by Monte Carlo only.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .errors import DegenerateDataError, InvalidArgumentError, ShapeError
from .montecarlo import EmpiricalSample, gumbel_sf, mc_pvalue, replicate
from .series import FourierGrid, Periodogram
from .spectral import SpectralEstimate

__all__ = [
    "NormalizedOrdinates",
    "TestReport",
    "Peak",
    "normalize",
    "max_test",
    "fisher_g",
    "order_stat_U",
    "chiu_R",
    "detect_peaks",
    "null_sample",
]

DEFAULT_CALIBRATION_REPS = 999


@dataclass(frozen=True)
class NormalizedOrdinates:
    """Whitened ordinates ``V_j``, ``j = 1..q``; ``f_source`` is ``known`` or ``estimated``."""

    grid: FourierGrid
    values: np.ndarray
    f_source: str = "known"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.q,):
            raise ShapeError(f"expected {self.grid.q} ordinates, got shape {v.shape}")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise InvalidArgumentError("normalized ordinates must be finite and nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def q(self) -> int:
        return self.grid.q

    def scaled(self, c: float) -> "NormalizedOrdinates":
        return NormalizedOrdinates(self.grid, c * self.values, self.f_source)

    @classmethod
    def from_values(cls, values, n: int | None = None, f_source: str = "known"):
        """Wrap raw ordinates; ``n`` defaults to ``2 q + 1``."""
        from .series import fourier_grid

        v = np.asarray(values, dtype=float)
        grid = fourier_grid(2 * v.size + 1 if n is None else n)
        return cls(grid, v, f_source)


@dataclass
class TestReport:
    """Outcome of one test.

    ``statistic`` is the centered statistic that is compared with the null
    law, ``reference`` is ``log q`` for the Gumbel-calibrated tests.
    """

    __test__ = False  # not a pytest class

    method: str
    statistic: float
    reference: float
    p_value: float
    p_source: str
    q: int
    peak_index: Optional[int] = None
    peak_freq: Optional[float] = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> "TestReport":
        return cls(**d)


@dataclass(frozen=True)
class Peak:
    index: int
    frequency: float
    statistic: float
    p_value: float


def normalize(pgram: Periodogram, f, f_source: str | None = None) -> NormalizedOrdinates:
    """Divide ordinates by ``2 pi f(w_j)``.

    Parameters
    ----------
    pgram : Periodogram
    f : SpectralEstimate, callable or array_like
        An estimate on the same grid, a density ``w -> f(w)``, or the values
        of ``f`` at the ``q`` grid frequencies.
    """
    if isinstance(f, SpectralEstimate):
        if f.grid.n != pgram.grid.n:
            raise ShapeError(f"spectral estimate built for n={f.grid.n}, periodogram has n={pgram.grid.n}")
        fv = f.fhat
        src = "estimated"
    elif callable(f):
        fv = np.broadcast_to(np.asarray(f(pgram.grid.omegas), dtype=float), (pgram.q,))
        src = "known"
    else:
        fv = np.asarray(f, dtype=float)
        if fv.ndim == 0:
            fv = np.full(pgram.q, float(fv))
        if fv.shape != (pgram.q,):
            raise ShapeError(f"expected {pgram.q} density values, got shape {fv.shape}")
        src = "known"
    if np.any(fv <= 0) or not np.all(np.isfinite(fv)):
        raise InvalidArgumentError("spectral density must be finite and strictly positive on the grid")
    return NormalizedOrdinates(pgram.grid, pgram.ordinates / (2 * np.pi * fv), f_source or src)


def _peak_fields(V: NormalizedOrdinates, i: int):
    return i + 1, float(V.grid.omegas[i])


def max_test(V: NormalizedOrdinates) -> TestReport:
    """Centered maximum ``max_j V_j - log q`` with asymptotic Gumbel p-value."""
    q = V.q
    i = int(np.argmax(V.values))
    ref = math.log(q)
    stat = float(V.values[i]) - ref
    idx, freq = _peak_fields(V, i)
    return TestReport("max-gumbel", stat, ref, float(gumbel_sf(stat)), "asymptotic", q, idx, freq,
                      {"max_ordinate": float(V.values[i]), "f_source": V.f_source})


def fisher_g(V: NormalizedOrdinates) -> TestReport:
    """Fisher's ratio ``g = max V / sum V``, reported centered as ``q g - log q``.

    The raw ratio is kept in ``extra["g"]``.
    """
    total = float(V.values.sum())
    if total <= 0:
        raise DegenerateDataError("all ordinates are zero")
    q = V.q
    i = int(np.argmax(V.values))
    g = float(V.values[i]) / total
    ref = math.log(q)
    stat = q * g - ref
    idx, freq = _peak_fields(V, i)
    return TestReport("fisher-g", stat, ref, float(gumbel_sf(stat)), "asymptotic", q, idx, freq,
                      {"g": g, "f_source": V.f_source})


def _u_stat(values: np.ndarray, r: int) -> float:
    s = np.sort(values)
    return float(s[-r] / s.sum())


def _r_stat(values: np.ndarray, beta: float) -> float:
    s = np.sort(values)
    m = int(math.floor(s.size * beta))
    return float(s[-1] / s[:m].sum())


def null_sample(method: str, q: int, param, reps: int = DEFAULT_CALIBRATION_REPS, seed=0,
                workers: int = 1) -> EmpiricalSample:
    """Null distribution of ``U(r)`` or ``R(beta)`` under iid Exp(1) ordinates.

    iid standard exponential ordinates are the exact law of ``V`` for
    Gaussian white noise with known ``f``.
    """
    if method == "order-U":
        def stat(rng):
            return _u_stat(rng.standard_exponential(q), param)
    elif method == "chiu-R":
        def stat(rng):
            return _r_stat(rng.standard_exponential(q), param)
    else:
        raise InvalidArgumentError(f"no Monte Carlo null for method {method!r}")
    return replicate(stat, reps, seed, workers=workers, experiment=f"{method}:iid-exp:q={q}:param={param}")


def _calibrate(observed, null: Optional[EmpiricalSample], method, q, param, reps, seed, workers):
    if null is None:
        null = null_sample(method, q, param, reps=reps, seed=seed, workers=workers)
    return mc_pvalue(observed, null), null


def order_stat_U(V: NormalizedOrdinates, r: int, null: Optional[EmpiricalSample] = None,
                 reps: int = DEFAULT_CALIBRATION_REPS, seed=0, workers: int = 1) -> TestReport:
    """``U(r)``: the ``r``-th largest ordinate over the sum of all ordinates.

    The p-value comes from a Monte Carlo null sample, by default iid standard
    exponential ordinates (the Gaussian white-noise null).
    """
    q = V.q
    r = int(r)
    if not 1 <= r <= q:
        raise InvalidArgumentError(f"r must lie in [1, q] = [1, {q}], got {r}")
    if V.values.sum() <= 0:
        raise DegenerateDataError("all ordinates are zero")
    stat = _u_stat(V.values, r)
    p, null = _calibrate(stat, null, "order-U", q, r, reps, seed, workers)
    i = int(np.argmax(V.values))
    idx, freq = _peak_fields(V, i)
    return TestReport("order-U", stat, 0.0, p, "monte-carlo", q, idx, freq,
                      {"r": r, "null_reps": null.reps, "null_model": null.experiment,
                       "null_seed": null.seed, "f_source": V.f_source})


def chiu_R(V: NormalizedOrdinates, beta: float, null: Optional[EmpiricalSample] = None,
           reps: int = DEFAULT_CALIBRATION_REPS, seed=0, workers: int = 1) -> TestReport:
    """``R(beta)``: the largest ordinate over the sum of the ``floor(q beta)`` smallest."""
    q = V.q
    if not 0 < beta <= 1:
        raise InvalidArgumentError(f"beta must lie in (0, 1], got {beta}")
    m = int(math.floor(q * beta))
    if m < 1:
        raise InvalidArgumentError(f"floor(q * beta) = 0 for q={q}, beta={beta}")
    s = np.sort(V.values)
    if s[:m].sum() <= 0:
        raise DegenerateDataError("the smallest ordinates are all zero")
    stat = _r_stat(V.values, beta)
    p, null = _calibrate(stat, null, "chiu-R", q, beta, reps, seed, workers)
    i = int(np.argmax(V.values))
    idx, freq = _peak_fields(V, i)
    return TestReport("chiu-R", stat, 0.0, p, "monte-carlo", q, idx, freq,
                      {"beta": beta, "m": m, "null_reps": null.reps, "null_model": null.experiment,
                       "null_seed": null.seed, "f_source": V.f_source})


def detect_peaks(V: NormalizedOrdinates, max_peaks: int = 5, alpha: float = 0.05) -> list[Peak]:
    """Repeatedly apply the maximum test, removing each significant peak.

    After each detection the ordinate is dropped and ``q`` shrinks by one.
    Stops at the first non-significant maximum or after ``max_peaks``.
    """
    if max_peaks < 1:
        raise InvalidArgumentError("max_peaks must be at least 1")
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie in (0, 1)")
    remaining = np.ones(V.q, dtype=bool)
    vals = V.values
    peaks: list[Peak] = []
    while len(peaks) < max_peaks and remaining.any():
        q_cur = int(remaining.sum())
        masked = np.where(remaining, vals, -np.inf)
        i = int(np.argmax(masked))
        stat = float(vals[i]) - math.log(q_cur)
        p = float(gumbel_sf(stat))
        if p >= alpha:
            break
        peaks.append(Peak(i + 1, float(V.grid.omegas[i]), stat, p))
        remaining[i] = False
    return peaks


STATISTICS: dict[str, Callable[..., TestReport]] = {
    "max": max_test,
    "fisher": fisher_g,
    "u": order_stat_U,
    "r": chiu_R,
}
