"""
Replication engine and distributional yardsticks.

``replicate`` runs a statistic recipe once per replicate, each on its own
Philox stream keyed by the replicate index, so samples do not depend on the
number of workers or on scheduling order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .rng import SeedSpec, SubStream, make_rng

__all__ = [
    "EmpiricalSample",
    "GumbelLaw",
    "gumbel_cdf",
    "gumbel_sf",
    "gumbel_quantile",
    "exact_max_exp_cdf",
    "ks_distance",
    "mc_pvalue",
    "replicate",
    "replicate_raw",
    "as_seedspec",
]


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted Monte Carlo sample with its provenance."""

    values: np.ndarray
    reps: int
    experiment: str = ""
    seed: int = 0

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.reps != v.size:
            raise InvalidArgumentError(f"reps={self.reps} but sample has {v.size} values")

    @classmethod
    def of(cls, values, experiment: str = "", seed: int = 0) -> "EmpiricalSample":
        v = np.asarray(values, dtype=float)
        return cls(v, int(v.size), experiment, seed)

    def ecdf(self, x):
        return np.searchsorted(self.values, x, side="right") / self.reps

    def to_csv(self, path) -> None:
        np.savetxt(path, self.values, fmt="%.17g", header="value", comments="")

    def ecdf_table(self) -> np.ndarray:
        """``(x, F(x))`` pairs at the distinct sample points."""
        x, counts = np.unique(self.values, return_counts=True)
        return np.column_stack([x, np.cumsum(counts) / self.reps])

    def ecdf_to_csv(self, path) -> None:
        np.savetxt(path, self.ecdf_table(), fmt="%.17g", delimiter=",", header="x,ecdf", comments="")


def gumbel_cdf(x):
    """Standard Gumbel cdf ``exp(-exp(-x))``."""
    return np.exp(-np.exp(-np.asarray(x, dtype=float)))


def gumbel_sf(x):
    """``1 - exp(-exp(-x))`` without cancellation for large ``x``."""
    return -np.expm1(-np.exp(-np.asarray(x, dtype=float)))


def gumbel_quantile(p):
    """Inverse of :func:`gumbel_cdf` on ``(0, 1)``.

    For ``p > 1/2`` the inner logarithm is taken as ``log1p(p - 1)``, where
    ``p - 1`` is exact, so the upper tail keeps full relative precision.
    """
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise InvalidArgumentError("Gumbel quantile needs p in (0, 1)")
    inner = np.where(p > 0.5, np.log1p(np.minimum(p, 1.0) - 1), np.log(p))
    out = -np.log(-inner)
    return out if out.ndim else float(out)


class GumbelLaw:
    """The standard Gumbel law as an object (for APIs that want one)."""

    cdf = staticmethod(gumbel_cdf)
    sf = staticmethod(gumbel_sf)
    quantile = staticmethod(gumbel_quantile)

    def __call__(self, x):
        return gumbel_cdf(x)


def exact_max_exp_cdf(x, q: int):
    """Exact cdf of ``max(E_1..E_q) - log q`` for iid standard exponentials.

    ``F(x) = (1 - exp(-x)/q)^q`` for ``x > -log q`` and 0 otherwise.
    """
    q = int(q)
    if q < 1:
        raise InvalidArgumentError("q must be at least 1")
    x = np.asarray(x, dtype=float)
    inside = x > -math.log(q)
    t = np.where(inside, np.exp(-np.where(inside, x, 0.0)) / q, 0.0)
    out = np.where(inside, np.exp(q * np.log1p(-np.minimum(t, 1.0))), 0.0)
    return out if out.ndim else float(out)


def ks_distance(sample, cdf: Callable) -> float:
    """Two-sided Kolmogorov-Smirnov distance ``sup_x |F_emp(x) - F(x)|``.

    Uses the step-function form ``max_i max(i/N - F(x_i), F(x_i) - (i-1)/N)``.
    """
    x = sample.values if isinstance(sample, EmpiricalSample) else np.sort(np.asarray(sample, float))
    N = x.size
    if N < 1:
        raise InvalidArgumentError("empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - F), np.max(F - (i - 1) / N)))


def mc_pvalue(observed: float, null) -> float:
    """Upper-tail Monte Carlo p-value ``(1 + #{null >= obs}) / (reps + 1)``."""
    vals = null.values if isinstance(null, EmpiricalSample) else np.sort(np.asarray(null, float))
    if vals.size == 0:
        raise InvalidArgumentError("null sample is empty")
    exceed = vals.size - np.searchsorted(vals, observed, side="left")
    return float((1 + exceed) / (vals.size + 1))


def as_seedspec(seed) -> SeedSpec | SubStream:
    if isinstance(seed, (SeedSpec, SubStream)):
        return seed
    if seed is None:
        return SeedSpec()
    return SeedSpec(int(seed))


def _seed_int(seed) -> int:
    s = as_seedspec(seed)
    return s.seed if isinstance(s, SeedSpec) else s.parent.seed


def replicate_raw(recipe: Callable[[np.random.Generator], object], reps: int, seed=0,
                  workers: int = 1) -> list:
    """Run ``recipe(rng)`` for ``reps`` replicates; results in replicate order."""
    reps = int(reps)
    if reps < 1:
        raise InvalidArgumentError("reps must be at least 1")
    base = as_seedspec(seed)

    def one(i):
        return recipe(make_rng(base.child(i)))

    if workers is None or workers <= 1:
        return [one(i) for i in range(reps)]
    with ThreadPoolExecutor(max_workers=int(workers)) as pool:
        return list(pool.map(one, range(reps)))


def replicate(recipe: Callable[[np.random.Generator], float], reps: int, seed=0,
              workers: int = 1, experiment: str = "") -> EmpiricalSample:
    """Collect ``reps`` independent evaluations of a scalar recipe.

    Examples
    --------
    >>> replicate(lambda rng: 7.0, 3).values.tolist()
    [7.0, 7.0, 7.0]
    """
    vals = replicate_raw(recipe, reps, seed, workers)
    return EmpiricalSample.of(np.asarray(vals, dtype=float), experiment, _seed_int(seed))


def rejection_interval(alpha: float, reps: int, width: float = 2.0) -> Sequence[float]:
    """``alpha -/+ width * sqrt(alpha / reps)``; the MC band used for size checks."""
    h = width * math.sqrt(alpha / reps)
    return alpha - h, alpha + h
