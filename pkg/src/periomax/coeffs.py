"""
Finitely truncated two-sided filter coefficients ``{a_j : lo <= j <= hi}``.

The family tag records how the infinite sequence behaves beyond the
truncation point, which the condition checkers and tail sums rely on.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy.special import zeta

from .errors import InvalidArgumentError

__all__ = ["Coefficients", "geometric", "polynomial", "explicit", "as_coefficients"]

GEOMETRIC_TAIL_TOL = 1e-8
POLYNOMIAL_CAP = 10_000
POLYNOMIAL_WARN_TAIL = 1e-4


@dataclass(frozen=True)
class Coefficients:
    """Filter taps ``values[i] = a_{first_lag + i}``.

    ``family`` is one of ``"geometric"``, ``"polynomial"`` or ``"explicit"``;
    ``params`` holds the family parameters (``rho``, ``kappa``, ``scale``,
    ``two_sided``).
    """

    values: np.ndarray
    first_lag: int = 0
    family: str = "explicit"
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        if v.ndim != 1 or v.size == 0:
            raise InvalidArgumentError("coefficient set must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("coefficients must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "first_lag", int(self.first_lag))
        object.__setattr__(self, "params", dict(self.params))

    @property
    def last_lag(self) -> int:
        return self.first_lag + self.values.size - 1

    @property
    def lags(self) -> np.ndarray:
        return np.arange(self.first_lag, self.last_lag + 1)

    @property
    def truncation(self) -> int:
        """``L`` such that every tap lies in ``|j| <= L``."""
        return max(abs(self.first_lag), abs(self.last_lag))

    @property
    def is_causal(self) -> bool:
        return self.first_lag >= 0

    def __getitem__(self, j: int) -> float:
        i = int(j) - self.first_lag
        if 0 <= i < self.values.size:
            return float(self.values[i])
        return 0.0

    def window(self, m: int) -> "Coefficients":
        """Taps restricted to ``|j| <= m`` (zeros elsewhere, same lag span)."""
        v = np.where(np.abs(self.lags) <= m, self.values, 0.0)
        return Coefficients(v, self.first_lag, "explicit", {})

    def abs_tail(self, n: int) -> float:
        """``sum_{|j| >= n} |a_j|`` for the infinite sequence.

        Uses the family's closed form where one exists; for explicit sets
        the truncated taps are all there is.
        """
        n = max(int(n), 0)
        p = self.params
        sides = 2 if p.get("two_sided") else 1
        if self.family == "geometric":
            rho = abs(p["rho"])
            scale = abs(p.get("scale", 1.0))
            one = scale * rho**n / (1 - rho)
            if n == 0 and sides == 2:
                return 2 * one - scale
            return sides * one
        if self.family == "polynomial":
            kappa = p["kappa"]
            scale = abs(p.get("scale", 1.0))
            # a_j = scale * (1 + |j|)^-kappa
            one = scale * float(zeta(kappa, n + 1))
            if n == 0 and sides == 2:
                return 2 * one - scale
            return sides * one
        mask = np.abs(self.lags) >= n
        return float(np.abs(self.values[mask]).sum())

    def to_dict(self) -> dict:
        if self.family == "explicit":
            return {"family": "explicit", "values": self.values.tolist(), "first_lag": self.first_lag}
        d = {"family": self.family, **self.params}
        d["truncation"] = self.truncation
        return d


def geometric(rho: float, truncation: int | None = None, two_sided: bool = False,
              scale: float = 1.0) -> Coefficients:
    """``a_j = scale * rho^|j|`` for ``j >= 0`` (or all ``j`` when two-sided).

    The default truncation is the smallest ``L`` whose discarded tail
    ``sum_{j > L} |a_j|`` is below ``1e-8``.
    """
    rho = float(rho)
    if not 0 <= abs(rho) < 1:
        raise InvalidArgumentError(f"geometric rate must satisfy |rho| < 1, got {rho}")
    if truncation is None:
        r = abs(rho)
        truncation = 0
        while abs(scale) * r ** (truncation + 1) / (1 - r) >= GEOMETRIC_TAIL_TOL:
            truncation += 1
    L = int(truncation)
    j = np.arange(-L if two_sided else 0, L + 1)
    vals = scale * rho ** np.abs(j)
    return Coefficients(vals, int(j[0]), "geometric",
                        {"rho": rho, "scale": float(scale), "two_sided": bool(two_sided)})


def polynomial(kappa: float, truncation: int = POLYNOMIAL_CAP, two_sided: bool = False,
               scale: float = 1.0) -> Coefficients:
    """``a_j = scale * (1 + |j|)^-kappa`` with ``kappa > 1``.

    Warns when the discarded tail beyond ``truncation`` exceeds ``1e-4``.
    """
    kappa = float(kappa)
    if kappa <= 1:
        raise InvalidArgumentError(f"polynomial decay needs kappa > 1, got {kappa}")
    L = int(truncation)
    tail = abs(scale) * float(zeta(kappa, L + 2))
    if tail > POLYNOMIAL_WARN_TAIL:
        warnings.warn(f"polynomial coefficients truncated at L={L} drop a tail of {tail:.2e}",
                      RuntimeWarning, stacklevel=2)
    j = np.arange(-L if two_sided else 0, L + 1)
    vals = scale * (1.0 + np.abs(j)) ** (-kappa)
    return Coefficients(vals, int(j[0]), "polynomial",
                        {"kappa": kappa, "scale": float(scale), "two_sided": bool(two_sided)})


def explicit(values, first_lag: int = 0) -> Coefficients:
    """Finite coefficient list starting at lag ``first_lag``."""
    return Coefficients(np.asarray(values, dtype=float), first_lag, "explicit", {})


def as_coefficients(spec) -> Coefficients:
    """Accept a :class:`Coefficients`, a ``{lag: value}`` mapping, a dict with a
    ``family`` key, or a plain sequence starting at lag 0."""
    if isinstance(spec, Coefficients):
        return spec
    if isinstance(spec, Mapping):
        if "family" in spec:
            fam = spec["family"]
            if fam == "geometric":
                return geometric(spec["rho"], spec.get("truncation"), spec.get("two_sided", False),
                                 spec.get("scale", 1.0))
            if fam == "polynomial":
                return polynomial(spec["kappa"], spec.get("truncation", POLYNOMIAL_CAP),
                                  spec.get("two_sided", False), spec.get("scale", 1.0))
            if fam == "explicit":
                return explicit(spec["values"], spec.get("first_lag", 0))
            raise InvalidArgumentError(f"unknown coefficient family {fam!r}")
        if not spec:
            raise InvalidArgumentError("empty coefficient set")
        lags = sorted(int(k) for k in spec)
        lo, hi = lags[0], lags[-1]
        vals = np.zeros(hi - lo + 1)
        for k, v in spec.items():
            vals[int(k) - lo] = float(v)
        return explicit(vals, lo)
    vals = np.asarray(spec, dtype=float)
    if vals.size == 0:
        raise InvalidArgumentError("empty coefficient set")
    return explicit(vals, 0)
