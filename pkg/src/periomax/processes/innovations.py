"""Standardized iid innovation laws (mean 0, variance 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats
from scipy.special import gamma as gamma_fn

from ..errors import InvalidArgumentError
from ..rng import make_rng

__all__ = ["InnovationSpec", "gen_innovations", "LAWS"]

LAWS = ("gaussian", "student_t", "two_point", "pareto")
_ALIASES = {
    "normal": "gaussian",
    "t": "student_t",
    "symmetric_two_point": "two_point",
    "rademacher": "two_point",
    "symmetrized_pareto": "pareto",
}

_AUX_SEED = 0x5EED_C0DE


@dataclass(frozen=True)
class InnovationSpec:
    """An innovation law.

    ``param`` is the degrees of freedom ``nu`` for ``student_t`` and the tail
    exponent ``s`` for ``pareto`` (``P(|Z| > x) = x^-s`` for ``x >= 1``).
    Parameters that leave the variance infinite are accepted here so that the
    condition checkers can report on them; drawing from such a law fails.
    """

    law: str = "gaussian"
    param: float | None = None

    def __post_init__(self):
        law = _ALIASES.get(self.law, self.law)
        if law not in LAWS:
            raise InvalidArgumentError(f"unknown innovation law {self.law!r}; choose from {LAWS}")
        object.__setattr__(self, "law", law)
        if law in ("student_t", "pareto"):
            if self.param is None:
                raise InvalidArgumentError(f"{law} needs a parameter")
            if not self.param > 0:
                raise InvalidArgumentError(f"{law} parameter must be positive")
            object.__setattr__(self, "param", float(self.param))
        else:
            object.__setattr__(self, "param", None)

    # -- moments -----------------------------------------------------------
    @property
    def moment_bound(self) -> float:
        """Supremum of the ``p`` with ``E|eps|^p < inf``."""
        if self.law in ("gaussian", "two_point"):
            return math.inf
        return float(self.param)

    def has_moment(self, p: float) -> bool:
        return p < self.moment_bound

    @property
    def standardizable(self) -> bool:
        return self.has_moment(2)

    def _check(self):
        if not self.standardizable:
            raise InvalidArgumentError(
                f"{self.law}({self.param}) has infinite variance and cannot be standardized")

    @property
    def is_symmetric(self) -> bool:
        return True

    def fourth_moment(self) -> float:
        if self.law == "gaussian":
            return 3.0
        if self.law == "two_point":
            return 1.0
        if not self.has_moment(4):
            return math.inf
        v = self.param
        if self.law == "student_t":
            return 3 * (v - 2) / (v - 4)
        return (v / (v - 4)) / (v / (v - 2)) ** 2

    def draw(self, size, rng: np.random.Generator) -> np.ndarray:
        self._check()
        if self.law == "gaussian":
            return rng.standard_normal(size)
        if self.law == "two_point":
            return 2.0 * rng.integers(0, 2, size=size) - 1.0
        if self.law == "student_t":
            v = self.param
            return rng.standard_t(v, size) * math.sqrt((v - 2) / v)
        s = self.param
        mag = rng.random(size) ** (-1.0 / s)
        sign = 2.0 * rng.integers(0, 2, size=size) - 1.0
        return sign * mag / math.sqrt(s / (s - 2))

    def tail_second_moment(self, t: float) -> float:
        """``E eps^2 1{|eps| >= t}``; infinite when the variance is."""
        t = float(t)
        if self.law == "two_point":
            return 1.0 if t <= 1 else 0.0
        if self.law == "gaussian":
            t = max(t, 0.0)
            return float(2 * (t * stats.norm.pdf(t) + stats.norm.sf(t)))
        if self.law == "pareto":
            s = self.param
            if s <= 2:
                return math.inf
            c = math.sqrt(s / (s - 2))
            return max(c * t, 1.0) ** (2 - s)
        v = self.param
        if v <= 2:
            return math.inf
        c = math.sqrt((v - 2) / v)
        u = max(t / c, 0.0)
        val, _ = integrate.quad(lambda x: x * x * stats.t.pdf(x, v), u, np.inf, limit=200)
        return float(2 * c * c * val)

    def coupling_norm(self, p: float = 2.0) -> float:
        """``||eps - eps*||_p`` for an independent copy ``eps*``."""
        p = float(p)
        if p < 1:
            raise InvalidArgumentError("p must be at least 1")
        if not self.has_moment(p):
            return math.inf
        if p == 2:
            return math.sqrt(2.0)
        if self.law == "gaussian":
            return (2**p * gamma_fn((p + 1) / 2) / math.sqrt(math.pi)) ** (1 / p)
        if self.law == "two_point":
            return 2 * 2 ** (-1 / p)
        rng = make_rng(_AUX_SEED)
        d = self.draw(2_000_000, rng) - self.draw(2_000_000, rng)
        return float(np.mean(np.abs(d) ** p) ** (1 / p))

    def to_dict(self) -> dict:
        d = {"law": self.law}
        if self.param is not None:
            d["param"] = self.param
        return d

    @classmethod
    def from_dict(cls, d) -> "InnovationSpec":
        if isinstance(d, str):
            return cls(d)
        param = d.get("param", d.get("df", d.get("nu", d.get("s"))))
        return cls(d.get("law", "gaussian"), param)


def gen_innovations(spec: InnovationSpec, count: int, seed=None) -> np.ndarray:
    """Draw ``count`` iid standardized innovations.

    ``seed`` may be a :class:`~periomax.rng.SeedSpec`, an int, or a
    ``numpy.random.Generator``.
    """
    if count < 1:
        raise InvalidArgumentError("count must be at least 1")
    if isinstance(spec, (str, dict)):
        spec = InnovationSpec.from_dict(spec)
    return spec.draw(int(count), make_rng(seed))
