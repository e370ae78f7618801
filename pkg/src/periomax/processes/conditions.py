"""
Numerical checks of the sufficient conditions for the Gumbel limit.

Each rate condition of the form ``c_n = o(1/log n)`` is checked by tabulating
``c_n * log n`` over a grid of ``n`` and asking that the sequence be
nonincreasing and heading to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError
from .dependence import dependence_profile, theta_tail
from .models import LinearModel, RecursionModel, spectral_density

__all__ = ["ConditionRow", "ConditionReport", "check_conditions", "decreasing_to_zero"]

DEFAULT_GRID = (10, 100, 1000, 10_000)
SPECTRAL_FLOOR_TOL = 1e-10


@dataclass(frozen=True)
class ConditionRow:
    name: str
    n_grid: tuple
    values: tuple
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "n_grid": list(self.n_grid),
                "values": [v if math.isfinite(v) else str(v) for v in self.values],
                "passed": self.passed, "note": self.note}


@dataclass(frozen=True)
class ConditionReport:
    model: dict
    rows: tuple = ()
    flags: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def row(self, name: str) -> ConditionRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"model": self.model, "passed": self.passed, "flags": self.flags,
                "rows": [r.to_dict() for r in self.rows]}


def decreasing_to_zero(values, rtol: float = 1e-12) -> bool:
    """Finite, nonincreasing, and either zero at the end or strictly below the start."""
    v = np.asarray(values, dtype=float)
    if v.size == 0 or not np.all(np.isfinite(v)) or np.any(v < 0):
        return False
    if np.any(np.diff(v) > rtol * np.maximum(v[:-1], 1e-300)):
        return False
    return bool(v[-1] == 0 or v[-1] < v[0])


def _row(name, grid, values, note="") -> ConditionRow:
    vals = tuple(float(v) for v in values)
    return ConditionRow(name, tuple(grid), vals, decreasing_to_zero(vals), note)


def _default_s(model) -> float:
    bound = model.innovation.moment_bound
    if bound <= 2:
        return 2.0
    return min(4.0, 2 + (bound - 2) / 2) if math.isfinite(bound) else 4.0


def check_conditions(model, n_grid=DEFAULT_GRID, s: float | None = None,
                     reps: int = 4000, seed=0) -> ConditionReport:
    """Tabulate the rate conditions for a model.

    Rows (when they apply):

    ``c1``
        the spectral density is bounded away from zero (closed-form models only);
    ``a3``
        ``(sum_{|j| >= n} |a_j|) log n`` for linear models;
    ``a4``
        ``E eps^2 1{|eps| >= n} log n``; for a nonlinear transform also
        ``a4_strong`` with ``(log n)^2``;
    ``theta``
        ``Theta_{n,s} log n`` with ``s > 2`` (default ``min(4, midpoint to the
        moment bound)``).
    """
    grid = tuple(int(n) for n in n_grid)
    if not grid or min(grid) < 2:
        raise InvalidArgumentError("n_grid entries must be at least 2")
    logs = np.log(grid)
    rows = []
    flags = {}
    innov = model.innovation

    try:
        f = spectral_density(model)
    except InvalidArgumentError:
        f = None
    if f is not None:
        w = np.linspace(0, np.pi, 8193)
        fmin = float(np.min(f(w)))
        ok = fmin > SPECTRAL_FLOOR_TOL * max(float(np.max(f(w))), 1e-300)
        rows.append(ConditionRow("c1", (), (fmin,), ok,
                                 "minimum of f over [0, pi]" if ok else "spectral density touches zero"))

    if isinstance(model, LinearModel):
        coeff_tail = [model.coeffs.abs_tail(n) for n in grid]
        rows.append(_row("a3", grid, np.multiply(coeff_tail, logs), f"family={model.coeffs.family}"))

    tails = np.array([innov.tail_second_moment(n) for n in grid])
    with np.errstate(invalid="ignore"):
        rows.append(_row("a4", grid, tails * logs, f"innovation={innov.law}"))
        if isinstance(model, LinearModel) and not model.is_linear:
            rows.append(_row("a4_strong", grid, tails * logs**2, "nonlinear transform"))

    s = _default_s(model) if s is None else float(s)
    flags["s"] = s
    if not innov.has_moment(s):
        rows.append(ConditionRow("theta", grid, tuple(math.inf for _ in grid), False,
                                 f"innovation has no finite moment of order {s}"))
    else:
        prof = dependence_profile(model, p=s, reps=reps, seed=seed)
        big = [theta_tail(prof, n) for n in grid]
        rows.append(_row("theta", grid, np.multiply(big, logs), f"profile={prof.source}"))

    if isinstance(model, RecursionModel):
        flags.update({f"moment_{k}": v for k, v in model.moment_flags.items()})
    return ConditionReport(model.to_dict(), tuple(rows), flags)
