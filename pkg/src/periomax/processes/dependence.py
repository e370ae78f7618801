"""
Physical dependence measures.

``theta_{k,p} = ||X_k - X*_k||_p`` where ``X*_k`` is ``X_k`` with ``eps_0``
swapped for an independent copy, and ``Theta_{n,p} = sum_{i >= n} theta_{i,p}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import zeta

from ..errors import InsufficientProfileError, InvalidArgumentError
from ..rng import make_rng
from .models import LinearModel, RecursionModel
from .simulate import _tail_sum_draws, stationary_state, step

__all__ = [
    "ThetaEstimate",
    "DependenceProfile",
    "coupled_pair",
    "coupled_theta",
    "dependence_profile",
    "theta_tail",
    "covariance_bound",
]


@dataclass(frozen=True)
class ThetaEstimate:
    k: int
    p: float
    value: float
    stderr: float
    source: str


def coupled_pair(model, k: int, reps: int, seed=None):
    """Draw ``reps`` coupled pairs ``(X_k, X*_k)``.

    Both members share every innovation except ``eps_0``.
    """
    rng = make_rng(seed)
    reps = int(reps)
    k = int(k)
    if isinstance(model, LinearModel):
        c = model.coeffs
        a_k = c[k]
        rest_taps = np.where(c.lags == k, 0.0, c.values)
        rest = _tail_sum_draws(rest_taps, model.innovation, reps, rng)
        e0 = model.innovation.draw(reps, rng)
        e0s = model.innovation.draw(reps, rng)
        y, ys = rest + a_k * e0, rest + a_k * e0s
        h = model.transform
        return h(y) - model.center, h(ys) - model.center
    if isinstance(model, RecursionModel):
        if k < 0:
            x = stationary_state(model, reps, rng)[0]
            return x, x.copy()
        state = stationary_state(model, reps, rng)
        e0 = model.innovation.draw(reps, rng)
        e0s = model.innovation.draw(reps, rng)
        x, st = step(model, state, e0)
        xs, sts = step(model, state, e0s)
        for _ in range(k):
            e = model.innovation.draw(reps, rng)
            x, st = step(model, st, e)
            xs, sts = step(model, sts, e)
        return x, xs
    raise InvalidArgumentError(f"unsupported model {type(model).__name__}")


def _estimate(diff: np.ndarray, p: float):
    d = np.abs(diff) ** p
    mean = float(d.mean())
    if mean == 0:
        return 0.0, 0.0
    value = mean ** (1 / p)
    sd = float(d.std(ddof=1)) if d.size > 1 else 0.0
    se = value / (p * mean) * sd / math.sqrt(d.size)
    return value, se


def coupled_theta(model, k: int, p: float = 2.0, reps: int = 20_000, seed=None,
                  exact: bool = False) -> ThetaEstimate:
    """Estimate ``theta_{k,p}`` with a delta-method standard error.

    With ``exact=True`` the closed forms are used where available:
    ``|a_k| ||eps_0 - eps*_0||_p`` for identity-linear models and
    ``|phi|^k ||eps_0 - eps*_0||_p`` for ``ar1``.
    """
    if p < 1:
        raise InvalidArgumentError("p must be at least 1")
    if exact:
        val = _exact_theta(model, k, p)
        if val is not None:
            return ThetaEstimate(k, p, val, 0.0, "exact")
    x, xs = coupled_pair(model, k, reps, seed)
    value, se = _estimate(x - xs, p)
    return ThetaEstimate(k, p, value, se, "monte-carlo")


def _exact_theta(model, k, p) -> Optional[float]:
    cn = model.innovation.coupling_norm(p)
    if isinstance(model, LinearModel) and model.is_linear:
        return abs(model.coeffs[k]) * cn
    if isinstance(model, RecursionModel) and model.kind == "ar1":
        return abs(model.params["phi"]) ** k * cn if k >= 0 else 0.0
    return None


@dataclass(frozen=True)
class DependenceProfile:
    """``theta_{k,p}`` for ``k = 0..K`` and a tail family beyond ``K``.

    For two-sided processes ``theta[k]`` holds ``theta_k + theta_{-k}`` so that
    ``Theta_n = sum_{|i| >= n} theta_i`` is a one-sided tail sum of this array.

    ``tail`` is ``("geometric", rho)``, ``("polynomial", kappa)``,
    ``("finite", None)`` or ``None`` (no extrapolation).
    """

    p: float
    theta: np.ndarray
    source: str
    tail: Optional[tuple] = None
    stderr: Optional[np.ndarray] = None

    @property
    def K(self) -> int:
        return self.theta.size - 1


def _fold(model: LinearModel, theta_by_lag: np.ndarray) -> np.ndarray:
    lags = model.coeffs.lags
    K = int(np.max(np.abs(lags)))
    out = np.zeros(K + 1)
    np.add.at(out, np.abs(lags), theta_by_lag)
    return out


def _coeff_tail(model: LinearModel):
    fam = model.coeffs.family
    if fam == "geometric":
        return ("geometric", abs(model.coeffs.params["rho"]))
    if fam == "polynomial":
        return ("polynomial", model.coeffs.params["kappa"])
    return ("finite", None)


def dependence_profile(model, p: float = 2.0, K: int | None = None, reps: int = 5_000,
                       seed=None) -> DependenceProfile:
    """Build a dependence profile.

    Exact for identity-linear models and ``ar1``; Monte Carlo otherwise, with
    the coefficient family (linear) or a fitted geometric rate (recursions)
    used for the tail.
    """
    if isinstance(model, LinearModel):
        c = model.coeffs
        if model.is_linear:
            theta = _fold(model, np.abs(c.values) * model.innovation.coupling_norm(p))
            return DependenceProfile(p, theta, "exact-linear", _coeff_tail(model))
        lags = c.lags
        if K is not None:
            keep = np.abs(lags) <= K
        else:
            keep = np.ones(lags.size, bool)
        vals = np.zeros(lags.size)
        ses = np.zeros(lags.size)
        for i in np.flatnonzero(keep):
            est = coupled_theta(model, int(lags[i]), p, reps, _sub(seed, i))
            vals[i], ses[i] = est.value, est.stderr
        theta = _fold(model, vals)
        se = np.sqrt(_fold(model, ses**2))
        if K is not None:
            theta, se = theta[: K + 1], se[: K + 1]
        return DependenceProfile(p, theta, "monte-carlo", _coeff_tail(model), se)
    if isinstance(model, RecursionModel):
        K = 30 if K is None else int(K)
        if model.kind == "ar1":
            phi = abs(model.params["phi"])
            theta = phi ** np.arange(K + 1) * model.innovation.coupling_norm(p)
            return DependenceProfile(p, theta, "exact-linear", ("geometric", phi))
        theta = np.zeros(K + 1)
        se = np.zeros(K + 1)
        for k in range(K + 1):
            est = coupled_theta(model, k, p, reps, _sub(seed, k))
            theta[k], se[k] = est.value, est.stderr
        return DependenceProfile(p, theta, "monte-carlo", ("geometric", _fit_rate(theta)), se)
    raise InvalidArgumentError(f"unsupported model {type(model).__name__}")


def _sub(seed, i):
    from ..montecarlo import as_seedspec

    return as_seedspec(seed).child(int(i))


def _fit_rate(theta: np.ndarray) -> float:
    k = np.flatnonzero(theta > 0)
    if k.size < 2:
        return 0.0
    slope = np.polyfit(k, np.log(theta[k]), 1)[0]
    return float(min(math.exp(slope), 0.999))


def theta_tail(profile: DependenceProfile, n: int) -> float:
    """``Theta_{n,p} = sum_{i >= n} theta_{i,p}`` with the profile's tail family."""
    n = max(int(n), 0)
    K = profile.K
    th = profile.theta
    fam, par = profile.tail if profile.tail is not None else (None, None)
    head = float(th[n:].sum()) if n <= K else 0.0
    start = max(n, K + 1)  # first index handled by the tail model
    last = float(th[K])
    if fam == "finite":
        return head
    if fam == "geometric":
        rho = par
        if rho == 0:
            return head
        return head + last * rho ** (start - K) / (1 - rho)
    if fam == "polynomial":
        kappa = par
        # theta_i ~ theta_K ((1+K)/(1+i))^kappa
        return head + last * (1 + K) ** kappa * float(zeta(kappa, start + 1))
    if n > K:
        raise InsufficientProfileError(f"profile stops at K={K} and has no tail family; cannot sum from n={n}")
    return head


def covariance_bound(profile: DependenceProfile, u: int) -> float:
    """``sum_{j >= 0} theta_{j,2} theta_{u+j,2}`` over the profile's support."""
    th = profile.theta
    u = abs(int(u))
    if u > profile.K:
        return 0.0
    return float(np.dot(th[: th.size - u], th[u:]))
