"""
Path simulation and the m-dependent approximation ``X_k(m)``.

Every simulated path keeps the innovation buffer that produced it, indexed
so that ``innovations[i]`` is ``eps_{origin + i}``; the approximation and the
Fourier-gap diagnostics reuse the same innovations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve, lfilter

from ..coeffs import Coefficients
from ..errors import InvalidArgumentError, ShapeError
from ..rng import make_rng
from ..series import TimeSeries, fourier_grid
from .innovations import InnovationSpec
from .models import LinearModel, RecursionModel

__all__ = [
    "SimulatedPath",
    "ApproxResult",
    "gen_linear",
    "gen_recursion",
    "simulate",
    "m_approx",
    "fourier_approx_gap",
    "step",
    "stationary_state",
]

DIRECT_CONV_TAPS = 256
EXPLICIT_TAIL_TAPS = 256
MIN_RECURSION_REPS = 100


@dataclass(frozen=True)
class SimulatedPath:
    """A simulated series together with its driving innovations."""

    series: TimeSeries
    innovations: np.ndarray
    origin: int
    model: object = field(repr=False, default=None)

    @property
    def values(self) -> np.ndarray:
        return self.series.values

    @property
    def n(self) -> int:
        return self.series.n

    def eps(self, t) -> np.ndarray:
        """Innovations ``eps_t`` for absolute time indices ``t``."""
        return self.innovations[np.asarray(t) - self.origin]


def _seed_meta(seed) -> dict:
    if seed is None or isinstance(seed, np.random.Generator):
        return {}
    if isinstance(seed, (int, np.integer)):
        return {"seed": int(seed), "stream": 0}
    parent = getattr(seed, "parent", seed)
    meta = {"seed": int(parent.seed), "stream": int(parent.stream)}
    if hasattr(seed, "keys"):
        meta["keys"] = list(seed.keys)
    return meta


def _filter(eps: np.ndarray, taps: np.ndarray) -> np.ndarray:
    if taps.size <= DIRECT_CONV_TAPS:
        return np.convolve(eps, taps, mode="valid")
    return fftconvolve(eps, taps, mode="valid")


def gen_linear(model: LinearModel, n: int, seed=None) -> SimulatedPath:
    """Simulate ``X_k = h(Y_k) - E h(Y_k)``, ``k = 1..n``.

    ``Y_k = sum_{j=lo}^{hi} a_j eps_{k-j}`` needs ``eps_t`` for
    ``t = 1 - hi .. n - lo``: a buffer of ``n + hi - lo`` draws.
    """
    n = int(n)
    if n < 4:
        raise InvalidArgumentError("n must be at least 4")
    c = model.coeffs
    rng = make_rng(seed)
    eps = model.innovation.draw(n + c.values.size - 1, rng)
    y = _filter(eps, c.values)
    x = model.transform(y) - model.center if not model.is_linear else y
    meta = {"source": "simulated", "model": "linear", **_seed_meta(seed)}
    eps.setflags(write=False)
    return SimulatedPath(TimeSeries(x, meta), eps, 1 - c.last_lag, model)


# -- recursions -------------------------------------------------------------

def _initial_state(model: RecursionModel, shape=()):
    z = np.zeros(shape)
    if model.kind == "garch11":
        return (z, z.copy())
    return (z,)


def step(model: RecursionModel, state, eps):
    """One vectorized step of a recursion; returns ``(x, new_state)``."""
    p = model.params
    kind = model.kind
    x_prev = state[0]
    if kind == "ar1":
        x = p["phi"] * x_prev + eps
        return x, (x,)
    if kind == "tar":
        x = p["phi_pos"] * np.maximum(x_prev, 0) + p["phi_neg"] * np.minimum(x_prev, 0) + eps
        return x, (x,)
    if kind == "garch11":
        s2 = p["omega"] + p["alpha"] * x_prev * x_prev + p["beta"] * state[1]
        x = np.sqrt(s2) * eps
        return x, (x, s2)
    x = (p["a"] + p["b"] * eps) * x_prev + eps
    return x, (x,)


def _run_scalar(model: RecursionModel, eps: np.ndarray) -> np.ndarray:
    p = model.params
    out = np.empty(eps.size)
    e = eps.tolist()
    if model.kind == "ar1":
        return lfilter([1.0], [1.0, -p["phi"]], eps)
    if model.kind == "tar":
        pp, pm = p["phi_pos"], p["phi_neg"]
        x = 0.0
        for t, et in enumerate(e):
            x = (pp * x if x > 0 else pm * x) + et
            out[t] = x
        return out
    if model.kind == "garch11":
        w, a, b = p["omega"], p["alpha"], p["beta"]
        x = s2 = 0.0
        for t, et in enumerate(e):
            s2 = w + a * x * x + b * s2
            x = math.sqrt(s2) * et
            out[t] = x
        return out
    a, b = p["a"], p["b"]
    x = 0.0
    for t, et in enumerate(e):
        x = (a + b * et) * x + et
        out[t] = x
    return out


def gen_recursion(model: RecursionModel, n: int, seed=None) -> SimulatedPath:
    """Iterate the recursion from the zero state, discarding ``burn_in`` steps."""
    n = int(n)
    if n < 4:
        raise InvalidArgumentError("n must be at least 4")
    rng = make_rng(seed)
    eps = model.innovation.draw(model.burn_in + n, rng)
    x = _run_scalar(model, eps)[model.burn_in:]
    meta = {"source": "simulated", "model": model.kind, **_seed_meta(seed)}
    eps.setflags(write=False)
    return SimulatedPath(TimeSeries(x, meta), eps, 1 - model.burn_in, model)


def simulate(model, n: int, seed=None) -> SimulatedPath:
    if isinstance(model, LinearModel):
        return gen_linear(model, n, seed)
    if isinstance(model, RecursionModel):
        return gen_recursion(model, n, seed)
    raise InvalidArgumentError(f"cannot simulate {type(model).__name__}")


def stationary_state(model: RecursionModel, shape, rng, steps: int | None = None):
    """Approximately stationary states: run ``burn_in`` fresh steps from zero."""
    state = _initial_state(model, shape)
    for _ in range(model.burn_in if steps is None else steps):
        _, state = step(model, state, model.innovation.draw(shape, rng))
    return state


# -- m-dependent approximation ----------------------------------------------

@dataclass(frozen=True)
class ApproxResult:
    """``X_k(m)`` for ``k = 1..n`` plus Monte Carlo diagnostics.

    ``stderr`` is the largest per-``k`` Monte Carlo standard error (0 for
    exact constructions); ``warnings`` collects soft failures.
    """

    series: TimeSeries
    m: int
    method: str
    stderr: float = 0.0
    warnings: tuple = ()

    @property
    def values(self) -> np.ndarray:
        return self.series.values


def _tail_sum_draws(taps: np.ndarray, innov: InnovationSpec, shape, rng) -> np.ndarray:
    """Draws of ``sum_i taps_i eps'_i`` for fresh iid ``eps'``.

    Gaussian sums are drawn exactly. Otherwise the largest ``EXPLICIT_TAIL_TAPS``
    taps are summed explicitly and the remainder is replaced by a Gaussian of
    the same variance.
    """
    taps = taps[taps != 0]
    if taps.size == 0:
        return np.zeros(shape)
    if innov.law == "gaussian":
        return math.sqrt(float(np.dot(taps, taps))) * rng.standard_normal(shape)
    order = np.argsort(-np.abs(taps))
    big, rest = taps[order[:EXPLICIT_TAIL_TAPS]], taps[order[EXPLICIT_TAIL_TAPS:]]
    out = np.zeros(shape)
    for a in big:
        out += a * innov.draw(shape, rng)
    if rest.size:
        out += math.sqrt(float(np.dot(rest, rest))) * rng.standard_normal(shape)
    return out


def _m_approx_linear(model: LinearModel, path: SimulatedPath, m: int, R: int, rng, chunk: int):
    c: Coefficients = model.coeffs
    inside = np.abs(c.lags) <= m
    win_taps = np.where(inside, c.values, 0.0)
    y_win = _filter(np.asarray(path.innovations), win_taps)
    if model.is_linear:
        return y_win, 0.0, "exact"
    out_taps = c.values[~inside]
    h = model.transform
    n = y_win.size
    xm = np.empty(n)
    se = 0.0
    for s in range(0, n, chunk):
        e = min(n, s + chunk)
        w = _tail_sum_draws(out_taps, model.innovation, (e - s, R), rng)
        vals = h(y_win[s:e, None] + w)
        xm[s:e] = vals.mean(axis=1)
        if R > 1:
            se = max(se, float(np.max(vals.std(axis=1, ddof=1))) / math.sqrt(R))
    return xm - model.center, se, "conditional-mc"


def _m_approx_recursion(model: RecursionModel, path: SimulatedPath, m: int, R: int, rng, chunk: int):
    n = path.n
    if m > model.burn_in:
        raise InvalidArgumentError(f"m={m} exceeds the retained innovation history (burn_in={model.burn_in})")
    ks = np.arange(1, n + 1)
    xm = np.empty(n)
    se = 0.0
    for s in range(0, n, chunk):
        kk = ks[s : s + chunk]
        state = stationary_state(model, (kk.size, R), rng)
        x = None
        for lag in range(m, -1, -1):
            e = path.eps(kk - lag)[:, None]
            x, state = step(model, state, e)
        xm[s : s + kk.size] = x.mean(axis=1)
        if R > 1:
            se = max(se, float(np.max(x.std(axis=1, ddof=1))) / math.sqrt(R))
    return xm, se, "conditional-mc"


def m_approx(model, path: SimulatedPath, m: int, R: int = 200, seed=None,
             se_target: float | None = None, chunk: int = 256) -> ApproxResult:
    """Conditional expectation of ``X_k`` given the innovations in a window.

    The window is ``eps_{k-m}..eps_{k+m}`` (for causal filters and recursions
    only ``eps_{k-m}..eps_k`` matter).

    * identity-linear: exact, ``sum_{|j| <= m} a_j eps_{k-j}``;
    * nonlinear ``h``: average ``h`` over ``R`` fresh draws of the
      out-of-window innovations, then center;
    * recursions: fix the window, redraw the pre-window trajectory ``R``
      times from the burn-in generator, and average ``X_k``.

    Parameters
    ----------
    se_target : float, optional
        When the largest Monte Carlo standard error exceeds this, a warning
        is recorded in the result rather than raised.
    """
    m = int(m)
    if m < 0:
        raise InvalidArgumentError("m must be nonnegative")
    R = int(R)
    if R < 1:
        raise InvalidArgumentError("R must be at least 1")
    rng = make_rng(seed)
    if isinstance(model, LinearModel):
        xm, se, method = _m_approx_linear(model, path, m, R, rng, chunk)
    elif isinstance(model, RecursionModel):
        if R < MIN_RECURSION_REPS:
            raise InvalidArgumentError(f"recursion models need R >= {MIN_RECURSION_REPS}, got {R}")
        xm, se, method = _m_approx_recursion(model, path, m, R, rng, chunk)
    else:
        raise InvalidArgumentError(f"unsupported model {type(model).__name__}")
    warns = []
    if se_target is not None and se > se_target:
        warns.append(f"Monte Carlo standard error {se:.3g} exceeds target {se_target:.3g}; increase R")
    meta = {"source": "m-approx", "m": m, "R": R, "method": method}
    return ApproxResult(TimeSeries(xm, meta), m, method, se, tuple(warns))


def fourier_approx_gap(x, xm) -> float:
    """``max_j |sum_k (X_k - X_k(m)) exp(i w_j k)|`` over the interior Fourier grid."""
    a = np.asarray(getattr(x, "values", x), dtype=float)
    b = np.asarray(getattr(xm, "values", xm), dtype=float)
    if a.shape != b.shape:
        raise ShapeError(f"length mismatch: {a.shape} vs {b.shape}")
    d = a - b
    q = fourier_grid(d.size).q
    return float(np.max(np.abs(np.fft.fft(d)[1 : q + 1])))
