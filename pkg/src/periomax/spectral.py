"""
Autocovariances, lag-window spectral density estimates, and closed-form
second moments of linear processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coeffs import Coefficients, as_coefficients
from .errors import DegenerateDataError, InvalidArgumentError
from .series import FourierGrid, as_series, fourier_grid

__all__ = [
    "LagWindowKernel",
    "PARZEN",
    "TUKEY_HANNING",
    "KERNELS",
    "get_kernel",
    "AutocovSeq",
    "autocovariance",
    "bandwidth",
    "SpectralEstimate",
    "lag_window_estimate",
    "LinearSpectralDensity",
    "linear_spectral_density",
    "exact_S_moments",
    "S_covariance_matrix",
]

TWO_PI = 2 * np.pi


def _parzen(x):
    x = np.abs(np.asarray(x, dtype=float))
    inner = 1 - 6 * x**2 + 6 * x**3
    outer = 2 * (1 - x) ** 3
    return np.where(x <= 0.5, inner, np.where(x <= 1, outer, 0.0))


def _tukey_hanning(x):
    x = np.abs(np.asarray(x, dtype=float))
    return np.where(x <= 1, 0.5 * (1 + np.cos(np.pi * x)), 0.0)


@dataclass(frozen=True)
class LagWindowKernel:
    """Even lag window supported on ``[-1, 1]`` with ``a(0) = 1``.

    ``curvature`` is a constant ``K`` with ``|a(x) - 1| <= K x^2`` near zero;
    ``lipschitz`` bounds ``|a(x) - a(y)| / |x - y|``.
    """

    id: str
    func: Callable[[np.ndarray], np.ndarray]
    curvature: float
    lipschitz: float

    def __call__(self, x):
        return self.func(x)


PARZEN = LagWindowKernel("parzen", _parzen, curvature=6.0, lipschitz=2.0)
TUKEY_HANNING = LagWindowKernel("tukey", _tukey_hanning, curvature=np.pi**2 / 4, lipschitz=np.pi / 2)
KERNELS = {"parzen": PARZEN, "tukey": TUKEY_HANNING, "tukey-hanning": TUKEY_HANNING}


def get_kernel(kernel) -> LagWindowKernel:
    if isinstance(kernel, LagWindowKernel):
        return kernel
    try:
        return KERNELS[str(kernel).lower()]
    except KeyError:
        raise InvalidArgumentError(f"unknown kernel {kernel!r}; choose from {sorted(KERNELS)}") from None


@dataclass(frozen=True)
class AutocovSeq:
    """Biased sample autocovariances ``r(0..max_lag)`` of a length-``n`` sample."""

    r: np.ndarray
    n: int

    @property
    def max_lag(self) -> int:
        return self.r.size - 1


def autocovariance(series, max_lag: int) -> AutocovSeq:
    """Sample autocovariances with divisor ``n`` and no mean removal.

    ``r(k) = n^{-1} sum_{j=1}^{n-k} X_j X_{j+k}`` for ``k = 0..max_lag``.
    """
    x = as_series(series).values
    n = x.size
    max_lag = int(max_lag)
    if max_lag < 0 or max_lag >= n:
        raise InvalidArgumentError(f"max_lag must lie in [0, n) = [0, {n}), got {max_lag}")
    if max_lag <= 256:
        r = np.array([np.dot(x[: n - k], x[k:]) for k in range(max_lag + 1)]) / n
    else:
        nfft = 1 << int(np.ceil(np.log2(2 * n)))
        spec = np.fft.rfft(x, nfft)
        r = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1] / n
    r.setflags(write=False)
    return AutocovSeq(r, n)


def bandwidth(n: int, eta: float) -> int:
    """``B_n = max(1, floor(n^eta))``."""
    return max(1, int(np.floor(n**eta + 1e-9)))


@dataclass(frozen=True)
class SpectralEstimate:
    """Lag-window estimate of ``f`` on the interior Fourier grid."""

    grid: FourierGrid
    fhat: np.ndarray
    bandwidth: int
    kernel: str
    floor: float
    floor_applied: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.fhat

    @property
    def n_floored(self) -> int:
        return int(self.floor_applied.sum())


def lag_window_estimate(series, kernel="parzen", eta: float = 0.3, floor_frac: float = 1e-3,
                        bandwidth_override: int | None = None) -> SpectralEstimate:
    """Kernel-smoothed autocovariance estimate of the spectral density.

    Parameters
    ----------
    series : TimeSeries or array_like
    kernel : str or LagWindowKernel
        ``"parzen"`` (default) or ``"tukey"``.
    eta : float
        Bandwidth exponent in ``(0, 1/2)``; ``B_n = floor(n^eta)``.
    floor_frac : float
        Estimates are clamped below at ``floor_frac * r(0) / (2 pi)``.
    bandwidth_override : int, optional
        Use this ``B_n`` instead of the ``n^eta`` rule.

    Returns
    -------
    SpectralEstimate
        ``fhat(w_j) = (1/2pi) [r(0) + 2 sum_{k=1}^{B} r(k) a(k/B) cos(k w_j)]``.
    """
    ts = as_series(series)
    kern = get_kernel(kernel)
    if not 0 < eta < 0.5:
        raise InvalidArgumentError(f"eta must lie in (0, 1/2), got {eta}")
    if not floor_frac > 0:
        raise InvalidArgumentError(f"floor_frac must be positive, got {floor_frac}")
    n = ts.n
    B = bandwidth(n, eta) if bandwidth_override is None else int(bandwidth_override)
    if not 1 <= B < n:
        raise InvalidArgumentError(f"bandwidth {B} must lie in [1, n)")
    acv = autocovariance(ts, B)
    r0 = float(acv.r[0])
    if r0 <= 0:
        raise DegenerateDataError("zero sample variance: cannot estimate a spectral density")
    grid = fourier_grid(n)
    k = np.arange(1, B + 1)
    weights = acv.r[1:] * kern(k / B)
    raw = (r0 + 2 * weights @ np.cos(np.outer(k, grid.omegas))) / TWO_PI
    floor = floor_frac * r0 / TWO_PI
    clamped = raw < floor
    fhat = np.where(clamped, floor, raw)
    fhat.setflags(write=False)
    clamped.setflags(write=False)
    return SpectralEstimate(grid, fhat, B, kern.id, floor, clamped)


class LinearSpectralDensity:
    """Spectral density and autocovariance of ``X_n = sum_j a_j eps_{n-j}``.

    ``f(w) = sigma2/(2pi) |sum_j a_j exp(-i j w)|^2`` and
    ``r(u) = sigma2 sum_j a_j a_{j+u}``.
    """

    def __init__(self, coeffs, sigma2: float = 1.0):
        self.coeffs: Coefficients = as_coefficients(coeffs)
        if not sigma2 > 0:
            raise InvalidArgumentError(f"innovation variance must be positive, got {sigma2}")
        self.sigma2 = float(sigma2)
        a = self.coeffs.values
        full = np.correlate(a, a, mode="full") * self.sigma2
        # full[M-1+u] = sigma2 * sum_j a_j a_{j+u}
        self._acov = full[a.size - 1 :].copy()
        self._acov.setflags(write=False)

    def transfer(self, omega):
        w = np.asarray(omega, dtype=float)
        lags = self.coeffs.lags
        return np.exp(-1j * np.multiply.outer(w, lags)) @ self.coeffs.values

    def __call__(self, omega):
        return self.sigma2 / TWO_PI * np.abs(self.transfer(omega)) ** 2

    @property
    def max_lag(self) -> int:
        return self._acov.size - 1

    def autocov(self, u):
        """Population autocovariance ``r(u)``; zero beyond the filter span."""
        u = np.abs(np.asarray(u, dtype=int))
        out = np.zeros(u.shape)
        inside = u <= self.max_lag
        out[inside] = self._acov[u[inside]]
        return out if out.ndim else float(out)

    @property
    def acov(self) -> np.ndarray:
        return self._acov

    def minimum(self, points: int = 4096) -> float:
        """Minimum of ``f`` over a dense grid on ``[0, pi]``."""
        w = np.linspace(0, np.pi, points)
        return float(self(w).min())


def linear_spectral_density(coeffs, sigma2: float = 1.0) -> LinearSpectralDensity:
    return LinearSpectralDensity(coeffs, sigma2)


_TRIG = {"cos": np.cos, "sin": np.sin, 1: np.cos, 2: np.sin}


def _trig(name):
    try:
        return _TRIG[name]
    except KeyError:
        raise InvalidArgumentError(f"trig selector must be 'cos' or 'sin', got {name!r}") from None


def _density(coeffs, sigma2) -> LinearSpectralDensity:
    if isinstance(coeffs, LinearSpectralDensity):
        return coeffs
    return LinearSpectralDensity(coeffs, sigma2)


def exact_S_moments(coeffs, n: int, j: int, l1="cos", l2="cos", sigma2: float = 1.0,
                    j2: int | None = None) -> float:
    """Exact ``E[S_{n,j,l1} S_{n,j2,l2}]`` for a linear process.

    ``S_{n,j,cos} = sum_{k=1}^n X_k cos(k w_j)`` and likewise for ``sin``.
    Evaluated as ``sum_u r(u) c(u)`` with ``c(u) = sum_k t1(k w) t2((k-u) w')``,
    which costs ``O(n L)`` for a filter of span ``L``. ``j2`` defaults to ``j``.
    """
    dens = _density(coeffs, sigma2)
    n = int(n)
    j2 = j if j2 is None else j2
    k = np.arange(1, n + 1)
    t1 = _trig(l1)(2 * np.pi * j * k / n)
    t2 = _trig(l2)(2 * np.pi * j2 * k / n)
    U = min(n - 1, dens.max_lag)
    total = dens.acov[0] * np.dot(t1, t2)
    for u in range(1, U + 1):
        # X_{k} X_{k-u} pairs and the mirrored X_{k-u} X_{k}
        total += dens.acov[u] * (np.dot(t1[u:], t2[: n - u]) + np.dot(t1[: n - u], t2[u:]))
    return float(total)


def S_covariance_matrix(coeffs, n: int, sigma2: float = 1.0) -> np.ndarray:
    """Brute-force covariance of ``(S_{n,1,cos}..S_{n,q,cos}, S_{n,1,sin}..S_{n,q,sin})``.

    Forms the full ``n x n`` Toeplitz autocovariance matrix and sandwiches it
    between the trigonometric design; ``O(n^2 q)``. Independent of
    :func:`exact_S_moments`, which it is used to check.
    """
    dens = _density(coeffs, sigma2)
    grid = fourier_grid(n)
    k = np.arange(1, n + 1)
    R = dens.autocov(np.subtract.outer(k, k))
    ang = np.outer(k, grid.omegas)
    T = np.hstack([np.cos(ang), np.sin(ang)])
    return T.T @ R @ T
