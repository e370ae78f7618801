"""
Declarative process descriptions.

``LinearModel`` is ``X_n = h(Y_n) - E h(Y_n)`` with ``Y_n = sum_j a_j eps_{n-j}``;
``RecursionModel`` is one of a handful of causal nonlinear recursions driven
by iid innovations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import integrate, stats
from scipy.signal import fftconvolve

from ..coeffs import Coefficients, as_coefficients, explicit
from ..errors import InvalidArgumentError
from ..rng import make_rng
from ..spectral import LinearSpectralDensity
from .innovations import InnovationSpec

__all__ = [
    "Transform",
    "LinearModel",
    "RecursionModel",
    "white_noise",
    "process_from_dict",
    "process_to_dict",
    "spectral_density",
]

TRANSFORMS = ("identity", "abs", "softclip", "cosine")
CENTER_DRAWS = 1_000_000
_CENTER_SEED = 0xCE_17E2


def _softclip(c):
    return lambda y: c * np.tanh(np.asarray(y) / c)


@dataclass(frozen=True)
class Transform:
    """Lipschitz map ``h``; ``param`` is the clip level ``c`` for ``softclip``."""

    name: str = "identity"
    param: float | None = None

    def __post_init__(self):
        if self.name not in TRANSFORMS:
            raise InvalidArgumentError(f"unknown transform {self.name!r}; choose from {TRANSFORMS}")
        if self.name == "softclip":
            c = 1.0 if self.param is None else float(self.param)
            if c <= 0:
                raise InvalidArgumentError("softclip level must be positive")
            object.__setattr__(self, "param", c)

    @property
    def lipschitz(self) -> float:
        return 1.0

    @property
    def is_identity(self) -> bool:
        return self.name == "identity"

    @property
    def is_odd(self) -> bool:
        return self.name in ("identity", "softclip")

    @property
    def func(self) -> Callable[[np.ndarray], np.ndarray]:
        if self.name == "identity":
            return lambda y: np.asarray(y, dtype=float)
        if self.name == "abs":
            return np.abs
        if self.name == "cosine":
            return np.cos
        return _softclip(self.param)

    def __call__(self, y):
        return self.func(y)

    def to_dict(self) -> dict:
        d = {"name": self.name}
        if self.param is not None:
            d["param"] = self.param
        return d


def _draw_stationary_y(coeffs: Coefficients, innov: InnovationSpec, size: int, rng) -> np.ndarray:
    eps = innov.draw(size + coeffs.values.size - 1, rng)
    return fftconvolve(eps, coeffs.values, mode="valid")


@dataclass(frozen=True)
class LinearModel:
    """Transformed two-sided linear process."""

    coeffs: Coefficients
    innovation: InnovationSpec = field(default_factory=InnovationSpec)
    transform: Transform = field(default_factory=Transform)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_coefficients(self.coeffs))
        if isinstance(self.innovation, (str, Mapping)):
            object.__setattr__(self, "innovation", InnovationSpec.from_dict(self.innovation))
        if isinstance(self.transform, str):
            object.__setattr__(self, "transform", Transform(self.transform))
        elif isinstance(self.transform, Mapping):
            object.__setattr__(self, "transform", Transform(**self.transform))
        object.__setattr__(self, "_center_cache", {})

    kind = "linear"

    @property
    def y_variance(self) -> float:
        return float(np.dot(self.coeffs.values, self.coeffs.values))

    @property
    def center(self) -> float:
        """``E h(Y)``: exact where a closed form exists, else a cached 10^6-draw mean."""
        cache = self._center_cache  # type: ignore[attr-defined]
        if "value" in cache:
            return cache["value"]
        h = self.transform
        gauss = self.innovation.law == "gaussian"
        sd = math.sqrt(self.y_variance)
        if h.is_odd and self.innovation.is_symmetric:
            val, src = 0.0, "exact"
        elif h.name == "abs" and gauss:
            val, src = sd * math.sqrt(2 / math.pi), "exact"
        elif h.name == "cosine" and gauss:
            val, src = math.exp(-self.y_variance / 2), "exact"
        else:
            y = _draw_stationary_y(self.coeffs, self.innovation, CENTER_DRAWS, make_rng(_CENTER_SEED))
            val, src = float(np.mean(h(y))), "monte-carlo"
        cache["value"] = val
        cache["source"] = src
        return val

    @property
    def center_source(self) -> str:
        self.center
        return self._center_cache["source"]  # type: ignore[attr-defined]

    @property
    def is_linear(self) -> bool:
        return self.transform.is_identity

    def to_dict(self) -> dict:
        return {
            "kind": "linear",
            "coeffs": self.coeffs.to_dict(),
            "innovation": self.innovation.to_dict(),
            "transform": self.transform.to_dict(),
        }


def white_noise(innovation="gaussian") -> LinearModel:
    """iid innovations as a one-tap linear model."""
    return LinearModel(explicit([1.0]), innovation)


RECURSIONS = {
    "ar1": ("phi",),
    "tar": ("phi_pos", "phi_neg"),
    "garch11": ("omega", "alpha", "beta"),
    "bilinear": ("a", "b"),
}


@dataclass(frozen=True)
class RecursionModel:
    """Causal recursion ``X_n = g(X_{n-1}, eps_n)`` started from zero.

    ``ar1``: ``X_n = phi X_{n-1} + eps_n``.
    ``tar``: ``X_n = phi_pos max(X_{n-1}, 0) + phi_neg min(X_{n-1}, 0) + eps_n``.
    ``garch11``: ``X_n = sigma_n eps_n``, ``sigma_n^2 = omega + alpha X_{n-1}^2 + beta sigma_{n-1}^2``.
    ``bilinear``: ``X_n = (a + b eps_n) X_{n-1} + eps_n``.
    """

    kind: str
    params: Mapping[str, float]
    innovation: InnovationSpec = field(default_factory=InnovationSpec)
    burn_in: int = 500

    def __post_init__(self):
        if self.kind not in RECURSIONS:
            raise InvalidArgumentError(f"unknown recursion {self.kind!r}; choose from {sorted(RECURSIONS)}")
        if isinstance(self.innovation, (str, Mapping)):
            object.__setattr__(self, "innovation", InnovationSpec.from_dict(self.innovation))
        need = RECURSIONS[self.kind]
        missing = [k for k in need if k not in self.params]
        if missing:
            raise InvalidArgumentError(f"{self.kind} needs parameters {missing}")
        object.__setattr__(self, "params", {k: float(self.params[k]) for k in need})
        if int(self.burn_in) < 0:
            raise InvalidArgumentError("burn_in must be nonnegative")
        object.__setattr__(self, "burn_in", int(self.burn_in))
        self._validate()

    def _validate(self):
        p = self.params
        if not self.innovation.standardizable:
            raise InvalidArgumentError("recursions need finite-variance innovations")
        if self.kind == "ar1" and not abs(p["phi"]) < 1:
            raise InvalidArgumentError(f"ar1 needs |phi| < 1, got {p['phi']}")
        if self.kind == "tar" and not (abs(p["phi_pos"]) < 1 and abs(p["phi_neg"]) < 1):
            raise InvalidArgumentError("tar needs |phi| < 1 in each regime")
        if self.kind == "garch11":
            if not (p["omega"] > 0 and p["alpha"] >= 0 and p["beta"] >= 0):
                raise InvalidArgumentError("garch11 needs omega > 0 and alpha, beta >= 0")
            if not p["alpha"] + p["beta"] < 1:
                raise InvalidArgumentError("garch11 needs alpha + beta < 1")
        if self.kind == "bilinear" and not self.bilinear_log_contraction() < 0:
            raise InvalidArgumentError("bilinear needs E log|a + b eps| < 0")

    def bilinear_log_contraction(self) -> float:
        """``E log|a + b eps|``, by quadrature for Gaussian innovations, else a fixed-seed mean."""
        a, b = self.params["a"], self.params["b"]
        if b == 0:
            return math.log(abs(a)) if a != 0 else -math.inf
        if self.innovation.law == "gaussian":
            def f(e):
                return math.log(abs(a + b * e)) * stats.norm.pdf(e)

            pole = -a / b
            left = integrate.quad(f, -np.inf, pole, limit=400)[0]
            right = integrate.quad(f, pole, np.inf, limit=400)[0]
            return float(left + right)
        e = self.innovation.draw(1_000_000, make_rng(_CENTER_SEED))
        return float(np.mean(np.log(np.abs(a + b * e))))

    @property
    def moment_flags(self) -> dict:
        """Which moments of ``X`` are finite (only ``garch11`` restricts them)."""
        flags = {"second": True, "fourth": self.innovation.has_moment(4)}
        if self.kind == "garch11":
            a, b = self.params["alpha"], self.params["beta"]
            mu4 = self.innovation.fourth_moment()
            flags["fourth"] = bool(b * b + 2 * a * b + mu4 * a * a < 1)
        return flags

    @property
    def variance(self) -> float | None:
        p = self.params
        if self.kind == "ar1":
            return 1 / (1 - p["phi"] ** 2)
        if self.kind == "garch11":
            return p["omega"] / (1 - p["alpha"] - p["beta"])
        return None

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params, "innovation": self.innovation.to_dict(),
                "burn_in": self.burn_in}


def process_from_dict(d) -> LinearModel | RecursionModel:
    """Build a model from its JSON-style description.

    Examples
    --------
    >>> process_from_dict({"kind": "ar1", "phi": 0.5}).kind
    'ar1'
    >>> process_from_dict({"kind": "linear", "coeffs": {"family": "geometric", "rho": 0.5}}).kind
    'linear'
    """
    if isinstance(d, (LinearModel, RecursionModel)):
        return d
    d = dict(d)
    kind = d.pop("kind", "white")
    innov = InnovationSpec.from_dict(d.pop("innovation", "gaussian"))
    if kind in ("white", "iid"):
        return white_noise(innov)
    if kind == "linear":
        transform = d.pop("transform", "identity")
        if isinstance(transform, Mapping):
            transform = Transform(**transform)
        return LinearModel(as_coefficients(d.pop("coeffs")), innov, transform)
    if kind in RECURSIONS:
        burn = int(d.pop("burn_in", 500))
        return RecursionModel(kind, d, innov, burn)
    raise InvalidArgumentError(f"unknown process kind {kind!r}")


def process_to_dict(model) -> dict:
    return model.to_dict()


def spectral_density(model) -> Callable[[np.ndarray], np.ndarray]:
    """Closed-form spectral density where the model has one.

    Available for identity-linear models, ``ar1`` and ``garch11`` (which is
    uncorrelated). Raises :class:`InvalidArgumentError` otherwise.
    """
    if isinstance(model, LinearModel):
        if model.is_linear:
            return LinearSpectralDensity(model.coeffs, 1.0)
        raise InvalidArgumentError("no closed-form spectral density for a nonlinear transform")
    if model.kind == "ar1":
        phi = model.params["phi"]
        return lambda w: 1 / (2 * np.pi * (1 - 2 * phi * np.cos(np.asarray(w, float)) + phi * phi))
    if model.kind == "garch11":
        level = model.variance / (2 * np.pi)
        return lambda w: np.full(np.shape(w), level)
    raise InvalidArgumentError(f"no closed-form spectral density for {model.kind}")
