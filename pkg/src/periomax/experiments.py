"""
Declarative Monte Carlo experiments.

An :class:`Experiment` turns a process description plus a test into a
``rng -> statistic`` recipe for :func:`periomax.montecarlo.replicate`. The
``suite_*`` functions run the verification experiments behind ``periomax mc``
and return plain dictionaries ready for JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .montecarlo import (
    as_seedspec,
    exact_max_exp_cdf,
    gumbel_cdf,
    ks_distance,
    mc_pvalue,
    replicate,
    replicate_raw,
)
from .peaks import _r_stat, _u_stat, fisher_g, max_test, normalize, null_sample
from .processes import (
    LinearModel,
    check_conditions,
    coupled_theta,
    covariance_bound,
    dependence_profile,
    fourier_approx_gap,
    m_approx,
    process_from_dict,
    simulate,
    spectral_density,
    theta_tail,
)
from .rng import make_rng
from .series import fourier_grid, periodogram
from .spectral import LinearSpectralDensity, lag_window_estimate

__all__ = [
    "Experiment",
    "PowerCurve",
    "power_curve",
    "SUITES",
    "suite_gumbel_convergence",
    "suite_power",
    "suite_dependence",
    "suite_m_approx",
    "suite_conditions",
]

METHODS = ("max", "fisher", "u", "r")
DEFAULT_KS_EXACT = 0.05
DEFAULT_KS_GUMBEL = 0.08
DEFAULT_MIN_RATE = 0.95


@dataclass
class Experiment:
    """Statistic recipe over a simulated process.

    Parameters
    ----------
    process : mapping or model
        Process description (see :func:`periomax.processes.process_from_dict`).
    n : int
        Series length.
    method : {"max", "fisher", "u", "r"}
        ``max`` and ``fisher`` yield the centered statistic; ``u`` and ``r``
        the raw ratio.
    f_source : {"known", "estimated"}
        Normalize by the closed-form density or by a lag-window estimate.
    """

    process: Any
    n: int
    method: str = "max"
    f_source: str = "known"
    kernel: str = "parzen"
    eta: float = 0.3
    floor_frac: float = 1e-3
    r: int = 2
    beta: float = 0.5
    _model: Any = field(default=None, init=False, repr=False)
    _fvals: Any = field(default=None, init=False, repr=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidArgumentError(f"method must be one of {METHODS}")
        if self.f_source not in ("known", "estimated"):
            raise InvalidArgumentError("f_source must be 'known' or 'estimated'")
        self._model = process_from_dict(self.process)
        if self.f_source == "known":
            f = spectral_density(self._model)
            self._fvals = np.asarray(f(fourier_grid(self.n).omegas), dtype=float)

    @property
    def model(self):
        return self._model

    @property
    def label(self) -> str:
        return f"{self.method}:{self.f_source}:n={self.n}:{_describe(self._model)}"

    def ordinates(self, x):
        pg = periodogram(x)
        if self.f_source == "known":
            return normalize(pg, self._fvals, "known")
        return normalize(pg, lag_window_estimate(x, self.kernel, self.eta, self.floor_frac))

    def statistic(self, x) -> float:
        V = self.ordinates(x)
        if self.method == "max":
            return max_test(V).statistic
        if self.method == "fisher":
            return fisher_g(V).statistic
        if self.method == "u":
            return _u_stat(V.values, self.r)
        return _r_stat(V.values, self.beta)

    def __call__(self, rng) -> float:
        return self.statistic(simulate(self._model, self.n, rng).values)

    def to_dict(self) -> dict:
        return {"process": self._model.to_dict(), "n": self.n, "method": self.method,
                "f_source": self.f_source, "kernel": self.kernel, "eta": self.eta,
                "floor_frac": self.floor_frac, "r": self.r, "beta": self.beta}


def _describe(model) -> str:
    if isinstance(model, LinearModel):
        return f"linear[{model.coeffs.family},{model.innovation.law},{model.transform.name}]"
    return f"{model.kind}[{model.innovation.law}]"


def _is_gaussian_white(model) -> bool:
    return (isinstance(model, LinearModel) and model.is_linear and model.innovation.law == "gaussian"
            and model.coeffs.values.size == 1 and model.coeffs.first_lag == 0
            and model.coeffs.values[0] == 1.0)


# -- power ------------------------------------------------------------------

@dataclass(frozen=True)
class PowerCurve:
    amplitudes: tuple
    rejection: tuple
    recovery: tuple
    reps: int
    alpha: float
    target_index: int

    def to_dict(self) -> dict:
        return {"amplitudes": list(self.amplitudes), "rejection": list(self.rejection),
                "recovery": list(self.recovery), "reps": self.reps, "alpha": self.alpha,
                "target_index": self.target_index}


def power_curve(noise, amplitudes: Sequence[float], gamma: float, n: int, alpha: float = 0.05,
                reps: int = 500, seed=0, phase: float | None = 0.0, method: str = "max",
                f_source: str = "known", workers: int = 1, **test_kw) -> PowerCurve:
    """Rejection and frequency-recovery rates for ``Z_t = A cos(gamma t + phase) + X_t``.

    ``gamma`` may be on or off the Fourier grid; recovery counts replicates
    whose reported peak is the grid frequency nearest ``gamma``. ``phase=None``
    draws a uniform phase per replicate.
    """
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie in (0, 1)")
    exp = Experiment(noise, n, method, f_source, **test_kw)
    grid = fourier_grid(n)
    target = grid.index_of(gamma)
    t = np.arange(1, n + 1)
    null = None
    if method in ("u", "r"):
        param = exp.r if method == "u" else exp.beta
        null = null_sample("order-U" if method == "u" else "chiu-R", grid.q, param, 999,
                           as_seedspec(seed).child(10**6))
    base = as_seedspec(seed)
    rej, rec = [], []
    for a_i, amp in enumerate(amplitudes):
        def one(rng, amp=amp):
            x = simulate(exp.model, n, rng).values
            ph = rng.uniform(0, 2 * np.pi) if phase is None else phase
            z = x + amp * np.cos(gamma * t + ph)
            V = exp.ordinates(z)
            peak = int(np.argmax(V.values)) + 1
            if method == "max":
                p = max_test(V).p_value
            elif method == "fisher":
                p = fisher_g(V).p_value
            elif method == "u":
                p = mc_pvalue(_u_stat(V.values, exp.r), null)
            else:
                p = mc_pvalue(_r_stat(V.values, exp.beta), null)
            return p < alpha, peak == target

        res = replicate_raw(one, reps, base.child(a_i), workers)
        rej.append(float(np.mean([r[0] for r in res])))
        rec.append(float(np.mean([r[1] for r in res])))
    return PowerCurve(tuple(float(a) for a in amplitudes), tuple(rej), tuple(rec), int(reps),
                      float(alpha), target)


# -- suites -----------------------------------------------------------------

def _cfg(config: Mapping, key, default):
    v = config.get(key)
    return default if v is None else v


def suite_gumbel_convergence(config: Mapping) -> dict:
    """Law of the centered maximum (or Fisher statistic) against the Gumbel law.

    When the process is Gaussian white noise with known ``f`` and the method is
    ``max``, the distance to the exact finite-``q`` law is reported as well.
    """
    exp = Experiment(_cfg(config, "process", {"kind": "white"}), int(_cfg(config, "n", 1024)),
                     _cfg(config, "method", "max"), _cfg(config, "f_source", "known"),
                     _cfg(config, "kernel", "parzen"), float(_cfg(config, "eta", 0.3)),
                     float(_cfg(config, "floor", 1e-3)))
    if exp.method not in ("max", "fisher"):
        raise InvalidArgumentError("gumbel-convergence runs the max or fisher statistic")
    reps = int(_cfg(config, "reps", 2000))
    seed = _cfg(config, "seed", 0)
    sample = replicate(exp, reps, seed, int(_cfg(config, "workers", 1)), exp.label)
    q = fourier_grid(exp.n).q
    out = {"experiment": exp.to_dict(), "q": q, "reps": reps,
           "ks_gumbel": ks_distance(sample, gumbel_cdf)}
    if exp.method == "max" and exp.f_source == "known" and _is_gaussian_white(exp.model):
        out["ks_exact"] = ks_distance(sample, lambda x: exact_max_exp_cdf(x, q))
    tol = config.get("ks_max")
    if tol is None and config.get("check"):
        tol = DEFAULT_KS_EXACT if "ks_exact" in out else DEFAULT_KS_GUMBEL
    if tol is not None:
        key = "ks_exact" if "ks_exact" in out else "ks_gumbel"
        out["criterion"] = {"metric": key, "tolerance": float(tol), "passed": out[key] <= float(tol)}
    return {"result": out, "samples": {"statistic": sample}}


def suite_power(config: Mapping) -> dict:
    n = int(_cfg(config, "n", 512))
    grid = fourier_grid(n)
    if "gamma" in config and config["gamma"] is not None:
        gamma = float(config["gamma"])
    else:
        gamma = float(grid.omegas[int(_cfg(config, "gamma_index", 64)) - 1])
    amps = [float(a) for a in _cfg(config, "amplitudes", [0.0, 0.25, 0.5])]
    curve = power_curve(_cfg(config, "process", {"kind": "white"}), amps, gamma, n,
                        float(_cfg(config, "alpha", 0.05)), int(_cfg(config, "reps", 500)),
                        _cfg(config, "seed", 0), _cfg(config, "phase", 0.0),
                        _cfg(config, "method", "max"), _cfg(config, "f_source", "known"),
                        int(_cfg(config, "workers", 1)))
    out = {"gamma": gamma, **curve.to_dict()}
    floor = config.get("min_rate")
    if floor is None and config.get("check"):
        floor = DEFAULT_MIN_RATE
    if floor is not None:
        ok = all(r >= floor and c >= floor for a, r, c in
                 zip(curve.amplitudes, curve.rejection, curve.recovery) if a > 0)
        out["criterion"] = {"metric": "rejection/recovery at A > 0", "tolerance": float(floor),
                            "passed": ok}
    return {"result": out, "samples": {}}


def suite_dependence(config: Mapping) -> dict:
    """Monte Carlo ``theta_{k,p}`` against closed forms, and the covariance bound."""
    model = process_from_dict(_cfg(config, "process", {"kind": "linear",
                                                        "coeffs": {"family": "geometric", "rho": 0.5}}))
    ks = [int(k) for k in _cfg(config, "ks", [0, 1, 3, 6])]
    p = float(_cfg(config, "p", 2.0))
    reps = int(_cfg(config, "reps", 20_000))
    base = as_seedspec(_cfg(config, "seed", 0))
    rows = []
    for i, k in enumerate(ks):
        mc = coupled_theta(model, k, p, reps, base.child(i))
        ex = coupled_theta(model, k, p, exact=True)
        row = {"k": k, "mc": mc.value, "stderr": mc.stderr}
        if ex.source == "exact":
            row["exact"] = ex.value
            row["z"] = abs(mc.value - ex.value) / mc.stderr if mc.stderr > 0 else 0.0
            row["within_3se"] = bool(abs(mc.value - ex.value) <= 3 * mc.stderr + 1e-15)
        rows.append(row)
    out = {"process": model.to_dict(), "p": p, "reps": reps, "theta": rows}
    if isinstance(model, LinearModel) and model.is_linear:
        prof = dependence_profile(model, 2.0)
        dens = LinearSpectralDensity(model.coeffs)
        umax = int(_cfg(config, "max_lag", 50))
        cov = [{"u": u, "abs_r": abs(float(dens.autocov(u))), "bound": covariance_bound(prof, u)}
               for u in range(umax + 1)]
        out["covariance_bound"] = cov
        out["covariance_bound_holds"] = all(c["abs_r"] <= c["bound"] * (1 + 1e-12) for c in cov)
    if config.get("check"):
        ok = all(r.get("within_3se", True) for r in rows) and out.get("covariance_bound_holds", True)
        out["criterion"] = {"metric": "3 s.e. agreement", "passed": ok}
    return {"result": out, "samples": {}}


def fourier_gap_moment(model: LinearModel, n: int, m: int, omegas, reps: int, seed) -> np.ndarray:
    """Monte Carlo mean of ``|sum_k (X_k - X_k(m)) e^{i w k}|^2`` at each ``w``."""
    k = np.arange(1, n + 1)
    E = np.exp(1j * np.outer(np.asarray(omegas, float), k))

    def one(rng):
        path = simulate(model, n, rng)
        d = path.values - m_approx(model, path, m).values
        return np.abs(E @ d) ** 2

    res = replicate_raw(one, reps, seed)
    return np.mean(res, axis=0)


def suite_m_approx(config: Mapping) -> dict:
    """Fourier-transform moment bound and the ``o(sqrt(n / log n))`` gap rate."""
    model = process_from_dict(_cfg(config, "process", {"kind": "linear",
                                                        "coeffs": {"family": "geometric", "rho": 0.5}}))
    if not (isinstance(model, LinearModel) and model.is_linear):
        raise InvalidArgumentError("m-approx suite needs an identity-linear process")
    base = as_seedspec(_cfg(config, "seed", 0))
    prof = dependence_profile(model, 2.0)
    ms = [int(m) for m in _cfg(config, "ms", [0, 2, 4, 8])]
    ns = [int(n) for n in _cfg(config, "ns", [256, 1024])]
    reps = int(_cfg(config, "reps", 200))
    n_freq = int(_cfg(config, "n_freq", 5))
    omegas = make_rng(base.child(99)).uniform(0, np.pi, n_freq)
    bound_rows = []
    for i, n in enumerate(ns):
        for j, m in enumerate(ms):
            mean_sq = fourier_gap_moment(model, n, m, omegas, reps, base.child(1, i, j))
            Theta = theta_tail(prof, m)
            bound_rows.append({"n": n, "m": m, "max_mean_sq": float(mean_sq.max()),
                               "bound": 4 * n * Theta**2,
                               "holds": bool(mean_sq.max() <= 4 * n * Theta**2)})
    rate_ns = [int(n) for n in _cfg(config, "rate_ns", [512, 2048, 8192])]
    rate_reps = int(_cfg(config, "rate_reps", 50))
    m_eta = float(_cfg(config, "m_eta", 0.3))
    medians = []
    for i, n in enumerate(rate_ns):
        m = int(math.floor(n**m_eta + 1e-9))

        def one(rng, n=n, m=m):
            path = simulate(model, n, rng)
            gap = fourier_approx_gap(path.series, m_approx(model, path, m).series)
            return gap / math.sqrt(n / math.log(n))

        s = replicate(one, rate_reps, base.child(2, i))
        medians.append({"n": n, "m": m, "median_scaled_gap": float(np.median(s.values))})
    dec = all(b["median_scaled_gap"] < a["median_scaled_gap"] for a, b in zip(medians, medians[1:]))
    out = {"process": model.to_dict(), "omegas": omegas.tolist(), "moment_bound": bound_rows,
           "moment_bound_holds": all(r["holds"] for r in bound_rows), "gap_rate": medians,
           "gap_rate_decreasing": dec}
    if config.get("check"):
        out["criterion"] = {"metric": "moment bound and decreasing gap",
                            "passed": out["moment_bound_holds"] and dec}
    return {"result": out, "samples": {}}


def suite_conditions(config: Mapping) -> dict:
    model = process_from_dict(_cfg(config, "process", {"kind": "linear",
                                                        "coeffs": {"family": "geometric", "rho": 0.5}}))
    grid = [int(n) for n in _cfg(config, "n_grid", [10, 100, 1000, 10_000])]
    rep = check_conditions(model, grid, config.get("s"), seed=_cfg(config, "seed", 0))
    out = rep.to_dict()
    if config.get("check"):
        out["criterion"] = {"metric": "all conditions pass", "passed": rep.passed}
    return {"result": out, "samples": {}}


SUITES = {
    "gumbel-convergence": suite_gumbel_convergence,
    "power": suite_power,
    "dependence": suite_dependence,
    "m-approx": suite_m_approx,
    "conditions": suite_conditions,
}
