"""Burr III and Dagum baseline distributions.

Both share the cdf shape ``(1 + t)^(-β)``; they differ only in ``t``:

* Burr III: ``t = (x / λ)^(-δ)``
* Dagum:    ``t = λ x^(-δ)``

so a Dagum model with scale ``λ`` is the Burr III model with scale
``λ^(1/δ)``. The density is obtained by differentiating the cdf,
``f(x) = β δ t (1 + t)^(-β-1) / x``, for both.

Everything is evaluated from ``log t`` so the cdf, its complement and the
density stay accurate when ``F`` is within rounding of 0 or 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError, log_beta

__all__ = [
    "BaselineKind",
    "BurrParams",
    "MomentNotFiniteError",
    "baseline_cdf",
    "baseline_sf",
    "baseline_pdf",
    "baseline_logpdf",
    "baseline_quantile",
    "baseline_hazard",
    "baseline_reverse_hazard",
    "baseline_raw_moment",
    "baseline_sample",
    "burr_scale",
]


class BaselineKind(enum.Enum):
    BURR_III = "burr3"
    DAGUM = "dagum"


class MomentNotFiniteError(ValueError):
    """The requested moment does not exist for the given parameters."""


@dataclass(frozen=True)
class BurrParams:
    """Shape ``beta``, shape ``delta`` and scale ``lam`` (all positive)."""

    beta: float
    delta: float
    lam: float

    def __post_init__(self):
        for name in ("beta", "delta", "lam"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, float(value))


def burr_scale(kind: BaselineKind, p: BurrParams) -> float:
    """Scale of the Burr III distribution equal to the given baseline."""
    if kind is BaselineKind.DAGUM:
        return p.lam ** (1.0 / p.delta)
    return p.lam


def _positive(x):
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0):
        raise DomainError("baseline functions require x > 0")
    return x


def _out(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def _log1mexp(v):
    with np.errstate(divide="ignore"):
        return np.where(v > -np.log(2.0), np.log(-np.expm1(v)), np.log1p(-np.exp(v)))


def log_terms(kind: BaselineKind, p: BurrParams, x):
    """Shared log-space building blocks at ``x``.

    Returns ``(log_t, log1p_t, log_cdf, log_sf, log_pdf)``. Exposed for the
    generator and likelihood code; ``x`` must already be validated.
    """
    log_x = np.log(x)
    if kind is BaselineKind.DAGUM:
        log_t = np.log(p.lam) - p.delta * log_x
    else:
        log_t = -p.delta * (log_x - np.log(p.lam))
    log1p_t = np.logaddexp(0.0, log_t)
    log_cdf = -p.beta * log1p_t
    log_sf = _log1mexp(log_cdf)
    log_pdf = np.log(p.beta) + np.log(p.delta) - log_x + log_t - (p.beta + 1.0) * log1p_t
    return log_t, log1p_t, log_cdf, log_sf, log_pdf


def baseline_cdf(kind: BaselineKind, p: BurrParams, x):
    """Cumulative distribution function ``(1 + t)^(-β)``."""
    x = _positive(x)
    return _out(np.exp(log_terms(kind, p, x)[2]))


def baseline_sf(kind: BaselineKind, p: BurrParams, x):
    """Survival function ``1 - F(x)``, computed without cancellation."""
    x = _positive(x)
    return _out(np.exp(log_terms(kind, p, x)[3]))


def baseline_logpdf(kind: BaselineKind, p: BurrParams, x):
    x = _positive(x)
    return _out(log_terms(kind, p, x)[4])


def baseline_pdf(kind: BaselineKind, p: BurrParams, x):
    """Density ``β δ t (1 + t)^(-β-1) / x``."""
    return _out(np.exp(baseline_logpdf(kind, p, x)))


def baseline_hazard(kind: BaselineKind, p: BurrParams, x):
    """Hazard ``f / (1 - F)``."""
    x = _positive(x)
    _, _, _, log_sf, log_pdf = log_terms(kind, p, x)
    return _out(np.exp(log_pdf - log_sf))


def baseline_reverse_hazard(kind: BaselineKind, p: BurrParams, x):
    """Reverse hazard ``f / F``."""
    x = _positive(x)
    _, _, log_cdf, _, log_pdf = log_terms(kind, p, x)
    return _out(np.exp(log_pdf - log_cdf))


def quantile_from_log(kind: BaselineKind, p: BurrParams, log_q):
    """Quantile at ``q = exp(log_q)``; accurate when ``q`` is near 1."""
    # (1 + t)^(-β) = q  =>  t = q^(-1/β) - 1 = expm1(-log q / β)
    log_q = np.asarray(log_q, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        log_t = np.log(np.expm1(-log_q / p.beta))
    log_x = np.log(burr_scale(kind, p)) - log_t / p.delta
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(log_x)


def baseline_quantile(kind: BaselineKind, p: BurrParams, q):
    """Inverse cdf ``λ (q^(-1/β) - 1)^(-1/δ)`` (Burr III scale)."""
    q = np.asarray(q, dtype=float)
    if not np.all((q > 0) & (q < 1)):
        raise DomainError("baseline_quantile requires 0 < q < 1")
    return _out(quantile_from_log(kind, p, np.log(q)))


def baseline_raw_moment(p: BurrParams, r: float, kind: BaselineKind = BaselineKind.BURR_III):
    """``E(Y^r) = β λ^r B(β + r/δ, 1 - r/δ)``, finite only for ``r < δ``."""
    if r >= p.delta:
        raise MomentNotFiniteError(f"moment of order {r} requires r < delta = {p.delta}")
    lam = burr_scale(kind, p)
    return float(p.beta * lam**r * np.exp(log_beta(p.beta + r / p.delta, 1.0 - r / p.delta)))


def baseline_sample(kind: BaselineKind, p: BurrParams, n: int, seed: int):
    """Inverse-transform draws; uses the same uniforms as the gamma-G sampler."""
    u = np.random.default_rng(seed).random(n)
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    return quantile_from_log(kind, p, np.log(u))
