"""Gamma-generated families over a Burr III or Dagum baseline.

Writing ``F`` and ``f`` for the baseline cdf and pdf and ``z = -log(1 - F)``,
the four generators are

=====================  ========================================
variant                cdf ``G(x)``
=====================  ========================================
``GENERALIZED_P``      ``P(α, z^p)``
``BRODERICK_THETA``    ``P(α, z / θ)``
``ZB``                 ``P(α, z)``
``RB``                 ``1 - P(α, -log F)``
=====================  ========================================

where ``P`` is the regularized lower incomplete gamma function. The first
three are the special cases ``θ = 1``, ``p = 1`` and ``p = θ = 1`` of the
two-parameter form ``P(α, z^p / θ)``, which is what the code evaluates.
Its density is

    g(x) = p / (Γ(α) θ^α) · z^(pα-1) · exp(-z^p / θ) · f(x) / (1 - F(x)).

With a Burr III baseline the generalized variant is the GGBIII
distribution; with a Dagum baseline the other three give the GD, ZB-D and
RB-D comparison models.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np
from scipy import special as sc

from . import specfun
from .baselines import BaselineKind, BurrParams, log_terms, quantile_from_log
from .sample import LifetimeSample
from .specfun import DomainError

__all__ = [
    "Variant",
    "GammaGParams",
    "GGModel",
    "MODEL_CODES",
    "model_from_code",
    "free_parameter_names",
]


class Variant(enum.Enum):
    GENERALIZED_P = "generalized-p"
    BRODERICK_THETA = "broderick-theta"
    ZB = "zb"
    RB = "rb"


_FREE_NAMES = {
    Variant.GENERALIZED_P: ("alpha", "beta", "lam", "delta", "p"),
    Variant.BRODERICK_THETA: ("alpha", "beta", "lam", "delta", "theta"),
    Variant.ZB: ("alpha", "beta", "lam", "delta"),
    Variant.RB: ("alpha", "beta", "lam", "delta"),
}

# command-line / report codes -> (variant, baseline, display name)
MODEL_CODES = {
    "ggbiii": (Variant.GENERALIZED_P, BaselineKind.BURR_III, "GGBIII"),
    "gd": (Variant.BRODERICK_THETA, BaselineKind.DAGUM, "GD"),
    "zbd": (Variant.ZB, BaselineKind.DAGUM, "ZB-D"),
    "rbd": (Variant.RB, BaselineKind.DAGUM, "RBD"),
}


def free_parameter_names(variant: Variant) -> tuple[str, ...]:
    """Names of the estimable parameters, in report column order."""
    return _FREE_NAMES[variant]


@dataclass(frozen=True)
class GammaGParams:
    """Generator parameters plus the baseline they act on.

    ``theta`` is used only by ``BRODERICK_THETA`` and ``p`` only by
    ``GENERALIZED_P``; the other variants require them to be 1. ``RB``
    ignores both.
    """

    alpha: float
    base: BurrParams
    kind: BaselineKind = BaselineKind.BURR_III
    variant: Variant = Variant.GENERALIZED_P
    theta: float = 1.0
    p: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "theta", "p"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        v = self.variant
        if v is Variant.RB:
            object.__setattr__(self, "theta", 1.0)
            object.__setattr__(self, "p", 1.0)
        if v in (Variant.GENERALIZED_P, Variant.ZB) and self.theta != 1.0:
            raise DomainError(f"{v.value} fixes theta = 1")
        if v in (Variant.BRODERICK_THETA, Variant.ZB) and self.p != 1.0:
            raise DomainError(f"{v.value} fixes p = 1")

    @property
    def free_names(self) -> tuple[str, ...]:
        return _FREE_NAMES[self.variant]

    def free_values(self) -> np.ndarray:
        lookup = {
            "alpha": self.alpha,
            "beta": self.base.beta,
            "lam": self.base.lam,
            "delta": self.base.delta,
            "p": self.p,
            "theta": self.theta,
        }
        return np.array([lookup[n] for n in self.free_names])

    def with_free_values(self, values) -> GammaGParams:
        d = dict(zip(self.free_names, (float(v) for v in values)))
        base = BurrParams(d["beta"], d["delta"], d["lam"])
        return replace(
            self, alpha=d["alpha"], base=base, theta=d.get("theta", 1.0), p=d.get("p", 1.0)
        )

    def as_dict(self) -> dict:
        return dict(zip(self.free_names, (float(v) for v in self.free_values())))


def _positive(x):
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0):
        raise DomainError("x must be > 0")
    return x


def _out(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.ndim == 0 else v


def _log_neglog1m(log_cdf, log_sf):
    """log z with z = -log(1 - F), accurate when F underflows."""
    with np.errstate(divide="ignore"):
        direct = np.log(-log_sf)
    # z = F + F^2/2 + ...  so log z = log F + F/2 + O(F^2)
    return np.where(log_cdf < -20.0, log_cdf + 0.5 * np.exp(log_cdf), direct)


@dataclass(frozen=True)
class GGModel:
    """A fully specified gamma-G distribution.

    Use the named constructors for the four models of interest, e.g.
    ``GGModel.ggbiii(alpha, beta, lam, delta, p)``.
    """

    params: GammaGParams

    # -- constructors ------------------------------------------------------

    @classmethod
    def ggbiii(cls, alpha, beta, lam, delta, p) -> GGModel:
        return cls(GammaGParams(alpha, BurrParams(beta, delta, lam), BaselineKind.BURR_III,
                                Variant.GENERALIZED_P, p=p))

    @classmethod
    def gamma_dagum(cls, alpha, beta, lam, delta, theta) -> GGModel:
        return cls(GammaGParams(alpha, BurrParams(beta, delta, lam), BaselineKind.DAGUM,
                                Variant.BRODERICK_THETA, theta=theta))

    @classmethod
    def zb_dagum(cls, alpha, beta, lam, delta) -> GGModel:
        return cls(GammaGParams(alpha, BurrParams(beta, delta, lam), BaselineKind.DAGUM, Variant.ZB))

    @classmethod
    def rb_dagum(cls, alpha, beta, lam, delta) -> GGModel:
        return cls(GammaGParams(alpha, BurrParams(beta, delta, lam), BaselineKind.DAGUM, Variant.RB))

    @classmethod
    def from_values(cls, variant: Variant, kind: BaselineKind, values) -> GGModel:
        """Build from free-parameter values in :func:`free_parameter_names` order."""
        d = dict(zip(_FREE_NAMES[variant], (float(v) for v in values)))
        if len(d) != len(_FREE_NAMES[variant]):
            raise ValueError(f"{variant.value} needs {len(_FREE_NAMES[variant])} values")
        base = BurrParams(d["beta"], d["delta"], d["lam"])
        return cls(GammaGParams(d["alpha"], base, kind, variant,
                                theta=d.get("theta", 1.0), p=d.get("p", 1.0)))

    # -- shorthand -----------------------------------------------------------

    @property
    def variant(self) -> Variant:
        return self.params.variant

    @property
    def kind(self) -> BaselineKind:
        return self.params.kind

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def base(self) -> BurrParams:
        return self.params.base

    # -- evaluation ----------------------------------------------------------

    def _log_parts(self, x):
        """(log G, log(1 - G), log g) at validated x."""
        prm = self.params
        a = prm.alpha
        log_t, log1p_t, log_cdf, log_sf, log_pdf = log_terms(prm.kind, prm.base, x)
        if prm.variant is Variant.RB:
            # w = -log F = β log(1 + t); keep log w finite when t underflows
            with np.errstate(divide="ignore"):
                log_l = np.where(log_t < -30.0, log_t, np.log(log1p_t))
            log_w = np.log(prm.base.beta) + log_l
            w = -log_cdf
            # G = Q(α, w), 1 - G = P(α, w)
            log_s, log_c = specfun._log_pq(np.full_like(w, a), w)
            log_g = (a - 1.0) * log_w - sc.gammaln(a) + log_pdf
        else:
            log_z = _log_neglog1m(log_cdf, log_sf)
            log_w = prm.p * log_z - np.log(prm.theta)
            with np.errstate(over="ignore"):
                w = np.exp(log_w)
            log_c, log_s = specfun._log_pq(np.full_like(w, a), w)
            log_g = (np.log(prm.p) - sc.gammaln(a) - a * np.log(prm.theta)
                     + (prm.p * a - 1.0) * log_z - w - log_sf + log_pdf)
        shape = np.shape(x)
        return log_c.reshape(shape), log_s.reshape(shape), log_g

    def logcdf(self, x):
        x = _positive(x)
        return _out(self._log_parts(x)[0])

    def logsf(self, x):
        x = _positive(x)
        return _out(self._log_parts(x)[1])

    def logpdf(self, x):
        x = _positive(x)
        return _out(self._log_parts(x)[2])

    def cdf(self, x):
        """Cumulative distribution function ``G(x)``."""
        return _out(np.exp(self.logcdf(x)))

    def sf(self, x):
        """Survival function ``1 - G(x)``."""
        return _out(np.exp(self.logsf(x)))

    def pdf(self, x):
        """Density ``g(x)``."""
        return _out(np.exp(self.logpdf(x)))

    def hazard(self, x):
        """Hazard rate ``g / (1 - G)``, formed in log space."""
        x = _positive(x)
        _, log_s, log_g = self._log_parts(x)
        with np.errstate(over="ignore"):
            return _out(np.exp(log_g - log_s))

    def reverse_hazard(self, x):
        """Reverse hazard rate ``g / G``."""
        x = _positive(x)
        log_c, _, log_g = self._log_parts(x)
        with np.errstate(over="ignore"):
            return _out(np.exp(log_g - log_c))

    def quantile(self, q):
        """Inverse cdf.

        For the generalized variant this is
        ``λ [(1 - exp(-u^(1/p)))^(-1/β) - 1]^(-1/δ)`` with
        ``u = P^{-1}(α, q)``; the other variants invert their own
        transform the same way.
        """
        q = np.asarray(q, dtype=float)
        if not np.all((q > 0) & (q < 1)):
            raise DomainError("quantile requires 0 < q < 1")
        return _out(self._quantile(q))

    ppf = quantile

    def _quantile(self, q):
        prm = self.params
        a = np.full(q.shape, prm.alpha)
        # invert on the tail that keeps its digits
        upper = q > 0.5
        if prm.variant is Variant.RB:
            # G = Q(α, w)
            w = np.empty_like(q)
            w[~upper] = specfun.inv_reg_upper_incomplete_gamma(a[~upper], q[~upper])
            w[upper] = specfun.inv_reg_lower_incomplete_gamma(a[upper], 1.0 - q[upper])
            log_cdf = -w
        else:
            w = np.empty_like(q)
            w[~upper] = specfun.inv_reg_lower_incomplete_gamma(a[~upper], q[~upper])
            w[upper] = specfun.inv_reg_upper_incomplete_gamma(a[upper], 1.0 - q[upper])
            with np.errstate(divide="ignore", under="ignore"):
                z = np.exp((np.log(prm.theta) + np.log(w)) / prm.p)
                log_cdf = np.where(z > np.log(2.0), np.log1p(-np.exp(-z)), np.log(-np.expm1(-z)))
        return quantile_from_log(prm.kind, prm.base, log_cdf)

    def median(self) -> float:
        return float(self.quantile(0.5))

    def sample(self, n: int, seed: int) -> LifetimeSample:
        """``n`` inverse-transform draws from ``numpy.random.default_rng(seed)``."""
        if n < 1:
            raise ValueError("n must be >= 1")
        u = np.random.default_rng(seed).random(n)
        u = np.where(u == 0.0, np.finfo(float).tiny, u)
        x = self._quantile(u)
        x = np.clip(x, np.finfo(float).tiny, np.finfo(float).max)
        return LifetimeSample(x, label=f"sample(seed={seed})")

    def order_statistic_pdf(self, i: int, n: int, x):
        """Density of the ``i``-th smallest of ``n`` draws.

        ``n! / ((n-i)! (i-1)!) · g · G^(i-1) · (1-G)^(n-i)``, in log space.
        """
        if not (1 <= i <= n):
            raise IndexError(f"order statistic index {i} outside [1, {n}]")
        x = _positive(x)
        log_c, log_s, log_g = self._log_parts(x)
        log_coef = sc.gammaln(n + 1) - sc.gammaln(n - i + 1) - sc.gammaln(i)
        with np.errstate(invalid="ignore"):
            val = log_coef + log_g + (i - 1) * log_c + (n - i) * log_s
        if i == 1:
            val = log_coef + log_g + (n - i) * log_s
        if i == n:
            val = log_coef + log_g + (i - 1) * log_c
        return _out(np.exp(val))


def model_from_code(code: str, values) -> GGModel:
    """Model for a report code (``ggbiii``, ``gd``, ``zbd``, ``rbd``)."""
    try:
        variant, kind, _ = MODEL_CODES[code.lower()]
    except KeyError:
        raise ValueError(f"unknown model {code!r}; choose from {', '.join(MODEL_CODES)}") from None
    return GGModel.from_values(variant, kind, values)
