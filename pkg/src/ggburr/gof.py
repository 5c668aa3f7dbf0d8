"""Goodness-of-fit statistics computed from probability-integral transforms.

With ``u_(1) <= ... <= u_(n)`` the fitted cdf at the sorted data:

* Kolmogorov-Smirnov ``D = max_i max(i/n - u_i, u_i - (i-1)/n)``
* Cramér-von Mises ``W² = 1/(12n) + Σ (u_i - (2i-1)/(2n))²``
* Anderson-Darling ``A² = -n - (1/n) Σ (2i-1)[ln u_i + ln(1 - u_{n+1-i})]``

No small-sample modifications are applied and no p-values are reported.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .gammag import GGModel
from .sample import LifetimeSample

__all__ = [
    "GofReport",
    "CensoredDataError",
    "pit_values",
    "ks_from_u",
    "cvm_from_u",
    "ad_from_u",
    "ks_statistic",
    "cvm_statistic",
    "ad_statistic",
    "gof_report",
    "ecdf_series",
    "pp_series",
]

_CLAMP = 1e-15


class CensoredDataError(ValueError):
    """Goodness-of-fit statistics are not defined here for censored samples."""


@dataclass(frozen=True)
class GofReport:
    ks: float
    cvm: float
    ad: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def pit_values(m: GGModel, data: LifetimeSample) -> np.ndarray:
    """Sorted ``G(x)`` over the sample."""
    if data.has_censoring:
        raise CensoredDataError("goodness-of-fit statistics need an uncensored sample")
    return np.sort(np.asarray(m.cdf(data.values), dtype=float).ravel(), kind="stable")


def ks_from_u(u) -> float:
    u = np.sort(np.asarray(u, dtype=float))
    n = u.size
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - u, u - (i - 1) / n)))


def cvm_from_u(u) -> float:
    u = np.sort(np.asarray(u, dtype=float))
    n = u.size
    i = np.arange(1, n + 1)
    return float(1.0 / (12 * n) + np.sum((u - (2 * i - 1) / (2 * n)) ** 2))


def ad_from_u(u) -> float:
    """Anderson-Darling ``A²`` with ``u`` clamped to ``[1e-15, 1 - 1e-15]``."""
    u = np.clip(np.sort(np.asarray(u, dtype=float)), _CLAMP, 1.0 - _CLAMP)
    n = u.size
    i = np.arange(1, n + 1)
    return float(-n - np.sum((2 * i - 1) * (np.log(u) + np.log1p(-u[::-1]))) / n)


def ks_statistic(m: GGModel, data: LifetimeSample) -> float:
    return ks_from_u(pit_values(m, data))


def cvm_statistic(m: GGModel, data: LifetimeSample) -> float:
    return cvm_from_u(pit_values(m, data))


def ad_statistic(m: GGModel, data: LifetimeSample) -> float:
    return ad_from_u(pit_values(m, data))


def gof_report(m: GGModel, data: LifetimeSample) -> GofReport:
    """All three statistics from a single cdf evaluation."""
    u = pit_values(m, data)
    return GofReport(ks_from_u(u), cvm_from_u(u), ad_from_u(u), int(u.size))


def ecdf_series(data: LifetimeSample) -> list[tuple[float, float]]:
    """Empirical cdf steps ``(x, F_n(x))`` at each distinct value, ascending."""
    x = np.sort(data.values, kind="stable")
    n = x.size
    distinct = np.unique(x)
    counts = np.searchsorted(x, distinct, side="right")
    return [(float(v), float(c) / n) for v, c in zip(distinct, counts)]


def pp_series(m: GGModel, data: LifetimeSample) -> list[tuple[float, float]]:
    """P-P pairs ``((i - 0.5)/n, u_i)``."""
    u = pit_values(m, data)
    n = u.size
    return [((i + 0.5) / n, float(v)) for i, v in enumerate(u)]
