"""Special functions used throughout the package.

Log-gamma, digamma, log-beta and the regularized incomplete beta are thin,
domain-checked wrappers over :mod:`scipy.special`. The regularized
incomplete gamma function is evaluated in log space here, because the
fitted models push the shape parameter down to ~1e-2 and the argument into
regions where one tail underflows and its log is still needed. Where both
tails are ordinary doubles, scipy supplies the values; the series and
continued fraction take over beyond that. The inverse is computed here by
safeguarded Newton iteration on ``log x``.

All functions accept scalars or array_like input, broadcast their
arguments, and return a float for scalar input.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sc

__all__ = [
    "DomainError",
    "ConvergenceError",
    "log_gamma",
    "digamma",
    "log_beta",
    "reg_incomplete_beta",
    "reg_lower_incomplete_gamma",
    "reg_upper_incomplete_gamma",
    "log_reg_lower_incomplete_gamma",
    "log_reg_upper_incomplete_gamma",
    "inv_reg_lower_incomplete_gamma",
    "inv_reg_upper_incomplete_gamma",
]

_EPS = np.finfo(float).eps
_TINY = 1e-300
_MAX_TERMS = 100_000
_MAX_NEWTON = 200
_NORMAL_FLOOR = 1e-280
# below this the root is not representable as a positive double
_LOG_FLOOR = np.log(np.finfo(float).smallest_subnormal)


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation hit its iteration cap."""


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _require(cond, msg):
    if not np.all(cond):
        raise DomainError(msg)


def log_gamma(a):
    """Natural log of the gamma function for ``a > 0``."""
    a = np.asarray(a, dtype=float)
    _require(a > 0, "log_gamma requires a > 0")
    return _out(sc.gammaln(a))


def digamma(a):
    """Digamma function ``Γ'(a)/Γ(a)`` for ``a > 0``."""
    a = np.asarray(a, dtype=float)
    _require(a > 0, "digamma requires a > 0")
    return _out(sc.psi(a))


def log_beta(a, b):
    """``ln B(a, b)`` for positive ``a`` and ``b``."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    _require((a > 0) & (b > 0), "log_beta requires a > 0 and b > 0")
    return _out(sc.betaln(a, b))


def reg_incomplete_beta(x, a, b):
    """Regularized incomplete beta ``I_x(a, b)`` for ``0 <= x <= 1``."""
    x, a, b = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, a, b)))
    _require((a > 0) & (b > 0), "reg_incomplete_beta requires a > 0 and b > 0")
    _require((x >= 0) & (x <= 1), "reg_incomplete_beta requires 0 <= x <= 1")
    return _out(sc.betainc(a, b, x))


# --- incomplete gamma -------------------------------------------------------


def _log_series(a, x):
    """log P(a, x) by the power series; valid and fast for x < a + 1."""
    ap = a.copy()
    term = 1.0 / a
    total = term.copy()
    active = np.ones(a.shape, dtype=bool)
    for _ in range(_MAX_TERMS):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ap[idx] += 1.0
        term[idx] *= x[idx] / ap[idx]
        total[idx] += term[idx]
        done = np.abs(term[idx]) < np.abs(total[idx]) * _EPS
        active[idx[done]] = False
    else:
        raise ConvergenceError("incomplete gamma series did not converge")
    return np.log(total) + a * np.log(x) - x - sc.gammaln(a)


def _log_contfrac(a, x):
    """log Q(a, x) by the Legendre continued fraction (modified Lentz)."""
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for i in range(1, _MAX_TERMS):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        an = -i * (i - a[idx])
        b[idx] += 2.0
        dd = an * d[idx] + b[idx]
        dd = np.where(np.abs(dd) < _TINY, _TINY, dd)
        cc = b[idx] + an / c[idx]
        cc = np.where(np.abs(cc) < _TINY, _TINY, cc)
        dd = 1.0 / dd
        step = dd * cc
        d[idx] = dd
        c[idx] = cc
        h[idx] *= step
        done = np.abs(step - 1.0) < _EPS
        active[idx[done]] = False
    else:
        raise ConvergenceError("incomplete gamma continued fraction did not converge")
    return np.log(h) + a * np.log(x) - x - sc.gammaln(a)


def _log_pq(a, x, use_library=True):
    """Return (log P, log Q) arrays for broadcast positive a and x >= 0.

    With ``use_library`` the bulk is delegated to scipy and only arguments
    whose smaller tail underflows reach the series / continued fraction;
    ``use_library=False`` forces the log-space routines everywhere.
    """
    a, x = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(x, dtype=float))
    _require(a > 0, "incomplete gamma requires a > 0")
    _require(x >= 0, "incomplete gamma requires x >= 0")
    a = a.ravel().copy()
    x = x.ravel().copy()
    logp = np.empty_like(x)
    logq = np.empty_like(x)

    zero = x == 0
    inf = np.isinf(x)
    logp[zero], logq[zero] = -np.inf, 0.0
    logp[inf], logq[inf] = 0.0, -np.inf

    rest = ~zero & ~inf
    if use_library and rest.any():
        # scipy is fast and accurate while both tails are normal doubles
        pv = sc.gammainc(a[rest], x[rest])
        qv = sc.gammaincc(a[rest], x[rest])
        ok = (pv > _NORMAL_FLOOR) & (qv > _NORMAL_FLOOR)
        idx = np.flatnonzero(rest)[ok]
        pv, qv = pv[ok], qv[ok]
        with np.errstate(divide="ignore"):
            logp[idx] = np.where(pv < 0.5, np.log(pv), np.log1p(-qv))
            logq[idx] = np.where(qv < 0.5, np.log(qv), np.log1p(-pv))
        rest[idx] = False

    ser = rest & (x < a + 1.0)
    cf = rest & ~ser
    if ser.any():
        lp = _log_series(a[ser], x[ser])
        logp[ser] = lp
        logq[ser] = _log1mexp(lp)
    if cf.any():
        lq = _log_contfrac(a[cf], x[cf])
        logq[cf] = lq
        logp[cf] = _log1mexp(lq)
    return logp, logq


def _log1mexp(v):
    """log(1 - exp(v)) for v <= 0, accurate over the whole range."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(v > -np.log(2.0), np.log(-np.expm1(v)), np.log1p(-np.exp(v)))


def _shape_like(v, a, x):
    shape = np.broadcast(np.asarray(a), np.asarray(x)).shape
    return _out(np.reshape(v, shape))


def reg_lower_incomplete_gamma(a, x):
    """Regularized lower incomplete gamma ``P(a, x) = γ(a, x) / Γ(a)``.

    The power series is used for ``x < a + 1`` and the continued fraction
    for the complement otherwise.
    """
    logp, _ = _log_pq(a, x)
    return _shape_like(np.exp(logp), a, x)


def reg_upper_incomplete_gamma(a, x):
    """Regularized upper incomplete gamma ``Q(a, x) = 1 - P(a, x)``."""
    _, logq = _log_pq(a, x)
    return _shape_like(np.exp(logq), a, x)


def log_reg_lower_incomplete_gamma(a, x):
    """``log P(a, x)``, finite far into the lower tail."""
    logp, _ = _log_pq(a, x)
    return _shape_like(logp, a, x)


def log_reg_upper_incomplete_gamma(a, x):
    """``log Q(a, x)``, finite far into the upper tail."""
    _, logq = _log_pq(a, x)
    return _shape_like(logq, a, x)


def _initial_log_guess(a, q):
    """Starting log x for the inverse: Wilson-Hilferty for a >= 1, the
    small-x power law (with an exponential-tail fallback) for a < 1."""
    z = sc.ndtri(q)
    ninth = 1.0 / (9.0 * a)
    base = 1.0 - ninth + z * np.sqrt(ninth)
    with np.errstate(divide="ignore", invalid="ignore"):
        wh = np.log(a) + 3.0 * np.log(base)
        # P(a, x) ~ x^a / Γ(a + 1) as x -> 0
        power = (np.log(q) + sc.gammaln(a + 1.0)) / a
        t = 1.0 - a * (0.253 + 0.12 * a)
        tail = np.log(1.0 - np.log1p(-(q - t) / (1.0 - t)))
        small_a = np.where(q < t, np.log(q / t) / a, tail)
    y0 = np.where(a < 1.0, small_a, np.where(base > 0, wh, power))
    return np.where(np.isfinite(y0), y0, 0.0)


def _invert(a, q, upper):
    """Solve P(a, x) = q (or Q(a, x) = q when ``upper``) for x.

    Newton's method on log x with a bracket; steps that leave the bracket
    fall back to bisection.
    """
    a, q = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(q, dtype=float))
    _require(a > 0, "inverse incomplete gamma requires a > 0")
    _require((q > 0) & (q < 1), "inverse incomplete gamma requires 0 < q < 1")
    shape = a.shape
    a = a.ravel().copy()
    q = q.ravel().copy()

    # work on whichever tail is smaller so the target log is well scaled
    lower_tail = (q <= 0.5) if not upper else (q > 0.5)
    target = np.where(lower_tail, q, 1.0 - q) if not upper else np.where(lower_tail, 1.0 - q, q)
    log_target = np.log(target)
    p_lower = q if not upper else 1.0 - q

    y = np.maximum(_initial_log_guess(a, p_lower), _LOG_FLOOR)
    lo = np.full_like(y, -np.inf)
    hi = np.full_like(y, np.inf)
    active = np.ones(y.shape, dtype=bool)

    for _ in range(_MAX_NEWTON):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ai, yi = a[idx], y[idx]
        xi = np.exp(yi)
        logp, logq = _log_pq(ai, xi)
        lt = lower_tail[idx]
        # f is increasing in y on both branches
        f = np.where(lt, logp - log_target[idx], log_target[idx] - logq)
        log_dens = ai * yi - xi - sc.gammaln(ai)
        with np.errstate(over="ignore"):
            slope = np.where(lt, np.exp(log_dens - logp), np.exp(log_dens - logq))
        pos = f > 0
        hi[idx] = np.where(pos, np.minimum(hi[idx], yi), hi[idx])
        lo[idx] = np.where(~pos, np.maximum(lo[idx], yi), lo[idx])

        with np.errstate(divide="ignore", invalid="ignore"):
            step = -f / slope
        step = np.where(np.isfinite(step), step, -np.sign(f) * 1.0)
        step = np.clip(step, -50.0, 50.0)
        ynew = yi + step
        bracketed = np.isfinite(lo[idx]) & np.isfinite(hi[idx])
        outside = (ynew < lo[idx]) | (ynew > hi[idx])
        ynew = np.where(bracketed & outside, 0.5 * (lo[idx] + hi[idx]), ynew)
        ynew = np.maximum(ynew, _LOG_FLOOR)
        y[idx] = ynew

        # f carries ~1e-14 of rounding noise from the target and log Q
        tol = 1e-13 * np.maximum(1.0, np.abs(yi))
        done = (np.abs(ynew - yi) <= tol) | (np.abs(f) <= 1e-13)
        done |= bracketed & (hi[idx] - lo[idx] <= tol)
        done |= (yi <= _LOG_FLOOR) & pos
        active[idx[done]] = False
    else:
        raise ConvergenceError("inverse incomplete gamma hit the iteration cap")
    with np.errstate(under="ignore"):
        x = np.exp(y)
    return _out(x.reshape(shape))


def inv_reg_lower_incomplete_gamma(a, q):
    """Inverse of ``P(a, ·)``: the ``x`` with ``P(a, x) = q``, ``0 < q < 1``."""
    return _invert(a, q, upper=False)


def inv_reg_upper_incomplete_gamma(a, q):
    """Inverse of ``Q(a, ·)``: the ``x`` with ``Q(a, x) = q``.

    Preferred over the lower inverse when ``q`` is tiny, since ``1 - q``
    would round to one.
    """
    return _invert(a, q, upper=True)
