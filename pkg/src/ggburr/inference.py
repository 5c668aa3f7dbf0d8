"""Maximum likelihood for gamma-G models.

The score is derived from the unified log-density

    log g = log p - log Γ(α) - α log θ + (pα - 1) log z - z^p/θ + z + log f

with ``z = -log(1 - F)`` (and its RB analogue), not transcribed from any
printed gradient; the tests check it against finite differences.
Right-censored observations contribute ``log(1 - G)``.

Fitting works on log parameters. A Dagum baseline with scale ``λ`` is the
Burr III baseline with scale ``λ^(1/δ)``, so every model is optimized in
the Burr III form with the scale measured relative to the sample median;
estimates are converted back at the end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats
from scipy import special as sc

from . import specfun
from .baselines import BaselineKind, BurrParams, log_terms
from .gammag import GammaGParams, GGModel, Variant, free_parameter_names, MODEL_CODES
from .sample import LifetimeSample

__all__ = [
    "FitOptions",
    "FitResult",
    "LrTestResult",
    "log_likelihood",
    "score",
    "fit_mle",
    "observed_information",
    "covariance_from_information",
    "confidence_intervals",
    "information_criteria",
    "lr_test",
    "CovarianceUnavailableError",
]


class CovarianceUnavailableError(RuntimeError):
    """The observed information was singular or indefinite."""


# --- likelihood ------------------------------------------------------------


def _split(data: LifetimeSample):
    x = data.values
    ev = data.event_mask()
    return x[ev], x[~ev]


def log_likelihood(m: GGModel, data: LifetimeSample) -> float:
    """Log-likelihood; ``-inf`` when some density or survival underflows."""
    x_ev, x_cens = _split(data)
    total = 0.0
    if x_ev.size:
        total += float(np.sum(m.logpdf(x_ev)))
    if x_cens.size:
        total += float(np.sum(m.logsf(x_cens)))
    return total if np.isfinite(total) else -math.inf


def _pieces(kind, base, x):
    log_t, L, log_cdf, log_sf, log_pdf = log_terms(kind, base, x)
    sigma = np.exp(log_t - L)
    with np.errstate(divide="ignore"):
        log_L = np.where(log_t < -30.0, log_t, np.log(L))
    log_x = np.log(x)
    if kind is BaselineKind.DAGUM:
        dlt_dlam = np.full_like(x, 1.0 / base.lam)
        dlt_ddelta = -log_x
    else:
        dlt_dlam = np.full_like(x, base.delta / base.lam)
        dlt_ddelta = -(log_x - math.log(base.lam))
    return dict(L=L, log_L=log_L, sigma=sigma, log_cdf=log_cdf, log_sf=log_sf,
                dlt_dlam=dlt_dlam, dlt_ddelta=dlt_ddelta)


def _dlogq_dalpha(a, w, upper, h_rel=1e-5):
    """d/dα of log Q(α, w) (or log P when ``upper`` is False), central FD."""
    h = h_rel * a
    k = 1 if upper else 0
    hi = specfun._log_pq(np.full_like(w, a + h), w)[k]
    lo = specfun._log_pq(np.full_like(w, a - h), w)[k]
    return (hi - lo) / (2.0 * h)


def score(m: GGModel, data: LifetimeSample) -> np.ndarray:
    """Gradient of :func:`log_likelihood` over the free parameters.

    Components follow :func:`ggburr.gammag.free_parameter_names` order.
    """
    prm = m.params
    base = prm.base
    a, beta, delta = prm.alpha, base.beta, base.delta
    x_ev, x_cens = _split(data)
    g = dict.fromkeys(("alpha", "beta", "lam", "delta", "p", "theta"), 0.0)

    def add_baseline(d_beta, d_lt, d_delta_extra, P):
        g["beta"] += np.sum(d_beta)
        g["lam"] += np.sum(d_lt * P["dlt_dlam"])
        g["delta"] += np.sum(d_lt * P["dlt_ddelta"] + d_delta_extra)

    if prm.variant is Variant.RB:
        if x_ev.size:
            P = _pieces(prm.kind, base, x_ev)
            log_w = math.log(beta) + P["log_L"]
            g["alpha"] += np.sum(-sc.psi(a) + log_w)
            d_beta = (a - 1.0) / beta + 1.0 / beta - P["L"]
            ratio = np.exp(np.log(P["sigma"]) - P["log_L"])  # σ / L
            d_lt = (a - 1.0) * ratio + 1.0 - (beta + 1.0) * P["sigma"]
            add_baseline(d_beta, d_lt, 1.0 / delta, P)
        if x_cens.size:
            P = _pieces(prm.kind, base, x_cens)
            w = beta * P["L"]
            log_w = math.log(beta) + P["log_L"]
            log_p, _ = specfun._log_pq(np.full_like(w, a), w)
            # d log P(α, w) / dw
            dw = np.exp((a - 1.0) * log_w - w - sc.gammaln(a) - log_p)
            g["alpha"] += np.sum(_dlogq_dalpha(a, w, upper=False))
            add_baseline(dw * P["L"], dw * beta * P["sigma"], 0.0, P)
    else:
        p, theta = prm.p, prm.theta
        if x_ev.size:
            P = _pieces(prm.kind, base, x_ev)
            log_z = _log_z(P)
            log_r = P["log_cdf"] - P["log_sf"]  # log F/(1-F)
            # dℓ/dz · dz/dlogF, with dz/dlogF = F/(1-F)
            dz_r = ((p * a - 1.0) * np.exp(log_r - log_z)
                    - (p / theta) * np.exp((p - 1.0) * log_z + log_r)
                    + np.exp(log_r))
            zp = np.exp(p * log_z)
            g["alpha"] += np.sum(-sc.psi(a) - math.log(theta) + p * log_z)
            g["p"] += np.sum(1.0 / p + a * log_z - zp * log_z / theta)
            g["theta"] += np.sum(-a / theta + zp / theta**2)
            d_beta = 1.0 / beta - P["L"] - dz_r * P["L"]
            d_lt = 1.0 - (beta + 1.0) * P["sigma"] - dz_r * beta * P["sigma"]
            add_baseline(d_beta, d_lt, 1.0 / delta, P)
        if x_cens.size:
            P = _pieces(prm.kind, base, x_cens)
            log_z = _log_z(P)
            log_w = p * log_z - math.log(theta)
            w = np.exp(log_w)
            _, log_q = specfun._log_pq(np.full_like(w, a), w)
            # d log Q(α, w) / dw
            dq = -np.exp((a - 1.0) * log_w - w - sc.gammaln(a) - log_q)
            log_r = P["log_cdf"] - P["log_sf"]
            # dw/dlogF = p w / z · F/(1-F)
            dw_dlogf = p * np.exp(log_w - log_z + log_r)
            g["alpha"] += np.sum(_dlogq_dalpha(a, w, upper=True))
            g["p"] += np.sum(dq * w * log_z)
            g["theta"] += np.sum(-dq * w / theta)
            add_baseline(-dq * dw_dlogf * P["L"], -dq * dw_dlogf * beta * P["sigma"], 0.0, P)
    return np.array([float(g[n]) for n in free_parameter_names(prm.variant)])


def _log_z(P):
    with np.errstate(divide="ignore"):
        direct = np.log(-P["log_sf"])
    return np.where(P["log_cdf"] < -20.0, P["log_cdf"] + 0.5 * np.exp(P["log_cdf"]), direct)


# --- information and intervals --------------------------------------------


def observed_information(m: GGModel, data: LifetimeSample, h_rel: float = 1e-4) -> np.ndarray:
    """Negative Hessian of the log-likelihood by central differences of the score."""
    return _fd_information(lambda v: score(m.from_values(m.variant, m.kind, v), data),
                           m.params.free_values(), h_rel)


def _fd_information(grad, theta0, h_rel=1e-4) -> np.ndarray:
    theta0 = np.asarray(theta0, dtype=float)
    k = theta0.size
    H = np.empty((k, k))
    for i in range(k):
        h = h_rel * max(abs(theta0[i]), 1e-8)
        up, dn = theta0.copy(), theta0.copy()
        up[i] += h
        dn[i] -= h
        H[:, i] = (grad(up) - grad(dn)) / (2.0 * h)
    return -0.5 * (H + H.T)


def covariance_from_information(info: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite information matrix.

    Raises
    ------
    CovarianceUnavailableError
        If ``info`` is not positive definite or contains non-finite entries.
    """
    info = np.asarray(info, dtype=float)
    if not np.all(np.isfinite(info)):
        raise CovarianceUnavailableError("information matrix has non-finite entries")
    try:
        chol = np.linalg.cholesky(info)
    except np.linalg.LinAlgError:
        raise CovarianceUnavailableError("information matrix is not positive definite") from None
    inv_chol = np.linalg.solve(chol, np.eye(info.shape[0]))
    cov = inv_chol.T @ inv_chol
    return 0.5 * (cov + cov.T)


def information_criteria(neg2_loglik: float, k: int, n: int) -> dict:
    """AIC, AICc and BIC from ``-2 log L``, ``k`` parameters and ``n`` observations."""
    aic = neg2_loglik + 2.0 * k
    aicc = aic + 2.0 * k * (k + 1) / (n - k - 1) if n - k - 1 > 0 else math.inf
    bic = neg2_loglik + k * math.log(n)
    return {"aic": aic, "aicc": aicc, "bic": bic}


# --- results ----------------------------------------------------------------


@dataclass
class FitResult:
    """Outcome of :func:`fit_mle`.

    ``covariance`` and ``std_errors`` are ``None`` when the observed
    information is not positive definite. ``at_bounds`` lists parameters
    that ended on the search box.
    """

    estimates: GammaGParams
    neg2_loglik: float
    n: int
    converged: bool
    iterations: int
    covariance: np.ndarray | None = None
    std_errors: np.ndarray | None = None
    at_bounds: tuple[str, ...] = ()
    optimizer_trace: list = field(default_factory=list)
    label: str = ""

    @property
    def names(self) -> tuple[str, ...]:
        return self.estimates.free_names

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def model(self) -> GGModel:
        return GGModel(self.estimates)

    @property
    def model_code(self) -> str:
        for code, (variant, kind, _) in MODEL_CODES.items():
            if variant is self.estimates.variant and kind is self.estimates.kind:
                return code
        return self.estimates.variant.value

    @property
    def display_name(self) -> str:
        entry = MODEL_CODES.get(self.model_code)
        return entry[2] if entry else self.model_code

    @property
    def aic(self) -> float:
        return information_criteria(self.neg2_loglik, self.k, self.n)["aic"]

    @property
    def aicc(self) -> float:
        return information_criteria(self.neg2_loglik, self.k, self.n)["aicc"]

    @property
    def bic(self) -> float:
        return information_criteria(self.neg2_loglik, self.k, self.n)["bic"]

    def to_dict(self) -> dict:
        se = self.std_errors
        return {
            "model": self.display_name,
            "dataset": self.label,
            "n": self.n,
            "estimates": self.estimates.as_dict(),
            "std_errors": None if se is None else dict(zip(self.names, map(float, se))),
            "neg2_loglik": self.neg2_loglik,
            "aic": self.aic,
            "aicc": self.aicc,
            "bic": self.bic,
            "converged": self.converged,
            "iterations": self.iterations,
            "at_bounds": list(self.at_bounds),
        }


@dataclass(frozen=True)
class LrTestResult:
    statistic: float
    df: int
    p_value: float
    negative: bool = False


def confidence_intervals(fit: FitResult, level: float = 0.95) -> dict:
    """Wald intervals ``estimate ± z · se`` on the natural scale."""
    if not (0.0 < level < 1.0):
        raise ValueError("level must lie in (0, 1)")
    if fit.std_errors is None:
        raise CovarianceUnavailableError("fit has no covariance; intervals unavailable")
    z = stats.norm.ppf(0.5 + level / 2.0)
    est = fit.estimates.free_values()
    return {n: (float(e - z * s), float(e + z * s)) for n, e, s in zip(fit.names, est, fit.std_errors)}


def lr_test(null_fit: FitResult, alt_fit: FitResult, df: int = 1) -> LrTestResult:
    """Likelihood-ratio statistic ``-2LL(null) - (-2LL(alt))`` with a chi-square p-value.

    The caller states ``df``; nesting is not checked. A negative statistic
    is returned as is and flagged.
    """
    if df < 1:
        raise ValueError("df must be >= 1")
    stat = null_fit.neg2_loglik - alt_fit.neg2_loglik
    if stat < 0:
        warnings.warn(f"negative LR statistic {stat:.4g}; the alternative fit is not at its optimum",
                      RuntimeWarning, stacklevel=2)
    return LrTestResult(float(stat), int(df), float(stats.chi2.sf(max(stat, 0.0), df)), stat < 0)


# --- fitting ----------------------------------------------------------------


@dataclass(frozen=True)
class FitOptions:
    """Optimizer settings.

    The search box is in natural units: shape parameters and the Burr III
    scale relative to the sample median live in ``[bound_lo, bound_hi]``,
    ``delta`` in ``[delta_lo, delta_hi]``.
    """

    restarts: int = 8
    seed: int = 0
    jitter: float = 1.0
    bound_lo: float = 1e-3
    bound_hi: float = 1e3
    delta_lo: float = 1e-2
    delta_hi: float = 1e2
    grad_tol: float = 1e-5
    simplex_tol: float = 1e-9
    max_simplex_evals: int = 4000


class _Objective:
    """Mean negative log-likelihood in log coordinates of the Burr III form."""

    def __init__(self, variant: Variant, data: LifetimeSample,
                 kind: BaselineKind = BaselineKind.BURR_III):
        self.variant = variant
        self.kind = kind
        self.data = data
        self.scale = float(np.median(data.values))
        self.names = free_parameter_names(variant)
        self.n = data.n

    def params(self, y) -> GammaGParams:
        v = dict(zip(self.names, np.exp(y)))
        base = BurrParams(v["beta"], v["delta"], v["lam"] * self.scale)
        return GammaGParams(v["alpha"], base, BaselineKind.BURR_III, self.variant,
                            theta=v.get("theta", 1.0), p=v.get("p", 1.0))

    def value(self, y) -> float:
        if self.kind is BaselineKind.DAGUM and not self._dagum_representable(y):
            return math.inf
        try:
            ll = log_likelihood(GGModel(self.params(y)), self.data)
        except (specfun.DomainError, specfun.ConvergenceError, FloatingPointError):
            return math.inf
        return -ll / self.n if np.isfinite(ll) else 1e300

    def _dagum_representable(self, y) -> bool:
        # the Dagum scale is lam_burr ** delta and must stay a finite double
        v = dict(zip(self.names, y))
        return math.exp(v["delta"]) * (v["lam"] + math.log(self.scale)) < 700.0

    def grad(self, y) -> np.ndarray:
        prm = self.params(y)
        s = score(GGModel(prm), self.data) * prm.free_values() / self.n
        return np.where(np.isfinite(s), -s, 0.0)


def _bounds(names, opts: FitOptions):
    lo = [math.log(opts.delta_lo if n == "delta" else opts.bound_lo) for n in names]
    hi = [math.log(opts.delta_hi if n == "delta" else opts.bound_hi) for n in names]
    return np.array(lo), np.array(hi)


def _projected_grad(g, y, lo, hi, eps=1e-8):
    g = g.copy()
    g[(y <= lo + eps) & (g > 0)] = 0.0
    g[(y >= hi - eps) & (g < 0)] = 0.0
    return g


def _local_fit(value, grad, y0, lo, hi, opts: FitOptions):
    """Simplex search then a gradient polish; returns (y, f, iterations, converged)."""
    bounds = list(zip(lo, hi))
    y0 = np.clip(y0, lo, hi)

    def value_and_grad(y):
        f = value(y)
        if not np.isfinite(f) or f >= 1e300:
            return f, np.zeros_like(y)
        return f, grad(y)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        nm = optimize.minimize(value, y0, method="Nelder-Mead", bounds=bounds,
                               options={"maxfev": opts.max_simplex_evals, "xatol": 1e-10,
                                        "fatol": 1e-13, "adaptive": True})
        simplex = nm.final_simplex[0]
        diameter = float(np.max(np.abs(simplex - simplex[0])))
        best_y, best_f = nm.x, nm.fun
        nit = int(nm.nit)
        lb = optimize.minimize(value_and_grad, best_y, jac=True, method="L-BFGS-B",
                               bounds=bounds, options={"maxiter": 2000, "ftol": 1e-15, "gtol": 1e-10})
        nit += int(lb.nit)
        if np.isfinite(lb.fun) and lb.fun <= best_f:
            best_y, best_f = lb.x, lb.fun
            diameter = math.inf  # the simplex no longer describes the final point
    g = _projected_grad(grad(best_y), best_y, lo, hi)
    converged = bool(np.max(np.abs(g)) < opts.grad_tol or diameter < opts.simplex_tol)
    return best_y, float(best_f), nit, converged


def _baseline_start(data: LifetimeSample, opts: FitOptions) -> np.ndarray:
    """Burr III fit (the α = 1 member of the ZB family) in log coordinates."""
    obj = _Objective(Variant.ZB, data)
    lo, hi = _bounds(obj.names, opts)

    def value(y3):
        return obj.value(np.concatenate([[0.0], y3]))

    def grad(y3):
        return obj.grad(np.concatenate([[0.0], y3]))[1:]

    y, _, _, _ = _local_fit(value, grad, np.zeros(3), lo[1:], hi[1:], opts)
    return y  # log beta, log(lam/median), log delta


def fit_mle(variant: Variant, kind: BaselineKind, data: LifetimeSample,
            init: GammaGParams | None = None, options: FitOptions | None = None) -> FitResult:
    """Maximum likelihood fit of a gamma-G model.

    Parameters
    ----------
    variant, kind
        Generator and baseline, e.g. ``Variant.GENERALIZED_P`` with
        ``BaselineKind.BURR_III`` for GGBIII.
    data : LifetimeSample
        Observations, optionally right-censored.
    init : GammaGParams, optional
        Starting point. By default the baseline is fitted first and the
        generator parameters start at 1.
    options : FitOptions, optional

    Returns
    -------
    FitResult
        Non-convergence is reported through ``converged``; it never raises
        for it.
    """
    opts = options or FitOptions()
    names = free_parameter_names(variant)
    k = len(names)
    if data.n < k + 2:
        raise ValueError(f"need at least {k + 2} observations to fit {k} parameters")
    obj = _Objective(variant, data, kind)
    lo, hi = _bounds(names, opts)

    if init is not None:
        b = init.base
        lam_b = b.lam ** (1.0 / b.delta) if init.kind is BaselineKind.DAGUM else b.lam
        start = dict(alpha=init.alpha, beta=b.beta, lam=lam_b / obj.scale, delta=b.delta,
                     p=init.p, theta=init.theta)
        y0 = np.log([start[n] for n in names])
    else:
        yb = _baseline_start(data, opts)
        start = dict(alpha=0.0, beta=yb[0], lam=yb[1], delta=yb[2], p=0.0, theta=0.0)
        y0 = np.array([start[n] for n in names])

    rng = np.random.default_rng(opts.seed)
    starts = [y0] + [y0 + rng.normal(0.0, opts.jitter, k) for _ in range(opts.restarts)]
    runs = []
    for y_start in starts:
        y, f, nit, conv = _local_fit(obj.value, obj.grad, y_start, lo, hi, opts)
        runs.append((f, tuple(np.round(y, 12)), y, nit, conv))
    runs.sort(key=lambda r: (round(r[0], 10), r[1]))
    f_best, _, y_best, _, conv = runs[0]
    iterations = sum(r[3] for r in runs)

    burr_form = obj.params(y_best)
    estimates = _to_kind(burr_form, kind)
    model = GGModel(estimates)
    neg2 = -2.0 * log_likelihood(model, data)
    eps = 1e-6
    at_bounds = tuple(n for n, v, a, b in zip(names, y_best, lo, hi) if v <= a + eps or v >= b - eps)

    cov = se = None
    try:
        cov = covariance_from_information(observed_information(model, data))
        se = np.sqrt(np.diag(cov))
    except CovarianceUnavailableError:
        pass
    return FitResult(estimates=estimates, neg2_loglik=neg2, n=data.n, converged=conv,
                     iterations=iterations, covariance=cov, std_errors=se, at_bounds=at_bounds,
                     optimizer_trace=[2.0 * data.n * r[0] for r in runs], label=data.label)


def _to_kind(burr_form: GammaGParams, kind: BaselineKind) -> GammaGParams:
    if kind is BaselineKind.BURR_III:
        return burr_form
    b = burr_form.base
    base = BurrParams(b.beta, b.delta, b.lam ** b.delta)
    return GammaGParams(burr_form.alpha, base, kind, burr_form.variant,
                        theta=burr_form.theta, p=burr_form.p)
