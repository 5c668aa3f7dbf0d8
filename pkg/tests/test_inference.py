import math

import numpy as np
import pytest
from scipy import integrate, stats

from ggburr import inference as inf
from ggburr.baselines import BaselineKind
from ggburr.datasets import load_embedded
from ggburr.gammag import GGModel, Variant
from ggburr.gof import ks_statistic
from ggburr.sample import LifetimeSample

LEUK_PRINTED = GGModel.ggbiii(0.0220, 12.510, 0.5962, 0.5817, 22.09)
COMP_PRINTED = GGModel.ggbiii(0.089, 4.079, 0.358, 0.563, 5.618)
AIR_PRINTED = GGModel.ggbiii(0.0440, 9.1609, 30.894, 1.0662, 3.849)

MODELS = {
    "ggbiii": GGModel.ggbiii(0.8, 1.7, 2.0, 1.4, 1.6),
    "gd": GGModel.gamma_dagum(1.3, 0.9, 2.5, 1.1, 0.7),
    "zbd": GGModel.zb_dagum(0.6, 2.2, 1.5, 1.8),
    "rbd": GGModel.rb_dagum(1.9, 0.8, 3.0, 1.2),
}


def _fd_score(m, data, h_rel=1e-6):
    v0 = m.params.free_values()
    out = np.empty(v0.size)
    for i in range(v0.size):
        h = h_rel * v0[i]
        up, dn = v0.copy(), v0.copy()
        up[i] += h
        dn[i] -= h
        ll = [inf.log_likelihood(m.from_values(m.variant, m.kind, v), data) for v in (up, dn)]
        out[i] = (ll[0] - ll[1]) / (2 * h)
    return out


def _scaled(m, data):
    """Rescale the data to the model's median so every corpus exercises the bulk."""
    s = m.median() / np.median(data.values)
    return LifetimeSample(data.values * s, data.censored, data.label)


# --- likelihood ---------------------------------------------------------------


def test_single_point_unit_model():
    m = GGModel.ggbiii(1.0, 1.0, 1.0, 1.0, 1.0)
    assert inf.log_likelihood(m, LifetimeSample([1.0])) == pytest.approx(math.log(0.25), rel=1e-14)


@pytest.mark.parametrize("model,corpus,want", [
    (LEUK_PRINTED, "leukemia", 299.2),
    (COMP_PRINTED, "components", 198.4),
    (AIR_PRINTED, "aircon", 2062.9),
])
def test_published_estimates_reproduce_published_neg2ll(model, corpus, want):
    assert -2 * inf.log_likelihood(model, load_embedded(corpus)) == pytest.approx(want, abs=0.3)


def test_log_likelihood_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    a, b, lam, d, p = 0.7, 1.9, 2.0, 1.3, 1.8
    m = GGModel.ggbiii(a, b, lam, d, p)
    xs = [0.3, 1.1, 4.0, 17.0]

    def logg(x):
        x = mp.mpf(x)
        F = (1 + (x / lam) ** (-d)) ** (-b)
        f = b * d / lam * (x / lam) ** (-d - 1) * (1 + (x / lam) ** (-d)) ** (-b - 1)
        z = -mp.log(1 - F)
        g = p * z ** (p * a - 1) * mp.e ** (-z ** p) * f / ((1 - F) * mp.gamma(a))
        return mp.log(g)

    want = float(sum(logg(x) for x in xs))
    assert inf.log_likelihood(m, LifetimeSample(xs)) == pytest.approx(want, rel=1e-12)


def test_log_likelihood_survives_density_underflow():
    # g(x) ≈ δ x^(δ-1) near zero for the unit Burr III; e^-4509 is not a double
    m = GGModel.ggbiii(1.0, 1.0, 1.0, 50.0, 1.0)
    want = math.log(50.0) + 49.0 * math.log(1e-40)
    assert inf.log_likelihood(m, LifetimeSample([1e-40])) == pytest.approx(want, rel=1e-12)


# --- censoring ----------------------------------------------------------------


@pytest.mark.parametrize("code", sorted(MODELS))
def test_zero_censor_flags_change_nothing(code):
    m = MODELS[code]
    x = load_embedded("leukemia").values / 20
    plain = inf.log_likelihood(m, LifetimeSample(x))
    flagged = inf.log_likelihood(m, LifetimeSample(x, np.zeros(x.size, bool)))
    assert plain == flagged
    assert np.array_equal(inf.score(m, LifetimeSample(x)), inf.score(m, LifetimeSample(x, np.zeros(x.size, bool))))


@pytest.mark.parametrize("code", sorted(MODELS))
def test_all_flags_equal_sum_of_log_survival_by_quadrature(code):
    m = MODELS[code]
    x = np.array([0.4, 1.0, 2.2, 5.0, 9.0])
    got = inf.log_likelihood(m, LifetimeSample(x, np.ones(5, bool)))
    tails = [integrate.quad(lambda t: m.pdf(t), xi, np.inf, limit=400, epsabs=0, epsrel=1e-12)[0] for xi in x]
    assert got == pytest.approx(sum(math.log(s) for s in tails), rel=1e-9)


# --- score --------------------------------------------------------------------


@pytest.mark.parametrize("code", sorted(MODELS))
@pytest.mark.parametrize("corpus", ["leukemia", "aircon", "components"])
def test_score_matches_finite_differences(code, corpus):
    m = MODELS[code]
    data = _scaled(m, load_embedded(corpus))
    an, fd = inf.score(m, data), _fd_score(m, data)
    assert np.allclose(an, fd, rtol=1e-5, atol=1e-5 * np.max(np.abs(fd)))


@pytest.mark.parametrize("code", sorted(MODELS))
def test_score_with_censoring(code):
    m = MODELS[code]
    x = _scaled(m, load_embedded("leukemia")).values
    flags = np.arange(x.size) % 3 == 0
    data = LifetimeSample(x, flags)
    fd = _fd_score(m, data)
    assert np.allclose(inf.score(m, data), fd, rtol=1e-5, atol=1e-5 * np.max(np.abs(fd)))


def test_score_alpha_term_at_unit_generator():
    # with p = 1 and z ~ Exp(1)-like input the α-derivative is Σ log z - n ψ(α)
    from scipy.special import psi
    m = GGModel.ggbiii(2.0, 1.0, 1.0, 1.0, 1.0)
    x = np.array([0.5, 1.0, 3.0])
    z = -np.log1p(-1.0 / (1.0 + 1.0 / x))
    assert inf.score(m, LifetimeSample(x))[0] == pytest.approx(np.sum(np.log(z)) - 3 * psi(2.0), rel=1e-12)


# --- information and intervals -----------------------------------------------


def test_fd_information_of_a_quadratic():
    A = np.array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]])
    theta = np.array([1.0, 2.0, 3.0])
    info = inf._fd_information(lambda t: -A @ (t - 1.0), theta)
    assert np.allclose(info, A, rtol=1e-8)


def test_observed_information_symmetric_and_covariance_inverse():
    data = load_embedded("aircon")
    info = inf.observed_information(AIR_PRINTED, data)
    assert np.array_equal(info, info.T)
    cov = inf.covariance_from_information(info)
    assert np.allclose(cov @ info, np.eye(5), atol=1e-6)


def test_indefinite_information_raises():
    with pytest.raises(inf.CovarianceUnavailableError):
        inf.covariance_from_information(np.array([[1.0, 2.0], [2.0, 1.0]]))


def _fake_fit(se, neg2=10.0, n=30):
    return inf.FitResult(estimates=MODELS["zbd"].params, neg2_loglik=neg2, n=n, converged=True,
                         iterations=1, covariance=np.diag(np.square(se)), std_errors=np.asarray(se))


def test_wald_interval_half_width():
    fit = _fake_fit([1.0, 1.0, 1.0, 1.0])
    lo, hi = inf.confidence_intervals(fit, 0.95)["alpha"]
    assert (hi - lo) / 2 == pytest.approx(1.959963985, rel=1e-9)
    widths = [np.subtract(*inf.confidence_intervals(fit, lv)["beta"][::-1]) for lv in (0.8, 0.9, 0.95, 0.99)]
    assert all(b > a for a, b in zip(widths, widths[1:]))
    with pytest.raises(ValueError):
        inf.confidence_intervals(fit, 1.0)


# --- criteria and LR ----------------------------------------------------------


@pytest.mark.parametrize("neg2,k,n,aic,aicc,bic", [
    (299.2, 5, 33, 309.2, 311.4, 316.7),
    (2062.9, 5, 188, 2072.9, 2073.3, 2089.1),
    (198.4, 5, 50, 208.4, None, 217.9),
])
def test_information_criteria_against_published_rows(neg2, k, n, aic, aicc, bic):
    ic = inf.information_criteria(neg2, k, n)
    assert ic["aic"] == pytest.approx(aic, abs=0.1)
    assert ic["bic"] == pytest.approx(bic, abs=0.1)
    if aicc is not None:
        assert ic["aicc"] == pytest.approx(aicc, abs=0.1)


def test_lr_identical_fits():
    f = _fake_fit([1.0] * 4)
    r = inf.lr_test(f, f)
    assert r.statistic == 0.0 and r.p_value == 1.0 and not r.negative


def test_lr_p_value_and_negative_flag():
    null, alt = _fake_fit([1.0] * 4, neg2=14.0), _fake_fit([1.0] * 4, neg2=10.0)
    r = inf.lr_test(null, alt, df=2)
    assert r.p_value == pytest.approx(stats.chi2.sf(4.0, 2))
    with pytest.warns(RuntimeWarning):
        assert inf.lr_test(alt, null).negative


# --- fitting ------------------------------------------------------------------


def test_fit_recovers_generating_distribution():
    truth = GGModel.ggbiii(1.5, 2.0, 3.0, 2.5, 1.2)
    data = truth.sample(3000, 17)
    fit = inf.fit_mle(Variant.GENERALIZED_P, BaselineKind.BURR_III, data, options=inf.FitOptions(restarts=1))
    assert fit.neg2_loglik <= -2 * inf.log_likelihood(truth, data) + 1e-6
    # compare the fitted and true distributions on a quantile grid
    q = np.linspace(0.05, 0.95, 19)
    assert np.allclose(fit.model.quantile(q), truth.quantile(q), rtol=0.1)
    assert ks_statistic(fit.model, data) < 0.02


def test_fit_is_deterministic_and_stationary():
    data = load_embedded("aircon")
    opts = inf.FitOptions(restarts=2)
    a = inf.fit_mle(Variant.GENERALIZED_P, BaselineKind.BURR_III, data, options=opts)
    b = inf.fit_mle(Variant.GENERALIZED_P, BaselineKind.BURR_III, data, options=opts)
    assert a.neg2_loglik == b.neg2_loglik
    assert np.array_equal(a.estimates.free_values(), b.estimates.free_values())
    # interior optimum: the scaled score vanishes
    if not a.at_bounds:
        g = inf.score(a.model, data) * a.estimates.free_values() / data.n
        assert np.max(np.abs(g)) < 1e-4
        assert a.std_errors is not None and np.all(a.std_errors > 0)


def test_fit_dagum_models_report_dagum_parameters():
    data = load_embedded("components")
    fit = inf.fit_mle(Variant.ZB, BaselineKind.DAGUM, data, options=inf.FitOptions(restarts=0))
    assert fit.display_name == "ZB-D"
    assert fit.estimates.kind is BaselineKind.DAGUM
    assert fit.neg2_loglik == pytest.approx(-2 * inf.log_likelihood(fit.model, data), rel=1e-14)


def test_fit_rejects_tiny_samples():
    with pytest.raises(ValueError):
        inf.fit_mle(Variant.GENERALIZED_P, BaselineKind.BURR_III, LifetimeSample([1.0, 2.0, 3.0]))


def test_fit_from_explicit_start():
    data = load_embedded("components")
    fit = inf.fit_mle(Variant.GENERALIZED_P, BaselineKind.BURR_III, data, init=COMP_PRINTED.params,
                      options=inf.FitOptions(restarts=0))
    assert fit.neg2_loglik <= -2 * inf.log_likelihood(COMP_PRINTED, data) + 1e-9
    d = fit.to_dict()
    assert d["model"] == "GGBIII" and d["n"] == 50 and set(d["estimates"]) >= {"alpha", "p"}
