"""Acceptance criteria; each test records one PASS/FAIL line shown after the run.

Reference numbers are the published ones. Criteria that a faithful
implementation cannot meet are left failing rather than tuned.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from ggburr import analysis as an
from ggburr import specfun
from ggburr.baselines import BaselineKind, BurrParams, baseline_cdf, baseline_pdf
from ggburr.datasets import CorpusId, embedded_corpus, load_embedded
from ggburr.gammag import GGModel
from ggburr.gof import gof_report
from ggburr.inference import log_likelihood, lr_test, score
from ggburr.sample import LifetimeSample


def _within(x, target, tol):
    return abs(x - target) <= tol


def test_criterion_1_leukemia_fit(acceptance, corpus_fits):
    fit, secs = corpus_fits["leukemia", "ggbiii"]
    checks = {
        "-2LL<=299.7": fit.neg2_loglik <= 299.7,
        "-2LL within 0.5 of 299.2": _within(fit.neg2_loglik, 299.2, 0.5),
        "AIC": _within(fit.aic, 309.2, 0.5),
        "AICc": _within(fit.aicc, 311.4, 0.5),
        "BIC": _within(fit.bic, 316.7, 0.5),
        "runtime<30s": secs < 30,
    }
    detail = (f"-2LL={fit.neg2_loglik:.3f} AIC={fit.aic:.2f} AICc={fit.aicc:.2f} BIC={fit.bic:.2f} "
              f"time={secs:.1f}s; failed: {[k for k, v in checks.items() if not v] or 'none'}")
    assert acceptance.check("1 leukemia GGBIII fit", all(checks.values()), detail), detail


def test_criterion_2_aircon_fit(acceptance, corpus_fits):
    fit, secs = corpus_fits["aircon", "ggbiii"]
    g = gof_report(fit.model, load_embedded("aircon"))
    checks = {
        "-2LL": _within(fit.neg2_loglik, 2062.9, 1.0),
        "CvM": _within(g.cvm, 0.03536, 0.1 * 0.03536),
        "AD": _within(g.ad, 0.26363, 0.1 * 0.26363),
        "KS": _within(g.ks, 0.03815, 0.1 * 0.03815),
        "runtime<60s": secs < 60,
    }
    detail = (f"-2LL={fit.neg2_loglik:.3f} CvM={g.cvm:.5f} AD={g.ad:.5f} KS={g.ks:.5f} time={secs:.1f}s; "
              f"failed: {[k for k, v in checks.items() if not v] or 'none'}")
    assert acceptance.check("2 aircon GGBIII fit and GoF", all(checks.values()), detail), detail


def test_criterion_3_components_fit(acceptance, corpus_fits):
    fit, _ = corpus_fits["components", "ggbiii"]
    g = gof_report(fit.model, load_embedded("components"))
    aics = {code: corpus_fits["components", code][0].aic for code in ("ggbiii", "gd", "zbd", "rbd")}
    checks = {
        "-2LL": _within(fit.neg2_loglik, 198.4, 0.5),
        "KS": _within(g.ks, 0.10417, 0.01),
        "smallest AIC": min(aics, key=aics.get) == "ggbiii",
    }
    detail = (f"-2LL={fit.neg2_loglik:.3f} KS={g.ks:.5f} AIC="
              + ",".join(f"{k}:{v:.2f}" for k, v in aics.items())
              + f"; failed: {[k for k, v in checks.items() if not v] or 'none'}")
    assert acceptance.check("3 components GGBIII fit", all(checks.values()), detail), detail


@pytest.mark.filterwarnings("ignore:negative LR statistic")
def test_criterion_4_lr_tables(acceptance, corpus_fits):
    targets = {
        "leukemia": ({"gd": 4.4, "rbd": 8.2, "zbd": 9.5}, 0.7),
        "aircon": ({"gd": 2.2, "rbd": 4.0, "zbd": 21.8}, 1.5),
    }
    parts, ok = [], True
    for corpus, (want, tol) in targets.items():
        alt = corpus_fits[corpus, "ggbiii"][0]
        for code, target in want.items():
            stat = lr_test(corpus_fits[corpus, code][0], alt).statistic
            hit = _within(stat, target, tol)
            ok &= hit
            parts.append(f"{corpus}/{code}={stat:.2f}({'ok' if hit else f'want {target}±{tol}'})")
    detail = " ".join(parts)
    assert acceptance.check("4 LR statistics", ok, detail), detail


def test_criterion_5_censored_likelihood(acceptance):
    models = [GGModel.ggbiii(0.8, 1.7, 2.0, 1.4, 1.6), GGModel.gamma_dagum(1.3, 0.9, 2.5, 1.1, 0.7),
              GGModel.zb_dagum(0.6, 2.2, 1.5, 1.8), GGModel.rb_dagum(1.9, 0.8, 3.0, 1.2)]
    x = np.array([0.4, 1.0, 2.2, 5.0, 9.0])
    bitwise, worst = True, 0.0
    for m in models:
        bitwise &= log_likelihood(m, LifetimeSample(x)) == log_likelihood(m, LifetimeSample(x, np.zeros(5, bool)))
        got = log_likelihood(m, LifetimeSample(x, np.ones(5, bool)))
        tails = [integrate.quad(m.pdf, xi, np.inf, limit=400, epsabs=0, epsrel=1e-12)[0] for xi in x]
        want = sum(math.log(t) for t in tails)
        worst = max(worst, abs(got / want - 1))
    ok = bitwise and worst < 1e-9
    detail = f"zero flags bit-identical={bitwise}; all flags vs quadrature rel err={worst:.1e}"
    assert acceptance.check("5 censored likelihood", ok, detail), detail


def _fd_score(m, data, h_rel=1e-6):
    v0 = m.params.free_values()
    out = np.empty(v0.size)
    for i in range(v0.size):
        up, dn = v0.copy(), v0.copy()
        up[i] += h_rel * v0[i]
        dn[i] -= h_rel * v0[i]
        lls = [log_likelihood(m.from_values(m.variant, m.kind, v), data) for v in (up, dn)]
        out[i] = (lls[0] - lls[1]) / (2 * h_rel * v0[i])
    return out


def test_criterion_6_property_suites(acceptance):
    grid_models = [GGModel.ggbiii(0.0220, 12.510, 0.5962, 0.5817, 22.09),
                   GGModel.ggbiii(0.089, 4.079, 0.358, 0.563, 5.618),
                   GGModel.ggbiii(0.0440, 9.1609, 30.894, 1.0662, 3.849),
                   GGModel.gamma_dagum(1.3, 0.9, 2.5, 1.1, 0.7)]
    others = [GGModel.gamma_dagum(1.3, 0.9, 2.5, 1.1, 0.7), GGModel.zb_dagum(0.6, 2.2, 1.5, 1.8),
              GGModel.rb_dagum(1.9, 0.8, 3.0, 1.2), GGModel.ggbiii(0.8, 1.7, 2.0, 1.4, 1.6)]
    res = {}

    q = np.arange(1, 1000) / 1000
    a, qa = np.array([0.05, 0.5, 5.0, 50.0])[:, None], np.array([0.01, 0.5, 0.99])[None, :]
    round_trip = max(float(np.max(np.abs(m.cdf(m.quantile(q)) / q - 1))) for m in grid_models)
    round_trip = max(round_trip, float(np.max(np.abs(
        specfun.reg_lower_incomplete_gamma(a, specfun.inv_reg_lower_incomplete_gamma(a, qa)) / qa - 1))))
    res["quantile round trip"] = round_trip <= 1e-9

    def fd_err(m):
        x = m.quantile(np.linspace(0.05, 0.95, 19))
        h = 1e-5 * x
        fd = (m.cdf(x + h) - m.cdf(x - h)) / (2 * h)
        return float(np.max(np.abs(fd / m.pdf(x) - 1)))
    res["pdf-cdf FD"] = max(fd_err(m) for m in grid_models + others) <= 1e-6

    x = np.geomspace(0.01, 100, 60)
    unit = GGModel.ggbiii(1.0, 2.0, 1.5, 3.0, 1.0)
    bp = BurrParams(2.0, 3.0, 1.5)
    res["alpha=p=1 reduction"] = (
        np.allclose(unit.pdf(x), baseline_pdf(BaselineKind.BURR_III, bp, x), rtol=1e-12, atol=0)
        and np.allclose(unit.cdf(x), baseline_cdf(BaselineKind.BURR_III, bp, x), rtol=1e-12, atol=0))

    worst = 0.0
    for name in ("leukemia", "aircon", "components"):
        data = load_embedded(name)
        for m in others:
            d = LifetimeSample(data.values * m.median() / np.median(data.values))
            a, f = score(m, d), _fd_score(m, d)
            worst = max(worst, float(np.max(np.abs(a - f) / np.maximum(np.abs(f), 1e-3 * np.max(np.abs(f))))))
    res["score vs FD"] = worst <= 1e-5

    mild = GGModel.ggbiii(0.7, 1.5, 2.0, 2.5, 1.3)
    xs = np.linspace(0.3, 3.0, 20)
    xs = xs[baseline_cdf(BaselineKind.BURR_III, mild.base, xs) < 0.75]
    errs = [np.max(np.abs(an.series_density(mild, xs, c) - mild.pdf(xs))) for c in (10, 20, 30, 40)]
    res["series density decreasing"] = all(b < a for a, b in zip(errs, errs[1:]))

    mu, med = an.raw_moment(mild, 1.0), mild.median()
    pts = sorted({*mild.quantile(np.array([0.01, 0.5, 0.99])), mu})

    def xquad(fn):
        f = lambda y: fn(math.exp(y)) * mild.pdf(math.exp(y)) * math.exp(y)
        edges = [-60.0] + [math.log(p) for p in pts] + [60.0]
        return sum(integrate.quad(f, a, b, limit=500, epsabs=1e-12, epsrel=1e-11)[0]
                   for a, b in zip(edges[:-1], edges[1:]))
    res["deviation identities"] = (
        abs(an.mean_deviation(mild) / xquad(lambda t: abs(t - mu)) - 1) <= 1e-6
        and abs(an.median_deviation(mild) / xquad(lambda t: abs(t - med)) - 1) <= 1e-6)

    n, xo = 7, np.geomspace(0.1, 20, 25)
    total = sum(mild.order_statistic_pdf(i, n, xo) for i in range(1, n + 1))
    res["order statistic sum"] = bool(np.allclose(total, n * mild.pdf(xo), rtol=1e-9, atol=0))

    res["corpus summaries"] = all(ok for c in CorpusId for _, _, ok in embedded_corpus(c).check_summary().values())

    failed = [k for k, v in res.items() if not v]
    detail = f"{len(res) - len(failed)}/{len(res)} properties hold; failed: {failed or 'none'}"
    assert acceptance.check("6 property suites", not failed, detail), detail
