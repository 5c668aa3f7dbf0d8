"""Shared fixtures; collects acceptance outcomes and prints them after the run."""

import time

import pytest

_OUTCOMES: list[tuple[str, bool, str]] = []
_SUITE_LIMIT_S = 300.0
_started = time.perf_counter()


class AcceptanceRecorder:
    def check(self, criterion: str, ok: bool, detail: str) -> bool:
        _OUTCOMES.append((criterion, bool(ok), detail))
        return bool(ok)


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceRecorder()


@pytest.fixture(scope="session")
def corpus_fits():
    """All four models on all three corpora with default options, plus wall times."""
    from ggburr.datasets import load_embedded
    from ggburr.gammag import MODEL_CODES
    from ggburr.inference import fit_mle

    out = {}
    for name in ("leukemia", "aircon", "components"):
        data = load_embedded(name)
        for code, (variant, kind, _) in MODEL_CODES.items():
            t0 = time.perf_counter()
            fit = fit_mle(variant, kind, data)
            out[name, code] = (fit, time.perf_counter() - t0)
    return out


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in _OUTCOMES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
    elapsed = time.perf_counter() - _started
    ok = elapsed < _SUITE_LIMIT_S
    terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  6 suite runtime: {elapsed:.0f}s "
                                f"(limit {_SUITE_LIMIT_S:.0f}s)")
