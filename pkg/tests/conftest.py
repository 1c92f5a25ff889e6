import numpy as np
import pytest

from pipct import corpus


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def discondeg():
    return corpus.get("discondeg")


def random_smooth(rng, terms=6):
    """Random combination of analytic functions on [-1, 1]."""
    a = rng.standard_normal(terms)
    w = rng.uniform(0.5, 4.0, terms)
    s = rng.uniform(-np.pi, np.pi, terms)
    return lambda x: sum(ai * np.sin(wi * np.asarray(x) + si) for ai, wi, si in zip(a, w, s))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
