import pytest

import rewritekit as rk

GRID = [(a, b, g, d)
        for a in range(1, 5) for b in range(1, 5)
        for g in range(1, 5) for d in range(1, 5)]


@pytest.fixture(scope="session")
def demo_summary():
    tag, params = rk.classify(1, 2, 2, 2)
    summary = rk.certify_family_system(tag, params)
    assert summary.certification == rk.Certification.COMPLETE
    return summary


@pytest.fixture(scope="session")
def demo_system(demo_summary):
    return demo_summary.system


@pytest.fixture(scope="session")
def demo_presentation():
    _, params = rk.classify(1, 2, 2, 2)
    return rk.one_relator_presentation(params)


@pytest.fixture(scope="session")
def grid_summaries():
    """Certification summaries for every tuple in [1..4]^4, keyed by tuple."""
    out = {}
    for t in GRID:
        tag, params = rk.classify(*t)
        out[t] = rk.certify_family_system(tag, params)
    return out
