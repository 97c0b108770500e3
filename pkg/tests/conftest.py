import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from streamchroma.config import RunConfig
from streamchroma.generators import default_mixed_spec, gen_planted_instance
from streamchroma.graph import EdgeStream
from streamchroma.stream import run_pass

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def planted(delta, seed, **kw):
    g, blocks = gen_planted_instance(default_mixed_spec(delta, **kw), seed)
    return g, blocks


def summarize(g, seed=0, **cfg):
    return run_pass(EdgeStream.from_graph(g), RunConfig(seed=seed, **cfg))


@pytest.fixture(scope="session")
def planted32():
    g, blocks = planted(32, 1)
    return g, blocks, summarize(g, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(num, passed, detail):
    ACCEPTANCE[num] = (bool(passed), detail)
    print(f"criterion {num}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
