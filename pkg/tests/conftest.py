import numpy as np
import pytest
from hypothesis import settings

from ccatrap.model import ModelParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")



@pytest.fixture(params=[0.5, 1.0, 2.0], ids=lambda e: f"eta{e:g}")
def params(request):
    return ModelParams.from_eta(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def report(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
