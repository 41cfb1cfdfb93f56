"""Shared fixtures plus the final acceptance-criteria report."""

import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance():
    """Record one pass/fail line per criterion and fail the test if needed."""
    def record(number, name, ok, detail="", skip=False):
        status = "SKIP" if skip else ("PASS" if ok else "FAIL")
        line = f"criterion {number} ({name}): {status}"
        if detail:
            line += f" [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        if not skip:
            assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

from gscatter.groups import (build_affine, build_cyclic, build_product,
                             build_symmetric)


@pytest.fixture(scope="session")
def z4():
    return build_cyclic(4)


@pytest.fixture(scope="session")
def z6():
    return build_cyclic(6)


@pytest.fixture(scope="session")
def s3():
    return build_symmetric(3)


@pytest.fixture(scope="session")
def s5():
    return build_symmetric(5)


@pytest.fixture(scope="session")
def aff3():
    return build_affine(3)


@pytest.fixture(scope="session")
def aff7():
    return build_affine(7)


@pytest.fixture(scope="session")
def grid28():
    return build_product(build_cyclic(28), build_cyclic(28))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
