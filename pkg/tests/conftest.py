import numpy as np
import pytest

from fsi_bench.params import AORTA_FAMILY, CaseSpec, ProblemParams, default_params

CHANNEL_CASE = CaseSpec.parse("2d", "linear", "transient", "transient")
TUBE_CASE = CaseSpec.parse("3d", "nonlinear", "transient", "transient")
ALL_CASES = CaseSpec.all()


def random_params(case, rng):
    """A random valid parameter draw for ``case`` (densities follow the regimes)."""
    H_i = rng.uniform(0.5, 1.5)
    return ProblemParams(
        rho_f=rng.uniform(0.5, 3.0) if case.fluid_transient else 0.0,
        mu_f=rng.uniform(0.005, 0.1),
        rho_s=rng.uniform(0.5, 5.0) if case.solid_transient else 0.0,
        mu_s=rng.uniform(0.05, 1.0),
        H_i=H_i,
        H_o=H_i * rng.uniform(1.1, 1.5),
        L=rng.uniform(0.5, 2.0),
        T=rng.uniform(0.5, 2.0),
        P=complex(*rng.normal(size=2)),
    )


def channel_params():
    return default_params(CHANNEL_CASE)


def tube_params():
    return default_params(TUBE_CASE)


def aorta_params():
    return default_params(TUBE_CASE, AORTA_FAMILY)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def case_id(case):
    return case.label


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
