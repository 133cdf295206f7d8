"""Shared model fixtures.

The kernel table below is the package's standing implicit-kernel
fixture: three outcomes, linear interpolation on levels {0, 0.5, 1},
slopes bounded by 0.4, and per-outcome curves solving t = phi(i, t) at
0, 0.5 and 1 for the three degenerate lotteries.
"""

import pytest

from betweenu import (
    DisappointmentAversion,
    ExpectedUtility,
    ImplicitKernel,
    WeightedUtility,
)

KERNEL_T_GRID = (0.0, 0.5, 1.0)
KERNEL_PHI = (
    (0.0, 0.05, 0.15),
    (0.35, 0.5, 0.7),
    (0.9, 0.95, 1.0),
)

EU_U = (0.0, 0.4, 1.0)
WU_U = (0.0, 0.4, 1.0)
WU_W = (1.0, 2.0, 0.5)
DA_U = (0.0, 0.4, 1.0)


def make_kernel() -> ImplicitKernel:
    return ImplicitKernel.from_table(KERNEL_T_GRID, KERNEL_PHI)


def family_models() -> dict:
    """The built-in families the acceptance criteria quantify over."""
    return {
        "expected_utility": ExpectedUtility(EU_U),
        "weighted_utility": WeightedUtility(WU_U, WU_W),
        "disappointment_aversion_0.5": DisappointmentAversion(DA_U, beta=0.5),
        "disappointment_aversion_1": DisappointmentAversion(DA_U, beta=1.0),
        "disappointment_aversion_2": DisappointmentAversion(DA_U, beta=2.0),
        "implicit_kernel": make_kernel(),
    }


@pytest.fixture
def eu_model():
    return ExpectedUtility(EU_U)


@pytest.fixture
def wu_model():
    return WeightedUtility(WU_U, WU_W)


@pytest.fixture
def da_model():
    return DisappointmentAversion(DA_U, beta=1.0)


@pytest.fixture
def kernel_model():
    return make_kernel()


@pytest.fixture(params=sorted(family_models()))
def family_model(request):
    return family_models()[request.param]
