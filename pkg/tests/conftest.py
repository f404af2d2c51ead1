import math

import pytest

from chemopattern import ModelParams

# Parameter sets used throughout: a supercritical one on a short interval
# (alpha=36, beta=34, u_c=0.2) and a subcritical one on a long interval
# (alpha=beta=10, u_c=0.5).
SUPER = ModelParams(d1=0.2, d2=0.6, chi=0.0, mu=0.5, u_c=0.2,
                    alpha=36.0, beta=34.0, domain_length=2.0 * math.pi)
SUB = ModelParams(d1=0.3, d2=1.0, chi=0.0, mu=0.5, u_c=0.5,
                  alpha=10.0, beta=10.0, domain_length=20.0)


@pytest.fixture
def super_params() -> ModelParams:
    return SUPER


@pytest.fixture
def sub_params() -> ModelParams:
    return SUB
