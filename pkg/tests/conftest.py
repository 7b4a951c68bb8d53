import pytest

from beattycover.exactnum import QuadraticIrrational, sqrt

# golden ratio and friends, used all over the suite
PHI = QuadraticIrrational(1, 1, 5, 2)          # (1 + sqrt(5)) / 2
PHI_SQ = QuadraticIrrational(3, 1, 5, 2)       # phi^2 = (3 + sqrt(5)) / 2
SQRT2 = sqrt(2)
SQRT3 = sqrt(3)
SQRT2_MINUS_1 = QuadraticIrrational(-1, 1, 2, 1)
INV_SQRT2 = QuadraticIrrational(0, 1, 2, 2)    # 1/sqrt(2) = sqrt(2)/2


@pytest.fixture
def phi():
    return PHI


@pytest.fixture
def phi_sq():
    return PHI_SQ
