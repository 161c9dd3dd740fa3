import pytest
from fractions import Fraction

from freelip.metric import line_space, validate_space


@pytest.fixture
def line3():
    return line_space(3)


@pytest.fixture
def line4():
    return line_space(4)


@pytest.fixture
def tri():
    # isoceles triangle with a short far side: d(0,a) = d(0,b) = 1, d(a,b) = 3/2
    return validate_space(
        [[0, 1, 1], [1, 0, Fraction(3, 2)], [1, Fraction(3, 2), 0]],
        base=0,
        labels=["0", "a", "b"],
    )
