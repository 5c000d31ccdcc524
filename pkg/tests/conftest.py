import itertools
from fractions import Fraction

import pytest
from hypothesis import settings

from motivic_vg.dsl import parse_function, parse_set

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

QS = (Fraction(2), Fraction(3), Fraction(5, 2))


def box(dim, radius):
    return itertools.product(range(-radius, radius + 1), repeat=dim)


def fn(text):
    return parse_function(text)


def st(text):
    return parse_set(text)


@pytest.fixture
def N1():
    return parse_set("{ x in Z^1 : x >= 0 }")


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
