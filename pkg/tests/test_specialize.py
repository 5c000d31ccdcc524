import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as hs

from motivic_vg.confun import ConFun
from motivic_vg.corpus import fiber_corpus, fubini_corpus, random_confun
from motivic_vg.errors import DomainError, NotIntegrableError, SpecializationError
from motivic_vg.integrate import Projection, is_integrable_fiberwise
from motivic_vg.specialize import (SpecReport, brute_sum, crosscheck, divergence_witness, partial_sum,
                                   series_tail_bound, spec_q, worker_count)

from conftest import QS, fn

EPS = Fraction(1, 10 ** 9)
ABS1 = Projection(1, (0,))
ABS2 = Projection(2, (0, 1))


def test_spec_q_examples():
    assert spec_q(fn("x * L^(-x) on { x in Z^1 : x >= 0 }"), 2)((3,)) == Fraction(3, 8)
    assert spec_q(fn("L^(2*x) on { x in Z^1 : x >= 0 }"), 3)((2,)) == 81
    null = fn("L^(x+1) - L*L^x on { x in Z^1 : x >= 0 }")
    assert all(spec_q(null, 2)((n,)) == 0 for n in range(10))


def test_spec_q_errors():
    f = fn("x on { x in Z^1 : x >= 0 }")
    with pytest.raises(SpecializationError):
        spec_q(f, 1)
    with pytest.raises(DomainError):
        spec_q(f, 2)((-1,))
    with pytest.raises(SpecializationError):
        spec_q(fn("[Y] * x on { x in Z^1 }"), 2)((1,))
    assert spec_q(fn("[Y] * x on { x in Z^1 }"), 2, {"Y": Fraction(5)})((3,)) == 15


def test_brute_sum_examples():
    value, N, tail = brute_sum(fn("L^(-x) on { x in Z^1 : x >= 0 }"), ABS1, 2, Fraction(1, 10 ** 6))
    assert abs(value - 2) <= Fraction(1, 10 ** 6) and 19 <= N <= 22 and tail <= Fraction(1, 10 ** 6)
    value, N, tail = brute_sum(fn("x * L^(-2*x) on { x in Z^1 : x >= 0 }"), ABS1, 2, EPS)
    assert abs(value - Fraction(4, 9)) <= tail <= EPS
    assert brute_sum(fn("L^(x+1) - L*L^x on { x in Z^1 : x >= 0 }"), ABS1, 2, EPS) == (0, 0, 0)


def test_brute_sum_refuses_divergent_input():
    with pytest.raises(NotIntegrableError):
        brute_sum(fn("1 on { x in Z^1 : x >= 0 }"), ABS1, 2, EPS)


def test_tail_bound_is_an_upper_bound():
    t = Fraction(1, 2)
    for a in range(5):
        for N in (5, 10, 30):
            bound = series_tail_bound(a, t, N)
            if bound is None:
                continue
            chunk = sum(Fraction(n) ** a * t ** n for n in range(N, N + 400))
            assert chunk <= bound


def test_crosscheck_examples():
    f = fn("L^(-x-y) on { (x, y) in Z^2 : x >= 0 and y >= 0 }")
    (rep,) = crosscheck(f, Projection(2, (0,)), [2], EPS, base_point=(0,))
    assert rep.symbolic_value == 2 and rep.passed and abs(rep.partial_sum - 2) <= rep.tail_bound
    reps = crosscheck(fn("x^2 * L^(-x) on { x in Z^1 : x >= 0 }"), ABS1, [2], EPS)
    assert reps[0].symbolic_value == 6 and reps[0].passed


def test_crosscheck_q_one_is_an_error_entry():
    reps = crosscheck(fn("L^(-x) on { x in Z^1 : x >= 0 }"), ABS1, [2, 1, 3], EPS)
    assert [r.verdict for r in reps] == ["pass", "error", "pass"]
    assert "q > 1" in reps[1].note


def test_crosscheck_not_integrable_reports_error():
    (rep,) = crosscheck(fn("1 on { x in Z^1 : x >= 0 }"), ABS1, [2], EPS)
    assert rep.verdict == "error" and "NotIntegrableError" in rep.note


def test_report_has_seven_fields():
    fields = [f for f in SpecReport.__dataclass_fields__ if f != "note"]
    assert fields == ["function_id", "q", "symbolic_value", "partial_sum", "truncation_n", "tail_bound", "verdict"]


def test_worker_env(monkeypatch):
    monkeypatch.setenv("MOTIVIC_VG_WORKERS", "3")
    assert worker_count() == 3
    f = fn("x * L^(-x) on { x in Z^1 : x >= 0 }")
    threaded = crosscheck(f, ABS1, list(QS), EPS)
    monkeypatch.setenv("MOTIVIC_VG_WORKERS", "bogus")
    assert worker_count() == 1
    assert crosscheck(f, ABS1, list(QS), EPS) == threaded


# corpora ---------------------------------------------------------------------------------


@pytest.mark.parametrize("f", fubini_corpus(8, seed=61))
def test_crosscheck_absolute_corpus(f):
    for rep in crosscheck(f, ABS2, list(QS), EPS):
        assert rep.passed, rep


@pytest.mark.parametrize("f", [g for g in fiber_corpus(16, seed=71)
                               if is_integrable_fiberwise(g, Projection(2, (0,))).integrable][:8])
def test_crosscheck_relative_corpus(f):
    for z in (0, 4, 10):
        for rep in crosscheck(f, Projection(2, (0,)), list(QS), EPS, base_point=(z,)):
            assert rep.passed, rep


DIVERGENT = [
    "x^2 on { x in Z^1 : x >= 0 }",
    "L^x on { x in Z^1 : x >= 0 }",
    "(x^3 + 1) * L^(-x) * ind(x < 0) + x^2 on { x in Z^1 }",
    "L^(x - y) on { (x, y) in Z^2 : x >= 0 and 0 <= y <= 3 }",
]


@pytest.mark.parametrize("text", DIVERGENT)
def test_divergent_partial_sums_blow_up(text):
    f = fn(text)
    proj = Projection(f.dim, tuple(range(f.dim)))
    assert not is_integrable_fiberwise(f, proj).integrable
    w = divergence_witness(f, proj, 2)
    assert w is not None and w[4] != 0
    assert abs(partial_sum(f, proj, 2, 200)) > 10 ** 6


@given(hs.integers(0, 10 ** 9), hs.sampled_from(QS))
def test_spec_q_is_homomorphism(seed, q):
    rng = random.Random(seed)
    f = random_confun(rng, 2, nterms=(1, 3))
    h = ConFun.make(f.ambient, random_confun(rng, 2, nterms=(1, 3)).terms)
    sf, sh, sprod, ssum = spec_q(f, q), spec_q(h, q), spec_q(f * h, q), spec_q(f + h, q)
    for x in range(-3, 4):
        for y in range(-3, 4):
            p = (x, y)
            if f.ambient.contains(p):
                assert sprod(p) == sf(p) * sh(p)
                assert ssum(p) == sf(p) + sh(p)


@given(hs.integers(0, 10 ** 9))
def test_integrable_implies_certified_convergence(seed):
    rng = random.Random(seed)
    f = random_confun(rng, 1, nterms=(1, 3), max_degree=3, lexp_range=(-2, 1))
    if is_integrable_fiberwise(f, ABS1).integrable:
        (rep,) = crosscheck(f, ABS1, [2], Fraction(1, 10 ** 6))
        assert rep.passed, rep
    else:
        # a violating coefficient such as L - 2 may vanish at one q, never at all three
        assert any(divergence_witness(f, ABS1, q) is not None for q in QS)
