import random

import pytest
from hypothesis import given, strategies as hs

from motivic_vg.coeffring import LL, ONE, MotConst, from_text
from motivic_vg.confun import (ConFun, Term, cf_arith, cf_canonicalize, cf_diff1, cf_eq, cf_eval, cf_is_null,
                               cf_transport, cf_witness_nonnull, default_witness_bound)
from motivic_vg.corpus import null_corpus, random_confun, scramble
from motivic_vg.errors import DimensionError, DomainError
from motivic_vg.presburger import AffineForm, PresSet

from conftest import box, fn, st

seeds = hs.integers(0, 10 ** 9)
small_dims = hs.integers(1, 2)


def rfun(seed, dim, **kw):
    return random_confun(random.Random(seed), dim, **kw)


def L(k):
    return MotConst.lefschetz(k)


# construction and evaluation ---------------------------------------------------------


def test_product_is_single_term(N1):
    n = ConFun.variable(N1, 0)
    f = cf_arith("mul", n, ConFun.lefschetz_power(N1, AffineForm((-1,), 0)))
    (t,) = f.terms
    assert t.coeff == ONE and t.monomial == ((AffineForm((1,), 0), 1),) and t.lexp == AffineForm((-1,), 0)


def test_binomial_square(N1):
    g = ConFun.constant(N1, 1) + ConFun.lefschetz_power(N1, AffineForm((1,), 0))
    want = fn("1 + 2*L^x + L^(2*x) on { x in Z^1 : x >= 0 }")
    assert cf_arith("mul", g, g) == want


def test_add_negation_is_null():
    f = fn("x^2 * L^(-x) + 3 on { x in Z^1 : x >= 0 }")
    assert cf_is_null(cf_arith("add", f, -f))


def test_eval_examples():
    assert cf_eval(fn("x * L^(2*x) on { x in Z^1 : x >= 0 }"), (3,)) == 3 * L(6)
    f = fn("L^(-x) / (1 - L^-1) on { x in Z^1 : x >= 0 }")
    assert cf_eval(f, (0,)) == LL / (LL - 1)
    assert cf_eval(fn("ind(x = 0 mod 2) on { x in Z^1 }"), (5,)).is_zero()


def test_eval_outside_ambient_is_domain_error():
    with pytest.raises(DomainError):
        cf_eval(fn("x on { x in Z^1 : x >= 0 }"), (-1,))
    with pytest.raises(DimensionError):
        cf_eval(fn("x on { x in Z^1 : x >= 0 }"), (1, 2))


def test_transport_examples():
    f = fn("L^x on { x in Z^1 }")
    g = cf_transport(f, "pullback", ([[2]], [1]))
    assert g == fn("L^(2*x + 1) on { x in Z^1 }")
    h = cf_transport(f, "restrict", PresSet.empty_set(1))
    assert cf_is_null(h)


# canonical form -------------------------------------------------------------------------


def test_canonical_doubling():
    cf = cf_canonicalize(fn("L^x + L^x on { x in Z^1 : x >= 0 }"))
    (cp,) = cf.pieces
    assert [(a, b) for a, b, _ in cp.table] == [((0,), (1,))]
    assert cp.table[0][2] == (((0,), MotConst.from_int(2)),)


def test_canonical_cancellation_is_empty():
    assert cf_canonicalize(fn("L^(x+1) - L*L^x on { x in Z^1 : x >= 0 }")).is_empty()


def test_canonical_identity_on_integers():
    cf = cf_canonicalize(fn("x on { x in Z^1 }"))
    tables = sorted(tuple((a, b, tuple(v for _, v in c)) for a, b, c in cp.table) for cp in cf.pieces)
    one, mone = MotConst.from_int(1), MotConst.from_int(-1)
    assert tables == sorted([(((1,), (0,), (one,)),), (((0,), (0,), (mone,)), ((1,), (0,), (mone,)))])
    f = fn("x on { x in Z^1 }")
    assert dict(cf.values_in_box(10)) == {p: cf_eval(f, p) for p in box(1, 10)}


def test_nullity_examples():
    assert cf_is_null(fn("L^(x+1) - L*L^x on { x in Z^1 : x >= 0 }"))
    assert not cf_is_null(fn("(L - 1) * 1 on { x in Z^1 : x >= 0 }"))


def test_diff_examples():
    Z = "on { x in Z^1 }"
    assert cf_eq(cf_diff1(fn("x^2 " + Z), 0), fn("2*x + 1 " + Z))
    assert cf_eq(cf_diff1(fn("L^x " + Z), 0), fn("(L - 1) * L^x " + Z))
    assert cf_eq(cf_diff1(fn("x * L^x " + Z), 0), fn("((L - 1) * x + L) * L^x " + Z))


def test_witness_examples():
    N = "on { x in Z^1 : x >= 0 }"
    assert cf_witness_nonnull(fn("x " + N)) == (1,)
    assert cf_witness_nonnull(fn("x * (x - 1) * (x - 2) " + N)) == (3,)
    f = fn("(L - 2) * 1 " + N)
    p = cf_witness_nonnull(f)
    assert p == (0,) and cf_eval(f, p) == LL - 2
    assert cf_witness_nonnull(fn("L^(x+1) - L*L^x " + N)) is None


def test_witness_bound_rule():
    f = fn("x^2 * L^(-x) on { x in Z^1 : x >= 0 }")
    T, A, B = cf_canonicalize(f).stats()
    assert default_witness_bound(f) == T * (A + B + 2)


def test_rational_form_needs_integer_values():
    ok = fn("(x - 1)/2 on { x in Z^1 : x = 1 mod 2 }")
    assert cf_eval(ok, (5,)) == MotConst.from_int(2)
    with pytest.raises(DomainError):
        cf_canonicalize(fn("(x - 1)/2 on { x in Z^1 : x >= 0 }"))


# properties -----------------------------------------------------------------------------


@given(seeds, small_dims)
def test_null_implies_zero_everywhere(seed, dim):
    f = rfun(seed, dim, nterms=(1, 3))
    g = f - scramble(f, seed)
    assert cf_is_null(g)
    for p in box(dim, 6):
        if g.ambient.contains(p):
            assert cf_eval(g, p).is_zero()


@given(seeds, small_dims)
def test_not_null_implies_witness(seed, dim):
    f = rfun(seed, dim)
    if not cf_is_null(f):
        p = cf_witness_nonnull(f)
        assert p is not None and not cf_eval(f, p).is_zero()
    else:
        for p in box(dim, 6):
            if f.ambient.contains(p):
                assert cf_eval(f, p).is_zero()


@given(seeds, small_dims)
def test_canonicalize_preserves_values(seed, dim):
    f = rfun(seed, dim)
    radius = 6
    got = dict(cf_canonicalize(f).values_in_box(radius))
    for p in box(dim, radius):
        if f.ambient.contains(p):
            v = cf_eval(f, p)
            assert got.get(p, MotConst()) == v
        else:
            assert p not in got


@given(seeds, small_dims)
def test_eval_is_ring_homomorphism(seed, dim):
    rng = random.Random(seed)
    f = random_confun(rng, dim, nterms=(1, 3))
    h = ConFun.make(f.ambient, random_confun(rng, dim, nterms=(1, 3)).terms)
    for p in box(dim, 3):
        if f.ambient.contains(p):
            assert cf_eval(f * h, p) == cf_eval(f, p) * cf_eval(h, p)
            assert cf_eval(f + h, p) == cf_eval(f, p) + cf_eval(h, p)


@given(seeds, hs.integers(1, 10))
def test_difference_telescopes(seed, N):
    rng = random.Random(seed)
    g = random_confun(rng, 2, nterms=(1, 3), ambient=PresSet.universe(2))
    d = cf_diff1(g, 0)
    for y in range(-2, 3):
        total = sum((cf_eval(d, (k, y)) for k in range(N)), MotConst())
        assert total == cf_eval(g, (N, y)) - cf_eval(g, (0, y))


@given(seeds)
def test_pullback_contract(seed):
    rng = random.Random(seed)
    f = random_confun(rng, 2, nterms=(1, 3))
    maps = [AffineForm((rng.randint(-2, 2), rng.randint(-2, 2)), rng.randint(-2, 2)) for _ in range(2)]
    g = f.pullback(maps, 2)
    for x in box(2, 4):
        gx = tuple(m.int_value(x) for m in maps)
        assert g.ambient.contains(x) == f.ambient.contains(gx)
        if g.ambient.contains(x):
            assert cf_eval(g, x) == cf_eval(f, gx)


def test_null_corpus_three_dimensional():
    for f in null_corpus(6, seed=11, dims=(3,)):
        assert cf_is_null(f)


def test_symbol_coefficients_cancel():
    f = fn("[Y] * x - x * [Y] on { x in Z^1 }")
    assert cf_is_null(f)
    g = fn("[Y] * x on { x in Z^1 }")
    assert not cf_is_null(g)
    assert cf_eval(g, (2,)) == 2 * from_text("[Y]")
