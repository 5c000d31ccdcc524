import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as hs

from motivic_vg.corpus import random_set
from motivic_vg.errors import CapabilityError, ValidationError
from motivic_vg.presburger import PresSet
from motivic_vg.rectilinear import RectPiece, base_points, preimage_points, rectilinearize, validate_pieces

from conftest import box, st


def brute_images(pieces, xmax):
    """theta over every base point and x in [0, xmax]^r, counted with multiplicity."""
    hits = Counter()
    for p in pieces:
        for w in p.points:
            for x in itertools.product(range(xmax + 1), repeat=p.r):
                hits[p.theta(x, w)] += 1
    return hits


def check_partition(X, pieces, radius, xmax):
    hits = brute_images(pieces, xmax)
    for pt in box(X.dim, radius):
        assert hits.get(pt, 0) == (1 if X.contains(pt) else 0), pt
    assert all(X.contains(pt) for pt in hits)


def test_triangle_cone_single_piece():
    X = st("{ (x, y) in Z^2 : 0 <= x <= y }")
    (piece,) = rectilinearize(X)
    assert piece.r == 2 and piece.M == ((1, 0), (1, 1)) and piece.points == ((0, 0),)
    assert piece.theta((2, 3), (0, 0)) == (2, 5)
    hits = brute_images([piece], 12)
    for pt in itertools.product(range(13), repeat=2):
        assert hits[pt] == (1 if pt[0] <= pt[1] else 0)


def test_integers_split_by_sign():
    pieces = rectilinearize(st("{ x in Z^1 : true }"))
    assert len(pieces) == 2 and all(p.r == 1 for p in pieces)
    maps = sorted((p.M[0][0], p.points[0][0]) for p in pieces)
    assert maps == [(-1, -1), (1, 0)]


def test_odd_naturals_one_piece():
    (piece,) = rectilinearize(st("{ x in Z^1 : x >= 0 and x = 1 mod 2 }"))
    assert piece.r == 1 and piece.M == ((2,),) and piece.points == ((1,),)
    imgs = {piece.theta((a,), (1,)) for a in range(13)}
    assert imgs == {(x,) for x in range(26) if x % 2 == 1}


def test_finite_set_has_only_points():
    (piece,) = rectilinearize(st("{ (x, y) in Z^2 : 0 <= x <= 2 and 0 <= y <= 1 }"))
    assert piece.r == 0 and len(piece.points) == 6


def test_empty_set_has_no_pieces():
    assert rectilinearize(st("{ x in Z^1 : x >= 1 and x <= 0 }")) == []


def test_parameters_keep_base_symbolic():
    X = st("{ (x, z) in Z^2 : 0 <= x <= z }")
    pieces = rectilinearize(X, nparams=1)
    assert all(p.points is None for p in pieces)
    validate_pieces(X, pieces, 12)


def test_capability_caps():
    with pytest.raises(CapabilityError):
        rectilinearize(PresSet.universe(4))
    with pytest.raises(CapabilityError):
        rectilinearize(PresSet.universe(4), nparams=3)


def test_validate_pieces_detects_overlap():
    X = st("{ x in Z^1 : x >= 0 }")
    pieces = rectilinearize(X)
    with pytest.raises(ValidationError) as err:
        validate_pieces(X, pieces + pieces, 5)
    assert err.value.point is not None


@pytest.mark.parametrize("text", [
    "{ (x, y) in Z^2 : x >= 0 and y >= 0 and 2*y <= 3*x }",
    "{ (x, y) in Z^2 : x + y = 1 mod 3 or x - y >= 4 }",
    "{ (x, y) in Z^2 : 2*x - 3*y = 1 and x >= 0 }",
    "{ x in Z^1 : not (x >= -1 and x <= 3) }",
])
def test_partition_by_brute_force(text):
    X = st(text)
    check_partition(X, rectilinearize(X), 8, 40)


@given(hs.integers(0, 10 ** 9), hs.integers(1, 3))
def test_random_sets_partition_box(seed, dim):
    X = random_set(random.Random(seed), dim, nineq=(0, 3), cong_prob=0.4)
    pieces = rectilinearize(X)
    radius = 6 if dim == 3 else 10
    validate_pieces(X, pieces, radius)
    for p in pieces:
        imgs = [p.theta(x, w) for w in base_points(p, []) for x in preimage_points(p, w, [(-radius, radius)] * dim)]
        assert len(imgs) == len(set(imgs))


@given(hs.integers(0, 10 ** 9))
def test_random_sets_with_parameter(seed):
    X = random_set(random.Random(seed), 2, nineq=(0, 3), cong_prob=0.4)
    validate_pieces(X, rectilinearize(X, nparams=1), 8)
