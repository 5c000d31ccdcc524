"""Parametric rectilinearization of Presburger sets.

Each piece is a bijection ``theta(x, (y, z)) = (M x + y, z)`` from
``N^r x A`` onto part of the input, where ``A`` is a cell whose fibers over
the parameters ``z`` are finite.

Construction: while the fiber recession cone has a line, split on the sign
of a coordinate along it.  Once it is pointed, pick an extreme ray ``v``,
stretch it to the period ``v'`` of the congruences, and write every point
uniquely as ``b + k v'`` where ``b - v'`` leaves the set.  The set of such
``b`` is a union of slabs whose recession cone is a proper face, so the
recursion ends in cells with finite fibers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CapabilityError, DimensionError, ValidationError
from .linalg import dot, nullspace, rank
from .presburger import PresCell, PresSet, Point, enumerate_cell, ps_enumerate

MAX_FIBER_DIM = 3
MAX_PARAM_DIM = 2


@dataclass(frozen=True)
class RectPiece:
    """``theta(x, w) = (M x + y, z)`` for ``x`` in ``N^r`` and ``w = (y, z)`` in ``base``.

    ``M`` has one row per fiber coordinate and ``r`` columns.  ``points`` is
    the enumerated base when there are no parameters.
    """

    M: Tuple[Tuple[int, ...], ...]
    base: PresCell
    nparams: int
    points: Optional[Tuple[Point, ...]] = None

    @property
    def nfib(self) -> int:
        return self.base.dim - self.nparams

    @property
    def r(self) -> int:
        return len(self.M[0]) if self.M and self.M[0] else 0

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(row[k] for row in self.M) for k in range(self.r)]

    def theta(self, x: Sequence[int], w: Sequence[int]) -> Point:
        nf = self.nfib
        img = [w[i] + sum(self.M[i][k] * x[k] for k in range(self.r)) for i in range(nf)]
        return tuple(img) + tuple(w[nf:])


def _with_column(M, v, nfib):
    if not M or not M[0]:
        return tuple((v[i],) for i in range(nfib))
    return tuple(tuple(M[i]) + (v[i],) for i in range(nfib))


def _fiber_rows(cell: PresCell, nfib: int) -> List[Tuple[int, ...]]:
    rows = set()
    for c, _ in cell.ineqs:
        f = c[:nfib]
        if any(f):
            g = 0
            for v in f:
                g = gcd(g, v)
            rows.add(tuple(v // g for v in f))
    return sorted(rows)


def _normal_line(combo: Sequence[Tuple[int, ...]], n: int) -> Optional[Tuple[int, ...]]:
    """Primitive generator of the common kernel of n-1 rows, or None if it is not a line."""
    if n == 2:
        (a, b), = combo
        u = (-b, a)
    elif n == 3:
        (a1, a2, a3), (b1, b2, b3) = combo
        u = (a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    else:
        if rank(combo) != n - 1:
            return None
        (u,) = nullspace(combo, n)
        return u
    g = 0
    for x in u:
        g = gcd(g, x)
    return tuple(x // g for x in u) if g else None


@lru_cache(maxsize=4096)
def _extreme_ray(rows: Tuple[Tuple[int, ...], ...], n: int) -> Optional[Tuple[int, ...]]:
    """A primitive extreme ray of the pointed cone {d : rows.d >= 0}, or None if it is {0}."""
    if n == 1:
        for s in ((1,), (-1,)):
            if all(dot(r, s) >= 0 for r in rows):
                return s
        return None
    found = set()
    for combo in combinations(rows, n - 1):
        u = _normal_line(combo, n)
        if u is None:
            continue
        for s in (u, tuple(-x for x in u)):
            if all(dot(r, s) >= 0 for r in rows):
                found.add(s)
    return min(found) if found else None


def _period(cell: PresCell, v: Sequence[int]) -> int:
    k = 1
    for c, _, m in cell.congs:
        t = dot(c, v) % m
        need = m // gcd(m, t)
        k = k * need // gcd(k, need)
    return k


def _peel(cell: PresCell, nfib: int, nparams: int) -> List[RectPiece]:
    if cell.empty or not cell.rational_feasible():
        return []
    dim = cell.dim
    if nfib == 0:
        return [_leaf(cell, nparams)]
    rows = _fiber_rows(cell, nfib)
    lineality = nullspace(rows, nfib) if rows else nullspace([], nfib)
    if lineality:
        w = lineality[0]
        i = next(j for j, x in enumerate(w) if x)
        e = [0] * dim
        e[i] = 1
        pos = cell.add([(tuple(e), 0)])
        e[i] = -1
        neg = cell.add([(tuple(e), -1)])
        return _peel(pos, nfib, nparams) + _peel(neg, nfib, nparams)
    ray = _extreme_ray(tuple(rows), nfib)
    if ray is None:
        leaf = _leaf(cell, nparams)
        return [leaf] if leaf.points is None or leaf.points else []
    k = _period(cell, tuple(ray) + (0,) * nparams)
    v = tuple(k * x for x in ray) + (0,) * nparams
    pieces: List[RectPiece] = []
    prior = []
    for c, const in cell.ineqs:
        step = dot(c, v)
        if step <= 0:
            continue
        # b - v' violates this constraint, earlier ones hold at b - v'
        part = cell.add([(tuple(-x for x in c), -const + step - 1)] + prior)
        prior.append((c, const - step))
        for sub in _peel(part, nfib, nparams):
            pieces.append(RectPiece(_with_column(sub.M, v, nfib), sub.base, nparams, sub.points))
    return pieces


def _leaf(cell: PresCell, nparams: int) -> RectPiece:
    if nparams:
        return RectPiece((), cell, nparams, None)
    return RectPiece((), cell, 0, tuple(enumerate_cell(cell)))


def rectilinearize_cells(X: PresSet, nparams: int) -> List[RectPiece]:
    """Peel every cell of an already-disjoint set; no dimension caps."""
    nfib = X.dim - nparams
    if nfib < 0:
        raise DimensionError("more parameters than coordinates")
    pieces: List[RectPiece] = []
    for cell in X.cells:
        pieces.extend(_peel(cell, nfib, nparams))
    return [p for p in pieces if p.points is None or p.points]


def rectilinearize(X: PresSet, nparams: int = 0, validate_radius: Optional[int] = None) -> List[RectPiece]:
    """Partition ``X`` (last ``nparams`` coordinates are parameters) into rectilinear pieces."""
    nfib = X.dim - nparams
    if nfib > MAX_FIBER_DIM or nparams > MAX_PARAM_DIM:
        raise CapabilityError(
            f"rectilinearization supports at most {MAX_FIBER_DIM} fiber and "
            f"{MAX_PARAM_DIM} parameter coordinates (got {nfib} and {nparams})")
    pieces = rectilinearize_cells(X.disjoint(), nparams)
    if validate_radius is not None:
        validate_pieces(X, pieces, validate_radius)
    return pieces


def base_points(piece: RectPiece, zbox: Sequence[Tuple[int, int]]) -> List[Point]:
    """Points of the piece's base whose parameter part lies in ``zbox``."""
    if piece.points is not None:
        return list(piece.points)
    nf = piece.nfib
    cons = []
    for i, (lo, hi) in enumerate(zbox):
        e = [0] * piece.base.dim
        e[nf + i] = 1
        cons.append((tuple(e), -lo))
        e[nf + i] = -1
        cons.append((tuple(e), hi))
    return list(enumerate_cell(piece.base.add(cons)))


def preimage_points(piece: RectPiece, w: Point, box: Sequence[Tuple[int, int]]):
    """All ``x`` in N^r with the fiber part of theta(x, w) inside ``box``."""
    r = piece.r
    if r == 0:
        yield ()
        return
    cons = []
    for k in range(r):
        e = [0] * r
        e[k] = 1
        cons.append((tuple(e), 0))
    for i in range(piece.nfib):
        row = piece.M[i]
        lo, hi = box[i]
        cons.append((tuple(row), w[i] - lo))
        cons.append((tuple(-x for x in row), hi - w[i]))
    yield from enumerate_cell(PresCell.make(r, cons))


def validate_pieces(X: PresSet, pieces: Sequence[RectPiece], radius: int) -> None:
    """Exhaustive check on [-radius, radius]^dim; raises ValidationError with a point."""
    dim = X.dim
    box = [(-radius, radius)] * dim
    hits: Dict[Point, int] = {}
    for piece in pieces:
        nf = piece.nfib
        seen = set()
        for w in base_points(piece, box[nf:]):
            for x in preimage_points(piece, w, box):
                img = piece.theta(x, w)
                if img in seen:
                    raise ValidationError("piece map is not injective", img)
                seen.add(img)
                if not X.contains(img):
                    raise ValidationError("piece image leaves the set", img)
                hits[img] = hits.get(img, 0) + 1
    for img, n in hits.items():
        if n > 1:
            raise ValidationError("pieces overlap", img)
    for p in ps_enumerate(X, box):
        if p not in hits:
            raise ValidationError("point of the set not covered", p)
