"""Presburger-definable subsets of Z^n.

A :class:`PresCell` is a conjunction of affine inequalities ``a.x + c >= 0``
and congruences ``a.x = r (mod m)``; a :class:`PresSet` is a finite union of
cells of one dimension.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import CapabilityError, DimensionError, DomainError

Vec = Tuple[int, ...]
Ineq = Tuple[Vec, int]            # coeffs . x + const >= 0
Cong = Tuple[Vec, int, int]       # coeffs . x = residue (mod modulus)
Point = Tuple[int, ...]


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --- affine forms ------------------------------------------------------------


@dataclass(frozen=True)
class AffineForm:
    """``(coeffs . x + constant) / den`` with ``den >= 1`` and reduced content.

    Forms that appear in constructible functions must be integer-valued on the
    cell they are used on; ``den > 1`` only arises from exact fiber summation
    (e.g. ``(z - 1)/2`` on odd ``z``).
    """

    coeffs: Vec
    constant: int = 0
    den: int = 1

    def __post_init__(self):
        if self.den != 1:
            if self.den <= 0:
                raise ValueError("affine form denominator must be positive")
            g = gcd(_gcd_all(self.coeffs), gcd(self.constant, self.den))
            if g > 1:
                object.__setattr__(self, "coeffs", tuple(c // g for c in self.coeffs))
                object.__setattr__(self, "constant", self.constant // g)
                object.__setattr__(self, "den", self.den // g)

    @classmethod
    def const(cls, dim: int, value) -> "AffineForm":
        value = Fraction(value)
        return cls((0,) * dim, value.numerator, value.denominator)

    @classmethod
    def var(cls, dim: int, index: int) -> "AffineForm":
        return cls(tuple(1 if i == index else 0 for i in range(dim)), 0)

    @classmethod
    def from_rational(cls, coeffs: Sequence, constant=0) -> "AffineForm":
        fr = [Fraction(c) for c in coeffs] + [Fraction(constant)]
        den = 1
        for f in fr:
            den = _lcm(den, f.denominator)
        ints = [int(f * den) for f in fr]
        return cls(tuple(ints[:-1]), ints[-1], den)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def rational_coeffs(self) -> List[Fraction]:
        return [Fraction(c, self.den) for c in self.coeffs]

    def rational_constant(self) -> Fraction:
        return Fraction(self.constant, self.den)

    def value(self, point: Sequence[int]) -> Fraction:
        num = sum(c * x for c, x in zip(self.coeffs, point)) + self.constant
        return Fraction(num, self.den)

    def int_value(self, point: Sequence[int]) -> int:
        num = sum(c * x for c, x in zip(self.coeffs, point)) + self.constant
        q, r = divmod(num, self.den)
        if r:
            raise DomainError(f"form {self} is not integer-valued at {tuple(point)}")
        return q

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm.from_rational(
            [a + b for a, b in zip(self.rational_coeffs(), other.rational_coeffs())],
            self.rational_constant() + other.rational_constant())

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-c for c in self.coeffs), -self.constant, self.den)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def scale(self, k) -> "AffineForm":
        k = Fraction(k)
        return AffineForm.from_rational([c * k for c in self.rational_coeffs()],
                                        self.rational_constant() * k)

    def shift(self, k) -> "AffineForm":
        return AffineForm.from_rational(self.rational_coeffs(), self.rational_constant() + Fraction(k))

    def compose(self, maps: Sequence["AffineForm"], newdim: int) -> "AffineForm":
        """The form ``x -> self(maps(x))`` on Z^newdim."""
        coeffs = [Fraction(0)] * newdim
        const = self.rational_constant()
        for c, m in zip(self.rational_coeffs(), maps):
            if not c:
                continue
            for i, mc in enumerate(m.rational_coeffs()):
                coeffs[i] += c * mc
            const += c * m.rational_constant()
        return AffineForm.from_rational(coeffs, const)

    def key(self):
        return (self.coeffs, self.constant, self.den)

    def __str__(self) -> str:
        return f"AffineForm({self.coeffs}, {self.constant}, /{self.den})"


def affine_map(matrix: Sequence[Sequence[int]], offset: Sequence[int]) -> List[AffineForm]:
    """Coordinate forms of ``x -> matrix.x + offset``."""
    return [AffineForm(tuple(row), int(o)) for row, o in zip(matrix, offset)]


# --- cells -------------------------------------------------------------------


_FALSE_INEQ = None  # sentinel built lazily per dimension


def _norm_ineq(coeffs: Sequence[int], const: int):
    """Return normalized (coeffs, const), True for a tautology, False for a contradiction."""
    g = _gcd_all(coeffs)
    if g == 0:
        return const >= 0
    if g > 1:
        return tuple(c // g for c in coeffs), const // g  # floor: valid over Z
    return tuple(coeffs), const


def _norm_cong(coeffs: Sequence[int], residue: int, modulus: int):
    if modulus < 1:
        raise ValueError("congruence modulus must be positive")
    coeffs = tuple(c % modulus for c in coeffs)
    residue %= modulus
    g = gcd(_gcd_all(coeffs), modulus)
    if g == modulus:  # all coefficients vanish mod m
        return residue == 0
    if residue % g:
        return False
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        residue //= g
        modulus //= g
    if modulus == 1:
        return True
    return coeffs, residue, modulus


@dataclass(frozen=True)
class PresCell:
    """Conjunction of inequalities and congruences on Z^dim (always normalized)."""

    dim: int
    ineqs: Tuple[Ineq, ...] = ()
    congs: Tuple[Cong, ...] = ()
    empty: bool = False

    @classmethod
    def make(cls, dim: int, ineqs: Iterable = (), congs: Iterable = ()) -> "PresCell":
        best: Dict[Vec, int] = {}
        for coeffs, const in ineqs:
            if len(coeffs) != dim:
                raise DimensionError(f"inequality of length {len(coeffs)} in dimension {dim}")
            n = _norm_ineq(coeffs, const)
            if n is True:
                continue
            if n is False:
                return cls.false(dim)
            c, k = n
            if c not in best or k < best[c]:
                best[c] = k
        for c, k in best.items():
            neg = tuple(-v for v in c)
            if neg in best and k + best[neg] < 0:
                return cls.false(dim)
        cset = set()
        for coeffs, residue, modulus in congs:
            if len(coeffs) != dim:
                raise DimensionError(f"congruence of length {len(coeffs)} in dimension {dim}")
            n = _norm_cong(coeffs, residue, modulus)
            if n is True:
                continue
            if n is False:
                return cls.false(dim)
            cset.add(n)
        # same left side with two different residues modulo the same modulus
        seen: Dict[Tuple[Vec, int], int] = {}
        for c, r, m in cset:
            if seen.setdefault((c, m), r) != r:
                return cls.false(dim)
        return cls(dim, tuple(sorted(best.items())), tuple(sorted(cset)))

    @classmethod
    def universe(cls, dim: int) -> "PresCell":
        return cls(dim)

    @classmethod
    def false(cls, dim: int) -> "PresCell":
        return cls(dim, ((tuple([0] * dim), -1),), (), True)

    # semantics -------------------------------------------------------

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self.dim:
            raise DimensionError(f"point of length {len(p)} tested against cell of dim {self.dim}")
        if self.empty:
            return False
        for coeffs, const in self.ineqs:
            if sum(c * x for c, x in zip(coeffs, p)) + const < 0:
                return False
        for coeffs, r, m in self.congs:
            if (sum(c * x for c, x in zip(coeffs, p)) - r) % m:
                return False
        return True

    def __and__(self, other: "PresCell") -> "PresCell":
        if self.dim != other.dim:
            raise DimensionError("cell dimensions differ")
        if self.empty or other.empty:
            return PresCell.false(self.dim)
        return PresCell.make(self.dim, self.ineqs + other.ineqs, self.congs + other.congs)

    def add(self, ineqs: Iterable = (), congs: Iterable = ()) -> "PresCell":
        if self.empty:
            return self
        return PresCell.make(self.dim, self.ineqs + tuple(ineqs), self.congs + tuple(congs))

    def is_universe(self) -> bool:
        return not self.empty and not self.ineqs and not self.congs

    def negations(self) -> List["PresCell"]:
        """Pairwise disjoint cells whose union is the complement of self."""
        if self.empty:
            return [PresCell.universe(self.dim)]
        out: List[PresCell] = []
        prefix_i: List[Ineq] = []
        prefix_c: List[Cong] = []
        for coeffs, const in self.ineqs:
            out.append(PresCell.make(self.dim, prefix_i + [(tuple(-c for c in coeffs), -const - 1)], prefix_c))
            prefix_i.append((coeffs, const))
        for coeffs, r, m in self.congs:
            for r2 in range(m):
                if r2 != r:
                    out.append(PresCell.make(self.dim, prefix_i, prefix_c + [(coeffs, r2, m)]))
            prefix_c.append((coeffs, r, m))
        return [c for c in out if not c.empty]

    def rational_feasible(self) -> bool:
        """False only if the cell certainly has no integer point (tightened real shadow)."""
        if self.empty:
            return False
        return fm_feasible(list(self.ineqs), self.dim)

    def pullback(self, maps: Sequence[AffineForm], newdim: int) -> "PresCell":
        """Preimage of the cell under ``w -> (maps[i](w))_i``.

        Rational maps are allowed; congruences are then only meaningful where
        the maps are integer-valued, which the caller must guarantee.
        """
        if len(maps) != self.dim:
            raise DimensionError("map arity does not match cell dimension")
        if self.empty:
            return PresCell.false(newdim)
        ineqs = []
        for coeffs, const in self.ineqs:
            f = AffineForm(coeffs, const).compose(maps, newdim)
            ineqs.append((f.coeffs, f.constant))
        congs = []
        for coeffs, r, m in self.congs:
            f = AffineForm(coeffs, 0).compose(maps, newdim)
            congs.append((f.coeffs, f.den * r - f.constant, f.den * m))
        return PresCell.make(newdim, ineqs, congs)

    def embed(self, newdim: int, positions: Sequence[int]) -> "PresCell":
        """Same constraints on coordinates ``positions`` of a larger space."""
        def lift(v):
            out = [0] * newdim
            for c, p in zip(v, positions):
                out[p] = c
            return tuple(out)
        if self.empty:
            return PresCell.false(newdim)
        return PresCell.make(newdim, [(lift(c), k) for c, k in self.ineqs],
                             [(lift(c), r, m) for c, r, m in self.congs])

    def period_lcm(self) -> int:
        m = 1
        for _, _, mod in self.congs:
            m = _lcm(m, mod)
        return m


# --- Fourier-Motzkin ------------------------------------------------------


def _fm_step(cons: List[Ineq], var: int):
    """Eliminate ``var``; returns the new list or None on contradiction."""
    pos, neg, rest = [], [], []
    for c, k in cons:
        a = c[var]
        (pos if a > 0 else neg if a < 0 else rest).append((c, k))
    best: Dict[Vec, int] = {}

    def push(c, k):
        n = _norm_ineq(c, k)
        if n is True:
            return True
        if n is False:
            return False
        cc, kk = n
        if cc not in best or kk < best[cc]:
            best[cc] = kk
        return True

    for c, k in rest:
        if not push(c, k):
            return None
    for cp, kp in pos:
        ap = cp[var]
        for cn, kn in neg:
            an = -cn[var]
            c = tuple(an * x + ap * y for x, y in zip(cp, cn))
            if not push(c, an * kp + ap * kn):
                return None
    for c, k in best.items():
        neg_c = tuple(-v for v in c)
        if neg_c in best and k + best[neg_c] < 0:
            return None
    return list(best.items())


def fm_feasible(cons: List[Ineq], dim: int) -> bool:
    for var in range(dim - 1, -1, -1):
        cons = _fm_step(cons, var)
        if cons is None:
            return False
    return True


def _projection_systems(cons: List[Ineq], dim: int) -> Optional[List[List[Ineq]]]:
    """systems[k] constrains only x_0..x_{k-1}; systems[dim] is the input."""
    systems: List[Optional[List[Ineq]]] = [None] * (dim + 1)
    systems[dim] = cons
    cur = cons
    for var in range(dim - 1, -1, -1):
        cur = _fm_step(cur, var)
        if cur is None:
            return None
        systems[var] = cur
    return systems  # type: ignore[return-value]


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def enumerate_cell(cell: PresCell, box: Optional[Sequence[Tuple[int, int]]] = None) -> Iterator[Point]:
    """Integer points of ``cell`` (intersected with ``box``) in lexicographic order."""
    dim = cell.dim
    if cell.empty:
        return
    cons = list(cell.ineqs)
    if box is not None:
        if len(box) != dim:
            raise DimensionError("box dimension mismatch")
        for i, (lo, hi) in enumerate(box):
            e = [0] * dim
            e[i] = 1
            cons.append((tuple(e), -lo))
            e[i] = -1
            cons.append((tuple(e), hi))
    if dim == 0:
        if fm_feasible(cons, 0) and cell.contains(()):
            yield ()
        return
    systems = _projection_systems(cons, dim)
    if systems is None:
        return
    # congruences checkable once their last variable is fixed
    by_last: Dict[int, List[Cong]] = {}
    for c, r, m in cell.congs:
        last = max(i for i, v in enumerate(c) if v)
        by_last.setdefault(last, []).append((c, r, m))

    prefix = [0] * dim

    def bounds(k: int):
        lo, hi = None, None
        for c, const in systems[k + 1]:
            a = c[k]
            if not a:
                continue
            rest = const + sum(c[i] * prefix[i] for i in range(k))
            if a > 0:
                b = _ceil_div(-rest, a)
                lo = b if lo is None or b > lo else lo
            else:
                b = rest // (-a)
                hi = b if hi is None or b < hi else hi
        return lo, hi

    def rec(k: int):
        if k == dim:
            yield tuple(prefix)
            return
        lo, hi = bounds(k)
        if lo is None or hi is None:
            raise CapabilityError("enumeration of an unbounded set needs a box")
        checks = by_last.get(k, ())
        for v in range(lo, hi + 1):
            prefix[k] = v
            if checks and any((sum(c[i] * prefix[i] for i in range(k + 1)) - r) % m for c, r, m in checks):
                continue
            # rational shadow may admit prefixes with no integer completion
            yield from rec(k + 1)

    for p in rec(0):
        if cell.contains(p):
            yield p


# --- sets ----------------------------------------------------------------------


@dataclass(frozen=True)
class PresSet:
    dim: int
    cells: Tuple[PresCell, ...] = ()

    @classmethod
    def of(cls, cells: Iterable[PresCell], dim: Optional[int] = None) -> "PresSet":
        cells = list(cells)
        if dim is None:
            if not cells:
                raise DimensionError("dimension of an empty cell list is unknown")
            dim = cells[0].dim
        kept = []
        seen = set()
        for c in cells:
            if c.dim != dim:
                raise DimensionError("all cells of a set must share the dimension")
            if c.empty or c in seen:
                continue
            seen.add(c)
            kept.append(c)
        return cls(dim, tuple(kept))

    @classmethod
    def universe(cls, dim: int) -> "PresSet":
        return cls(dim, (PresCell.universe(dim),))

    @classmethod
    def empty_set(cls, dim: int) -> "PresSet":
        return cls(dim, ())

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self.dim:
            raise DimensionError(f"point of length {len(p)} tested against set of dim {self.dim}")
        return any(c.contains(p) for c in self.cells)

    __contains__ = contains

    def _check(self, other: "PresSet"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def union(self, other: "PresSet") -> "PresSet":
        self._check(other)
        return PresSet.of(self.cells + other.cells, self.dim)

    def intersect(self, other: "PresSet") -> "PresSet":
        self._check(other)
        return PresSet.of((a & b for a in self.cells for b in other.cells), self.dim).pruned()

    def complement(self) -> "PresSet":
        result = [PresCell.universe(self.dim)]
        for cell in self.cells:
            negs = cell.negations()
            result = [r & n for r in result for n in negs]
            result = [c for c in result if not c.empty and c.rational_feasible()]
        return PresSet.of(result, self.dim)

    def difference(self, other: "PresSet") -> "PresSet":
        return self.intersect(other.complement())

    def disjoint(self) -> "PresSet":
        """Equal set whose cells are pairwise disjoint (earlier cells win)."""
        out: List[PresCell] = []
        for cell in self.cells:
            parts = [cell]
            for prev in self.cells[:self.cells.index(cell)]:
                negs = prev.negations()
                parts = [p & n for p in parts for n in negs]
                parts = [p for p in parts if not p.empty and p.rational_feasible()]
            out.extend(parts)
        return PresSet.of(out, self.dim)

    def pruned(self) -> "PresSet":
        return PresSet.of([c for c in self.cells if c.rational_feasible()], self.dim)

    def pullback(self, maps: Sequence[AffineForm], newdim: int) -> "PresSet":
        return PresSet.of((c.pullback(maps, newdim) for c in self.cells), newdim).pruned()

    def enumerate(self, box: Sequence[Tuple[int, int]]) -> List[Point]:
        return ps_enumerate(self, box)

    def is_universe_syntactically(self) -> bool:
        return any(c.is_universe() for c in self.cells)


# --- operation-level API -------------------------------------------------------


def ps_contains(S: PresSet, p: Sequence[int]) -> bool:
    return S.contains(tuple(p))


def ps_bool(op: str, S: PresSet, T: Optional[PresSet] = None) -> PresSet:
    if op == "complement":
        return S.complement()
    if T is None:
        raise ValueError(f"{op} needs two operands")
    if op == "union":
        return S.union(T)
    if op == "intersect":
        return S.intersect(T)
    raise ValueError(f"unknown set operation {op!r}")


def ps_enumerate(S: PresSet, box: Sequence[Tuple[int, int]]) -> List[Point]:
    if len(box) != S.dim:
        raise DimensionError("box dimension mismatch")
    pts = set()
    for cell in S.cells:
        pts.update(enumerate_cell(cell, box))
    return sorted(pts)


def box_of_radius(dim: int, radius: int) -> List[Tuple[int, int]]:
    return [(-radius, radius)] * dim


# --- quantifier elimination ----------------------------------------------------


def _drop(v: Sequence[int], axis: int) -> Vec:
    return tuple(v[:axis]) + tuple(v[axis + 1:])


def _eliminate_cell(cell: PresCell, axis: int) -> List[PresCell]:
    dim = cell.dim
    nd = dim - 1
    if cell.empty:
        return []
    ineqs = list(cell.ineqs)
    congs = list(cell.congs)
    if all(c[axis] == 0 for c, _ in ineqs) and all(c[axis] == 0 for c, _, _ in congs):
        return [PresCell.make(nd, [(_drop(c, axis), k) for c, k in ineqs],
                              [(_drop(c, axis), r, m) for c, r, m in congs])]

    # exact substitution through an equality a.x + c = 0 with a[axis] != 0
    lookup = {c: k for c, k in ineqs}
    eqs = [(c, k) for c, k in ineqs
           if c[axis] != 0 and lookup.get(tuple(-v for v in c)) == -k]
    if eqs:
        c0, k0 = min(eqs, key=lambda e: (abs(e[0][axis]), e))
        a = c0[axis]
        s, ka = (1 if a > 0 else -1), abs(a)
        e_rest = _drop(c0, axis)
        # a*y = -(e_rest.x + k0)  =>  ka*y = -s*(e_rest.x + k0)
        out_i, out_c = [], []
        if ka > 1:
            out_c.append((e_rest, (-k0) % ka, ka))
        for c, k in ineqs:
            b = c[axis]
            rest = _drop(c, axis)
            if b == 0:
                out_i.append((rest, k))
                continue
            coeffs = tuple(ka * r - s * b * e for r, e in zip(rest, e_rest))
            out_i.append((coeffs, ka * k - s * b * k0))
        for c, r, m in congs:
            b = c[axis]
            rest = _drop(c, axis)
            if b == 0:
                out_c.append((rest, r, m))
                continue
            coeffs = tuple(ka * x - s * b * e for x, e in zip(rest, e_rest))
            out_c.append((coeffs, ka * r + s * b * k0, ka * m))
        cell2 = PresCell.make(nd, out_i, out_c)
        return [] if cell2.empty else [cell2]

    # Cooper: scale so the coefficient of y is +-delta, then y' = delta*y
    delta = 1
    for c, _ in ineqs:
        if c[axis]:
            delta = _lcm(delta, abs(c[axis]))
    for c, _, _ in congs:
        if c[axis]:
            delta = _lcm(delta, abs(c[axis]))
    lower, upper, other_i = [], [], []
    ycongs: List[Tuple[Vec, int, int]] = []  # y' + rest.x = r (mod m)
    other_c = []
    for c, k in ineqs:
        a = c[axis]
        rest = _drop(c, axis)
        if a == 0:
            other_i.append((rest, k))
            continue
        f = delta // abs(a)
        rest = tuple(f * v for v in rest)
        (lower if a > 0 else upper).append((rest, f * k))
    for c, r, m in congs:
        a = c[axis]
        rest = _drop(c, axis)
        if a == 0:
            other_c.append((rest, r, m))
            continue
        f = delta // abs(a)
        sgn = 1 if a > 0 else -1
        ycongs.append((tuple(sgn * f * v for v in rest), sgn * f * r, f * m))
    if delta > 1:
        ycongs.append((tuple([0] * nd), 0, delta))
    D = 1
    for _, _, m in ycongs:
        D = _lcm(D, m)

    def substitute(ycoef_rest: Vec, ycoef_const: int, sign: int):
        """Constraints after y' := sign*(ycoef_rest.x + ycoef_const)."""
        ii = list(other_i)
        for rest, k in lower:   # y' + rest.x + k >= 0
            ii.append((tuple(r + sign * e for r, e in zip(rest, ycoef_rest)), k + sign * ycoef_const))
        for rest, k in upper:   # -y' + rest.x + k >= 0
            ii.append((tuple(r - sign * e for r, e in zip(rest, ycoef_rest)), k - sign * ycoef_const))
        cc = list(other_c)
        for rest, r, m in ycongs:
            cc.append((tuple(x + sign * e for x, e in zip(rest, ycoef_rest)), r - sign * ycoef_const, m))
        return PresCell.make(nd, ii, cc)

    out = []
    if not lower or not upper:
        # y' unbounded on one side: only the congruences on y' matter
        for j in range(D):
            cell2 = PresCell.make(nd, other_i, other_c + [
                (rest, r - j, m) for rest, r, m in ycongs])
            out.append(cell2)
    elif len(lower) <= len(upper):
        # least solution is (-rest.x - k) + j for some lower bound and j < D
        for rest, k in lower:
            for j in range(D):
                out.append(substitute(tuple(-v for v in rest), -k + j, 1))
    else:
        # greatest solution is (rest.x + k) - j for some upper bound
        for rest, k in upper:
            for j in range(D):
                out.append(substitute(rest, k - j, 1))
    return [c for c in out if not c.empty and c.rational_feasible()]


def ps_eliminate(S: PresSet, axis: int) -> PresSet:
    """The projection ``{x : exists y, x with y inserted at axis in S}``."""
    if not 0 <= axis < S.dim:
        raise DimensionError(f"axis {axis} out of range for dimension {S.dim}")
    cells = []
    for cell in S.cells:
        cells.extend(_eliminate_cell(cell, axis))
    return PresSet.of(cells, S.dim - 1)


@dataclass(frozen=True)
class Decision:
    kind: str                 # "empty" | "finite" | "infinite"
    count: Optional[int] = None

    def __str__(self):
        return f"finite({self.count})" if self.kind == "finite" else self.kind


def ps_decide(S: PresSet) -> Decision:
    """Exact emptiness / finiteness / cardinality via rectilinearization."""
    from .rectilinear import rectilinearize_cells

    total = 0
    for piece in rectilinearize_cells(S.disjoint(), 0):
        if not piece.points:
            continue
        if piece.r > 0:
            return Decision("infinite")
        total += len(piece.points)
    return Decision("empty") if total == 0 else Decision("finite", total)


def is_empty(S: PresSet) -> bool:
    return ps_decide(S).kind == "empty"


def residues(modulus: int, dim: int) -> Iterator[Vec]:
    return product(range(modulus), repeat=dim)
