"""Constructible Presburger functions and their canonical forms.

A :class:`ConFun` on ``X`` (a Presburger subset of Z^n) is a finite sum of
terms ``c * prod alpha_j(x)^p_j * L^beta(x) * 1_cell(x)`` with ``c`` in A and
``alpha_j``, ``beta`` affine.  Pulling back along the pieces of a
rectilinearization turns each restriction into ``sum c_ab g^a L^(b.g)``; by
linear independence of the monomials ``g^a L^(b.g)`` the function is zero
exactly when every such table is empty.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .coeffring import LL, ONE, ZERO, LinearCombiner, MotConst
from .errors import DimensionError, DomainError
from .presburger import AffineForm, PresCell, PresSet, Point, enumerate_cell
from .rectilinear import (RectPiece, base_points, preimage_points, rectilinearize,
                          rectilinearize_cells)

Monomial = Tuple[Tuple[AffineForm, int], ...]


def _form_sort_key(f: AffineForm):
    return f.key()


def _term_order(t: "Term"):
    # canonical term order: higher degree first, then monomial, exponent and cell
    cell = () if t.cell is None else (t.cell.ineqs, t.cell.congs)
    return (-t.degree(), tuple((f.key(), p) for f, p in t.monomial), t.lexp.key(), cell)


def _lpow(k) -> MotConst:
    return MotConst.lefschetz(int(k))


@dataclass(frozen=True)
class Term:
    """``coeff * prod form^power * L^lexp`` on ``cell`` (None = the whole ambient)."""

    coeff: MotConst
    monomial: Monomial
    lexp: AffineForm
    cell: Optional[PresCell] = None

    @classmethod
    def make(cls, coeff: MotConst, monomial, lexp: AffineForm, cell: Optional[PresCell] = None) -> "Term":
        coeff = MotConst.coerce(coeff)
        powers: Dict[AffineForm, int] = {}
        for form, p in monomial:
            if p < 0:
                raise ValueError("monomial powers must be non-negative")
            if p == 0:
                continue
            if form.is_constant():
                v = form.rational_constant()
                if v.denominator != 1:
                    raise DomainError(f"constant factor {v} is not an integer")
                coeff = coeff * (int(v) ** p)
                continue
            content = gcd(*form.coeffs, form.constant)
            if content > 1:
                # integer content moves to the coefficient; what remains is still integer-valued
                form = AffineForm(tuple(c // content for c in form.coeffs), form.constant // content, form.den)
                coeff = coeff * (content ** p)
            lead = next(c for c in form.coeffs if c)
            if lead < 0:
                form = -form
                if p % 2:
                    coeff = -coeff
            powers[form] = powers.get(form, 0) + p
        if lexp.den == 1 and lexp.constant:
            coeff = coeff * _lpow(lexp.constant)
            lexp = AffineForm(lexp.coeffs, 0)
        if cell is not None and cell.is_universe():
            cell = None
        mono = tuple(sorted(powers.items(), key=lambda t: _form_sort_key(t[0])))
        return cls(coeff, mono, lexp, cell)

    def key(self):
        return (tuple((f.key(), p) for f, p in self.monomial), self.lexp.key(), self.cell)

    def value(self, p: Point) -> MotConst:
        if self.cell is not None and not self.cell.contains(p):
            return ZERO
        v = self.coeff
        for form, power in self.monomial:
            v = v * (form.int_value(p) ** power)
            if v.is_zero():
                return v
        return v * _lpow(self.lexp.int_value(p))

    def value_q(self, p: Point, coeff_q: Fraction, q: Fraction) -> Fraction:
        if self.cell is not None and not self.cell.contains(p):
            return Fraction(0)
        v = coeff_q
        for form, power in self.monomial:
            v *= form.int_value(p) ** power
        return v * q ** self.lexp.int_value(p)

    def degree(self) -> int:
        return sum(p for _, p in self.monomial)


@dataclass(frozen=True)
class ConFun:
    ambient: PresSet
    terms: Tuple[Term, ...] = ()
    names: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.ambient.dim

    @classmethod
    def make(cls, ambient: PresSet, terms, names=None) -> "ConFun":
        merged: Dict[tuple, Term] = {}
        order: List[tuple] = []
        for t in terms:
            if t.coeff.is_zero():
                continue
            if t.cell is not None and t.cell.empty:
                continue
            k = t.key()
            if k in merged:
                merged[k] = replace(merged[k], coeff=merged[k].coeff + t.coeff)
            else:
                merged[k] = t
                order.append(k)
        kept = sorted((merged[k] for k in order if not merged[k].coeff.is_zero()), key=_term_order)
        return cls(ambient, tuple(kept), tuple(names) if names else None)

    # constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ambient: PresSet, names=None) -> "ConFun":
        return cls(ambient, (), names)

    @classmethod
    def constant(cls, ambient: PresSet, c, names=None) -> "ConFun":
        d = ambient.dim
        return cls.make(ambient, [Term.make(MotConst.coerce(c), (), AffineForm.const(d, 0))], names)

    @classmethod
    def variable(cls, ambient: PresSet, index: int, names=None) -> "ConFun":
        d = ambient.dim
        return cls.make(ambient, [Term.make(ONE, ((AffineForm.var(d, index), 1),), AffineForm.const(d, 0))], names)

    @classmethod
    def form(cls, ambient: PresSet, alpha: AffineForm, names=None) -> "ConFun":
        return cls.make(ambient, [Term.make(ONE, ((alpha, 1),), AffineForm.const(ambient.dim, 0))], names)

    @classmethod
    def lefschetz_power(cls, ambient: PresSet, beta: AffineForm, names=None) -> "ConFun":
        return cls.make(ambient, [Term.make(ONE, (), beta)], names)

    @classmethod
    def indicator(cls, ambient: PresSet, S: PresSet, names=None) -> "ConFun":
        return cls.constant(ambient, 1, names).restrict(S)

    # arithmetic ------------------------------------------------------

    def _check(self, other: "ConFun"):
        if self.dim != other.dim or self.ambient != other.ambient:
            raise DimensionError("constructible functions live on different ambient sets")

    def __add__(self, other: "ConFun") -> "ConFun":
        self._check(other)
        return ConFun.make(self.ambient, self.terms + other.terms, self.names or other.names)

    def __neg__(self) -> "ConFun":
        return ConFun(self.ambient, tuple(replace(t, coeff=-t.coeff) for t in self.terms), self.names)

    def __sub__(self, other: "ConFun") -> "ConFun":
        return self + (-other)

    def __mul__(self, other: "ConFun") -> "ConFun":
        if isinstance(other, (int, MotConst)):
            c = MotConst.coerce(other)
            return ConFun.make(self.ambient, [replace(t, coeff=t.coeff * c) for t in self.terms], self.names)
        self._check(other)
        out = []
        for s in self.terms:
            for t in other.terms:
                if s.cell is None:
                    cell = t.cell
                elif t.cell is None:
                    cell = s.cell
                else:
                    cell = s.cell & t.cell
                    if cell.empty:
                        continue
                out.append(Term.make(s.coeff * t.coeff, s.monomial + t.monomial, s.lexp + t.lexp, cell))
        return ConFun.make(self.ambient, out, self.names or other.names)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ConFun":
        if n < 0:
            raise ValueError("negative powers of constructible functions are not defined")
        result = ConFun.constant(self.ambient, 1, self.names)
        for _ in range(n):
            result = result * self
        return result

    # evaluation --------------------------------------------------------

    def __call__(self, p: Sequence[int]) -> MotConst:
        return cf_eval(self, p)

    def restrict(self, S: PresSet) -> "ConFun":
        """``f * 1_S`` on the same ambient."""
        if S.dim != self.dim:
            raise DimensionError("restriction set has the wrong dimension")
        cells = S.disjoint().cells
        out = []
        for t in self.terms:
            for c in cells:
                cell = c if t.cell is None else (t.cell & c)
                if not cell.empty:
                    out.append(replace(t, cell=cell if not cell.is_universe() else None))
        return ConFun.make(self.ambient, out, self.names)

    def pullback(self, maps: Sequence[AffineForm], newdim: int, names=None) -> "ConFun":
        """``x -> f(maps(x))`` on the preimage of the ambient."""
        if len(maps) != self.dim:
            raise DimensionError("pullback map has the wrong number of components")
        amb = self.ambient.pullback(maps, newdim)
        out = []
        for t in self.terms:
            cell = None if t.cell is None else t.cell.pullback(maps, newdim)
            if cell is not None and cell.empty:
                continue
            mono = tuple((f.compose(maps, newdim), p) for f, p in t.monomial)
            out.append(Term.make(t.coeff, mono, t.lexp.compose(maps, newdim), cell))
        return ConFun.make(amb, out, names)

    def with_ambient(self, ambient: PresSet) -> "ConFun":
        """Same terms on a sub-ambient."""
        return ConFun(ambient, self.terms, self.names)

    def max_degree(self) -> int:
        return max((t.degree() for t in self.terms), default=0)


# --- canonical form ------------------------------------------------------------


Coefficient = Union[Tuple[Tuple[Point, MotConst], ...], ConFun]


@dataclass(frozen=True)
class CanonicalPiece:
    """One rectilinear piece with its exponent table ``(a, b) -> c_ab``.

    Without parameters ``c_ab`` is an explicit map base point -> nonzero
    element of A; with parameters it is a non-null ConFun on the base.
    """

    piece: RectPiece
    table: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], Coefficient], ...]

    def coefficient_at(self, coef: Coefficient, w: Point) -> MotConst:
        if isinstance(coef, ConFun):
            return cf_eval(coef, w)
        for pt, v in coef:
            if pt == w:
                return v
        return ZERO

    def value(self, x: Sequence[int], w: Point) -> MotConst:
        total = ZERO
        for a, b, coef in self.table:
            c = self.coefficient_at(coef, w)
            if c.is_zero():
                continue
            mono = 1
            for xi, ai in zip(x, a):
                mono *= xi ** ai
            total = total + c * mono * _lpow(sum(bi * xi for bi, xi in zip(b, x)))
        return total


@dataclass(frozen=True)
class CanonicalForm:
    dim: int
    nparams: int
    pieces: Tuple[CanonicalPiece, ...]

    def is_empty(self) -> bool:
        return all(not p.table for p in self.pieces)

    def entries(self):
        for i, p in enumerate(self.pieces):
            for a, b, coef in p.table:
                yield i, a, b, coef

    def stats(self) -> Tuple[int, int, int]:
        """(total table entries, max |a|_1, max |b|_1)."""
        T = A = B = 0
        for _, a, b, _ in self.entries():
            T += 1
            A = max(A, sum(a))
            B = max(B, sum(abs(x) for x in b))
        return T, A, B

    def values_in_box(self, radius: int) -> Iterator[Tuple[Point, MotConst]]:
        """(point, value) for every point of every piece image inside the box."""
        box = [(-radius, radius)] * self.dim
        for cp in self.pieces:
            nf = cp.piece.nfib
            for w in base_points(cp.piece, box[nf:]):
                for x in preimage_points(cp.piece, w, box):
                    yield cp.piece.theta(x, w), cp.value(x, w)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _xcoeffs(form: AffineForm, piece: RectPiece) -> List[int]:
    out = []
    for col in piece.columns():
        v, rem = divmod(sum(c * m for c, m in zip(form.coeffs, col)), form.den)
        if rem:
            raise DomainError("affine form is not integer-valued along a piece direction")
        out.append(v)
    return out


def _expand(term: Term, piece: RectPiece):
    """Pull ``term`` back along ``theta`` and expand in the free coordinates.

    Returns (b, [(a, integer, base_monomial)]) where ``base_monomial`` is a
    tuple of (form on the base, power).
    """
    r = piece.r
    poly: Dict[Tuple[Tuple[int, ...], Tuple[Tuple[AffineForm, int], ...]], int] = {((0,) * r, ()): 1}
    for form, power in term.monomial:
        xc = _xcoeffs(form, piece)
        factor: Dict[Tuple[Tuple[int, ...], int], int] = {}
        for comp in _compositions(power, r + 1):
            e0, ex = comp[0], comp[1:]
            coef = factorial(power)
            for e in comp:
                coef //= factorial(e)
            for c, e in zip(xc, ex):
                coef *= c ** e
            if coef:
                factor[(ex, e0)] = factor.get((ex, e0), 0) + coef
        new: Dict = {}
        for (a, bm), c in poly.items():
            for (ex, e0), fc in factor.items():
                a2 = tuple(x + y for x, y in zip(a, ex))
                bm2 = bm + ((form, e0),) if e0 else bm
                key = (a2, bm2)
                new[key] = new.get(key, 0) + c * fc
        poly = {k: v for k, v in new.items() if v}
    b = tuple(_xcoeffs(term.lexp, piece))
    return b, [(a, c, bm) for (a, bm), c in poly.items()]


def _atoms(cell: PresCell, terms: Sequence[Term]) -> List[Tuple[PresCell, Tuple[int, ...]]]:
    """Refine ``cell`` so every term cell is constant on each part."""
    always = tuple(i for i, t in enumerate(terms) if t.cell is None)
    parts = [(cell, always)]
    groups: Dict[PresCell, List[int]] = {}
    for i, t in enumerate(terms):
        if t.cell is not None:
            groups.setdefault(t.cell, []).append(i)
    for tc, idx in groups.items():
        negs = tc.negations()
        new = []
        for P, act in parts:
            inside = P & tc
            if not inside.empty and inside.rational_feasible():
                new.append((inside, act + tuple(idx)))
            for n in negs:
                outside = P & n
                if not outside.empty and outside.rational_feasible():
                    new.append((outside, act))
        parts = new
    return [(P, tuple(sorted(act))) for P, act in parts if act]


def _table_for_piece(piece: RectPiece, terms: Sequence[Term]):
    expanded = [(t, _expand(t, piece)) for t in terms]
    if piece.points is not None:
        # integer multiplicities per (coefficient, L exponent); ring arithmetic happens once per slot
        acc: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Dict[Point, Dict[Tuple[int, int], int]]] = {}
        coeffs: Dict[MotConst, int] = {}
        for t, _ in expanded:
            coeffs.setdefault(t.coeff, len(coeffs))
        for w in piece.points:
            vals: Dict[AffineForm, int] = {}
            for t, (b, items) in expanded:
                key = (coeffs[t.coeff], t.lexp.int_value(w))
                for a, c, bm in items:
                    v = c
                    for form, e in bm:
                        fv = vals.get(form)
                        if fv is None:
                            fv = vals[form] = form.int_value(w)
                        v *= fv ** e
                    if not v:
                        continue
                    slot = acc.setdefault((a, b), {}).setdefault(w, {})
                    slot[key] = slot.get(key, 0) + v
        combiner = LinearCombiner(coeffs)
        table = []
        for (a, b), per_point in acc.items():
            kept = []
            for w, mult in per_point.items():
                polys: Dict[int, Dict[int, int]] = {}
                for (ci, e), n in mult.items():
                    if n:
                        polys.setdefault(ci, {})[e] = n
                v = combiner.combine(polys)
                if not v.is_zero():
                    kept.append((w, v))
            if kept:
                table.append((a, b, tuple(sorted(kept))))
        return tuple(sorted(table, key=lambda e: (e[0], e[1])))
    amb = PresSet((piece.base.dim), (piece.base,))
    groups: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], List[Term]] = {}
    for t, (b, items) in expanded:
        for a, c, bm in items:
            groups.setdefault((a, b), []).append(Term.make(t.coeff * c, bm, t.lexp))
    table = []
    for (a, b), ts in groups.items():
        coef = ConFun.make(amb, ts)
        if coef.terms and not cf_is_null(coef, _internal=True):
            table.append((a, b, coef))
    return tuple(sorted(table, key=lambda e: (e[0], e[1])))


def cf_canonicalize(f: ConFun, nparams: int = 0, _internal: bool = False) -> CanonicalForm:
    """Canonical form over rectilinear pieces; the last ``nparams`` coordinates are parameters."""
    pieces: List[CanonicalPiece] = []
    for cell in f.ambient.disjoint().cells:
        for atom, active in _atoms(cell, f.terms):
            atom_set = PresSet(f.dim, (atom,))
            if _internal:
                rect = rectilinearize_cells(atom_set, nparams)
            else:
                rect = rectilinearize(atom_set, nparams)
            terms = [f.terms[i] for i in active]
            for piece in rect:
                pieces.append(CanonicalPiece(piece, _table_for_piece(piece, terms)))
    return CanonicalForm(f.dim, nparams, tuple(pieces))


# --- operation-level API -------------------------------------------------------


def cf_arith(op: str, f: ConFun, h: ConFun) -> ConFun:
    if op == "add":
        return f + h
    if op == "sub":
        return f - h
    if op == "mul":
        return f * h
    raise ValueError(f"unknown operation {op!r}")


def cf_eval(f: ConFun, p: Sequence[int]) -> MotConst:
    p = tuple(p)
    if len(p) != f.dim:
        raise DimensionError(f"point of length {len(p)} for a function on Z^{f.dim}")
    if not f.ambient.contains(p):
        raise DomainError(f"point {p} is not on the domain")
    total = ZERO
    for t in f.terms:
        total = total + t.value(p)
    return total


def cf_transport(f: ConFun, mode: str, arg, newdim: Optional[int] = None) -> ConFun:
    """``mode="restrict"`` with a PresSet, or ``mode="pullback"`` with (matrix, offset)."""
    if mode == "restrict":
        return f.restrict(arg)
    if mode == "pullback":
        if isinstance(arg, tuple) and len(arg) == 2 and not isinstance(arg[0], AffineForm):
            matrix, offset = arg
            from .presburger import affine_map
            maps = affine_map(matrix, offset)
            nd = len(matrix[0]) if matrix and matrix[0] else (newdim or 0)
        else:
            maps = list(arg)
            nd = newdim if newdim is not None else maps[0].dim
        return f.pullback(maps, nd)
    raise ValueError(f"unknown transport mode {mode!r}")


def cf_is_null(f: ConFun, _internal: bool = False) -> bool:
    if not f.terms:
        return True
    return cf_canonicalize(f, 0, _internal=_internal).is_empty()


def cf_eq(f: ConFun, h: ConFun) -> bool:
    return cf_is_null(f - h)


def cf_diff1(f: ConFun, axis: int) -> ConFun:
    """``z -> f(z + e_axis) - f(z)`` on ``{z : z, z + e_axis in the ambient}``."""
    d = f.dim
    if not 0 <= axis < d:
        raise DimensionError("axis out of range")
    shift = [AffineForm.var(d, i) if i != axis else AffineForm.var(d, i).shift(1) for i in range(d)]
    shifted = f.pullback(shift, d, f.names)
    domain = f.ambient.intersect(shifted.ambient)
    return ConFun.make(domain, shifted.terms + (-f).terms, f.names)


def default_witness_bound(f: ConFun) -> int:
    T, A, B = cf_canonicalize(f).stats()
    return T * (A + B + 2)


def lex_points(S: PresSet, radius: int) -> Iterator[Point]:
    """Lazily enumerate ``S`` intersected with the radius box, lexicographically, without repeats."""
    box = [(-radius, radius)] * S.dim
    last = None
    for p in heapq.merge(*(enumerate_cell(c, box) for c in S.cells)):
        if p != last:
            yield p
            last = p


def cf_witness_nonnull(f: ConFun, search_bound: Optional[int] = None) -> Optional[Point]:
    """Lexicographically least point of the box with a nonzero value, if any."""
    if search_bound is None:
        search_bound = default_witness_bound(f)
    for p in lex_points(f.ambient, search_bound):
        if not cf_eval(f, p).is_zero():
            return p
    return None
