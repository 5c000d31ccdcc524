"""Specialization L -> q and a brute-force numeric oracle for fiber sums.

Everything is exact rational arithmetic.  The only tolerance is the
certified truncation tail of a partial sum.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .coeffring import MotConst, mc_eval_q
from .confun import CanonicalForm, ConFun, cf_canonicalize, cf_eval
from .errors import DimensionError, DomainError, MotivicError, NotIntegrableError, SpecializationError
from .integrate import Projection, fiber_restriction, integrate_relative

WORKERS_ENV = "MOTIVIC_VG_WORKERS"

Symbols = Optional[Mapping[str, Fraction]]


def _check_q(q) -> Fraction:
    q = Fraction(q)
    if q <= 1:
        raise SpecializationError(f"specialization needs q > 1, got {q}")
    return q


def spec_q(f: ConFun, q, symbols: Symbols = None) -> Callable[[Sequence[int]], Fraction]:
    """Pointwise specialization of ``f`` at L = q."""
    q = _check_q(q)
    coeffs = [t.coeff.eval_q(q, symbols) for t in f.terms]

    def value(p: Sequence[int]) -> Fraction:
        p = tuple(p)
        if len(p) != f.dim:
            raise DimensionError(f"point of length {len(p)} for a function on Z^{f.dim}")
        if not f.ambient.contains(p):
            raise DomainError(f"point {p} is not on the domain")
        return sum((t.value_q(p, c, q) for t, c in zip(f.terms, coeffs)), Fraction(0))

    return value


# --- tail bounds ----------------------------------------------------------


def _ratio(a: int, t: Fraction, N: int) -> Fraction:
    return Fraction(N + 1, N) ** a * t


def series_tail_bound(a: int, t: Fraction, N: int) -> Optional[Fraction]:
    """Upper bound of sum_{n >= N} n^a t^n for 0 < t < 1, or None if not yet certifiable.

    Uses term ratios: for n >= N the ratio of consecutive terms is at most
    ((N+1)/N)^a t, so the tail is below N^a t^N / (1 - that ratio).
    """
    if a == 0:
        return t ** N / (1 - t)
    if N == 0:
        N = 1
    rho = _ratio(a, t, N)
    if rho >= 1:
        return None
    return Fraction(N) ** a * t ** N / (1 - rho)


def series_total_bound(a: int, t: Fraction) -> Fraction:
    """Upper bound of the full series sum_{n >= 0} n^a t^n."""
    N = 1
    while _ratio(a, t, N) >= 1:
        N += 1
    head = sum((Fraction(n) ** a * t ** n for n in range(N)), Fraction(0))
    return head + series_tail_bound(a, t, N)


def _entry_magnitudes(cf: CanonicalForm, q: Fraction, symbols: Symbols):
    """(piece index, a, t, C) with C = sum of |specialized coefficient| over base points."""
    out = []
    for i, a, b, coef in cf.entries():
        C = sum((abs(v.eval_q(q, symbols)) for _, v in coef), Fraction(0))
        if C:
            out.append((i, a, tuple(q ** bk for bk in b), C))
    return out


def _tail_bound(entries, N: int) -> Optional[Fraction]:
    total = Fraction(0)
    for _, a, ts, C in entries:
        r = len(a)
        if r == 0:
            continue
        fulls = [series_total_bound(ak, tk) for ak, tk in zip(a, ts)]
        part = Fraction(0)
        for k in range(r):
            tail = series_tail_bound(a[k], ts[k], N)
            if tail is None:
                return None
            rest = Fraction(1)
            for j in range(r):
                if j != k:
                    rest *= fulls[j]
            part += tail * rest
        total += C * part
    return total


def _fiber_function(f: ConFun, proj: Projection, base_point: Optional[Sequence[int]]) -> ConFun:
    s = len(proj.base_axes)
    if s == 0:
        return proj.reorder(f)
    if base_point is None or len(base_point) != s:
        raise DimensionError(f"a base point with {s} coordinates is required")
    return fiber_restriction(f, proj, tuple(base_point))


def brute_sum(f: ConFun, proj: Projection, q, epsilon, base_point: Optional[Sequence[int]] = None,
              symbols: Symbols = None, max_n: int = 100000) -> Tuple[Fraction, int, Fraction]:
    """Certified partial sum of the fiber integral at L = q.

    Returns (value, N, tail) where value sums ``f`` over the images of all
    piece points with every free coordinate below N, and the remaining
    terms have total absolute value at most ``tail <= epsilon``.
    """
    q = _check_q(q)
    epsilon = Fraction(epsilon)
    g = _fiber_function(f, proj, base_point)
    cf = cf_canonicalize(g, 0)
    bad = tuple(v for v in ((i, a, b) for i, a, b, _ in cf.entries()) if any(x >= 0 for x in v[2]))
    if bad:
        raise NotIntegrableError("function is not integrable in the fiber", bad)
    entries = _entry_magnitudes(cf, q, symbols)
    N = 0
    while True:
        tail = _tail_bound(entries, N)
        if tail is not None and tail <= epsilon:
            break
        N += 1
        if N > max_n:
            raise SpecializationError(f"no truncation below {max_n} reaches the requested tail")
    value_at = spec_q(g, q, symbols)
    total = Fraction(0)
    for cp in cf.pieces:
        piece = cp.piece
        rng = [range(N)] * piece.r
        for w in piece.points:
            for x in product(*rng):
                total += value_at(piece.theta(x, w))
    return total, N, tail


def divergence_witness(f: ConFun, proj: Projection, q, base_point: Optional[Sequence[int]] = None,
                       symbols: Symbols = None):
    """A table entry (piece, a, b, w, value) with some b_k >= 0 and nonzero value at q, or None."""
    q = _check_q(q)
    cf = cf_canonicalize(_fiber_function(f, proj, base_point), 0)
    for i, a, b, coef in cf.entries():
        if all(x < 0 for x in b):
            continue
        for w, v in coef:
            val = v.eval_q(q, symbols)
            if val:
                return i, a, b, w, val
    return None


def partial_sum(f: ConFun, proj: Projection, q, N: int, base_point: Optional[Sequence[int]] = None,
                symbols: Symbols = None) -> Fraction:
    """Sum of ``f`` at L = q over piece points with free coordinates below N (no integrability check)."""
    q = _check_q(q)
    g = _fiber_function(f, proj, base_point)
    cf = cf_canonicalize(g, 0)
    value_at = spec_q(g, q, symbols)
    total = Fraction(0)
    for cp in cf.pieces:
        for w in cp.piece.points:
            for x in product(*([range(N)] * cp.piece.r)):
                total += value_at(cp.piece.theta(x, w))
    return total


# --- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class SpecReport:
    function_id: str
    q: Fraction
    symbolic_value: Optional[Fraction]
    partial_sum: Optional[Fraction]
    truncation_n: Optional[int]
    tail_bound: Optional[Fraction]
    verdict: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def crosscheck(f: ConFun, proj: Projection, q_list: Sequence, epsilon, base_point: Optional[Sequence[int]] = None,
               function_id: str = "f", symbols: Symbols = None) -> List[SpecReport]:
    """Symbolic integral at each q against the brute-force oracle; one report per q."""
    epsilon = Fraction(epsilon)
    s = len(proj.base_axes)
    note = "" if s == 0 else f"base point {tuple(base_point) if base_point is not None else None}"
    try:
        integral = integrate_relative(f, proj)
        if s == 0:
            symbolic: Optional[MotConst] = integral
        else:
            if base_point is None:
                raise DimensionError("relative cross-check needs a base point")
            symbolic = cf_eval(integral, tuple(base_point))
        setup_error = None
    except MotivicError as exc:
        symbolic, setup_error = None, exc

    def one(q) -> SpecReport:
        q = Fraction(q)
        if setup_error is not None:
            return SpecReport(function_id, q, None, None, None, None, "error",
                              _join(note, f"{type(setup_error).__name__}: {setup_error}"))
        try:
            sym = mc_eval_q(symbolic, q, symbols)
            value, N, tail = brute_sum(f, proj, q, epsilon, base_point, symbols)
        except (MotivicError, ZeroDivisionError, ValueError) as exc:
            return SpecReport(function_id, q, None, None, None, None, "error",
                              _join(note, f"{type(exc).__name__}: {exc}"))
        verdict = "pass" if abs(sym - value) <= tail else "fail"
        return SpecReport(function_id, q, sym, value, N, tail, verdict, note)

    workers = min(worker_count(), max(1, len(q_list)))
    if workers == 1:
        return [one(q) for q in q_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, q_list))


def _join(a: str, b: str) -> str:
    return f"{a}; {b}" if a else b
