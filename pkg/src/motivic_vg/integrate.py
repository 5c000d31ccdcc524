"""Integrability in relative dimension 0 and closed-form fiber sums.

After canonicalization relative to the base, a piece contributes
``sum c_ab(w) g^a L^(b.g)`` over ``g`` in N^r.  The function is summable
in every fiber exactly when each ``b`` has all components <= -1, and then
the sum over ``g`` factors into one-variable series
``sum_n n^a L^(b n)``, each a rational function of ``L^b`` with
denominator a power of ``1 - L^b`` (a unit of A).  What remains is a finite
sum over the base fibers ``A_z``, done exactly by peeling off one fiber
coordinate at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from dataclasses import replace
from functools import lru_cache
from math import comb, factorial, gcd
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .coeffring import ONE, ZERO, MotConst
from .confun import CanonicalForm, ConFun, Term, cf_canonicalize, cf_eval
from .errors import CapabilityError, DimensionError, DomainError, NotIntegrableError
from .presburger import AffineForm, PresCell, PresSet


@dataclass(frozen=True)
class Projection:
    """Projection of Z^n onto the coordinates not listed in ``fiber_axes``."""

    dim: int
    fiber_axes: Tuple[int, ...]

    def __post_init__(self):
        axes = tuple(sorted(set(self.fiber_axes)))
        if len(axes) != len(self.fiber_axes) or any(not 0 <= a < self.dim for a in axes):
            raise DimensionError(f"bad fiber axes {self.fiber_axes} for dimension {self.dim}")
        object.__setattr__(self, "fiber_axes", axes)

    @property
    def base_axes(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.dim) if i not in self.fiber_axes)

    @property
    def order(self) -> Tuple[int, ...]:
        """Old coordinate index at each position of the (fiber, base) ordering."""
        return self.fiber_axes + self.base_axes

    def reorder(self, f: ConFun) -> ConFun:
        """Pull ``f`` back to coordinates ordered as (fiber..., base...)."""
        pos = {old: new for new, old in enumerate(self.order)}
        maps = [AffineForm.var(self.dim, pos[i]) for i in range(self.dim)]
        names = tuple(f.names[i] for i in self.order) if f.names else None
        return f.pullback(maps, self.dim, names)

    def fiber_map(self, z: Sequence[int]) -> List[AffineForm]:
        """Maps from Z^r into Z^n sending x to the point with fiber x and base z."""
        r = len(self.fiber_axes)
        maps: List[AffineForm] = [None] * self.dim  # type: ignore[list-item]
        for k, ax in enumerate(self.fiber_axes):
            maps[ax] = AffineForm.var(r, k)
        for k, ax in enumerate(self.base_axes):
            maps[ax] = AffineForm.const(r, z[k])
        return maps


def absolute(dim: int) -> Projection:
    return Projection(dim, tuple(range(dim)))


# --- one-variable series ---------------------------------------------------


@lru_cache(maxsize=None)
def _eulerian(a: int) -> Tuple[Tuple[int, ...], int]:
    """(N, k) with sum_n n^a t^n = N(t) / (1 - t)^k."""
    num, k = (1,), 1
    for _ in range(a):
        # t * d/dt [N (1-t)^-k] = t (N' (1-t) + k N) / (1-t)^(k+1)
        deriv = [i * c for i, c in enumerate(num)][1:] or [0]
        inner = [0] * (max(len(deriv) + 1, len(num)))
        for i, c in enumerate(deriv):
            inner[i] += c
            inner[i + 1] -= c
        for i, c in enumerate(num):
            inner[i] += k * c
        num = tuple([0] + inner)
        while len(num) > 1 and num[-1] == 0:
            num = num[:-1]
        k += 1
    return num, k


def sum_closed_univariate(a: int, b: int) -> MotConst:
    """``sum_{n >= 0} n^a L^(b n)`` in A; requires a >= 0 and b <= -1."""
    if a < 0:
        raise ValueError("the polynomial degree a must be non-negative")
    if b >= 0:
        raise NotIntegrableError(f"series n^{a} L^({b} n) diverges: b must be negative",
                                 [(None, (a,), (b,))])
    return _series_formal(a, b)


def sum_closed(a: Sequence[int], b: Sequence[int]) -> MotConst:
    out = ONE
    for ai, bi in zip(a, b):
        out = out * sum_closed_univariate(ai, bi)
    return out


# --- integrability --------------------------------------------------------


@dataclass(frozen=True)
class IntegrabilityReport:
    integrable: bool
    violations: Tuple[Tuple[int, Tuple[int, ...], Tuple[int, ...]], ...]

    def __bool__(self):
        return self.integrable


def _relative_form(f: ConFun, proj: Projection, internal: bool = False) -> CanonicalForm:
    if f.dim != proj.dim:
        raise DimensionError("projection and function dimensions differ")
    g = proj.reorder(f)
    return cf_canonicalize(g, len(proj.base_axes), _internal=internal)


def _violations(cf: CanonicalForm):
    return tuple((i, a, b) for i, a, b, _ in cf.entries() if any(x >= 0 for x in b))


def is_integrable_fiberwise(f: ConFun, proj: Projection) -> IntegrabilityReport:
    bad = _violations(_relative_form(f, proj))
    return IntegrabilityReport(not bad, bad)


# --- finite fiber sums -----------------------------------------------------


def _series_formal(a: int, b: int) -> MotConst:
    """The rational function of ``sum_n n^a t^n`` evaluated at ``t = L^b`` (b != 0)."""
    num, k = _eulerian(a)
    numer = MotConst.from_laurent({b * i: c for i, c in enumerate(num) if c})
    return numer / (MotConst.one_minus_lefschetz(b) ** k)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _prime_powers(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _binomial_parts(n: AffineForm, k: int):
    """C(n, k) for an integer-valued form ``n`` as products of integer-valued forms.

    Returns (congruences, monomial) pairs, one per residue of ``n`` modulo
    k!.  On each class every prime power of k! divides some factor n - i,
    so the division can be spread over the factors.
    """
    if k == 0:
        return [([], ())]
    F = factorial(k)
    need = _prime_powers(F)
    out = []
    for rho in range(F):
        cong = (n.coeffs, rho * n.den - n.constant, n.den * F)
        divs = [1] * k
        for p, e in need.items():
            left = e
            for i in range(k):
                if not left:
                    break
                res = (rho - i) % F
                take = min(e if res == 0 else _valuation(res, p), left)
                divs[i] *= p ** take
                left -= take
        mono = tuple((n.shift(-i).scale(Fraction(1, divs[i])), 1) for i in range(k))
        out.append(([cong], mono))
    return out


def _power_sum(e: int, b: int, K: AffineForm):
    """``sum_{u=0}^{K} u^e L^(b u)`` as (coefficient, monomial, exponent, congruences) parts."""
    nd = K.dim
    zero = AffineForm.const(nd, 0)
    K1 = K.shift(1)
    parts = []
    if b:
        # sum_{u>=0} - L^(b(K+1)) sum_{u>=0} (u + K + 1)^e L^(b u)
        parts.append((_series_formal(e, b), (), zero, []))
        for i in range(e + 1):
            mono = ((K1, e - i),) if e - i else ()
            parts.append((-_series_formal(i, b) * comb(e, i), mono, K1.scale(b), []))
        return parts
    for i in range(e + 1):
        c = _stirling2(e, i) * factorial(i)
        if not c:
            continue
        for congs, mono in _binomial_parts(K1, i + 1):
            parts.append((MotConst.from_int(c), mono, zero, congs))
    return parts


def _residue_cells(dim: int, bounds) -> List[Tuple[PresCell, List[AffineForm]]]:
    """Split Z^dim so each rounded bound becomes an exact (rational) affine form.

    ``bounds`` holds (numerator coeffs, numerator const, divisor, is_lower):
    the bound is ceil(num/divisor) for lower and floor(num/divisor) for upper.
    """
    choices = []
    for coeffs, const, div, lower in bounds:
        opts = []
        for t in range(div):
            cong = [(coeffs, t - const, div)] if div > 1 else []
            adj = (-t) % div if lower else -t
            opts.append((cong, AffineForm.from_rational(
                [Fraction(c, div) for c in coeffs], Fraction(const + adj, div))))
            if div == 1:
                break
        choices.append(opts)
    out = []
    for combo in product(*choices):
        congs = [c for cg, _ in combo for c in cg]
        cell = PresCell.make(dim, (), congs)
        if not cell.empty:
            out.append((cell, [form for _, form in combo]))
    return out


def _ineq_from_form(form: AffineForm, shift: int = 0):
    """Integer inequality equivalent to ``form + shift >= 0``."""
    f = form.shift(shift)
    return (f.coeffs, f.constant)


def _sum_term(t: Term, maps: List[AffineForm], nd: int, K: AffineForm, branch: PresCell) -> List[Term]:
    """Sum one term, pulled back along ``(u, w) -> maps``, over u = 0..K(w)."""
    poly: Dict[int, List[Tuple[int, tuple]]] = {0: [(1, ())]}
    for form, p in t.monomial:
        g = form.compose(maps, nd + 1)
        rc = g.rational_coeffs()
        alpha = rc[0]
        if alpha.denominator != 1:
            raise DomainError("form is not integer-valued along the fiber")
        rho = AffineForm.from_rational(rc[1:], g.rational_constant())
        new: Dict[int, List[Tuple[int, tuple]]] = {}
        for e, lst in poly.items():
            for ee in range(p + 1):
                c = comb(p, ee) * int(alpha) ** ee
                if not c:
                    continue
                for coef, mono in lst:
                    m2 = mono + ((rho, p - ee),) if p - ee else mono
                    new.setdefault(e + ee, []).append((coef * c, m2))
        poly = new
    ge = t.lexp.compose(maps, nd + 1)
    rc = ge.rational_coeffs()
    if rc[0].denominator != 1:
        raise DomainError("exponent is not integer-valued along the fiber")
    beta0 = AffineForm.from_rational(rc[1:], ge.rational_constant())
    out = []
    for e, lst in poly.items():
        for pc, pmono, plexp, pcongs in _power_sum(e, int(rc[0]), K):
            cell = branch.add((), pcongs) if pcongs else branch
            if cell.empty:
                continue
            for coef, mono in lst:
                out.append(Term.make(t.coeff * pc * coef, mono + pmono, beta0 + plexp, cell))
    return out


def _sum_first_coordinate(cell: PresCell, terms: Sequence[Term]) -> List[Term]:
    """Sum cell-free terms over coordinate 0 of ``cell``; result terms live on Z^(dim-1)."""
    dim = cell.dim
    nd = dim - 1
    lowers, uppers, others = [], [], []
    for c, k in cell.ineqs:
        a = c[0]
        rest = c[1:]
        if a > 0:   # y >= ceil((-rest.w - k) / a)
            lowers.append((tuple(-x for x in rest), -k, a, True))
        elif a < 0:  # y <= floor((rest.w + k) / -a)
            uppers.append((rest, k, -a, False))
        else:
            others.append((rest, k))
    if not lowers or not uppers:
        raise CapabilityError("fiber of a base cell is infinite")
    P = 1
    for c, _, m in cell.congs:
        if c[0] % m:
            P = P * m // gcd(P, m)
    wvars = [AffineForm.var(nd, i) for i in range(nd)]
    out: List[Term] = []
    for rcell, forms in _residue_cells(nd, lowers + uppers):
        lforms, uforms = forms[:len(lowers)], forms[len(lowers):]
        for j, L in enumerate(lforms):
            for m, U in enumerate(uforms):
                cons = list(others)
                for j2, L2 in enumerate(lforms):
                    if j2 != j:
                        cons.append(_ineq_from_form(L - L2, -1 if j2 < j else 0))
                for m2, U2 in enumerate(uforms):
                    if m2 != m:
                        cons.append(_ineq_from_form(U2 - U, -1 if m2 < m else 0))
                region = rcell.add(cons)
                if region.empty or not region.rational_feasible():
                    continue
                for off in range(P):
                    # y = L + off + P u with 0 <= u <= K = floor((U - L - off) / P)
                    y0 = L.shift(off)
                    D = (U - L).shift(-off)
                    start = region & cell.pullback([y0] + wvars, nd)
                    start = start.add([_ineq_from_form(D)])
                    if start.empty or not start.rational_feasible():
                        continue
                    maps = [AffineForm.from_rational([P] + y0.rational_coeffs(), y0.rational_constant())]
                    maps += [AffineForm.var(nd + 1, i + 1) for i in range(nd)]
                    for r in range(P):
                        branch = start.add((), [(D.coeffs, r * D.den - D.constant, D.den * P)]) if P > 1 else start
                        if branch.empty or not branch.rational_feasible():
                            continue
                        K = D.shift(-r).scale(Fraction(1, P))
                        for t in terms:
                            out.extend(_sum_term(t, maps, nd, K, branch))
    return out


def fiber_sum(fun: ConFun, cell: PresCell, nfib: int) -> ConFun:
    """``z -> sum over y in cell_z of fun(y, z)`` on Z^(dim - nfib), ambient = everything.

    The fibers of ``cell`` must be finite.  Summation is linear, so terms
    are grouped by their cell and each group is summed on its own.
    """
    groups: Dict[PresCell, List[Term]] = {}
    for t in fun.terms:
        c = cell if t.cell is None else (cell & t.cell)
        if not c.empty:
            groups.setdefault(c, []).append(replace(t, cell=None))
    for _ in range(nfib):
        nxt: Dict[PresCell, List[Term]] = {}
        for c, ts in groups.items():
            if not c.rational_feasible():
                continue
            for t in _sum_first_coordinate(c, ts):
                nxt.setdefault(t.cell if t.cell is not None else PresCell.universe(c.dim - 1), []).append(
                    replace(t, cell=None))
        groups = nxt
    nbase = cell.dim - nfib
    terms = [replace(t, cell=None if c.is_universe() else c) for c, ts in groups.items() for t in ts]
    return ConFun.make(PresSet.universe(nbase), terms)


def _piece_integrand(cp) -> ConFun:
    """sum_ab K_ab c_ab as one function on the piece's base."""
    total = None
    for a, b, coef in cp.table:
        part = coef * sum_closed(a, b)
        total = part if total is None else total + part
    return total


def integrate_absolute(f: ConFun) -> MotConst:
    cf = cf_canonicalize(f, 0)
    bad = _violations(cf)
    if bad:
        raise NotIntegrableError("function is not integrable", bad)
    total = ZERO
    for i, a, b, coef in cf.entries():
        k = sum_closed(a, b)
        for _, v in coef:
            total = total + v * k
    return total


def integrate_relative(f: ConFun, proj: Projection) -> Union[ConFun, MotConst]:
    """Fiberwise sum of ``f`` along ``proj`` as a constructible function on the base.

    The result lives on all of Z^s and vanishes where the fiber is empty.
    With no base coordinates this is the absolute integral, an element of A.
    """
    s = len(proj.base_axes)
    if s == 0:
        return integrate_absolute(proj.reorder(f))
    cf = _relative_form(f, proj)
    bad = _violations(cf)
    if bad:
        raise NotIntegrableError("function is not integrable in the fibers", bad)
    r = len(proj.fiber_axes)
    terms: List[Term] = []
    for cp in cf.pieces:
        if cp.table:
            terms.extend(fiber_sum(_piece_integrand(cp), cp.piece.base, r).terms)
    names = tuple(f.names[i] for i in proj.base_axes) if f.names else None
    return ConFun.make(PresSet.universe(s), terms, names)


def fiber_restriction(f: ConFun, proj: Projection, z: Sequence[int]) -> ConFun:
    """The restriction of ``f`` to the fiber over ``z``, as a function on Z^r."""
    return f.pullback(proj.fiber_map(z), len(proj.fiber_axes))
