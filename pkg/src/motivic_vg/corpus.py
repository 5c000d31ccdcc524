"""Seeded generators for sets and functions, plus a fixed golden corpus.

Every random cell is built around an anchor point near the origin, so it
is non-empty and has points inside small boxes.
"""

from __future__ import annotations

import random
from math import comb
from typing import List, Optional, Sequence, Tuple

from .coeffring import LL, MotConst
from .confun import ConFun, Term
from .presburger import AffineForm, PresCell, PresSet


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_form(rng: random.Random, dim: int, cmax: int = 2, kmax: int = 3, nonconstant: bool = True) -> AffineForm:
    while True:
        coeffs = tuple(rng.randint(-cmax, cmax) for _ in range(dim))
        if any(coeffs) or not nonconstant or dim == 0:
            return AffineForm(coeffs, rng.randint(-kmax, kmax))


def random_cell(rng: random.Random, dim: int, nineq: Tuple[int, int] = (1, 3), cong_prob: float = 0.3,
                anchor: Optional[Sequence[int]] = None, slack: int = 3) -> PresCell:
    """A cell through ``anchor`` (default: a random point in [-2, 2]^dim)."""
    if anchor is None:
        anchor = [rng.randint(-2, 2) for _ in range(dim)]
    ineqs = []
    for _ in range(rng.randint(*nineq)):
        c = tuple(rng.randint(-2, 2) for _ in range(dim))
        if not any(c):
            continue
        k = -sum(a * b for a, b in zip(c, anchor)) + rng.randint(0, slack)
        ineqs.append((c, k))
    congs = []
    if dim and rng.random() < cong_prob:
        c = tuple(rng.randint(0, 2) for _ in range(dim))
        m = rng.choice((2, 3))
        congs.append((c, sum(a * b for a, b in zip(c, anchor)) % m, m))
    return PresCell.make(dim, ineqs, congs)


def random_set(rng: random.Random, dim: int, ncells: Tuple[int, int] = (1, 2), **kw) -> PresSet:
    return PresSet.of([random_cell(rng, dim, **kw) for _ in range(rng.randint(*ncells))], dim)


def random_coeff(rng: random.Random, symbols: bool = False) -> MotConst:
    kind = rng.randrange(6 if symbols else 5)
    if kind == 0:
        return MotConst.from_int(rng.choice((-3, -2, -1, 1, 2, 3)))
    if kind == 1:
        return MotConst.lefschetz(rng.randint(-2, 2)) * rng.choice((-1, 1, 2))
    if kind == 2:
        return MotConst.lefschetz(rng.randint(1, 2)) - 1
    if kind == 3:
        return MotConst.one_minus_lefschetz(rng.choice((-2, -1, 1, 2))).unit_inverse()
    if kind == 4:
        return LL ** rng.randint(0, 3) + rng.randint(-2, 2)
    return MotConst.symbol("Y") * rng.choice((1, -1))


def random_term(rng: random.Random, dim: int, max_degree: int = 4, cell_prob: float = 0.3,
                lexp_range: Tuple[int, int] = (-2, 2), symbols: bool = False) -> Term:
    deg = rng.randint(0, max_degree)
    mono = []
    while deg > 0:
        p = rng.randint(1, deg)
        mono.append((random_form(rng, dim), p))
        deg -= p
    lexp = AffineForm(tuple(rng.randint(*lexp_range) for _ in range(dim)), rng.randint(-2, 2))
    cell = random_cell(rng, dim, (1, 2), 0.2) if rng.random() < cell_prob else None
    return Term.make(random_coeff(rng, symbols), tuple(mono), lexp, cell)


def random_confun(rng: random.Random, dim: int, nterms: Tuple[int, int] = (1, 6), max_degree: int = 4,
                  ambient: Optional[PresSet] = None, **kw) -> ConFun:
    amb = ambient if ambient is not None else random_set(rng, dim)
    terms = [random_term(rng, dim, max_degree, **kw) for _ in range(rng.randint(*nterms))]
    return ConFun.make(amb, terms)


# --- value-preserving rewrites -----------------------------------------------------


def _split_by_cell(t: Term, C: PresCell) -> List[Term]:
    out = []
    for part in [C] + C.negations():
        cell = part if t.cell is None else (t.cell & part)
        if not cell.empty:
            out.append(Term.make(t.coeff, t.monomial, t.lexp, cell))
    return out


def _reexpand(t: Term, rng: random.Random) -> List[Term]:
    """alpha^p = sum_j C(p, j) (alpha - k)^j k^(p - j) for the first monomial factor."""
    if not t.monomial:
        return [t]
    (alpha, p), rest = t.monomial[0], t.monomial[1:]
    k = rng.choice((-2, -1, 1, 2))
    shifted = alpha.shift(-k)
    out = []
    for j in range(p + 1):
        c = comb(p, j) * k ** (p - j)
        mono = ((shifted, j),) + rest if j else rest
        out.append(Term.make(t.coeff * c, mono, t.lexp, t.cell))
    return out


def scramble(f: ConFun, seed) -> ConFun:
    """A differently written function with the same values as ``f``."""
    rng = _rng(seed)
    terms: List[Term] = []
    for t in f.terms:
        parts = [t]
        if rng.random() < 0.5:
            parts = [u for s in parts for u in _reexpand(s, rng)]
        if rng.random() < 0.5:
            C = random_cell(rng, f.dim, (1, 1), 0.5)
            parts = [u for s in parts for u in _split_by_cell(s, C)]
        terms.extend(parts)
    g = ConFun.make(f.ambient, terms, f.names)
    # add a null combination: (x_i + 1)^2 - x_i^2 - 2 x_i - 1
    if f.dim:
        i = rng.randrange(f.dim)
        xi = AffineForm.var(f.dim, i)
        zero = AffineForm.const(f.dim, 0)
        null = [Term.make(MotConst.from_int(1), ((xi.shift(1), 2),), zero),
                Term.make(MotConst.from_int(-1), ((xi, 2),), zero),
                Term.make(MotConst.from_int(-2), ((xi, 1),), zero),
                Term.make(MotConst.from_int(-1), (), zero)]
        g = ConFun.make(f.ambient, g.terms + tuple(null), f.names)
    return g


# --- corpora ------------------------------------------------------------------------


def function_corpus(n: int, seed: int = 0, dims: Sequence[int] = (1, 2, 3)) -> List[ConFun]:
    """Random functions over Z^r (r in ``dims``) with at most six terms of degree at most four."""
    rng = _rng(seed)
    return [random_confun(rng, dims[i % len(dims)]) for i in range(n)]


def null_corpus(n: int, seed: int = 1, dims: Sequence[int] = (1, 2, 3)) -> List[ConFun]:
    """Null functions written as ``f - scramble(f)``."""
    rng = _rng(seed)
    out = []
    for i in range(n):
        f = random_confun(rng, dims[i % len(dims)], nterms=(1, 3))
        out.append(f - scramble(f, rng))
    return out


FIXED_SETS = [
    "{ (x, y) in Z^2 : 0 <= x <= y }",
    "{ (x, y) in Z^2 : true }",
    "{ x in Z^1 : x = 1 mod 2 and x >= 0 }",
    "{ (x, y) in Z^2 : x >= 0 and y >= 0 and 2*y <= 3*x }",
    "{ (x, y, z) in Z^3 : x >= 0 and y >= 0 and z >= 0 and x + y + z = 0 mod 2 }",
    "{ (x, y, z) in Z^3 : x + y >= 0 and y + z >= 0 and x + z >= 0 }",
    "{ (x, y) in Z^2 : x + y = 1 mod 3 or x - y >= 4 }",
    "{ (x, y, z) in Z^3 : z >= 0 and z <= 2 and x >= z and y <= x }",
    "{ x in Z^1 : not (x >= -1 and x <= 3) }",
    "{ (x, y) in Z^2 : 2*x - 3*y = 1 and x >= 0 }",
]


def set_corpus(n: int, seed: int = 2) -> List[PresSet]:
    """The fixed sets followed by random ones in dimensions 1 to 3."""
    from .dsl import parse_set
    out = [parse_set(s) for s in FIXED_SETS]
    rng = _rng(seed)
    i = 0
    while len(out) < n:
        out.append(random_set(rng, 1 + i % 3, (1, 2), nineq=(0, 3), cong_prob=0.4))
        i += 1
    return out


def fiber_corpus(n: int, seed: int = 3) -> List[ConFun]:
    """Functions on Z x Z with base coordinate z in [0, 10] (fiber axis 0)."""
    rng = _rng(seed)
    out = []
    for _ in range(n):
        ineqs = [((0, 1), 0), ((0, -1), 10)]
        lo = rng.random()
        if lo < 0.8:
            ineqs.append(((1, -rng.randint(0, 2)), rng.randint(0, 3)))     # x >= a z - k
        if rng.random() < (0.5 if lo < 0.8 else 1.0):
            ineqs.append(((-1, rng.randint(0, 2)), rng.randint(0, 4)))     # x <= a z + k
        congs = [((1, rng.randint(0, 1)), rng.randint(0, 1), 2)] if rng.random() < 0.3 else []
        amb = PresSet.of([PresCell.make(2, ineqs, congs)])
        terms = []
        for _ in range(rng.randint(1, 4)):
            deg = rng.randint(0, 2)
            mono = tuple((random_form(rng, 2, 1, 2), 1) for _ in range(deg))
            lexp = AffineForm((rng.choice((-2, -1, -1, -1, 0, 1)), rng.randint(-1, 1)), 0)
            cell = None
            if rng.random() < 0.4:
                cell = PresCell.make(2, [((0, rng.choice((1, -1))), rng.randint(-7, 7))])
            terms.append(Term.make(random_coeff(rng), mono, lexp, cell))
        out.append(ConFun.make(amb, terms))
    return out


def fubini_corpus(n: int, seed: int = 4) -> List[ConFun]:
    """Integrable functions on N^2: every exponent has both slopes <= -1."""
    rng = _rng(seed)
    out = []
    for _ in range(n):
        ineqs = [((1, 0), 0), ((0, 1), 0)]
        if rng.random() < 0.4:
            ineqs.append(((rng.choice((1, -1)), rng.choice((1, -1))), rng.randint(0, 3)))
        amb = PresSet.of([PresCell.make(2, ineqs)])
        terms = []
        for _ in range(rng.randint(1, 3)):
            mono = tuple((random_form(rng, 2, 1, 2), 1) for _ in range(rng.randint(0, 2)))
            lexp = AffineForm((rng.randint(-2, -1), rng.randint(-2, -1)), rng.randint(-1, 1))
            cell = None
            if rng.random() < 0.3:
                cell = PresCell.make(2, [((rng.choice((1, -1)), rng.choice((1, -1, 0))), rng.randint(0, 3))])
            terms.append(Term.make(random_coeff(rng), mono, lexp, cell))
        out.append(ConFun.make(amb, terms))
    return out


def projection_corpus(n: int, seed: int = 5) -> List[Tuple[ConFun, List[AffineForm], int]]:
    """(f on N x Z^s, affine gamma: Z^s' -> Z^s as forms, s') with f integrable along axis 0."""
    rng = _rng(seed)
    out = []
    for i in range(n):
        s = 1 + i % 2
        dim = 1 + s
        ineqs = [((1,) + (0,) * s, 0)]
        for j in range(s):
            e = [0] * dim
            e[1 + j] = 1
            ineqs.append((tuple(e), 3))
            e[1 + j] = -1
            ineqs.append((tuple(e), 3))
        if rng.random() < 0.5:
            c = (-1,) + tuple(rng.randint(0, 1) for _ in range(s))
            ineqs.append((c, rng.randint(2, 5)))
        amb = PresSet.of([PresCell.make(dim, ineqs)])
        terms = []
        for _ in range(rng.randint(1, 3)):
            mono = tuple((random_form(rng, dim, 1, 2), 1) for _ in range(rng.randint(0, 2)))
            lexp = AffineForm((rng.randint(-2, -1),) + tuple(rng.randint(-1, 1) for _ in range(s)), 0)
            terms.append(Term.make(random_coeff(rng), mono, lexp))
        f = ConFun.make(amb, terms)
        s2 = rng.randint(1, 2)
        gamma = [AffineForm(tuple(rng.randint(-1, 1) for _ in range(s2)), rng.randint(-1, 1)) for _ in range(s)]
        out.append((f, gamma, s2))
    return out


GOLDEN = [
    "{ (x, y) in Z^2 : x >= 0 and x <= y }",
    "{ x in Z^1 : x = 1 mod 2 }",
    "{ (x, y) in Z^2 : not (x > 2 or y < -1) }",
    "{ () in Z^0 : true }",
    "{ (x, y, z) in Z^3 : 0 <= x <= y <= z and x + z = 0 mod 3 }",
    "x^2 * L^(-x) on { x in Z^1 : x >= 0 }",
    "L^(x+1) - L*L^x on { x in Z^1 : x >= 0 }",
    "x * L^(-2*x) on { x in Z^1 : x >= 0 }",
    "L^(-x-y) on { (x, y) in Z^2 : x >= 0 and y >= 0 }",
    "(x - 1)/2 * [Y] + 3*x*y*ind(x > y) on { (x, y) in Z^2 : 0 <= x <= 5 and x = 1 mod 2 }",
    "-(x - y) * (2*x + 2) * L^-y on { (x, y) in Z^2 : y >= x }",
    "1/(1 - L^2) * x^5 * L^(-x) on { x in Z^1 : x >= 0 }",
    "L/(L^1-1)",
    "(L^2 + L)/((L^1-1)^3)",
    "1/(L^2 * (L^1-1))",
    "L^-2 + [Y]^2 - 3",
    "ind(x = 0 mod 2) - ind(x >= 0) on { x in Z^1 }",
]
