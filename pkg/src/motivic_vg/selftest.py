"""A quick built-in battery run by ``motivic-vg selftest``."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, List, Tuple

from .coeffring import mc_eq, mc_eval_q, to_text
from .confun import cf_eval, cf_is_null
from .corpus import FIXED_SETS, GOLDEN, fubini_corpus, null_corpus
from .dsl import parse_dsl, parse_function, parse_set, print_ast
from .integrate import Projection, integrate_absolute, integrate_relative, is_integrable_fiberwise, sum_closed_univariate
from .rectilinear import rectilinearize, validate_pieces
from .serialize import deserialize, serialize

Result = Tuple[str, bool, str]


def _anchors() -> str:
    want = {(0, -1, 2): 2, (1, -1, 2): 2, (2, -1, 2): 6, (1, -1, 4): Fraction(4, 9)}
    for (a, b, q), v in want.items():
        got = mc_eval_q(sum_closed_univariate(a, b), q)
        if got != v:
            return f"sum n^{a} L^({b}n) at q={q}: {got} != {v}"
    return ""


def _examples() -> str:
    if not cf_is_null(parse_function("L^(x+1) - L*L^x on {x in Z^1: x>=0}")):
        return "L^(x+1) - L*L^x is not null"
    rep = is_integrable_fiberwise(parse_function("1 on {x in Z^1: x>=0}"), Projection(1, (0,)))
    if rep.integrable or rep.violations[0][1:] != ((0,), (0,)):
        return f"1 on N: {rep}"
    val = integrate_absolute(parse_function("x*L^(-2*x) on {x in Z^1: x>=0}"))
    if to_text(val) != "L^2/((L^2-1)^2)":
        return f"x*L^(-2x) on N integrates to {to_text(val)}"
    return ""


def _rectilinear() -> str:
    for text in FIXED_SETS:
        X = parse_set(text)
        validate_pieces(X, rectilinearize(X), 8)
    return ""


def _fubini() -> str:
    for i, f in enumerate(fubini_corpus(5)):
        a = integrate_relative(integrate_relative(f, Projection(2, (0,))), Projection(1, (0,)))
        b = integrate_relative(integrate_relative(f, Projection(2, (1,))), Projection(1, (0,)))
        if not mc_eq(a, b):
            return f"orders disagree on corpus function {i}"
    return ""


def _nullity() -> str:
    for i, f in enumerate(null_corpus(6, dims=(1, 2))):
        if not cf_is_null(f):
            return f"null corpus function {i} declared non-null"
        for p in itertools.product(range(-4, 5), repeat=f.dim):
            if f.ambient.contains(p) and not cf_eval(f, p).is_zero():
                return f"null corpus function {i} is non-zero at {p}"
    return ""


def _round_trips() -> str:
    for text in GOLDEN:
        node = parse_dsl(text)
        if parse_dsl(print_ast(node)) != node:
            return f"print/parse changed {text!r}"
        value = deserialize(text.encode(), "text")
        if deserialize(serialize(value)) != value:
            return f"structured round trip changed {text!r}"
        if deserialize(serialize(value, "text"), "text") != value:
            return f"text round trip changed {text!r}"
    return ""


CHECKS: List[Tuple[str, Callable[[], str]]] = [
    ("closed-form anchors", _anchors),
    ("documented examples", _examples),
    ("rectilinearization", _rectilinear),
    ("fubini", _fubini),
    ("nullity", _nullity),
    ("round trips", _round_trips),
]


def run_selftest() -> List[Result]:
    results = []
    for name, check in CHECKS:
        try:
            detail = check()
        except Exception as exc:  # a crash is a failure of that check, not of the battery
            detail = f"{type(exc).__name__}: {exc}"
        results.append((name, not detail, detail))
    return results
