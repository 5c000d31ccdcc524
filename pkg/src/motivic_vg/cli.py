"""Command-line front end: ``motivic-vg VERB ...``.

Exit status is 0 on success or a "true" decision, 1 on a "false" decision
(null, eq, integrable, crosscheck, selftest) and 2 on any error.
"""

from __future__ import annotations

import argparse
import io
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffring import MotConst, mc_eval_q, to_text
from .confun import ConFun, cf_canonicalize, cf_eval, cf_witness_nonnull, default_witness_bound
from .dsl import _affine, build, default_names, parse_dsl, set_text
from .errors import DSLError, MotivicError, NotIntegrableError
from .integrate import Projection, integrate_relative, is_integrable_fiberwise
from .presburger import PresSet
from .rectilinear import rectilinearize, validate_pieces
from .serialize import enc_motconst, enc_piece, record, report_text, to_structured, to_text_format
from .specialize import crosscheck, spec_q

VERBS = ("canon", "eval", "null", "eq", "integrable", "integrate", "rectilinearize",
         "specialize", "crosscheck", "selftest")


class UsageError(MotivicError):
    pass


# --- argument helpers ---------------------------------------------------------


def parse_rational(text: str) -> Fraction:
    """Rational literal such as ``5/2`` or ``1/10^9``."""
    node = parse_dsl(text)
    try:
        form = _affine(node, {}, 0)
    except Exception:
        raise UsageError(f"not a rational number: {text!r}") from None
    return form.rational_constant()


def parse_q_list(text: str) -> List[Fraction]:
    return [parse_rational(part) for part in text.split(",") if part.strip()]


def parse_point(text: str) -> Tuple[int, ...]:
    text = text.strip().strip("()")
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"not an integer point: {text!r}") from None


def parse_symbols(items: Optional[Sequence[str]]) -> Dict[str, Fraction]:
    out: Dict[str, Fraction] = {}
    for item in items or ():
        name, _, val = item.partition("=")
        name = name.strip().strip("[]")
        if not name or not val:
            raise UsageError(f"expected NAME=RATIONAL, got {item!r}")
        out[name] = parse_rational(val)
    return out


def _function(text: str) -> ConFun:
    value = build(parse_dsl(text))
    if not isinstance(value, ConFun):
        raise UsageError("expected a function 'expr on { ... }'")
    return value


def _names(f: ConFun) -> Tuple[str, ...]:
    return f.names or default_names(f.dim)


def _projection(f: ConFun, fibers: Optional[str]) -> Projection:
    if fibers is None:
        return Projection(f.dim, tuple(range(f.dim)))
    names = _names(f)
    axes = []
    for part in fibers.split(","):
        part = part.strip()
        if not part:
            continue
        if part in names:
            axes.append(names.index(part))
        elif part.isdigit() and int(part) < f.dim:
            axes.append(int(part))
        else:
            raise UsageError(f"unknown fiber coordinate {part!r}; coordinates are {', '.join(names)}")
    return Projection(f.dim, tuple(axes))


def _tuple_text(v: Sequence[int]) -> str:
    return str(v[0]) if len(v) == 1 else "(" + ",".join(str(x) for x in v) + ")"


def _point_text(p: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"


# --- verbs ---------------------------------------------------------------------


class Out:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.buf = io.StringIO()

    def text(self, line: str):
        if self.fmt == "text":
            self.buf.write(line + "\n")

    def rec(self, line: str):
        if self.fmt == "structured":
            self.buf.write(line + "\n")


def cmd_canon(a, out: Out) -> int:
    f = _function(a.value)
    cf = cf_canonicalize(f, a.params)
    out.text(to_text_format(cf))
    out.rec(to_structured(cf))
    return 0


def cmd_eval(a, out: Out) -> int:
    value = build(parse_dsl(a.value))
    if isinstance(value, ConFun):
        if a.at is None:
            raise UsageError("eval of a function needs --at POINT")
        p = parse_point(a.at)
        v = cf_eval(value, p)
        out.text(to_text(v))
        out.rec(record("value", {"point": list(p), "value": enc_motconst(v)}))
        return 0
    if isinstance(value, MotConst):
        out.text(to_text(value))
        out.rec(to_structured(value))
        return 0
    raise UsageError("eval expects a function or a constant")


def cmd_null(a, out: Out) -> int:
    f = _function(a.value)
    cf = cf_canonicalize(f)
    if cf.is_empty():
        out.text("NULL")
        out.rec(record("decision", {"verb": "null", "result": True}))
        return 0
    bound = a.witness_bound if a.witness_bound is not None else default_witness_bound(f)
    p = cf_witness_nonnull(f, bound)
    if p is None:
        out.text(f"NONNULL (no witness within radius {bound})")
        witness = None
    else:
        v = cf_eval(f, p)
        out.text(f"NONNULL witness {_point_text(p)} value {to_text(v)}")
        witness = {"point": list(p), "value": enc_motconst(v)}
    out.rec(record("decision", {"verb": "null", "result": False, "witness": witness}))
    return 1


def cmd_eq(a, out: Out) -> int:
    f, g = _function(a.value), _function(a.other)
    if f.ambient != g.ambient:
        raise UsageError("the two functions have different domains")
    diff = f - g
    if cf_canonicalize(diff).is_empty():
        out.text("EQUAL")
        out.rec(record("decision", {"verb": "eq", "result": True}))
        return 0
    bound = a.witness_bound if a.witness_bound is not None else default_witness_bound(diff)
    p = cf_witness_nonnull(diff, bound)
    out.text("DIFFERENT" + (f" at {_point_text(p)}" if p is not None else ""))
    out.rec(record("decision", {"verb": "eq", "result": False, "witness": list(p) if p else None}))
    return 1


def _violation_lines(violations) -> List[str]:
    return [f"piece {i}: (a,b)=({_tuple_text(a)},{_tuple_text(b)})" for i, a, b in violations]


def cmd_integrable(a, out: Out) -> int:
    f = _function(a.value)
    rep = is_integrable_fiberwise(f, _projection(f, a.fibers))
    viol = [{"piece": i, "a": list(x), "b": list(y)} for i, x, y in rep.violations]
    out.rec(record("decision", {"verb": "integrable", "result": rep.integrable, "violations": viol}))
    if rep.integrable:
        out.text("INTEGRABLE")
        return 0
    out.text("NOT INTEGRABLE")
    for line in _violation_lines(rep.violations):
        out.text(line)
    return 1


def cmd_integrate(a, out: Out) -> int:
    f = _function(a.value)
    proj = _projection(f, a.fibers)
    try:
        result = integrate_relative(f, proj)
    except NotIntegrableError as exc:
        raise MotivicError(f"{exc}; " + "; ".join(_violation_lines(exc.violations))) from None
    out.text(to_text_format(result))
    out.rec(to_structured(result))
    return 0


def cmd_rectilinearize(a, out: Out) -> int:
    value = build(parse_dsl(a.value))
    if not isinstance(value, PresSet):
        raise UsageError("rectilinearize expects a set '{ ... }'")
    pieces = rectilinearize(value, a.params)
    if a.box > 0:
        validate_pieces(value, pieces, a.box)
    names = default_names(value.dim)
    for i, p in enumerate(pieces):
        M = "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in p.M) + "]"
        base = set_text(PresSet(p.base.dim, (p.base,)), names)
        pts = "" if p.points is None else " points " + " ".join(_point_text(w) for w in p.points)
        out.text(f"piece {i}: r={p.r} M={M} base {base}{pts}")
    if a.box > 0:
        out.text(f"validated on [-{a.box}, {a.box}]^{value.dim}")
    out.rec(record("pieces", {"pieces": [enc_piece(p) for p in pieces], "validated_radius": a.box}))
    return 0


def cmd_specialize(a, out: Out) -> int:
    value = build(parse_dsl(a.value))
    symbols = parse_symbols(a.sym)
    for q in parse_q_list(a.q):
        if isinstance(value, MotConst):
            v = mc_eval_q(value, q, symbols)
        elif isinstance(value, ConFun):
            if a.at is None:
                raise UsageError("specialize of a function needs --at POINT")
            v = spec_q(value, q, symbols)(parse_point(a.at))
        else:
            raise UsageError("specialize expects a function or a constant")
        out.text(f"q={q}: {v}")
        out.rec(record("specialization", {"q": str(q), "value": str(v)}))
    return 0


def cmd_crosscheck(a, out: Out) -> int:
    f = _function(a.value)
    proj = _projection(f, a.fibers)
    base = parse_point(a.at) if a.at is not None else None
    if base is None and proj.base_axes:
        base = (0,) * len(proj.base_axes)
    reports = crosscheck(f, proj, parse_q_list(a.q), parse_rational(a.epsilon), base,
                         function_id=a.id, symbols=parse_symbols(a.sym))
    out.text(f"{'q':>8} {'symbolic':>24} {'partial':>24} {'N':>5} {'tail':>12} verdict")
    for r in reports:
        sym = "-" if r.symbolic_value is None else _short(r.symbolic_value)
        par = "-" if r.partial_sum is None else _short(r.partial_sum)
        tail = "-" if r.tail_bound is None else f"{float(r.tail_bound):.3e}"
        n = "-" if r.truncation_n is None else str(r.truncation_n)
        line = f"{str(r.q):>8} {sym:>24} {par:>24} {n:>5} {tail:>12} {r.verdict}"
        if r.verdict == "error":
            line += f" ({r.note})"
        out.text(line)
        out.rec(to_structured(r))
    return 0 if reports and all(r.passed for r in reports) else 1


def _short(x: Fraction) -> str:
    s = str(x)
    return s if len(s) <= 24 else f"{float(x):.17g}"


def cmd_selftest(a, out: Out) -> int:
    from .selftest import run_selftest
    results = run_selftest()
    for name, ok, detail in results:
        out.text(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""))
        out.rec(record("selftest", {"check": name, "passed": ok, "detail": detail}))
    return 0 if all(ok for _, ok, _ in results) else 1


HANDLERS = {
    "canon": cmd_canon, "eval": cmd_eval, "null": cmd_null, "eq": cmd_eq,
    "integrable": cmd_integrable, "integrate": cmd_integrate, "rectilinearize": cmd_rectilinearize,
    "specialize": cmd_specialize, "crosscheck": cmd_crosscheck, "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--box", type=int, default=15, help="validation box radius (default 15)")
    common.add_argument("--q", default="2,3,5/2", help="comma-separated rationals > 1 (default 2,3,5/2)")
    common.add_argument("--epsilon", default="1/10^9", help="certified tail bound (default 1/10^9)")
    common.add_argument("--witness-bound", type=int, default=None, help="witness search radius")
    common.add_argument("--sym", action="append", metavar="NAME=RAT", help="value of a class symbol")

    p = _Parser(prog="motivic-vg", description="Constructible Presburger functions and their integrals.")
    sub = p.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    helps = {
        "canon": "canonical form of a function", "eval": "evaluate a function at a point or a constant",
        "null": "decide whether a function is zero", "eq": "decide whether two functions are equal",
        "integrable": "integrability along fiber coordinates", "integrate": "fiberwise or absolute integral",
        "rectilinearize": "rectilinear pieces of a set", "specialize": "values at L = q",
        "crosscheck": "symbolic integral vs certified brute-force sums", "selftest": "built-in checks",
    }
    for verb in VERBS:
        sp = sub.add_parser(verb, parents=[common], help=helps[verb], description=helps[verb])
        if verb != "selftest":
            sp.add_argument("value", help="formula in the DSL")
        if verb == "eq":
            sp.add_argument("other", help="second function")
        if verb in ("canon", "rectilinearize"):
            sp.add_argument("--params", type=int, default=0, help="trailing parameter coordinates")
        if verb in ("integrable", "integrate", "crosscheck"):
            sp.add_argument("--fibers", default=None, help="fiber coordinates (default: all)")
        if verb in ("eval", "specialize", "crosscheck"):
            sp.add_argument("--at", default=None, help="point, e.g. 1,2 (base point for crosscheck)")
        if verb == "crosscheck":
            sp.add_argument("--id", default="f", help="function id used in reports")
    return p


def run(argv: Sequence[str]) -> Tuple[int, str, str]:
    """Run one command; returns (exit code, stdout, stderr)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if args.verb is None:
            raise UsageError(parser.format_help())
        out = Out(args.format)
        code = HANDLERS[args.verb](args, out)
        return code, out.buf.getvalue(), ""
    except DSLError as exc:
        return 2, "", f"error: {exc}\n"
    except UsageError as exc:
        return 2, "", f"usage error: {exc}\n"
    except MotivicError as exc:
        return 2, "", f"error: {type(exc).__name__}: {exc}\n"
    except (ValueError, ZeroDivisionError) as exc:
        return 2, "", f"error: {exc}\n"


def run_command(verb: str, args: Sequence[str]) -> Tuple[int, str]:
    code, stdout, stderr = run([verb, *args])
    return code, stdout + stderr


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, stdout, stderr = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
