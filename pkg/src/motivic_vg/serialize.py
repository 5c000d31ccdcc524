"""Text and structured (JSON lines) encodings of every value type.

Structured records look like ``{"format": "motivic-vg/1", "kind": ..., "value": ...}``
with sorted keys and no insignificant whitespace, one record per line, so
equal values always serialize to identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Iterable, List, Optional

from .coeffring import MotConst, from_text, to_text
from .confun import CanonicalForm, CanonicalPiece, ConFun, Term
from .dsl import build_set, default_names, function_text, parse_dsl, parse_function, parse_set, set_text
from .errors import DSLError
from .presburger import AffineForm, PresCell, PresSet
from .rectilinear import RectPiece
from .specialize import SpecReport

FORMAT = "motivic-vg/1"


# --- structured encoding ------------------------------------------------------


def _frac(x: Optional[Fraction]):
    return None if x is None else f"{x.numerator}/{x.denominator}"


def _unfrac(s) -> Optional[Fraction]:
    return None if s is None else Fraction(s)


def enc_motconst(a: MotConst):
    return {"num": [[[list(f) for f in m], k, c] for m, k, c in a.num], "den": [list(d) for d in a.den]}


def dec_motconst(d) -> MotConst:
    num = tuple((tuple((n, e) for n, e in m), k, c) for m, k, c in d["num"])
    return MotConst(num, tuple((x, m) for x, m in d["den"]))


def enc_form(f: AffineForm):
    return [list(f.coeffs), f.constant, f.den]


def dec_form(d) -> AffineForm:
    return AffineForm(tuple(d[0]), d[1], d[2])


def enc_cell(c: PresCell):
    return {"dim": c.dim, "ineqs": [[list(v), k] for v, k in c.ineqs],
            "congs": [[list(v), r, m] for v, r, m in c.congs], "empty": c.empty}


def dec_cell(d) -> PresCell:
    return PresCell(d["dim"], tuple((tuple(v), k) for v, k in d["ineqs"]),
                    tuple((tuple(v), r, m) for v, r, m in d["congs"]), d["empty"])


def enc_set(S: PresSet):
    return {"dim": S.dim, "cells": [enc_cell(c) for c in S.cells]}


def dec_set(d) -> PresSet:
    return PresSet(d["dim"], tuple(dec_cell(c) for c in d["cells"]))


def enc_term(t: Term):
    return {"coeff": enc_motconst(t.coeff), "monomial": [[enc_form(f), p] for f, p in t.monomial],
            "lexp": enc_form(t.lexp), "cell": None if t.cell is None else enc_cell(t.cell)}


def dec_term(d) -> Term:
    return Term(dec_motconst(d["coeff"]), tuple((dec_form(f), p) for f, p in d["monomial"]),
                dec_form(d["lexp"]), None if d["cell"] is None else dec_cell(d["cell"]))


def enc_confun(f: ConFun):
    return {"ambient": enc_set(f.ambient), "terms": [enc_term(t) for t in f.terms],
            "names": list(f.names) if f.names else None}


def dec_confun(d) -> ConFun:
    return ConFun(dec_set(d["ambient"]), tuple(dec_term(t) for t in d["terms"]),
                  tuple(d["names"]) if d["names"] else None)


def enc_piece(p: RectPiece):
    return {"M": [list(r) for r in p.M], "base": enc_cell(p.base), "nparams": p.nparams,
            "points": None if p.points is None else [list(w) for w in p.points]}


def dec_piece(d) -> RectPiece:
    return RectPiece(tuple(tuple(r) for r in d["M"]), dec_cell(d["base"]), d["nparams"],
                     None if d["points"] is None else tuple(tuple(w) for w in d["points"]))


def _enc_coef(coef):
    if isinstance(coef, ConFun):
        return {"function": enc_confun(coef)}
    return {"points": [[list(w), enc_motconst(v)] for w, v in coef]}


def _dec_coef(d):
    if "function" in d:
        return dec_confun(d["function"])
    return tuple((tuple(w), dec_motconst(v)) for w, v in d["points"])


def enc_canonical(cf: CanonicalForm):
    return {"dim": cf.dim, "nparams": cf.nparams,
            "pieces": [{"piece": enc_piece(cp.piece),
                        "table": [{"a": list(a), "b": list(b), "coef": _enc_coef(c)} for a, b, c in cp.table]}
                       for cp in cf.pieces]}


def dec_canonical(d) -> CanonicalForm:
    pieces = tuple(CanonicalPiece(dec_piece(p["piece"]),
                                  tuple((tuple(e["a"]), tuple(e["b"]), _dec_coef(e["coef"])) for e in p["table"]))
                   for p in d["pieces"])
    return CanonicalForm(d["dim"], d["nparams"], pieces)


def enc_report(r: SpecReport):
    return {"function_id": r.function_id, "q": _frac(r.q), "symbolic_value": _frac(r.symbolic_value),
            "partial_sum": _frac(r.partial_sum), "truncation_n": r.truncation_n,
            "tail_bound": _frac(r.tail_bound), "verdict": r.verdict, "note": r.note}


def dec_report(d) -> SpecReport:
    return SpecReport(d["function_id"], _unfrac(d["q"]), _unfrac(d["symbolic_value"]), _unfrac(d["partial_sum"]),
                      d["truncation_n"], _unfrac(d["tail_bound"]), d["verdict"], d.get("note", ""))


_KINDS = [
    ("motconst", MotConst, enc_motconst, dec_motconst),
    ("presset", PresSet, enc_set, dec_set),
    ("confun", ConFun, enc_confun, dec_confun),
    ("canonical", CanonicalForm, enc_canonical, dec_canonical),
    ("report", SpecReport, enc_report, dec_report),
]


def record(kind: str, value: Any) -> str:
    """One structured line for an arbitrary JSON-able payload."""
    return json.dumps({"format": FORMAT, "kind": kind, "value": value}, sort_keys=True, separators=(",", ":"))


def to_structured(value) -> str:
    for kind, cls, enc, _ in _KINDS:
        if isinstance(value, cls):
            return record(kind, enc(value))
    raise TypeError(f"cannot serialize {type(value).__name__}")


def from_structured(line: str):
    obj = json.loads(line)
    if obj.get("format") != FORMAT:
        raise ValueError(f"unsupported record format {obj.get('format')!r}")
    for kind, _, _, dec in _KINDS:
        if obj["kind"] == kind:
            return dec(obj["value"])
    raise ValueError(f"unknown record kind {obj['kind']!r}")


# --- text encoding --------------------------------------------------------------


def _cell_set_text(cell: PresCell) -> str:
    return set_text(PresSet(cell.dim, (cell,)))


def canonical_text(cf: CanonicalForm) -> str:
    lines = [f"canonical dim={cf.dim} params={cf.nparams}"]
    for cp in cf.pieces:
        p = cp.piece
        pts = "none" if p.points is None else json.dumps([list(w) for w in p.points], separators=(",", ":"))
        M = json.dumps([list(r) for r in p.M], separators=(",", ":"))
        lines.append(f"piece M={M} params={p.nparams} points={pts} base={_cell_set_text(p.base)}")
        for a, b, coef in cp.table:
            lines.append(f"  entry a={json.dumps(list(a), separators=(',', ':'))} "
                         f"b={json.dumps(list(b), separators=(',', ':'))}")
            if isinstance(coef, ConFun):
                lines.append(f"    function: {function_text(coef)}")
            else:
                for w, v in coef:
                    lines.append(f"    at {json.dumps(list(w), separators=(',', ':'))}: {to_text(v)}")
    return "\n".join(lines)


_PIECE_RE = re.compile(r"^piece M=(\S+) params=(\d+) points=(\S+) base=(.*)$")
_ENTRY_RE = re.compile(r"^entry a=(\S+) b=(\S+)$")
_AT_RE = re.compile(r"^at (\S+): (.*)$")


def _base_cell(text: str, dim: int) -> PresCell:
    S = parse_set(text)
    if not S.cells:
        return PresCell.false(dim)
    if len(S.cells) != 1:
        raise DSLError("piece base must be a single cell")
    return S.cells[0]


def parse_canonical_text(text: str) -> CanonicalForm:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    m = re.match(r"^canonical dim=(\d+) params=(\d+)$", lines[0])
    if not m:
        raise DSLError("expected 'canonical dim=D params=S'", (1, 1))
    dim, nparams = int(m.group(1)), int(m.group(2))
    pieces: List[list] = []
    for i, ln in enumerate(lines[1:], start=2):
        pm = _PIECE_RE.match(ln)
        if pm:
            M = tuple(tuple(r) for r in json.loads(pm.group(1)))
            pts = None if pm.group(3) == "none" else tuple(tuple(w) for w in json.loads(pm.group(3)))
            piece = RectPiece(M, _base_cell(pm.group(4), dim), int(pm.group(2)), pts)
            pieces.append([piece, []])
            continue
        em = _ENTRY_RE.match(ln)
        if em:
            pieces[-1][1].append([tuple(json.loads(em.group(1))), tuple(json.loads(em.group(2))), []])
            continue
        am = _AT_RE.match(ln)
        if am:
            pieces[-1][1][-1][2].append((tuple(json.loads(am.group(1))), from_text(am.group(2))))
            continue
        if ln.startswith("function: "):
            pieces[-1][1][-1][2] = parse_function(ln[len("function: "):])
            continue
        raise DSLError(f"unrecognized line {ln!r}", (i, 1))
    out = []
    for piece, table in pieces:
        entries = tuple((a, b, c if isinstance(c, ConFun) else tuple(c)) for a, b, c in table)
        out.append(CanonicalPiece(piece, entries))
    return CanonicalForm(dim, nparams, tuple(out))


def _fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def report_text(r: SpecReport) -> str:
    return (f"report id={json.dumps(r.function_id)} q={_fmt(r.q)} symbolic={_fmt(r.symbolic_value)} "
            f"partial={_fmt(r.partial_sum)} N={_fmt(r.truncation_n)} tail={_fmt(r.tail_bound)} "
            f"verdict={r.verdict} note={json.dumps(r.note)}")


_FIELD_RE = re.compile(r'(\w+)=("(?:[^"\\]|\\.)*"|\S+)')


def parse_report_text(text: str) -> SpecReport:
    if not text.startswith("report "):
        raise DSLError("expected a report line", (1, 1))
    f = dict(_FIELD_RE.findall(text))

    def rat(key):
        return None if f[key] == "none" else Fraction(f[key])

    return SpecReport(json.loads(f["id"]), rat("q"), rat("symbolic"), rat("partial"),
                      None if f["N"] == "none" else int(f["N"]), rat("tail"), f["verdict"],
                      json.loads(f["note"]))


def to_text_format(value) -> str:
    if isinstance(value, MotConst):
        return to_text(value)
    if isinstance(value, PresSet):
        return set_text(value)
    if isinstance(value, ConFun):
        return function_text(value)
    if isinstance(value, CanonicalForm):
        return canonical_text(value)
    if isinstance(value, SpecReport):
        return report_text(value)
    raise TypeError(f"cannot render {type(value).__name__}")


def from_text_format(text: str):
    s = text.strip()
    if s.startswith("canonical "):
        return parse_canonical_text(s)
    if s.startswith("report "):
        return parse_report_text(s)
    node = parse_dsl(s)
    if node.kind == "set":
        return build_set(node)[0]
    from .dsl import build
    return build(node)


# --- public entry points ----------------------------------------------------------


def serialize(value, format: str = "structured") -> bytes:
    if format == "structured":
        return (to_structured(value) + "\n").encode()
    if format == "text":
        return (to_text_format(value) + "\n").encode()
    raise ValueError(f"unknown format {format!r}")


def deserialize(data: bytes, format: str = "structured"):
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    if format == "structured":
        return from_structured(text.strip())
    if format == "text":
        return from_text_format(text)
    raise ValueError(f"unknown format {format!r}")


def serialize_many(values: Iterable, format: str = "structured") -> bytes:
    return b"".join(serialize(v, format) for v in values)
