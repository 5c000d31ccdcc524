"""Formula language for sets, ring elements and constructible functions.

Grammar (ASCII)::

    top      := set | expr ['on' set]
    set      := '{' tuple 'in' 'Z' '^' INT [':' bool] '}'
    tuple    := VAR | '(' [VAR (',' VAR)*] ')'
    bool     := conj ('or' conj)*
    conj     := neg ('and' neg)*
    neg      := 'not' neg | atom
    atom     := 'true' | 'false' | expr (REL expr)+ | expr '=' expr 'mod' INT | '(' bool ')'
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := INT power | primary ['^' exponent]
    exponent := '-' exponent | primary
    primary  := INT | VAR | 'L' | '[' NAME ']' | 'ind' '(' bool ')' | '(' expr ')'

``REL`` is one of ``<= >= < > =``.  Variables are one letter with an
optional index (``x``, ``y2``, ``z_10``); ``L``, ``Z`` and the keywords are
reserved.  ``[Y]`` is a class symbol.  Division is allowed by unit-shaped
constants and, for linear forms, by integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .coeffring import LL, ONE, MotConst
from .confun import ConFun, Term
from .errors import DSLError, MotivicError, NotAUnitError
from .presburger import AffineForm, PresCell, PresSet

Span = Tuple[int, int]

KEYWORDS = {"in", "and", "or", "not", "mod", "on", "ind", "true", "false", "L", "Z"}
RELATIONS = ("<=", ">=", "<", ">", "=")
_VAR_RE = re.compile(r"^[A-Za-z](_?[0-9]+)?$")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SYMBOLS = ("<=", ">=", "<", ">", "=", "{", "}", "(", ")", ",", ":", "^", "+", "-", "*", "/")

DEFAULT_NAMES = ("x", "y", "z", "w", "u", "v")


def default_names(dim: int) -> Tuple[str, ...]:
    if dim <= len(DEFAULT_NAMES):
        return DEFAULT_NAMES[:dim]
    return tuple(f"x{i}" for i in range(dim))


# --- lexer ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str   # INT, VAR, CLASS, KW, OP, EOF
    value: str
    span: Span

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        return repr(self.value) if self.kind in ("KW", "OP") else f"{self.kind.lower()} {self.value!r}"


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        span = (line, col)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], span))
        elif ch == "[":
            m = _WORD_RE.match(text, i + 1)
            if not m or m.end() >= n or text[m.end()] != "]":
                raise DSLError("malformed class symbol", span, ("[NAME]",))
            j = m.end() + 1
            tokens.append(Token("CLASS", m.group(0), span))
        elif ch.isalpha() or ch == "_":
            m = _WORD_RE.match(text, i)
            word = m.group(0)
            j = m.end()
            if word in KEYWORDS:
                tokens.append(Token("KW", word, span))
            elif _VAR_RE.match(word):
                tokens.append(Token("VAR", word, span))
            else:
                raise DSLError(f"unknown word {word!r}; variables are one letter with an optional index", span)
        else:
            sym = next((s for s in _SYMBOLS if text.startswith(s, i)), None)
            if sym is None:
                raise DSLError(f"unexpected character {ch!r}", span)
            j = i + len(sym)
            tokens.append(Token("OP", sym, span))
        col += j - i
        i = j
    tokens.append(Token("EOF", "", (line, col)))
    return tokens


# --- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    """AST node; ``span`` (line, column of the first token) is ignored by equality."""

    kind: str
    value: object = None
    children: Tuple["Node", ...] = ()
    span: Span = field(default=(0, 0), compare=False)


# --- parser -----------------------------------------------------------------


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (value is None or t.value == value)

    def fail(self, expected: Sequence[str]):
        raise DSLError(f"unexpected {self.tok.describe()}", self.tok.span, expected)

    def take(self, kind: str, value: Optional[str] = None) -> Token:
        if not self.at(kind, value):
            self.fail([repr(value) if value else kind.lower()])
        t = self.tok
        self.pos += 1
        return t

    # top level

    def parse_top(self) -> Node:
        if self.at("OP", "{"):
            node = self.parse_set()
        else:
            expr = self.parse_expr()
            if self.at("KW", "on"):
                self.pos += 1
                node = Node("fun", None, (expr, self.parse_set()), expr.span)
            else:
                node = expr
        if not self.at("EOF"):
            self.fail(["end of input", "'on'", "operator"])
        return node

    def parse_set(self) -> Node:
        start = self.take("OP", "{").span
        names: List[str] = []
        if self.at("OP", "("):
            self.pos += 1
            if not self.at("OP", ")"):
                names.append(self.take("VAR").value)
                while self.at("OP", ","):
                    self.pos += 1
                    names.append(self.take("VAR").value)
            self.take("OP", ")")
        elif self.at("VAR"):
            names.append(self.take("VAR").value)
        else:
            self.fail(["variable", "'('"])
        self.take("KW", "in")
        self.take("KW", "Z")
        self.take("OP", "^")
        dim_tok = self.take("INT")
        dim = int(dim_tok.value)
        if dim != len(names):
            raise DSLError(f"tuple has {len(names)} variables but the space is Z^{dim}", dim_tok.span)
        if len(set(names)) != len(names):
            raise DSLError("repeated variable in tuple", start)
        children: Tuple[Node, ...] = ()
        if self.at("OP", ":"):
            self.pos += 1
            children = (self.parse_bool(),)
        if not self.at("OP", "}"):
            self.fail(["'}'", "'and'", "'or'"] if children else ["':'", "'}'"])
        self.pos += 1
        return Node("set", (tuple(names), dim), children, start)

    def parse_bool(self) -> Node:
        first = self.parse_conj()
        parts = [first]
        while self.at("KW", "or"):
            self.pos += 1
            parts.append(self.parse_conj())
        return first if len(parts) == 1 else Node("or", None, tuple(parts), first.span)

    def parse_conj(self) -> Node:
        first = self.parse_neg()
        parts = [first]
        while self.at("KW", "and"):
            self.pos += 1
            parts.append(self.parse_neg())
        return first if len(parts) == 1 else Node("and", None, tuple(parts), first.span)

    def parse_neg(self) -> Node:
        if self.at("KW", "not"):
            span = self.take("KW").span
            return Node("not", None, (self.parse_neg(),), span)
        return self.parse_atom()

    def parse_atom(self) -> Node:
        if self.at("KW", "true") or self.at("KW", "false"):
            t = self.take("KW")
            return Node(t.value, None, (), t.span)
        if self.at("OP", "("):
            save = self.pos
            try:
                return self.parse_comparison()
            except DSLError as first_err:
                reached = self.pos
                self.pos = save
                try:
                    self.take("OP", "(")
                    inner = self.parse_bool()
                    self.take("OP", ")")
                    return inner
                except DSLError as second_err:
                    if self.pos >= reached:
                        raise second_err
                    raise first_err
        return self.parse_comparison()

    def parse_comparison(self) -> Node:
        first = self.parse_expr()
        exprs = [first]
        ops: List[str] = []
        while self.at("OP") and self.tok.value in RELATIONS:
            ops.append(self.take("OP").value)
            exprs.append(self.parse_expr())
            if ops[-1] == "=" and self.at("KW", "mod"):
                if len(ops) > 1:
                    raise DSLError("a congruence cannot be chained", self.tok.span)
                self.pos += 1
                mtok = self.take("INT")
                modulus = int(mtok.value)
                if modulus < 2:
                    raise DSLError("modulus must be >= 2", mtok.span)
                return Node("cong", modulus, tuple(exprs), first.span)
        if not ops:
            self.fail(list(f"'{r}'" for r in RELATIONS))
        return Node("cmp", tuple(ops), tuple(exprs), first.span)

    def parse_expr(self) -> Node:
        left = self.parse_term()
        while self.at("OP", "+") or self.at("OP", "-"):
            op = self.take("OP").value
            right = self.parse_term()
            left = Node("add", op, (left, right), left.span)
        return left

    def parse_term(self) -> Node:
        left = self.parse_unary()
        while self.at("OP", "*") or self.at("OP", "/"):
            op = self.take("OP").value
            right = self.parse_unary()
            left = Node("mul", op, (left, right), left.span)
        return left

    def parse_unary(self) -> Node:
        if self.at("OP", "-"):
            span = self.take("OP").span
            return Node("neg", None, (self.parse_unary(),), span)
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_primary()
        if base.kind == "int" and (self.at("VAR") or self.at("KW", "L") or self.at("CLASS")):
            # implicit product: 2x, 3L^2
            return Node("mul", "*", (base, self.parse_power()), base.span)
        if self.at("OP", "^"):
            self.pos += 1
            return Node("pow", None, (base, self.parse_exponent()), base.span)
        return base

    def parse_exponent(self) -> Node:
        if self.at("OP", "-"):
            span = self.take("OP").span
            return Node("neg", None, (self.parse_exponent(),), span)
        return self.parse_primary()

    def parse_primary(self) -> Node:
        t = self.tok
        if t.kind == "INT":
            self.pos += 1
            return Node("int", int(t.value), (), t.span)
        if t.kind == "VAR":
            self.pos += 1
            return Node("var", t.value, (), t.span)
        if t.kind == "CLASS":
            self.pos += 1
            return Node("cls", t.value, (), t.span)
        if t.kind == "KW" and t.value == "L":
            self.pos += 1
            return Node("lef", None, (), t.span)
        if t.kind == "KW" and t.value == "ind":
            self.pos += 1
            self.take("OP", "(")
            inner = self.parse_bool()
            self.take("OP", ")")
            return Node("ind", None, (inner,), t.span)
        if t.kind == "OP" and t.value == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.take("OP", ")")
            return inner
        self.fail(["integer", "variable", "'L'", "class symbol", "'ind'", "'('", "'-'"])


def parse_dsl(text: str) -> Node:
    return Parser(text).parse_top()


# --- AST printer ------------------------------------------------------------

_PREC = {"add": 1, "mul": 2, "neg": 3, "pow": 4}


def _prec(node: Node) -> int:
    return _PREC.get(node.kind, 5)


def print_ast(node: Node) -> str:
    k = node.kind
    if k == "set":
        names, dim = node.value
        tup = names[0] if len(names) == 1 else "(" + ", ".join(names) + ")"
        body = f" : {print_ast(node.children[0])}" if node.children else ""
        return f"{{ {tup} in Z^{dim}{body} }}"
    if k == "fun":
        return f"{print_ast(node.children[0])} on {print_ast(node.children[1])}"
    if k in ("or", "and"):
        wrap = ("or",) if k == "or" else ("or", "and")
        parts = [f"({print_ast(c)})" if c.kind in wrap else print_ast(c) for c in node.children]
        return f" {k} ".join(parts)
    if k == "not":
        c = node.children[0]
        inner = print_ast(c)
        return f"not ({inner})" if c.kind in ("or", "and") else f"not {inner}"
    if k in ("true", "false"):
        return k
    if k == "cmp":
        out = print_ast(node.children[0])
        for op, c in zip(node.value, node.children[1:]):
            out += f" {op} {print_ast(c)}"
        return out
    if k == "cong":
        a, b = node.children
        return f"{print_ast(a)} = {print_ast(b)} mod {node.value}"
    if k == "int":
        return str(node.value)
    if k == "var":
        return node.value
    if k == "lef":
        return "L"
    if k == "cls":
        return f"[{node.value}]"
    if k == "ind":
        return f"ind({print_ast(node.children[0])})"
    if k == "neg":
        c = node.children[0]
        inner = print_ast(c)
        return f"-({inner})" if _prec(c) < 3 else f"-{inner}"
    if k == "add":
        a, b = node.children
        rb = print_ast(b)
        return f"{print_ast(a)} {node.value} {'(' + rb + ')' if _prec(b) <= 1 else rb}"
    if k == "mul":
        a, b = node.children
        la = print_ast(a)
        rb = print_ast(b)
        la = f"({la})" if _prec(a) < 2 else la
        rb = f"({rb})" if _prec(b) <= 2 else rb
        return f"{la} {node.value} {rb}"
    if k == "pow":
        base, exp = node.children
        bt = print_ast(base)
        bt = f"({bt})" if _prec(base) < 5 else bt
        return f"{bt}^{_print_exponent(exp)}"
    raise ValueError(f"unknown node kind {k!r}")


def _print_exponent(node: Node) -> str:
    if node.kind == "neg":
        return "-" + _print_exponent(node.children[0])
    text = print_ast(node)
    return text if _prec(node) == 5 else f"({text})"


# --- semantics --------------------------------------------------------------


class _NotAffine(Exception):
    def __init__(self, node: Node, why: str):
        self.node = node
        self.why = why


def _contains(node: Node, kinds) -> bool:
    return node.kind in kinds or any(_contains(c, kinds) for c in node.children)


def _affine(node: Node, env: Dict[str, int], dim: int) -> AffineForm:
    k = node.kind
    if k == "int":
        return AffineForm.const(dim, node.value)
    if k == "var":
        if node.value not in env:
            raise DSLError(f"unknown variable {node.value!r}", node.span)
        return AffineForm.var(dim, env[node.value])
    if k == "neg":
        return -_affine(node.children[0], env, dim)
    if k == "add":
        a = _affine(node.children[0], env, dim)
        b = _affine(node.children[1], env, dim)
        return a + b if node.value == "+" else a - b
    if k == "mul":
        a = _affine(node.children[0], env, dim)
        b = _affine(node.children[1], env, dim)
        if node.value == "/":
            if not b.is_constant():
                raise _NotAffine(node, "division by a non-constant")
            c = b.rational_constant()
            if c == 0:
                raise DSLError("division by zero", node.span)
            return a.scale(1 / c)
        if a.is_constant():
            return b.scale(a.rational_constant())
        if b.is_constant():
            return a.scale(b.rational_constant())
        raise _NotAffine(node, "product of two non-constant forms")
    if k == "pow":
        base = _affine(node.children[0], env, dim)
        exp = _affine(node.children[1], env, dim)
        if base.is_constant() and exp.is_constant():
            e = exp.rational_constant()
            if e.denominator == 1 and e >= 0:
                return AffineForm.const(dim, base.rational_constant() ** int(e))
        raise _NotAffine(node, "power is not a constant")
    raise _NotAffine(node, f"{k} is not allowed in a linear form")


def _affine_or_error(node: Node, env, dim) -> AffineForm:
    try:
        return _affine(node, env, dim)
    except _NotAffine as exc:
        raise DSLError(f"expression is not affine: {exc.why}", exc.node.span) from None


def _constraint_cells(node: Node, env, dim) -> List[PresCell]:
    if node.kind == "cong":
        d = _affine_or_error(node.children[0], env, dim) - _affine_or_error(node.children[1], env, dim)
        return [PresCell.make(dim, (), [(d.coeffs, -d.constant, d.den * node.value)])]
    ineqs = []
    forms = [_affine_or_error(c, env, dim) for c in node.children]
    for op, a, b in zip(node.value, forms, forms[1:]):
        d = a - b
        c, k = d.coeffs, d.constant
        neg = tuple(-x for x in c)
        if op == ">=":
            ineqs.append((c, k))
        elif op == "<=":
            ineqs.append((neg, -k))
        elif op == ">":
            ineqs.append((c, k - 1))
        elif op == "<":
            ineqs.append((neg, -k - 1))
        else:
            ineqs += [(c, k), (neg, -k)]
    return [PresCell.make(dim, ineqs)]


def _bool_cells(node: Node, env, dim) -> List[PresCell]:
    k = node.kind
    if k == "true":
        return [PresCell.universe(dim)]
    if k == "false":
        return []
    if k in ("cmp", "cong"):
        return [c for c in _constraint_cells(node, env, dim) if not c.empty]
    if k == "or":
        out: List[PresCell] = []
        for c in node.children:
            out.extend(_bool_cells(c, env, dim))
        return out
    if k == "and":
        cur = [PresCell.universe(dim)]
        for c in node.children:
            nxt = []
            for a in cur:
                for b in _bool_cells(c, env, dim):
                    ab = a & b
                    if not ab.empty:
                        nxt.append(ab)
            cur = nxt
        return cur
    if k == "not":
        inner = PresSet.of(_bool_cells(node.children[0], env, dim), dim)
        return list(inner.complement().cells)
    raise DSLError(f"expected a condition, found {k}", node.span)


def build_set(node: Node) -> Tuple[PresSet, Tuple[str, ...]]:
    if node.kind != "set":
        raise DSLError("expected a set", node.span)
    names, dim = node.value
    env = {n: i for i, n in enumerate(names)}
    if not node.children:
        return PresSet.universe(dim), names
    return PresSet.of(_bool_cells(node.children[0], env, dim), dim), names


def _ring(node: Node) -> MotConst:
    """Evaluate a variable-free expression in A."""
    k = node.kind
    try:
        if k == "int":
            return MotConst.from_int(node.value)
        if k == "lef":
            return LL
        if k == "cls":
            return MotConst.symbol(node.value)
        if k == "neg":
            return -_ring(node.children[0])
        if k == "add":
            a, b = _ring(node.children[0]), _ring(node.children[1])
            return a + b if node.value == "+" else a - b
        if k == "mul":
            a, b = _ring(node.children[0]), _ring(node.children[1])
            return a * b if node.value == "*" else a / b
        if k == "pow":
            base, exp = node.children
            e = _int_constant(exp)
            if base.kind == "lef":
                return MotConst.lefschetz(e)
            return _ring(base) ** e
    except NotAUnitError as exc:
        raise DSLError(f"division by a non-unit: {exc}", node.span) from None
    raise DSLError(f"{k} is not allowed in a constant", node.span)


def _int_constant(node: Node) -> int:
    try:
        v = _affine(node, {}, 0)
    except _NotAffine:
        raise DSLError("exponent must be an integer constant", node.span) from None
    c = v.rational_constant()
    if c.denominator != 1:
        raise DSLError("exponent must be an integer", node.span)
    return int(c)


def _fun(node: Node, amb: PresSet, env: Dict[str, int], names) -> ConFun:
    dim = amb.dim
    if not _contains(node, ("var", "ind")):
        return ConFun.constant(amb, _ring(node), names)
    k = node.kind
    if k == "var":
        return ConFun.form(amb, _affine(node, env, dim), names)
    if k == "neg":
        return -_fun(node.children[0], amb, env, names)
    if k == "add":
        a = _fun(node.children[0], amb, env, names)
        b = _fun(node.children[1], amb, env, names)
        return a + b if node.value == "+" else a - b
    if k == "ind":
        S = PresSet.of(_bool_cells(node.children[0], env, dim), dim)
        return ConFun.indicator(amb, S, names)
    if k == "mul":
        a, b = node.children
        if node.value == "/":
            if _contains(b, ("var", "ind")):
                raise DSLError("division by a non-constant expression", b.span)
            if _linear_factor(a, env, dim) is not None and _is_int_literal(b):
                return ConFun.form(amb, _affine_or_error(node, env, dim), names)
            try:
                inv = _ring(b).unit_inverse()
            except NotAUnitError:
                raise DSLError("division by a non-unit", b.span) from None
            return _fun(a, amb, env, names) * inv
        return _factor(a, amb, env, names) * _factor(b, amb, env, names)
    if k == "pow":
        base, exp = node.children
        if base.kind == "lef":
            return ConFun.lefschetz_power(amb, _affine_or_error(exp, env, dim), names)
        e = _int_constant(exp)
        if e < 0:
            raise DSLError("negative powers of non-constant expressions are not defined", exp.span)
        return _factor(base, amb, env, names) ** e
    raise DSLError(f"{k} is not allowed in a function", node.span)


def _is_int_literal(node: Node) -> bool:
    return node.kind == "int" or (node.kind == "neg" and _is_int_literal(node.children[0]))


def _linear_factor(node: Node, env, dim) -> Optional[AffineForm]:
    """The node as a non-constant linear form, or None."""
    if _contains(node, ("lef", "cls", "ind")) or not _contains(node, ("var",)):
        return None
    try:
        form = _affine(node, env, dim)
    except _NotAffine:
        return None
    return None if form.is_constant() else form


def _factor(node: Node, amb: PresSet, env, names) -> ConFun:
    """A product operand: a non-constant linear expression is one form factor."""
    form = _linear_factor(node, env, amb.dim)
    if form is not None:
        return ConFun.form(amb, form, names)
    return _fun(node, amb, env, names)


def build(node: Node) -> Union[PresSet, ConFun, MotConst]:
    """Semantic value of a parsed formula."""
    try:
        if node.kind == "set":
            return build_set(node)[0]
        if node.kind == "fun":
            amb, names = build_set(node.children[1])
            env = {n: i for i, n in enumerate(names)}
            return _fun(node.children[0], amb, env, names)
        if _contains(node, ("var", "ind")):
            bad = _first(node, ("var", "ind"))
            raise DSLError("a function needs a domain: add 'on { ... }'", bad.span)
        return _ring(node)
    except DSLError:
        raise
    except MotivicError as exc:
        raise DSLError(str(exc), node.span) from None


def _first(node: Node, kinds) -> Node:
    if node.kind in kinds:
        return node
    for c in node.children:
        if _contains(c, kinds):
            return _first(c, kinds)
    return node


def parse_value(text: str):
    return build(parse_dsl(text))


def parse_set(text: str) -> PresSet:
    node = parse_dsl(text)
    if node.kind != "set":
        raise DSLError("expected a set '{ ... }'", node.span)
    return build_set(node)[0]


def parse_function(text: str) -> ConFun:
    node = parse_dsl(text)
    if node.kind != "fun":
        raise DSLError("expected a function 'expr on { ... }'", node.span)
    return build(node)


def parse_ring_element(text: str) -> MotConst:
    node = parse_dsl(text)
    if node.kind in ("set", "fun"):
        raise DSLError("expected a constant of A", node.span)
    return build(node)


# --- value printers ---------------------------------------------------------


def form_text(form: AffineForm, names: Sequence[str]) -> str:
    parts: List[str] = []
    for c, name in zip(form.coeffs, names):
        if not c:
            continue
        mag = abs(c)
        body = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    k = form.constant
    if k or not parts:
        if not parts:
            parts.append(str(k))
        else:
            parts.append((" - " if k < 0 else " + ") + str(abs(k)))
    text = "".join(parts)
    if form.den != 1:
        text = f"({text})/{form.den}" if len(parts) > 1 or text.startswith("-") else f"{text}/{form.den}"
    return text


def _is_plain_var(form: AffineForm) -> bool:
    return form.den == 1 and form.constant == 0 and sorted(form.coeffs)[-1:] == [1] and sum(map(abs, form.coeffs)) == 1


def cell_text(cell: PresCell, names: Sequence[str]) -> str:
    if cell.empty:
        return "false"
    parts = []
    for c, k in cell.ineqs:
        if not any(c):
            parts.append("true" if k >= 0 else "false")
            continue
        parts.append(f"{form_text(AffineForm(c, 0), names)} >= {-k}")
    for c, r, m in cell.congs:
        parts.append(f"{form_text(AffineForm(c, 0), names)} = {r} mod {m}")
    return " and ".join(parts) if parts else "true"


def set_text(S: PresSet, names: Optional[Sequence[str]] = None) -> str:
    names = tuple(names) if names else default_names(S.dim)
    tup = names[0] if S.dim == 1 else "(" + ", ".join(names) + ")"
    if not S.cells:
        body = "false"
    elif len(S.cells) == 1:
        body = cell_text(S.cells[0], names)
    else:
        body = " or ".join(f"({cell_text(c, names)})" for c in S.cells)
    return f"{{ {tup} in Z^{S.dim} : {body} }}"


def _coeff_text(c: MotConst) -> str:
    from .coeffring import to_text
    v = c.as_int()
    if v is not None:
        return str(v)
    return f"({to_text(c)})"


def term_text(t: Term, names: Sequence[str]) -> str:
    factors: List[str] = []
    for form, p in t.monomial:
        base = form_text(form, names) if _is_plain_var(form) else f"({form_text(form, names)})"
        factors.append(base if p == 1 else f"{base}^{p}")
    if any(t.lexp.coeffs) or t.lexp.constant:
        lx = t.lexp
        factors.append(f"L^{form_text(lx, names)}" if _is_plain_var(lx) else f"L^({form_text(lx, names)})")
    if t.cell is not None:
        factors.append(f"ind({cell_text(t.cell, names)})")
    lone_form = (len(factors) == 1 and len(t.monomial) == 1 and t.monomial[0][1] == 1
                 and not _is_plain_var(t.monomial[0][0]))
    if not t.coeff.is_one() or not factors or lone_form:
        factors.insert(0, _coeff_text(t.coeff))
    return " * ".join(factors)


def function_text(f: ConFun) -> str:
    names = f.names or default_names(f.dim)
    body = " + ".join(term_text(t, names) for t in f.terms) if f.terms else "0"
    return f"{body} on {set_text(f.ambient, names)}"
