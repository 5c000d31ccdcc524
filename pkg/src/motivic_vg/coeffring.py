"""Exact arithmetic in the ring A = Z[L, 1/L, 1/(1 - L^-i) : i > 0].

Elements are kept as reduced fractions ``N / prod Phi_d^m`` where ``N`` is a
Laurent polynomial in ``L`` (coefficients may be integer polynomials in free
class symbols) and ``Phi_d`` is the d-th cyclotomic polynomial.  Every
``L^i - 1`` factors into cyclotomics, so this is the same ring as the one
generated by the ``(L^i - 1)`` denominators, but reduction to lowest terms is
a matter of trial division by monic integer polynomials and the stored form
is unique.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import NotAUnitError, SpecializationError

# (("Y", 2), ("Z", 1)) stands for [Y]^2 [Z]
Mono = Tuple[Tuple[str, int], ...]
# (mono, L-exponent) -> integer coefficient, zero entries never stored
Num = Dict[Tuple[Mono, int], int]

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> Tuple[int, ...]:
    """Dense coefficients (constant term first) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    poly = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            poly = _dense_exact_div(poly, list(cyclotomic(e)))
    return tuple(poly)


def _divisors(n: int):
    return [e for e in range(1, n + 1) if n % e == 0]


def _dense_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _dense_exact_div(p, divisor):
    """Quotient of ``p`` by a monic ``divisor``, or None if it does not divide."""
    n = len(divisor) - 1
    rem = list(p)
    if len(rem) <= n:
        return None if any(rem) else []
    quot = [0] * (len(rem) - n)
    for i in range(len(rem) - 1, n - 1, -1):
        c = rem[i]
        if c:
            quot[i - n] = c
            for j, dc in enumerate(divisor):
                rem[i - n + j] -= c * dc
    if any(rem[:n]):
        return None
    return quot


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for name, e in b:
        acc[name] = acc.get(name, 0) + e
    return tuple(sorted(acc.items()))


def _num_add(a: Num, b: Num, sign: int = 1) -> Num:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, 0) + sign * c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _num_mul(a: Num, b: Num) -> Num:
    out: Num = {}
    for (ma, ka), ca in a.items():
        for (mb, kb), cb in b.items():
            key = (_mono_mul(ma, mb), ka + kb)
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _num_mul_dense(a: Num, dense, times: int = 1) -> Num:
    poly = {((), i): c for i, c in enumerate(dense) if c}
    for _ in range(times):
        a = _num_mul(a, poly)
    return a


def _split_by_mono(a: Num) -> Dict[Mono, Dict[int, int]]:
    parts: Dict[Mono, Dict[int, int]] = {}
    for (mono, k), c in a.items():
        parts.setdefault(mono, {})[k] = c
    return parts


def _laurent_div(p: Dict[int, int], dense):
    lo = min(p)
    hi = max(p)
    q = _dense_exact_div([p.get(lo + i, 0) for i in range(hi - lo + 1)], dense)
    if q is None:
        return None
    return {lo + i: c for i, c in enumerate(q) if c}


def _num_div_cyclo(a: Num, d: int) -> Optional[Num]:
    dense = cyclotomic(d)
    out: Num = {}
    for mono, part in _split_by_mono(a).items():
        q = _laurent_div(part, dense)
        if q is None:
            return None
        for k, c in q.items():
            out[(mono, k)] = c
    return out


def _reduce(num: Num, den: Dict[int, int]) -> Tuple[Num, Dict[int, int]]:
    if not num:
        return {}, {}
    den = {d: m for d, m in den.items() if m}
    for d in sorted(den):
        while den[d]:
            q = _num_div_cyclo(num, d)
            if q is None:
                break
            num = q
            den[d] -= 1
    return num, {d: m for d, m in den.items() if m}


@dataclass(frozen=True)
class MotConst:
    """An element of A, optionally with free class symbols in the numerator.

    Instances are always reduced; two equal ring elements have identical
    ``num`` and ``den`` tuples, so ``==`` and ``hash`` are structural.
    """

    num: Tuple[Tuple[Mono, int, int], ...] = ()
    den: Tuple[Tuple[int, int], ...] = ()

    # construction -----------------------------------------------------

    @classmethod
    def _make(cls, num: Num, den: Mapping[int, int]) -> "MotConst":
        num, den = _reduce(num, dict(den))
        items = sorted(((m, k, c) for (m, k), c in num.items()),
                       key=lambda t: (-t[1], t[0]))
        return cls(tuple(items), tuple(sorted(den.items())))

    @classmethod
    def from_int(cls, n: int) -> "MotConst":
        return cls._make({((), 0): int(n)} if n else {}, {})

    @classmethod
    def lefschetz(cls, k: int = 1) -> "MotConst":
        """``L^k`` for any integer k."""
        return cls._make({((), int(k)): 1}, {})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "MotConst":
        if power < 0:
            raise ValueError("class symbols are not invertible")
        if power == 0:
            return cls.from_int(1)
        return cls._make({(((name, power),), 0): 1}, {})

    @classmethod
    def one_minus_lefschetz(cls, i: int) -> "MotConst":
        """``1 - L^i``; a unit whenever i != 0."""
        return cls._make(_num_add({((), 0): 1}, {((), i): 1}, -1), {})

    @classmethod
    def from_laurent(cls, coeffs: Mapping[int, int]) -> "MotConst":
        return cls._make({((), k): c for k, c in coeffs.items() if c}, {})

    @classmethod
    def coerce(cls, x) -> "MotConst":
        if isinstance(x, MotConst):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        if isinstance(x, Fraction) and x.denominator == 1:
            return cls.from_int(x.numerator)
        raise TypeError(f"cannot interpret {x!r} as an element of A")

    # views ------------------------------------------------------------

    def _numd(self) -> Num:
        return {(m, k): c for m, k, c in self.num}

    def _dend(self) -> Dict[int, int]:
        return dict(self.den)

    @property
    def symbols(self) -> frozenset:
        return frozenset(name for m, _, _ in self.num for name, _ in m)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == (((), 0, 1),) and not self.den

    def as_int(self) -> Optional[int]:
        if not self.num:
            return 0
        if not self.den and len(self.num) == 1 and self.num[0][:2] == ((), 0):
            return self.num[0][2]
        return None

    def as_lefschetz_power(self) -> Optional[Tuple[int, int]]:
        """(sign, k) when self is ``sign * L^k``."""
        if self.den or len(self.num) != 1:
            return None
        mono, k, c = self.num[0]
        if mono or abs(c) != 1:
            return None
        return c, k

    # ring operations --------------------------------------------------

    def __add__(self, other):
        try:
            other = MotConst.coerce(other)
        except TypeError:
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = MotConst.coerce(other)
        except TypeError:
            return NotImplemented
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return MotConst.coerce(other) - self

    def __neg__(self):
        return MotConst(tuple((m, k, -c) for m, k, c in self.num), self.den)

    def _addsub(self, other: "MotConst", sign: int) -> "MotConst":
        if not other.num:
            return self
        if not self.num:
            return other if sign == 1 else -other
        da, db = self._dend(), other._dend()
        common = {d: max(da.get(d, 0), db.get(d, 0)) for d in set(da) | set(db)}
        na, nb = self._numd(), other._numd()
        for d, m in common.items():
            if m - da.get(d, 0):
                na = _num_mul_dense(na, cyclotomic(d), m - da.get(d, 0))
            if m - db.get(d, 0):
                nb = _num_mul_dense(nb, cyclotomic(d), m - db.get(d, 0))
        return MotConst._make(_num_add(na, nb, sign), common)

    def __mul__(self, other):
        try:
            other = MotConst.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        den = self._dend()
        for d, m in other.den:
            den[d] = den.get(d, 0) + m
        return MotConst._make(_num_mul(self._numd(), other._numd()), den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def unit_factorization(self):
        """Return (sign, k, {d: e}) with self = sign * L^k * prod Phi_d^e, or None.

        Exponents ``e`` may be negative.  None means self is not a unit of A.
        """
        if not self.num or self.symbols:
            return None
        coeffs = {k: c for _, k, c in self.num}
        k0 = min(coeffs)
        dense = [coeffs.get(k0 + i, 0) for i in range(max(coeffs) - k0 + 1)]
        exps: Dict[int, int] = {}
        deg = len(dense) - 1
        d = 1
        while deg > 0 and d <= 2 * deg * deg + 2:
            q = _dense_exact_div(dense, list(cyclotomic(d)))
            if q is None:
                d += 1
                continue
            dense = q
            while dense and dense[-1] == 0:
                dense.pop()
            deg = len(dense) - 1
            exps[d] = exps.get(d, 0) + 1
        if len(dense) != 1 or abs(dense[0]) != 1:
            return None
        for dd, m in self.den:
            exps[dd] = exps.get(dd, 0) - m
        return dense[0], k0, {dd: e for dd, e in exps.items() if e}

    def is_unit(self) -> bool:
        return self.unit_factorization() is not None

    def unit_inverse(self) -> "MotConst":
        fact = self.unit_factorization()
        if fact is None:
            raise NotAUnitError(f"{self} is not a unit of A")
        sign, k, exps = fact
        num: Num = {((), -k): sign}
        den: Dict[int, int] = {}
        for d, e in exps.items():
            if e > 0:
                den[d] = e
            else:
                num = _num_mul_dense(num, cyclotomic(d), -e)
        return MotConst._make(num, den)

    def __truediv__(self, other):
        try:
            other = MotConst.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise NotAUnitError("division by zero")
        return self * other.unit_inverse()

    def __rtruediv__(self, other):
        return MotConst.coerce(other) / self

    # specialization -----------------------------------------------------

    def eval_q(self, q: Rational, symbols: Optional[Mapping] = None) -> Fraction:
        q = Fraction(q)
        if q <= 1:
            raise SpecializationError(f"specialization needs q > 1, got {q}")
        values = _resolve_symbols(self.symbols, q, symbols)
        total = Fraction(0)
        for mono, k, c in self.num:
            term = Fraction(c) * q ** k
            for name, e in mono:
                term *= values[name] ** e
            total += term
        for d, m in self.den:
            total /= _eval_dense(cyclotomic(d), q) ** m
        return total

    # rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"MotConst({to_text(self)!r})"


def _eval_dense(dense, q: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(dense):
        acc = acc * q + c
    return acc


class LinearCombiner:
    """Fast sums of the form sum_i c_i * P_i(L) for fixed c_i and Laurent polynomials P_i.

    The c_i are brought over one denominator once, so each sum costs plain
    numerator arithmetic plus a single reduction when it is non-zero.
    """

    def __init__(self, coeffs: Iterable[MotConst]):
        coeffs = list(coeffs)
        den: Dict[int, int] = {}
        for c in coeffs:
            for d, m in c.den:
                den[d] = max(den.get(d, 0), m)
        self.den = den
        self.nums = []
        for c in coeffs:
            own = c._dend()
            num = c._numd()
            for d, m in den.items():
                if m - own.get(d, 0):
                    num = _num_mul_dense(num, cyclotomic(d), m - own.get(d, 0))
            self.nums.append(num)

    def combine(self, polys: Mapping[int, Mapping[int, int]]) -> MotConst:
        out: Num = {}
        for i, poly in polys.items():
            for (mono, k), c in self.nums[i].items():
                for e, n in poly.items():
                    key = (mono, k + e)
                    out[key] = out.get(key, 0) + c * n
        out = {k: v for k, v in out.items() if v}
        if not out:
            return ZERO
        return MotConst._make(out, self.den)


ZERO = MotConst()
ONE = MotConst.from_int(1)
LL = MotConst.lefschetz(1)


# --- class symbols ---------------------------------------------------------


@dataclass(frozen=True)
class ClassSymbol:
    """A free residue-field class [Y]; ``count_spec`` maps q to the count of Y."""

    name: str
    count_spec: Tuple[Tuple[Fraction, Fraction], ...] = field(default=())

    def count_at(self, q: Fraction) -> Optional[Fraction]:
        for qq, v in self.count_spec:
            if qq == q:
                return v
        return None


class SymbolTable:
    """Append-only registry of class symbols for one session."""

    def __init__(self):
        self._lock = threading.Lock()
        self._symbols: Dict[str, ClassSymbol] = {}

    def declare(self, name: str, count_spec: Optional[Mapping] = None) -> ClassSymbol:
        spec = tuple(sorted((Fraction(q), Fraction(v)) for q, v in (count_spec or {}).items()))
        with self._lock:
            old = self._symbols.get(name)
            if old is not None:
                if spec and old.count_spec and spec != old.count_spec:
                    raise ValueError(f"class symbol [{name}] already declared")
                if spec and not old.count_spec:
                    old = ClassSymbol(name, spec)
                    self._symbols[name] = old
                return old
            sym = ClassSymbol(name, spec)
            self._symbols[name] = sym
            return sym

    def get(self, name: str) -> Optional[ClassSymbol]:
        return self._symbols.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._symbols

    def names(self):
        return sorted(self._symbols)


SYMBOLS = SymbolTable()


def _resolve_symbols(names: Iterable[str], q: Fraction, given: Optional[Mapping]) -> Dict[str, Fraction]:
    lookup: Dict[str, Fraction] = {}
    for key, v in (given or {}).items():
        lookup[key.name if isinstance(key, ClassSymbol) else str(key)] = Fraction(v)
    out: Dict[str, Fraction] = {}
    for name in names:
        if name in lookup:
            out[name] = lookup[name]
            continue
        sym = SYMBOLS.get(name)
        value = sym.count_at(q) if sym is not None else None
        if value is None:
            raise SpecializationError(f"class symbol [{name}] has no value at q={q}")
        out[name] = value
    return out


# --- operation-level API -------------------------------------------------


def mc_arith(op: str, a: MotConst, b: MotConst) -> MotConst:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {op!r}")


def mc_div_unit(a: MotConst, unit: MotConst) -> MotConst:
    """Divide by a unit of A such as ``L^k`` or ``1 - L^i`` (i != 0)."""
    return a / unit


def mc_is_zero(a: MotConst) -> bool:
    return a.is_zero()


def mc_eq(a: MotConst, b: MotConst) -> bool:
    return (a - b).is_zero()


def mc_eval_q(a: MotConst, q: Rational, symbols: Optional[Mapping] = None) -> Fraction:
    return a.eval_q(q, symbols)


# --- text rendering --------------------------------------------------------


def _render_term(c: int, mono: Mono, k: int, first: bool) -> str:
    factors = []
    for name, e in mono:
        factors.append(f"[{name}]" if e == 1 else f"[{name}]^{e}")
    if k == 1:
        factors.append("L")
    elif k:
        factors.append(f"L^{k}")
    if abs(c) != 1 or not factors:
        factors.insert(0, str(abs(c)))
    body = "*".join(factors)
    if first:
        return ("-" if c < 0 else "") + body
    return (" - " if c < 0 else " + ") + body


def render_numerator(num: Num) -> str:
    if not num:
        return "0"
    items = sorted(num.items(), key=lambda t: (-t[0][1], t[0][0]))
    return "".join(_render_term(c, m, k, i == 0) for i, ((m, k), c) in enumerate(items))


def to_text(a: MotConst) -> str:
    """Render as ``numerator/(L^v * (L^i-1)^m * ...)``; re-parses to ``a``."""
    if not a.den:
        return render_numerator(a._numd())
    remaining = dict(a.den)
    factors: Dict[int, int] = {}
    num = a._numd()
    while remaining:
        top = max(remaining)
        factors[top] = factors.get(top, 0) + 1
        for e in _divisors(top):
            if remaining.get(e):
                remaining[e] -= 1
                if not remaining[e]:
                    del remaining[e]
            else:
                num = _num_mul_dense(num, cyclotomic(e))
    shift = min(k for _, k in num)
    parts = []
    if shift < 0:
        num = {(m, k - shift): c for (m, k), c in num.items()}
        parts.append("L" if shift == -1 else f"L^{-shift}")
    for i in sorted(factors):
        m = factors[i]
        parts.append(f"(L^{i}-1)" if m == 1 else f"(L^{i}-1)^{m}")
    numtext = render_numerator(num)
    if len(num) > 1:
        numtext = f"({numtext})"
    if len(parts) == 1 and parts[0].endswith("-1)"):
        return f"{numtext}/{parts[0]}"
    return f"{numtext}/({' * '.join(parts)})"


def from_text(text: str) -> MotConst:
    from .dsl import parse_ring_element

    return parse_ring_element(text)
