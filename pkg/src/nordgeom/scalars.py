"""Exact polynomials over the rationals in a fixed, ordered list of parameters.

Every tensor entry in the package is a :class:`Scalar`. Coefficients are
:class:`fractions.Fraction`, so nothing ever overflows or rounds. Terms are
kept in canonical form (no zero coefficients), which makes equality of two
Scalars plain structural equality of their term maps.

Text form::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := int ['/' posint] | name ['^' int]

e.g. ``"2*lambda*mu - 1/3"`` or ``"3/2*mu^2"``.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NordgeomError

__all__ = [
    "Scalar",
    "ScalarError",
    "ParameterMismatchError",
    "DegreeCapError",
    "ScalarParseError",
    "UnknownParameterError",
    "MissingBindingError",
    "scalar_add",
    "scalar_mul",
    "scalar_eval",
    "scalar_parse",
    "get_max_degree",
    "set_max_degree",
    "as_fraction",
]

Number = Union[int, Fraction]


class ScalarError(NordgeomError, ValueError):
    """Base class for scalar arithmetic errors."""


class ParameterMismatchError(ScalarError):
    pass


class DegreeCapError(ScalarError):
    pass


class UnknownParameterError(ScalarError):
    pass


class MissingBindingError(ScalarError):
    pass


class ScalarParseError(ScalarError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


def _env_max_degree() -> int:
    raw = os.environ.get("NORDGEOM_MAX_DEGREE")
    if raw is None:
        return 16
    try:
        value = int(raw)
    except ValueError:
        raise ScalarError(f"NORDGEOM_MAX_DEGREE must be an integer, got {raw!r}") from None
    if value < 0:
        raise ScalarError("NORDGEOM_MAX_DEGREE must be non-negative")
    return value


_MAX_DEGREE = _env_max_degree()


def get_max_degree() -> int:
    return _MAX_DEGREE


def set_max_degree(value: int | None = None) -> int:
    """Set the total-degree cap; ``None`` re-reads the environment. Returns the old cap."""
    global _MAX_DEGREE
    old = _MAX_DEGREE
    _MAX_DEGREE = _env_max_degree() if value is None else int(value)
    return old


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction, rational string or constant Scalar to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ScalarError(f"not a rational number: {value!r}") from None
    if isinstance(value, Scalar):
        if not value.is_constant():
            raise ScalarError(f"expected a constant, got {value}")
        return value.constant_value()
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def _sort_key(exps: tuple[int, ...]):
    # graded lexicographic, highest first
    return (-sum(exps), tuple(-e for e in exps))


class Scalar:
    """Immutable exact polynomial with rational coefficients.

    ``params`` is the ordered tuple of parameter names; ``terms`` maps an
    exponent tuple (one slot per parameter) to a nonzero Fraction.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: Iterable[str], terms: Mapping[tuple[int, ...], Number] | None = None):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ScalarError(f"duplicate parameter names in {params}")
        clean: dict[tuple[int, ...], Fraction] = {}
        cap = _MAX_DEGREE
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(params) or any(e < 0 for e in exps):
                raise ScalarError(f"bad exponent vector {exps} for parameters {params}")
            if sum(exps) > cap:
                raise DegreeCapError(f"monomial degree {sum(exps)} exceeds cap {cap}")
            c = clean.get(exps, Fraction(0)) + as_fraction(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self.params = params
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, params: tuple[str, ...], terms: dict) -> "Scalar":
        obj = object.__new__(cls)
        obj.params = params
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, value, params: Iterable[str] = ()) -> "Scalar":
        params = tuple(params)
        v = as_fraction(value)
        return cls._raw(params, {(0,) * len(params): v} if v else {})

    @classmethod
    def zero(cls, params: Iterable[str] = ()) -> "Scalar":
        return cls._raw(tuple(params), {})

    @classmethod
    def one(cls, params: Iterable[str] = ()) -> "Scalar":
        return cls.const(1, params)

    @classmethod
    def var(cls, name: str, params: Iterable[str]) -> "Scalar":
        params = tuple(params)
        if name not in params:
            raise UnknownParameterError(f"unknown parameter {name!r}; declared: {list(params)}")
        exps = tuple(1 if p == name else 0 for p in params)
        return cls._raw(params, {exps: Fraction(1)})

    @classmethod
    def parse(cls, text: str, params: Iterable[str]) -> "Scalar":
        return scalar_parse(text, params)

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ScalarError("zero has no leading term")
        return min(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    # -- coercion -----------------------------------------------------

    def _align(self, other):
        if isinstance(other, Scalar):
            if other.params != self.params:
                raise ParameterMismatchError(
                    f"parameter lists differ: {list(self.params)} vs {list(other.params)}"
                )
            return self, other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, Scalar.const(other, self.params)
        return NotImplemented, NotImplemented

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = self._align(other)
        if a is NotImplemented:
            return NotImplemented
        if not b.terms:
            return a
        if not a.terms:
            return b
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Scalar._raw(a.params, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.params, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._align(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._align(other)
        if a is NotImplemented:
            return NotImplemented
        if not a.terms or not b.terms:
            return Scalar._raw(a.params, {})
        cap = _MAX_DEGREE
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if sum(e) > cap:
                    raise DegreeCapError(
                        f"product degree {sum(e)} exceeds cap {cap}; "
                        "raise NORDGEOM_MAX_DEGREE if this is intended"
                    )
                s = out.get(e)
                c = c1 * c2
                if s is None:
                    out[e] = c
                else:
                    s += c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return Scalar._raw(a.params, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ScalarError("only non-negative integer powers are supported")
        result = Scalar.one(self.params)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero rational constant."""
        c = as_fraction(other)
        if c == 0:
            raise ZeroDivisionError("division of a Scalar by zero")
        return Scalar._raw(self.params, {e: v / c for e, v in self.terms.items()})

    def exact_div(self, divisor: "Scalar") -> "Scalar | None":
        """Polynomial quotient if ``divisor`` divides ``self`` exactly, else None."""
        a, d = self._align(divisor)
        if d.is_zero():
            raise ZeroDivisionError("exact division by the zero Scalar")
        lead_e, lead_c = d.leading_term()
        rem = a
        quotient = Scalar.zero(a.params)
        while not rem.is_zero():
            e, c = rem.leading_term()
            q_e = tuple(x - y for x, y in zip(e, lead_e))
            if any(x < 0 for x in q_e):
                return None
            t = Scalar._raw(a.params, {q_e: c / lead_c})
            quotient = quotient + t
            rem = rem - t * d
        return quotient

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return other.params == self.params and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- evaluation ---------------------------------------------------

    def _binding(self, assignment: Mapping[str, object], *, require_all: bool):
        for name in assignment:
            if name not in self.params:
                raise UnknownParameterError(f"unknown parameter {name!r}; declared: {list(self.params)}")
        values = []
        for i, p in enumerate(self.params):
            if p in assignment:
                values.append(as_fraction(assignment[p]))
            else:
                if require_all and any(e[i] for e in self.terms):
                    raise MissingBindingError(f"no value bound for parameter {p!r}")
                values.append(None)
        return values

    def eval(self, assignment: Mapping[str, object]) -> Fraction:
        values = self._binding(assignment, require_all=True)
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def subs(self, assignment: Mapping[str, object]) -> "Scalar":
        """Partial substitution; the parameter list is kept unchanged."""
        values = self._binding(assignment, require_all=False)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            new_e = []
            for v, e in zip(values, exps):
                if v is not None and e:
                    c *= v**e
                    new_e.append(0)
                else:
                    new_e.append(e)
            key = tuple(new_e)
            out[key] = out.get(key, Fraction(0)) + c
        return Scalar._raw(self.params, {e: c for e, c in out.items() if c})

    # -- printing -----------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                p if e == 1 else f"{p}^{e}" for p, e in zip(self.params, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append((c < 0, body))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"Scalar({str(self)!r}, params={list(self.params)})"


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    if a.params != b.params:
        raise ParameterMismatchError(f"parameter lists differ: {list(a.params)} vs {list(b.params)}")
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    if a.params != b.params:
        raise ParameterMismatchError(f"parameter lists differ: {list(a.params)} vs {list(b.params)}")
    return a * b


def scalar_eval(a: Scalar, assignment: Mapping[str, object]) -> Fraction:
    return a.eval(assignment)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^":
                raise ScalarParseError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def scalar_parse(text: str, params: Iterable[str]) -> Scalar:
    """Parse the canonical text grammar into a Scalar over ``params``."""
    params = tuple(params)
    tokens = _tokenize(text)
    index = 0

    def peek():
        return tokens[index]

    def take(kind):
        nonlocal index
        tok = tokens[index]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ScalarParseError(f"expected {kind}, found {what}", text, tok[2])
        index += 1
        return tok

    def factor() -> Scalar:
        tok = peek()
        if tok[0] == "int":
            take("int")
            value = Fraction(int(tok[1]))
            if peek()[0] == "/":
                take("/")
                den = take("int")
                if int(den[1]) == 0:
                    raise ScalarParseError("zero denominator", text, den[2])
                value /= int(den[1])
            return Scalar.const(value, params)
        if tok[0] == "name":
            take("name")
            if tok[1] not in params:
                raise UnknownParameterError(
                    f"unknown parameter {tok[1]!r} at position {tok[2]} in {text!r}; declared: {list(params)}"
                )
            base = Scalar.var(tok[1], params)
            if peek()[0] == "^":
                take("^")
                power = take("int")
                return base ** int(power[1])
            return base
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ScalarParseError(f"expected a number or parameter, found {what}", text, tok[2])

    def term() -> Scalar:
        value = factor()
        while peek()[0] == "*":
            take("*")
            value = value * factor()
        return value

    sign = 1
    if peek()[0] in "+-":
        sign = -1 if take(peek()[0])[0] == "-" else 1
    total = term() * sign
    while peek()[0] in ("+", "-"):
        op = take(peek()[0])[0]
        t = term()
        total = total + t if op == "+" else total - t
    if peek()[0] != "end":
        tok = peek()
        raise ScalarParseError(f"unexpected {tok[1]!r}", text, tok[2])
    return total
