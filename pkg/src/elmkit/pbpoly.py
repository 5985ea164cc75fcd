"""Exact multilinear polynomials over binary variables.

A :class:`BinaryPolynomial` maps monomials (sorted tuples of variable
names, the empty tuple being the constant term) to nonzero Python integers.
Because every variable takes values in {0, 1}, ``x*x`` reduces to ``x`` on
construction, so the stored form is canonical: two polynomials compare
equal iff they agree on every assignment.

Coefficients are Python ints, so arithmetic never wraps.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from typing import Union

__all__ = [
    "BinaryPolynomial",
    "MissingVariableError",
    "ParseError",
    "PolynomialError",
    "VariableTable",
    "natural_key",
    "parse_polynomial",
]

Monomial = tuple[str, ...]
PolyLike = Union["BinaryPolynomial", int]

IDENTIFIER = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")
_DIGITS = re.compile(r"(\d+)")


class PolynomialError(ValueError):
    """Base class for polynomial construction and evaluation errors."""


class MissingVariableError(PolynomialError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"assignment has no value for variable {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class ParseError(PolynomialError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at column {position + 1}: {text!r}")


def natural_key(name: str) -> tuple:
    """Sort key comparing digit runs numerically: ``p2 < p10 < q1 < z23``."""
    parts = _DIGITS.split(name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def _monomial_key(mono: Monomial) -> tuple:
    return tuple(natural_key(v) for v in mono)


def _canonical_monomial(names: Iterable[str]) -> Monomial:
    return tuple(sorted(set(names), key=natural_key))


class BinaryPolynomial:
    """Immutable multilinear polynomial with integer coefficients.

    >>> x, y = BinaryPolynomial.variable("x"), BinaryPolynomial.variable("y")
    >>> (x + y - 1) ** 2
    BinaryPolynomial('2*x*y - x - y + 1')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[str], int] | Iterable[tuple[Iterable[str], int]] | None = None):
        acc: dict[Monomial, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for names, coef in items:
                if isinstance(names, str):
                    names = (names,)
                if not isinstance(coef, int) or isinstance(coef, bool):
                    raise PolynomialError(f"coefficients must be integers, got {coef!r}")
                mono = _canonical_monomial(names)
                for v in mono:
                    if not IDENTIFIER.match(v):
                        raise PolynomialError(f"invalid variable name {v!r}")
                acc[mono] = acc.get(mono, 0) + coef
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _from_canonical(cls, terms: dict[Monomial, int]) -> BinaryPolynomial:
        obj = cls.__new__(cls)
        obj._terms = {m: c for m, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value: int) -> BinaryPolynomial:
        return cls({(): value})

    @classmethod
    def variable(cls, name: str) -> BinaryPolynomial:
        return cls({(name,): 1})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, int]:
        """Copy of the term map, monomials in canonical order."""
        return {m: self._terms[m] for m in self.monomials()}

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=lambda m: (len(m) == 0, _monomial_key(m)))

    def items(self) -> list[tuple[Monomial, int]]:
        return [(m, self._terms[m]) for m in self.monomials()]

    def coefficient(self, *names: str) -> int:
        return self._terms.get(_canonical_monomial(names), 0)

    @property
    def const(self) -> int:
        return self._terms.get((), 0)

    def variables(self) -> tuple[str, ...]:
        names = {v for m in self._terms for v in m}
        return tuple(sorted(names, key=natural_key))

    @property
    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other) -> BinaryPolynomial | None:
        if isinstance(other, BinaryPolynomial):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return BinaryPolynomial._from_canonical({(): other})
        return None

    def __add__(self, other: PolyLike) -> BinaryPolynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return BinaryPolynomial._from_canonical(out)

    __radd__ = __add__

    def __neg__(self) -> BinaryPolynomial:
        return BinaryPolynomial._from_canonical({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: PolyLike) -> BinaryPolynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: PolyLike) -> BinaryPolynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: PolyLike) -> BinaryPolynomial:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                if not m1:
                    m = m2
                elif not m2 or m1 == m2:
                    m = m1
                else:
                    m = _canonical_monomial(m1 + m2)
                out[m] = out.get(m, 0) + c1 * c2
        return BinaryPolynomial._from_canonical(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> BinaryPolynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = BinaryPolynomial.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def square(self) -> BinaryPolynomial:
        return self * self

    # -- evaluation and substitution --------------------------------------

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        """Exact value at a 0/1 assignment keyed by variable name."""
        total = 0
        for mono, coef in self._terms.items():
            on = True
            for v in mono:
                try:
                    bit = assignment[v]
                except KeyError:
                    raise MissingVariableError(v) from None
                on = on and bool(bit)
            if on:
                total += coef
        return total

    def __call__(self, assignment: Mapping[str, int]) -> int:
        return self.evaluate(assignment)

    def substitute(self, values: Mapping[str, PolyLike | str]) -> BinaryPolynomial:
        """Replace variables by constants, other variables, or polynomials."""
        repl: dict[str, BinaryPolynomial] = {}
        for name, value in values.items():
            if isinstance(value, str):
                value = BinaryPolynomial.variable(value)
            coerced = self._coerce(value)
            if coerced is None:
                raise PolynomialError(f"cannot substitute {value!r} for {name!r}")
            repl[name] = coerced
        out = BinaryPolynomial()
        for mono, coef in self._terms.items():
            term = BinaryPolynomial._from_canonical({tuple(v for v in mono if v not in repl): coef})
            for v in mono:
                if v in repl:
                    term = term * repl[v]
            out = out + term
        return out

    # -- comparison and display -------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def format(self) -> str:
        """Canonical text accepted by :func:`parse_polynomial`."""
        if not self._terms:
            return "0"
        pieces = []
        for i, (mono, coef) in enumerate(self.items()):
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = f"{mag}*" + "*".join(mono)
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    __str__ = format

    def __repr__(self) -> str:
        return f"BinaryPolynomial({self.format()!r})"


class VariableTable:
    """Dense name <-> index mapping, natural order (``p1 < p2 < q1 < z23``)."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(sorted(set(names), key=natural_key))
        self._index = {v: i for i, v in enumerate(self.names)}

    @classmethod
    def of(cls, *polys: BinaryPolynomial) -> VariableTable:
        return cls(v for p in polys for v in p.variables())

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, VariableTable) and self.names == other.names

    def __repr__(self) -> str:
        return f"VariableTable({list(self.names)!r})"

    def index(self, name: str) -> int:
        return self._index[name]

    def assignment(self, bits: str | Iterable[int]) -> dict[str, int]:
        """Assignment dict from a bitstring/bit sequence in index order."""
        values = [int(b) for b in bits]
        if len(values) != len(self.names):
            raise PolynomialError(f"expected {len(self.names)} bits, got {len(values)}")
        return dict(zip(self.names, values))

    def bitstring(self, assignment: Mapping[str, int]) -> str:
        return "".join(str(int(assignment[v])) for v in self.names)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[+\-*]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def parse_polynomial(text: str) -> BinaryPolynomial:
    """Parse ``term (('+'|'-') term)*`` where a term is a ``*``-product of
    integers and identifiers, e.g. ``"2*p1 + p2*q2 + 4"``.

    A leading sign is accepted so that formatted output always round-trips.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial", text, 0)
    acc: dict[Monomial, int] = {}
    i = 0
    sign = 1
    if tokens[0][0] == "op" and tokens[0][1] in "+-":
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        coef = sign
        names: list[str] = []
        while True:
            if i >= len(tokens):
                raise ParseError("expected a term", text, len(text))
            kind, value, pos = tokens[i]
            if kind == "int":
                coef *= int(value)
            elif kind == "name":
                names.append(value)
            else:
                raise ParseError(f"unexpected {value!r}", text, pos)
            i += 1
            if i < len(tokens) and tokens[i][1] == "*":
                i += 1
                continue
            break
        mono = _canonical_monomial(names)
        acc[mono] = acc.get(mono, 0) + coef
        if i >= len(tokens):
            break
        kind, value, pos = tokens[i]
        if kind != "op":
            raise ParseError(f"expected '+' or '-' before {value!r}", text, pos)
        sign = 1 if value == "+" else -1
        i += 1
    return BinaryPolynomial._from_canonical(acc)
