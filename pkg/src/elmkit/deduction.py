"""Deductions: facts that hold at every ground state, and their penalties.

Two shapes are supported. A *relation* ``f == g`` is penalised by
``weight * (f - g)**2``. An *implication* ``v -> w1=1, w2=0, ...`` is
penalised by ``weight * v * ((1 - w1) + w2 + ...)``, which is the
``z24*(3 - p1 - p2 - q2)`` form used for carry variables. Both penalties
are non-negative everywhere and vanish exactly where the deduction holds.

Text format, one deduction per line (``#`` starts a comment)::

    relation: x0*x1 == x0 lambda=2
    imply: z24 -> p1=1, p2=1, q2=1
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path

from .pbpoly import IDENTIFIER, BinaryPolynomial, ParseError, PolynomialError, natural_key, parse_polynomial

__all__ = ["Deduction", "DeductionError", "format_deductions", "load_deductions", "parse_deductions"]

RELATION = "relation"
IMPLICATION = "implication"


class DeductionError(PolynomialError):
    pass


@dataclass(frozen=True)
class Deduction:
    kind: str
    f: BinaryPolynomial | None = None
    g: BinaryPolynomial | None = None
    trigger: str | None = None
    consequences: tuple[tuple[str, int], ...] = field(default=())
    weight: int = 1

    def __post_init__(self):
        if not isinstance(self.weight, int) or self.weight <= 0:
            raise DeductionError(f"deduction weight must be a positive integer, got {self.weight!r}")
        if self.kind == RELATION:
            if self.f is None or self.g is None:
                raise DeductionError("relation needs both sides")
        elif self.kind == IMPLICATION:
            if not self.trigger or not IDENTIFIER.match(self.trigger):
                raise DeductionError(f"bad implication trigger {self.trigger!r}")
            if not self.consequences:
                raise DeductionError("implication needs at least one consequence")
            names = [name for name, _ in self.consequences]
            if len(set(names)) != len(names):
                raise DeductionError("implication lists a consequence variable twice")
            for name, value in self.consequences:
                if value not in (0, 1) or not IDENTIFIER.match(name):
                    raise DeductionError(f"bad consequence {name}={value}")
                if name == self.trigger:
                    raise DeductionError("implication consequence repeats its trigger")
        else:
            raise DeductionError(f"unknown deduction kind {self.kind!r}")

    @classmethod
    def relation(cls, f: BinaryPolynomial | int | str, g: BinaryPolynomial | int | str, weight: int = 1) -> Deduction:
        return cls(RELATION, f=_as_poly(f), g=_as_poly(g), weight=weight)

    @classmethod
    def implication(cls, trigger: str, consequences: Mapping[str, int] | Iterable[tuple[str, int]],
                    weight: int = 1) -> Deduction:
        items = consequences.items() if isinstance(consequences, Mapping) else consequences
        return cls(IMPLICATION, trigger=trigger, consequences=tuple((v, int(c)) for v, c in items), weight=weight)

    def with_weight(self, weight: int) -> Deduction:
        return replace(self, weight=weight)

    def penalty(self) -> BinaryPolynomial:
        if self.kind == RELATION:
            return self.weight * (self.f - self.g).square()
        return self.weight * BinaryPolynomial.variable(self.trigger) * self._violations()

    def _violations(self) -> BinaryPolynomial:
        # Counts the consequences that fail once the trigger is set.
        out = BinaryPolynomial()
        for name, value in self.consequences:
            w = BinaryPolynomial.variable(name)
            out = out + (1 - w if value else w)
        return out

    def holds(self, assignment: Mapping[str, int]) -> bool:
        if self.kind == RELATION:
            return self.f.evaluate(assignment) == self.g.evaluate(assignment)
        if not assignment[self.trigger]:
            return True
        return all(int(assignment[v]) == c for v, c in self.consequences)

    def variables(self) -> tuple[str, ...]:
        if self.kind == RELATION:
            names = set(self.f.variables()) | set(self.g.variables())
        else:
            names = {self.trigger, *(v for v, _ in self.consequences)}
        return tuple(sorted(names, key=natural_key))

    def describe(self) -> str:
        """Human-readable penalty, e.g. ``z24*(3 - p1 - p2 - q2)``."""
        prefix = "" if self.weight == 1 else f"{self.weight}*"
        if self.kind == RELATION:
            return f"{prefix}({(self.f - self.g).format()})^2"
        viol = self._violations()
        parts = [str(viol.const)] if viol.const else []
        for mono, coef in viol.items():
            if mono:
                parts.append(("- " if coef < 0 else "+ ") + "*".join(mono))
        inner = " ".join(parts).lstrip("+ ")
        return f"{prefix}{self.trigger}*({inner})"

    def to_line(self) -> str:
        if self.kind == RELATION:
            line = f"relation: {self.f.format()} == {self.g.format()}"
        else:
            cons = ", ".join(f"{v}={c}" for v, c in self.consequences)
            line = f"imply: {self.trigger} -> {cons}"
        return line if self.weight == 1 else f"{line} lambda={self.weight}"


def _as_poly(value) -> BinaryPolynomial:
    if isinstance(value, BinaryPolynomial):
        return value
    if isinstance(value, int):
        return BinaryPolynomial.constant(value)
    return parse_polynomial(value)


_LAMBDA = re.compile(r"\s*\[?\s*lambda\s*=\s*(?P<value>-?\d+)\s*\]?\s*$")


def _parse_line(line: str, lineno: int) -> Deduction:
    weight = 1
    m = _LAMBDA.search(line)
    if m:
        weight = int(m.group("value"))
        line = line[: m.start()]
    head, sep, body = line.partition(":")
    if not sep:
        raise DeductionError(f"line {lineno}: expected 'relation:' or 'imply:'")
    head = head.strip()
    try:
        if head == "relation":
            lhs, sep, rhs = body.partition("==")
            if not sep:
                raise DeductionError(f"line {lineno}: relation needs '=='")
            return Deduction.relation(parse_polynomial(lhs), parse_polynomial(rhs), weight=weight)
        if head in ("imply", "implication"):
            trigger, sep, rest = body.partition("->")
            if not sep:
                raise DeductionError(f"line {lineno}: implication needs '->'")
            cons = []
            for item in rest.split(","):
                name, eq, value = item.partition("=")
                if not eq or value.strip() not in ("0", "1"):
                    raise DeductionError(f"line {lineno}: bad consequence {item.strip()!r}")
                cons.append((name.strip(), int(value)))
            return Deduction.implication(trigger.strip(), cons, weight=weight)
    except ParseError as exc:
        raise DeductionError(f"line {lineno}: {exc}") from exc
    except DeductionError as exc:
        if str(exc).startswith("line "):
            raise
        raise DeductionError(f"line {lineno}: {exc}") from exc
    raise DeductionError(f"line {lineno}: unknown deduction kind {head!r}")


def parse_deductions(text: str) -> list[Deduction]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(_parse_line(line, lineno))
    return out


def load_deductions(path: str | Path) -> list[Deduction]:
    return parse_deductions(Path(path).read_text(encoding="utf-8"))


def format_deductions(deductions: Iterable[Deduction]) -> str:
    return "".join(d.to_line() + "\n" for d in deductions)
