"""Binary equation systems and the long-multiplication factoring reduction.

An :class:`EquationSystem` is an ordered list of ``lhs = rhs`` polynomial
equations over binary variables. Squaring and summing the residuals gives
a Hamiltonian whose zero set is exactly the solution set.

Equation files hold one ``<poly> = <poly>`` per line; ``#`` starts a
comment and blank lines are ignored. A ``# free: a b`` comment records
variables that belong to the system without occurring in any equation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .deduction import Deduction
from .pbpoly import BinaryPolynomial, ParseError, PolynomialError, natural_key, parse_polynomial

__all__ = [
    "Equation",
    "EquationSystem",
    "SystemFormatError",
    "UnsatisfiableSystemError",
    "apply_simple_deductions",
    "decode_factors",
    "expand_assignment",
    "generate_factoring_system",
    "load_system",
    "parse_system",
    "save_system",
    "solve_exhaustive",
    "system_to_hamiltonian",
]


class SystemFormatError(ValueError):
    pass


class UnsatisfiableSystemError(ValueError):
    pass


def _split_signs(poly: BinaryPolynomial) -> tuple[BinaryPolynomial, BinaryPolynomial]:
    pos = {m: c for m, c in poly.items() if c > 0}
    neg = {m: -c for m, c in poly.items() if c < 0}
    return BinaryPolynomial(pos), BinaryPolynomial(neg)


@dataclass(frozen=True)
class Equation:
    lhs: BinaryPolynomial
    rhs: BinaryPolynomial

    @classmethod
    def parse(cls, text: str) -> Equation:
        parts = text.split("=")
        if len(parts) != 2:
            raise SystemFormatError(f"expected exactly one '=' in {text.strip()!r}")
        return cls(parse_polynomial(parts[0]), parse_polynomial(parts[1]))

    def residual(self) -> BinaryPolynomial:
        return self.lhs - self.rhs

    def normalized(self) -> Equation:
        """Move negative terms across the ``=`` so both sides are non-negative."""
        lp, ln = _split_signs(self.lhs)
        rp, rn = _split_signs(self.rhs)
        if ln.is_zero() and rn.is_zero():
            return self
        return Equation(lp + rn, rp + ln)

    def settled(self) -> Equation:
        """Normalized form of the residual: like terms cancel across sides."""
        pos, neg = _split_signs(self.residual())
        return Equation(pos, neg)

    def is_normalized(self) -> bool:
        return all(c > 0 for _, c in self.lhs.items()) and all(c > 0 for _, c in self.rhs.items())

    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.lhs.variables()) | set(self.rhs.variables()), key=natural_key))

    def holds(self, assignment: Mapping[str, int]) -> bool:
        return self.lhs.evaluate(assignment) == self.rhs.evaluate(assignment)

    def format(self) -> str:
        return f"{self.lhs.format()} = {self.rhs.format()}"

    __str__ = format


@dataclass(frozen=True)
class EquationSystem:
    """Ordered equations plus the variable table they range over.

    ``variables`` always contains every variable of every equation and may
    hold extra (free) ones. Equations are normalized on construction.
    """

    equations: tuple[Equation, ...] = ()
    variables: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        eqs = tuple(e.normalized() for e in self.equations)
        names = set(self.variables)
        for e in eqs:
            names.update(e.variables())
        object.__setattr__(self, "equations", eqs)
        object.__setattr__(self, "variables", tuple(sorted(names, key=natural_key)))

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    def __getitem__(self, i: int) -> Equation:
        return self.equations[i]

    def free_variables(self) -> tuple[str, ...]:
        used = {v for e in self.equations for v in e.variables()}
        return tuple(v for v in self.variables if v not in used)

    def is_solution(self, assignment: Mapping[str, int]) -> bool:
        return all(e.holds(assignment) for e in self.equations)

    def hamiltonian(self, weights: Sequence[int] | None = None) -> BinaryPolynomial:
        return system_to_hamiltonian(self, weights)


# -- text format ---------------------------------------------------------------

def parse_system(text: str) -> EquationSystem:
    equations = []
    free: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, hash_, comment = raw.partition("#")
        if hash_ and comment.strip().startswith("free:"):
            free.extend(comment.strip()[len("free:"):].split())
        line = body.strip()
        if not line:
            continue
        try:
            equations.append(Equation.parse(line))
        except (ParseError, SystemFormatError) as exc:
            raise SystemFormatError(f"line {lineno}: {exc}") from exc
    return EquationSystem(tuple(equations), tuple(free))


def load_system(path: str | Path) -> EquationSystem:
    path = Path(path)
    try:
        return parse_system(path.read_text(encoding="utf-8"))
    except SystemFormatError as exc:
        raise SystemFormatError(f"{path}: {exc}") from exc


def save_system(system: EquationSystem, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    free = system.free_variables()
    if free:
        lines.append("# free: " + " ".join(free))
    lines.extend(e.format() for e in system.equations)
    return "".join(line + "\n" for line in lines)


# -- Hamiltonians ----------------------------------------------------------------

def system_to_hamiltonian(system: EquationSystem, weights: Sequence[int] | None = None) -> BinaryPolynomial:
    """``sum_i weights[i] * (lhs_i - rhs_i)**2`` (unit weights by default)."""
    if weights is None:
        weights = [1] * len(system)
    weights = list(weights)
    if len(weights) != len(system):
        raise ValueError(f"got {len(weights)} weights for {len(system)} equations")
    total = BinaryPolynomial()
    for w, eq in zip(weights, system.equations):
        if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
            raise ValueError(f"equation weights must be positive integers, got {w!r}")
        total = total + w * eq.residual().square()
    return total


# -- factoring reduction ---------------------------------------------------------

def _carry_name(src: int, dst: int) -> str:
    if src < 10 and dst < 10:
        return f"z{src}{dst}"
    return f"z{src}_{dst}"


def _factor_bits(prefix: str, nbits: int) -> list[BinaryPolynomial]:
    bits = [BinaryPolynomial.constant(1)]
    bits += [BinaryPolynomial.variable(f"{prefix}{i}") for i in range(1, nbits - 1)]
    bits.append(BinaryPolynomial.constant(1))
    return bits


def generate_factoring_system(n: int, p_bits: int, q_bits: int) -> EquationSystem:
    """Column-wise long multiplication ``p * q = n``.

    ``p`` and ``q`` have their lowest and highest bits fixed to 1; the
    middle bits are variables ``p1 .. p{p_bits-2}`` (likewise ``q``).
    Column ``c`` (product bit ``c``, starting at 1) reads::

        sum_{i+j=c} p_i q_j + sum_d z_{d,c} = n_c + sum_k 2**k z_{c,c+k}

    with just enough carries ``z_{c,c+k}`` to absorb the column maximum.
    """
    if not isinstance(n, int) or n < 9 or n % 2 == 0:
        raise ValueError(f"n must be an odd integer >= 9, got {n!r}")
    if p_bits < 2 or q_bits < 2:
        raise ValueError("p_bits and q_bits must both be at least 2")
    if n.bit_length() not in (p_bits + q_bits - 1, p_bits + q_bits):
        raise ValueError(
            f"{n} has {n.bit_length()} bits; a {p_bits}-bit times {q_bits}-bit product has "
            f"{p_bits + q_bits - 1} or {p_bits + q_bits}"
        )
    p = _factor_bits("p", p_bits)
    q = _factor_bits("q", q_bits)
    top = p_bits + q_bits - 1
    incoming: dict[int, list[str]] = {}
    equations = []
    for col in range(1, top + 1):
        lhs = BinaryPolynomial()
        terms = 0
        for i in range(max(0, col - q_bits + 1), min(col, p_bits - 1) + 1):
            lhs = lhs + p[i] * q[col - i]
            terms += 1
        for name in incoming.get(col, ()):
            lhs = lhs + BinaryPolynomial.variable(name)
            terms += 1
        rhs = BinaryPolynomial.constant((n >> col) & 1)
        for k in range(1, max(terms, 1).bit_length()):
            if col + k > top:
                break
            name = _carry_name(col, col + k)
            rhs = rhs + (2 ** k) * BinaryPolynomial.variable(name)
            incoming.setdefault(col + k, []).append(name)
        equations.append(Equation(lhs, rhs))
    names = [v for bits in (p, q) for b in bits for v in b.variables()]
    return EquationSystem(tuple(equations), tuple(names), meta={"n": n, "p_bits": p_bits, "q_bits": q_bits})


def decode_factors(assignment: Mapping[str, int], p_bits: int, q_bits: int) -> tuple[int, int]:
    def value(prefix: str, nbits: int) -> int:
        out = 1 | (1 << (nbits - 1))
        for i in range(1, nbits - 1):
            out |= int(assignment[f"{prefix}{i}"]) << i
        return out

    return value("p", p_bits), value("q", q_bits)


# -- elementary deductions ------------------------------------------------------

def _find_substitution(eq: Equation) -> dict[str, int | str] | None:
    """One of the four elementary rules, or None if none fires.

    Raises UnsatisfiableSystemError for an equation with no solutions.
    """
    eq = eq.settled()
    lhs, rhs = eq.lhs, eq.rhs
    names = eq.variables()
    if not names:
        if lhs.const != rhs.const:
            raise UnsatisfiableSystemError(f"contradiction: {eq.format()}")
        return {}
    for side, other in ((lhs, rhs), (rhs, lhs)):
        if not other.is_constant():
            continue
        target = other.const
        top = sum(c for _, c in side.items())
        if target < side.const or target > top:
            raise UnsatisfiableSystemError(f"contradiction: {eq.format()}")
        if target == 0:
            # all terms vanish; only single-variable terms give a substitution
            zeros = {m[0]: 0 for m, _ in side.items() if len(m) == 1}
            if zeros:
                return zeros
        elif target == top:
            return {v: 1 for v in side.variables()}
    if len(names) == 1:
        (v,) = names
        fits = [b for b in (0, 1) if eq.holds({v: b})]
        if not fits:
            raise UnsatisfiableSystemError(f"contradiction: {eq.format()}")
        return {v: fits[0]} if len(fits) == 1 else {}
    if (
        len(lhs) == 1 and len(rhs) == 1
        and lhs.degree == 1 and rhs.degree == 1
        and lhs.items()[0][1] == 1 and rhs.items()[0][1] == 1
    ):
        a, b = sorted((lhs.variables()[0], rhs.variables()[0]), key=natural_key)
        return {b: a}
    return None


def apply_simple_deductions(system: EquationSystem) -> tuple[EquationSystem, list[Deduction]]:
    """Eliminate variables fixed by elementary rules.

    Rules: a sum of non-negative terms equal to 0 zeroes each term; a sum
    equal to its maximum sets each term to 1; a one-variable equation fixes
    that variable; ``x = y`` substitutes ``x`` by ``y``. Returns the reduced
    system and one ``relation`` deduction ``var == value`` per elimination,
    in the order applied (see :func:`expand_assignment`).
    """
    equations: list[Equation | None] = list(system.equations)
    variables = list(system.variables)
    deductions: list[Deduction] = []
    progress = True
    while progress:
        progress = False
        for i, eq in enumerate(equations):
            if eq is None:
                continue
            found = _find_substitution(eq)
            if found is None:
                continue
            if not found:
                equations[i] = None
                progress = True
                continue
            for name, value in found.items():
                deductions.append(Deduction.relation(BinaryPolynomial.variable(name),
                                                     BinaryPolynomial.variable(value) if isinstance(value, str)
                                                     else BinaryPolynomial.constant(value)))
            variables = [v for v in variables if v not in found]
            for j, other in enumerate(equations):
                if other is None or not set(found) & set(other.variables()):
                    continue
                equations[j] = Equation(other.lhs.substitute(found), other.rhs.substitute(found)).settled()
            progress = True
            break
    reduced = EquationSystem(tuple(e for e in equations if e is not None), tuple(variables), meta=dict(system.meta))
    return reduced, deductions


def expand_assignment(assignment: Mapping[str, int], deductions: Sequence[Deduction]) -> dict[str, int]:
    """Recover eliminated variables from an assignment of the reduced system."""
    full = dict(assignment)
    for d in reversed(deductions):
        (name,) = d.f.variables()
        full[name] = d.g.evaluate(full)
    return full


def solve_exhaustive(system: EquationSystem, workers: int | None = None, cap: int = 28) -> list[dict[str, int]]:
    """Every solution, by enumerating all assignments of ``system.variables``."""
    from .spectrum import enumerate_spectrum

    h = system_to_hamiltonian(system)
    report = enumerate_spectrum(h, variables=system.variables, workers=workers, cap=cap, ground_state_limit=None)
    if report.e_ground != 0:
        return []
    return [dict(zip(report.variables, map(int, bits))) for bits in report.ground_states]

