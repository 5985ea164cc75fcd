"""Energy landscape manipulation that keeps the ground-state set fixed.

* :func:`deduc_elm` adds a non-negative penalty per deduction. Every
  penalty vanishes on the ground states, so only excited states move.
* :func:`multiplicity_elm` reweights each squared equation residual by a
  positive integer chosen from the equations' maximum energies
  (:func:`plan_weights`).

:func:`verify_ground_state_preserved` checks the claim exhaustively.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .deduction import Deduction, DeductionError
from .factoring import Equation, EquationSystem, system_to_hamiltonian
from .pbpoly import BinaryPolynomial, VariableTable, natural_key
from .spectrum import energies, first_argmin_difference

__all__ = [
    "CEIL_RATIO",
    "DIFF_MAX",
    "EXACT",
    "INDICATOR",
    "SIDE_MAX",
    "UNIFORM",
    "Deduction",
    "PreconditionError",
    "Preservation",
    "WeightScheme",
    "deduc_elm",
    "max_equation_energy",
    "multiplicity_elm",
    "plan_weights",
    "verify_ground_state_preserved",
]

SIDE_MAX = "side_max"
DIFF_MAX = "diff_max"
EXACT = "exact"
CEIL_RATIO = "ceil_ratio"
INDICATOR = "indicator"
UNIFORM = "uniform"

MODE_ALIASES = {"side": SIDE_MAX, SIDE_MAX: SIDE_MAX, "diff": DIFF_MAX, DIFF_MAX: DIFF_MAX, EXACT: EXACT}
SCHEME_ALIASES = {"ceil": CEIL_RATIO, CEIL_RATIO: CEIL_RATIO, INDICATOR: INDICATOR, UNIFORM: UNIFORM}


class PreconditionError(ValueError):
    pass


def deduc_elm(hamiltonian: BinaryPolynomial, deductions: Sequence[Deduction]) -> BinaryPolynomial:
    """Add each deduction's penalty to ``hamiltonian``.

    Deductions must hold at every ground state; that is the caller's claim,
    checked afterwards with :func:`verify_ground_state_preserved`.
    """
    out = hamiltonian
    for d in deductions:
        if d.weight <= 0:
            raise DeductionError("deduction weights must be positive")
        out = out + d.penalty()
    return out


def max_equation_energy(eq: Equation, mode: str = SIDE_MAX, *, strict: bool = False) -> int:
    """Upper bound on ``(lhs - rhs)**2`` over all assignments.

    ``side_max`` squares the larger of the two coefficient sums (constants
    included). ``diff_max`` squares the larger of ``sum(lhs) - const(rhs)``
    and ``sum(rhs) - const(lhs)``, which is exact when no variable occurs
    twice in the equation. ``exact`` maximises by brute force over the
    equation's own variables.

    Both closed forms remain upper bounds when a variable sits on both
    sides; ``strict=True`` rejects that case instead.
    """
    mode = MODE_ALIASES.get(mode, mode)
    eq = eq.normalized()
    if mode == EXACT:
        return _exact_max(eq)
    shared = set(eq.lhs.variables()) & set(eq.rhs.variables())
    if shared and strict:
        names = ", ".join(sorted(shared, key=natural_key))
        raise PreconditionError(
            f"variables {names} occur on both sides of {eq.format()}; "
            "use mode='exact' to maximise by brute force instead"
        )
    s_left = sum(c for _, c in eq.lhs.items())
    s_right = sum(c for _, c in eq.rhs.items())
    if mode == SIDE_MAX:
        return max(s_left, s_right) ** 2
    if mode == DIFF_MAX:
        return max(s_left - eq.rhs.const, s_right - eq.lhs.const) ** 2
    raise ValueError(f"unknown energy mode {mode!r}")


def _exact_max(eq: Equation, cap: int = 24) -> int:
    residual = eq.residual()
    values = energies(residual.square(), eq.variables(), cap=cap)
    return int(values.max())


@dataclass(frozen=True)
class WeightScheme:
    energies: tuple[int, ...]
    weights: tuple[int, ...]
    kind: str
    mode: str

    @property
    def e_max(self) -> int:
        return max(self.energies)

    @property
    def per_equation(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.energies, self.weights))

    def __len__(self) -> int:
        return len(self.weights)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "e_max": self.e_max,
            "per_equation": [{"energy": e, "lambda": w} for e, w in self.per_equation],
        }


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def plan_weights(system: EquationSystem, kind: str = CEIL_RATIO, mode: str = SIDE_MAX, *,
                 strict: bool = False) -> WeightScheme:
    """Per-equation weights.

    ``ceil_ratio``: ``ceil(E_max / E_i)``. ``indicator``: 1 for equations
    attaining ``E_max``, 2 otherwise. ``uniform``: all ones. An equation
    whose bound is 0 contributes nothing and gets weight 1.
    """
    kind = SCHEME_ALIASES.get(kind, kind)
    mode = MODE_ALIASES.get(mode, mode)
    if not len(system):
        raise ValueError("cannot plan weights for an empty system")
    bounds = tuple(max_equation_energy(eq, mode, strict=strict) for eq in system.equations)
    e_max = max(bounds)
    if kind == CEIL_RATIO:
        weights = tuple(_ceil_div(e_max, e) if e else 1 for e in bounds)
    elif kind == INDICATOR:
        weights = tuple(1 if e == e_max else 2 for e in bounds)
    elif kind == UNIFORM:
        weights = (1,) * len(bounds)
    else:
        raise ValueError(f"unknown weight scheme {kind!r}")
    return WeightScheme(bounds, weights, kind, mode)


def multiplicity_elm(system: EquationSystem, scheme: WeightScheme | Sequence[int]) -> BinaryPolynomial:
    weights = scheme.weights if isinstance(scheme, WeightScheme) else tuple(scheme)
    if len(weights) != len(system):
        raise ValueError(f"weight scheme has {len(weights)} entries for {len(system)} equations")
    return system_to_hamiltonian(system, weights)


@dataclass(frozen=True)
class Preservation:
    preserved: bool
    variables: tuple[str, ...]
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.preserved

    def witness_assignment(self) -> dict[str, int] | None:
        if self.witness is None:
            return None
        return dict(zip(self.variables, map(int, self.witness)))


def verify_ground_state_preserved(
    before: BinaryPolynomial,
    after: BinaryPolynomial,
    variables: Sequence[str] | None = None,
    *,
    workers: int | None = None,
    cap: int = 24,
) -> Preservation:
    """Exhaustively compare the minimiser sets of two polynomials.

    Without ``variables`` both polynomials must mention the same variables.
    On failure the witness is the lowest-index assignment that minimises
    exactly one of them.
    """
    if variables is None:
        if set(before.variables()) != set(after.variables()):
            extra = sorted(set(before.variables()) ^ set(after.variables()), key=natural_key)
            raise ValueError(f"variable universes differ on {extra}; pass variables= explicitly")
        variables = before.variables()
    table = VariableTable(variables)
    hit = first_argmin_difference(before, after, table, workers=workers, cap=cap)
    if hit is None:
        return Preservation(True, table.names)
    return Preservation(False, table.names, format(hit, f"0{len(table)}b"))
