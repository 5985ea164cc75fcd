"""Exhaustive energy-landscape enumeration.

All ``2**n`` assignments of a polynomial are evaluated in contiguous,
equally sized index blocks. Each block yields a local histogram and its
local minimisers; blocks are merged in index order, so the result does
not depend on the number of worker threads.

Assignment index ``i`` gives variable ``j`` (in natural order) the bit
``(i >> (n - 1 - j)) & 1``; the bitstring of an assignment is therefore the
big-endian binary expansion of its index.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .pbpoly import BinaryPolynomial, PolynomialError, VariableTable

__all__ = [
    "CapExceededError",
    "Comparison",
    "SpectrumReport",
    "compare_spectra",
    "default_workers",
    "enumerate_spectrum",
    "energies",
    "first_argmin_difference",
    "round_half_up",
    "spectral_ratio",
]

DEFAULT_CAP = 28
DEFAULT_GROUND_LIMIT = 64
DEFAULT_BLOCK = 1 << 18
WORKERS_ENV = "ELMKIT_WORKERS"
_INT64_SAFE = 1 << 62
_FLOAT_EXACT = 1 << 53


class CapExceededError(RuntimeError):
    pass


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- exact ratio helpers -------------------------------------------------------

def round_half_up(value: Fraction) -> int:
    return (2 * value.numerator + value.denominator) // (2 * value.denominator)


def spectral_ratio(e_width: int, e_gap: int) -> tuple[Fraction, int]:
    """Exact ``e_width**2 / e_gap**3`` and its half-up rounded display value.

    >>> spectral_ratio(171, 2)
    (Fraction(29241, 8), 3655)
    """
    if e_gap <= 0:
        raise ValueError("spectral ratio is undefined for a non-positive gap")
    ratio = Fraction(e_width ** 2, e_gap ** 3)
    return ratio, round_half_up(ratio)


# -- compiled evaluation -------------------------------------------------------

class _Compiled:
    """Polynomial lowered to index tuples for vectorised evaluation.

    Aligned blocks are evaluated as a matrix product: the lowest ``LOW_BITS``
    variables index the columns, the rest the rows, and each term splits
    into a high-variable factor and a low-variable indicator. Products run
    in float64, which is exact while the coefficient magnitudes sum below
    ``2**53``; larger polynomials use the plain int64 path.
    """

    LOW_BITS = 10

    def __init__(self, poly: BinaryPolynomial, table: VariableTable):
        missing = [v for v in poly.variables() if v not in table]
        if missing:
            raise PolynomialError(f"variables {missing} are not in the enumeration universe")
        bound = sum(abs(c) for _, c in poly.items())
        if bound >= _INT64_SAFE:
            raise OverflowError(
                f"coefficient magnitudes sum to {bound}, which does not fit the 64-bit enumerator"
            )
        self.n = len(table)
        self.const = poly.const
        self.terms = [(tuple(table.index(v) for v in mono), coef) for mono, coef in poly.items() if mono]
        self.low = min(self.n, self.LOW_BITS)
        self.exact_float = bound < _FLOAT_EXACT
        if self.exact_float:
            self._split()

    def _split(self) -> None:
        cut = self.n - self.low
        groups: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = {}
        for mono, coef in self.terms:
            high = tuple(j for j in mono if j < cut)
            low = tuple(j - cut for j in mono if j >= cut)
            groups.setdefault(low, []).append((high, coef))
        self.groups = list(groups.items())
        cols = np.arange(1 << self.low, dtype=np.int64)
        indicator = np.ones((len(self.groups), cols.size))
        for k, (low, _) in enumerate(self.groups):
            for j in low:
                indicator[k] *= (cols >> (self.low - 1 - j)) & 1
        self.indicator = indicator

    def block(self, start: int, stop: int) -> np.ndarray:
        span = 1 << self.low
        if self.exact_float and start % span == 0 and stop % span == 0 and self.groups:
            rows = _evaluate_terms(np.arange(start // span, stop // span, dtype=np.int64), self.n - self.low,
                                   self.groups, dtype=np.float64)
            out = np.rint(rows @ self.indicator).astype(np.int64).ravel()
            out += self.const
            return out
        idx = np.arange(start, stop, dtype=np.int64)
        out = np.full(stop - start, self.const, dtype=np.int64)
        for (mono, coef), mask in zip(self.terms, _monomial_masks(idx, self.n, [m for m, _ in self.terms])):
            np.add(out, coef, out=out, where=mask)
        return out


def _monomial_masks(idx: np.ndarray, n: int, monomials):
    bits: dict[int, np.ndarray] = {}

    def bit(j: int) -> np.ndarray:
        if j not in bits:
            bits[j] = ((idx >> (n - 1 - j)) & 1).astype(bool)
        return bits[j]

    for mono in monomials:
        if not mono:
            yield np.ones(idx.size, dtype=bool)
            continue
        mask = bit(mono[0])
        for j in mono[1:]:
            mask = mask & bit(j)
        yield mask


def _evaluate_terms(idx: np.ndarray, n: int, groups, dtype) -> np.ndarray:
    """Matrix whose column ``k`` is the high-variable polynomial of group ``k``."""
    out = np.zeros((idx.size, len(groups)), dtype=dtype)
    for k, (_, terms) in enumerate(groups):
        col = out[:, k]
        for mask, (_, coef) in zip(_monomial_masks(idx, n, [m for m, _ in terms]), terms):
            col[mask] += coef
    return out


def _blocks(total: int, block: int) -> list[tuple[int, int]]:
    return [(s, min(s + block, total)) for s in range(0, total, block)]


def _universe(poly: BinaryPolynomial, variables: Sequence[str] | VariableTable | None) -> VariableTable:
    if variables is None:
        return VariableTable(poly.variables())
    if isinstance(variables, VariableTable):
        return variables
    return VariableTable(variables)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceededError(
            f"{n} variables means 2**{n} states, above the enumeration cap of {cap}; raise it with --cap"
        )


def energies(poly: BinaryPolynomial, variables: Sequence[str] | None = None, cap: int = 24) -> np.ndarray:
    """Full energy vector indexed by assignment (for small ``n``)."""
    table = _universe(poly, variables)
    _check_cap(len(table), cap)
    return _Compiled(poly, table).block(0, 1 << len(table))


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    variables: tuple[str, ...]
    levels: tuple[tuple[int, int], ...]
    ground_states: tuple[str, ...]
    total_ground_states: int
    e_gap: int | None
    e_width: int
    ratio: Fraction | None
    ratio_display: int | None
    notes: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def e_ground(self) -> int:
        return self.levels[0][0]

    @property
    def e_max(self) -> int:
        return self.levels[-1][0]

    def energy(self, k: int) -> int | None:
        return self.levels[k][0] if k < len(self.levels) else None

    def degeneracy(self, k: int) -> int | None:
        return self.levels[k][1] if k < len(self.levels) else None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "variables": list(self.variables),
            "levels": [{"energy": e, "count": c} for e, c in self.levels],
            "ground_states": list(self.ground_states),
            "total_ground_states": self.total_ground_states,
            "e_gap": self.e_gap,
            "e_width": self.e_width,
            "ratio": None if self.ratio is None else {
                "num": self.ratio.numerator,
                "den": self.ratio.denominator,
                "display": self.ratio_display,
            },
            "mode_notes": list(self.notes),
        }

    def to_csv(self) -> str:
        rows = ["level,energy,count"]
        rows += [f"{k},{e},{c}" for k, (e, c) in enumerate(self.levels)]
        return "\n".join(rows) + "\n"

    def row(self, depth: int = 4) -> list:
        """Table row in published column order: E_gap, n1, E_|2>, n2, ..., E_|max>, R."""
        cells = []
        for k in range(1, depth + 1):
            cells += [self.energy(k), self.degeneracy(k)]
        return cells + [self.e_max, self.ratio_display]


def _build_report(table: VariableTable, hist: Counter, ground: list[int], total_ground: int,
                  notes: list[str]) -> SpectrumReport:
    levels = tuple(sorted((int(e), int(c)) for e, c in hist.items()))
    n = len(table)
    ground_bits = tuple(format(i, f"0{n}b") if n else "" for i in ground)
    e0 = levels[0][0]
    width = levels[-1][0] - e0
    if len(levels) == 1:
        notes = notes + ["flat spectrum: e_gap and ratio undefined"]
        gap = ratio = display = None
    else:
        gap = levels[1][0] - e0
        ratio, display = spectral_ratio(width, gap)
    return SpectrumReport(table.names, levels, ground_bits, total_ground, gap, width, ratio, display, tuple(notes))


def enumerate_spectrum(
    poly: BinaryPolynomial,
    variables: Sequence[str] | VariableTable | None = None,
    *,
    workers: int | None = None,
    cap: int = DEFAULT_CAP,
    ground_state_limit: int | None = DEFAULT_GROUND_LIMIT,
    block_size: int = DEFAULT_BLOCK,
) -> SpectrumReport:
    """Exact density of states of ``poly`` over every assignment.

    ``variables`` fixes the enumeration universe (default: the polynomial's
    own variables); it may include variables the polynomial ignores. Only
    the first ``ground_state_limit`` minimisers (in index order) are kept,
    but ``total_ground_states`` is always exact. ``None`` keeps them all.
    """
    table = _universe(poly, variables)
    n = len(table)
    _check_cap(n, cap)
    compiled = _Compiled(poly, table)
    total = 1 << n
    limit = total if ground_state_limit is None else ground_state_limit

    def run(span: tuple[int, int]):
        start, stop = span
        values = compiled.block(start, stop)
        uniq, counts = np.unique(values, return_counts=True)
        low = uniq[0]
        where = np.flatnonzero(values == low)[:limit] + start
        return uniq, counts, int(low), int(counts[0]), where

    spans = _blocks(total, block_size)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(spans) == 1:
        parts = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(spans))) as pool:
            parts = list(pool.map(run, spans))

    hist: Counter = Counter()
    for uniq, counts, *_ in parts:
        hist.update(dict(zip(uniq.tolist(), counts.tolist())))
    e0 = min(p[2] for p in parts)
    ground: list[int] = []
    total_ground = 0
    for _, _, low, count, where in parts:
        if low == e0:
            total_ground += count
            ground.extend(where[: max(0, limit - len(ground))].tolist())
    notes = [f"ground_states truncated to {limit} of {total_ground}"] if total_ground > len(ground) else []
    return _build_report(table, hist, ground, total_ground, notes)


def first_argmin_difference(
    a: BinaryPolynomial,
    b: BinaryPolynomial,
    variables: Sequence[str] | VariableTable,
    *,
    workers: int | None = None,
    cap: int = 24,
    block_size: int = DEFAULT_BLOCK,
) -> int | None:
    """Lowest assignment index minimising exactly one of ``a`` and ``b``.

    Returns ``None`` when both polynomials have the same set of minimisers.
    """
    table = _universe(a, variables)
    _check_cap(len(table), cap)
    ca, cb = _Compiled(a, table), _Compiled(b, table)
    spans = _blocks(1 << len(table), block_size)
    workers = default_workers() if workers is None else max(1, workers)

    def pmap(fn):
        if workers == 1 or len(spans) == 1:
            return [fn(s) for s in spans]
        with ThreadPoolExecutor(max_workers=min(workers, len(spans))) as pool:
            return list(pool.map(fn, spans))

    mins = pmap(lambda s: (int(ca.block(*s).min()), int(cb.block(*s).min())))
    ma = min(m[0] for m in mins)
    mb = min(m[1] for m in mins)

    def diff(span):
        mismatch = (ca.block(*span) == ma) != (cb.block(*span) == mb)
        hits = np.flatnonzero(mismatch)
        return int(hits[0]) + span[0] if hits.size else None

    for hit in pmap(diff):
        if hit is not None:
            return hit
    return None


# -- comparison ----------------------------------------------------------------

@dataclass(frozen=True)
class Comparison:
    factor: Fraction | None
    levels: tuple[tuple[int, int | None, int | None, int | None, int | None], ...]
    same_ground_states: bool

    @property
    def percent(self) -> Fraction | None:
        return None if self.factor is None else self.factor * 100

    def to_dict(self) -> dict:
        return {
            "factor": None if self.factor is None else {
                "num": self.factor.numerator,
                "den": self.factor.denominator,
                "value": float(self.factor),
            },
            "percent": None if self.factor is None else float(self.percent),
            "levels": [
                {"level": k, "energy_a": ea, "count_a": na, "energy_b": eb, "count_b": nb}
                for k, ea, na, eb, nb in self.levels
            ],
            "same_ground_states": self.same_ground_states,
        }


def compare_spectra(a: SpectrumReport, b: SpectrumReport, depth: int = 5) -> Comparison:
    """How much the runtime proxy shrinks going from ``a`` to ``b``.

    ``factor`` is ``ratio(a) / ratio(b)``, so a value above 1 means ``b``
    has the smaller spectral ratio.
    """
    factor = None if a.ratio is None or b.ratio is None else a.ratio / b.ratio
    rows = tuple(
        (k, a.energy(k), a.degeneracy(k), b.energy(k), b.degeneracy(k))
        for k in range(min(depth, max(len(a.levels), len(b.levels))))
    )
    same = (
        a.variables == b.variables
        and a.total_ground_states == b.total_ground_states
        and a.ground_states == b.ground_states
    )
    return Comparison(factor, rows, same)
