"""Brute-force reference implementations used to check the package.

Nothing here imports the code under test's evaluation paths: polynomials
are consumed as plain ``{monomial: coefficient}`` dicts and every
assignment is evaluated one term at a time.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction


def terms_of(poly) -> dict[tuple[str, ...], int]:
    """Plain dict view of a polynomial's stored terms."""
    return dict(poly.items())


def naive_value(terms: dict, assignment: dict) -> int:
    total = 0
    for mono, coef in terms.items():
        product = coef
        for v in mono:
            product *= assignment[v]
        total += product
    return total


def assignments(names):
    """Every 0/1 assignment, first name as the most significant bit."""
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def naive_energies(terms: dict, names) -> list[int]:
    return [naive_value(terms, a) for a in assignments(names)]


def naive_landscape(terms: dict, names):
    """``(levels, minimiser bitstrings)`` with levels a sorted (energy, count) list."""
    values = naive_energies(terms, names)
    levels = sorted(Counter(values).items())
    low = levels[0][0]
    width = len(names)
    ground = [format(i, f"0{width}b") if width else "" for i, v in enumerate(values) if v == low]
    return levels, ground


def naive_ratio(levels) -> Fraction | None:
    if len(levels) < 2:
        return None
    e0, e1, emax = levels[0][0], levels[1][0], levels[-1][0]
    return Fraction((emax - e0) ** 2, (e1 - e0) ** 3)


def naive_solutions(equations, names) -> list[dict]:
    """Assignments where every ``(lhs_terms, rhs_terms)`` pair balances."""
    return [a for a in assignments(names)
            if all(naive_value(l, a) == naive_value(r, a) for l, r in equations)]


def factor_pairs(n: int) -> list[tuple[int, int]]:
    """Ordered pairs ``(p, q)`` with ``p * q == n`` and ``1 < p, q``, by trial division."""
    return [(p, n // p) for p in range(2, n) if n % p == 0 and n // p > 1]


def is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def odd_semiprimes(limit: int) -> list[int]:
    out = []
    for n in range(9, limit, 2):
        pairs = [(p, q) for p, q in factor_pairs(n) if p <= q]
        if len(pairs) == 1 and is_prime(pairs[0][0]) and is_prime(pairs[0][1]):
            out.append(n)
    return out


def bit_columns(names):
    """0/1 arrays, one per name, over all assignments (first name most significant)."""
    import numpy as np

    n = len(names)
    idx = np.arange(1 << n, dtype=np.int64)
    return {v: (idx >> (n - 1 - j)) & 1 for j, v in enumerate(names)}


def table_of(terms: dict, columns, size):
    import numpy as np

    out = np.zeros(size, dtype=np.int64)
    for mono, coef in terms.items():
        col = np.full(size, coef, dtype=np.int64)
        for v in mono:
            col = col * columns[v]
        out += col
    return out


def weighted_residual_table(equations, weights, names, extra_terms=()):
    """``sum_i w_i * (lhs_i - rhs_i)**2`` plus extra term dicts, over every assignment.

    Each residual is evaluated from its own sides and squared numerically,
    never by expanding polynomials symbolically.
    """
    columns = bit_columns(names)
    size = 1 << len(names)
    total = 0
    for (lhs, rhs), w in zip(equations, weights):
        diff = table_of(lhs, columns, size) - table_of(rhs, columns, size)
        total = total + w * diff * diff
    for terms in extra_terms:
        total = total + table_of(terms, columns, size)
    return total


def histogram(values):
    import numpy as np

    energies_, counts = np.unique(values, return_counts=True)
    return [(int(e), int(c)) for e, c in zip(energies_, counts)]
