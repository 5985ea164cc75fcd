"""Adiabatic runtime-bound quantities for small instances.

The interpolation is ``H(s) = (1 - s) * H_init + s * H_final`` with
``s = t / T``. ``H_final`` is diagonal in the computational basis (entry
``x`` is the polynomial's value at assignment ``x``, same index order as
:mod:`elmkit.spectrum`). The default ``H_init`` is the transverse field
``c * sum_j (I - X_j) / 2`` whose ground state is the uniform superposition.

Everything here is dense linear algebra, so qubit counts stay small.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from .pbpoly import BinaryPolynomial, VariableTable
from .spectrum import CapExceededError, SpectrumReport, default_workers, energies

__all__ = [
    "BoundReport",
    "GapResult",
    "InterpolationProblem",
    "build_operators",
    "interpolated_gap",
    "min_interpolated_gap",
    "runtime_bounds",
    "spectral_norm",
]

TRANSVERSE = "transverse"
NONE = "none"
CUSTOM = "custom"
DEFAULT_QUBIT_CAP = 12
GAP_XTOL = 1e-9


@dataclass(frozen=True)
class InterpolationProblem:
    h_final: BinaryPolynomial
    epsilon: float | Fraction | str = Fraction(1, 10)
    h_init_kind: str = TRANSVERSE
    tf_scale: float = 1.0
    grid: int = 64
    variables: tuple[str, ...] | None = None
    h_init_matrix: np.ndarray | None = None
    cap: int = DEFAULT_QUBIT_CAP

    def __post_init__(self):
        if self.epsilon_exact <= 0:
            raise ValueError("epsilon must be strictly positive")
        if self.grid < 2:
            raise ValueError("grid needs at least two points")
        if self.h_init_kind not in (TRANSVERSE, NONE, CUSTOM):
            raise ValueError(f"unknown initial Hamiltonian {self.h_init_kind!r}")
        if self.h_init_kind == CUSTOM and self.h_init_matrix is None:
            raise ValueError("custom initial Hamiltonian needs h_init_matrix")

    @property
    def epsilon_exact(self) -> Fraction:
        # Go through str() so 0.1 means 1/10, not the nearest double.
        eps = self.epsilon
        return eps if isinstance(eps, Fraction) else Fraction(str(eps))

    @property
    def table(self) -> VariableTable:
        names = self.variables if self.variables is not None else self.h_final.variables()
        return VariableTable(names)


def spectral_norm(matrix: np.ndarray) -> float:
    """Largest singular value; for Hermitian input, the largest |eigenvalue|."""
    vals = np.linalg.eigvalsh(matrix)
    return float(np.max(np.abs(vals)))


def _transverse_field(n: int, scale: float) -> np.ndarray:
    dim = 1 << n
    h = np.zeros((dim, dim))
    idx = np.arange(dim)
    h[idx, idx] = scale * n / 2
    for j in range(n):
        flipped = idx ^ (1 << (n - 1 - j))
        h[idx, flipped] -= scale / 2
    return h


def build_operators(problem: InterpolationProblem) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(H_init, H_final)`` pair."""
    table = problem.table
    n = len(table)
    if n > problem.cap:
        raise CapExceededError(f"{n} qubits exceeds the dense-solver cap of {problem.cap}")
    diag = energies(problem.h_final, table.names, cap=problem.cap).astype(float)
    h_final = np.diag(diag)
    if problem.h_init_kind == TRANSVERSE:
        h_init = _transverse_field(n, problem.tf_scale)
    elif problem.h_init_kind == NONE:
        h_init = np.zeros_like(h_final)
    else:
        h_init = np.asarray(problem.h_init_matrix, dtype=complex if np.iscomplexobj(problem.h_init_matrix) else float)
        if h_init.shape != h_final.shape:
            raise ValueError(f"h_init_matrix has shape {h_init.shape}, expected {h_final.shape}")
        if not np.allclose(h_init, h_init.conj().T):
            raise ValueError("h_init_matrix is not Hermitian")
    return h_init, h_final


def _ground_multiplicity(h_final: np.ndarray) -> int:
    diag = np.diag(h_final).real
    return int(np.count_nonzero(diag == diag.min()))


def interpolated_gap(h_init: np.ndarray, h_final: np.ndarray, s: float, multiplicity: int = 1) -> float:
    """``E_g(s) - E_0(s)`` where ``g`` is the final ground-state multiplicity.

    With a unique final ground state this is the usual first gap; with ``g``
    degenerate final ground states it is the distance from the ground level
    to the first level outside that manifold.
    """
    vals = np.linalg.eigvalsh((1 - s) * h_init + s * h_final)
    if multiplicity >= len(vals):
        return math.inf
    return float(vals[multiplicity] - vals[0])


@dataclass(frozen=True)
class GapResult:
    gap: float
    argmin: float
    final_gap: float
    degenerate_final: bool
    grid: tuple[float, ...]
    gaps: tuple[float, ...]


def min_interpolated_gap(problem: InterpolationProblem, workers: int | None = None) -> GapResult:
    """Minimum gap over ``s`` in [0, 1].

    A uniform grid locates the coarse minimum; a bounded scalar search on
    the bracketing cells refines it to ``GAP_XTOL`` in ``s``.
    """
    h_init, h_final = build_operators(problem)
    mult = _ground_multiplicity(h_final)
    grid = np.linspace(0.0, 1.0, problem.grid)
    workers = default_workers() if workers is None else max(1, workers)

    def gap_at(s: float) -> float:
        return interpolated_gap(h_init, h_final, float(s), mult)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            gaps = list(pool.map(gap_at, grid))
    else:
        gaps = [gap_at(s) for s in grid]
    k = int(np.argmin(gaps))
    best_s, best_gap = float(grid[k]), float(gaps[k])
    lo, hi = float(grid[max(k - 1, 0)]), float(grid[min(k + 1, len(grid) - 1)])
    if hi > lo:
        res = minimize_scalar(gap_at, bounds=(lo, hi), method="bounded", options={"xatol": GAP_XTOL})
        if res.fun < best_gap:
            best_s, best_gap = float(res.x), float(res.fun)
    return GapResult(best_gap, best_s, float(gaps[-1]), mult > 1, tuple(map(float, grid)), tuple(map(float, gaps)))


@dataclass(frozen=True)
class BoundReport:
    spectral_norm_diff: float
    norm_final: float
    norm_init: float
    min_gap: float
    min_gap_at: float
    final_gap: float
    degenerate_final: bool
    tight_bound: float
    final_time_term: float
    loose_bound: Fraction | None
    weyl_check: bool
    printed_form_holds: bool
    loose_dominates_final_term: bool | None
    epsilon: Fraction

    def to_dict(self) -> dict:
        def real(x: float):
            return None if math.isinf(x) or math.isnan(x) else x

        return {
            "epsilon": str(self.epsilon),
            "spectral_norm_diff": self.spectral_norm_diff,
            "norm_final": self.norm_final,
            "norm_init": self.norm_init,
            "min_gap": self.min_gap,
            "min_gap_at": self.min_gap_at,
            "final_gap": self.final_gap,
            "degenerate_final": self.degenerate_final,
            "tight_bound": real(self.tight_bound),
            "final_time_term": real(self.final_time_term),
            "loose_bound": None if self.loose_bound is None else {
                "num": self.loose_bound.numerator,
                "den": self.loose_bound.denominator,
                "value": float(self.loose_bound),
            },
            "weyl_check": self.weyl_check,
            "printed_form_holds": self.printed_form_holds,
            "loose_dominates_final_term": self.loose_dominates_final_term,
        }


def _bound(norm: float, eps: float, gap: float) -> float:
    return math.inf if gap <= 0 else norm ** 2 / (eps * gap ** 3)


def runtime_bounds(problem: InterpolationProblem, spectrum: SpectrumReport,
                   workers: int | None = None) -> BoundReport:
    """Runtime lower-bound quantities for ``problem``.

    ``tight_bound`` is ``max_s ||H_final - H_init||**2 / (eps * gap(s)**3)``
    over the sampled and refined points; ``loose_bound`` is the exact
    rational ``R / eps`` from the classical spectrum.
    """
    if spectrum.variables != problem.table.names:
        raise ValueError("spectrum report was computed over a different variable set")
    h_init, h_final = build_operators(problem)
    diag = np.sort(np.diag(h_final).real)
    expected = np.repeat([e for e, _ in spectrum.levels], [c for _, c in spectrum.levels])
    if not np.array_equal(diag, expected.astype(float)):
        raise ValueError("spectrum report does not match the final Hamiltonian")
    gap = min_interpolated_gap(problem, workers=workers)
    eps = problem.epsilon_exact
    eps_f = float(eps)
    norm_diff = spectral_norm(h_final - h_init)
    norm_f = spectral_norm(h_final)
    norm_i = spectral_norm(h_init)
    tol = 1e-9 * max(1.0, norm_f + norm_i)
    final_term = _bound(norm_diff, eps_f, spectrum.e_gap or 0)
    loose = None if spectrum.ratio is None else spectrum.ratio / eps
    dominates = None
    if loose is not None and norm_diff <= spectrum.e_width + tol:
        dominates = float(loose) >= final_term * (1 - 1e-12)
    return BoundReport(
        spectral_norm_diff=norm_diff,
        norm_final=norm_f,
        norm_init=norm_i,
        min_gap=gap.gap,
        min_gap_at=gap.argmin,
        final_gap=gap.final_gap,
        degenerate_final=gap.degenerate_final,
        tight_bound=_bound(norm_diff, eps_f, gap.gap),
        final_time_term=final_term,
        loose_bound=loose,
        weyl_check=norm_diff <= norm_f + norm_i + tol,
        printed_form_holds=norm_diff <= norm_f - norm_i + tol,
        loose_dominates_final_term=dominates,
        epsilon=eps,
    )
