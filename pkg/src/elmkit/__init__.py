"""Energy landscape manipulation for pseudo-Boolean Hamiltonians."""

from .deduction import Deduction, load_deductions, parse_deductions
from .elm import (
    WeightScheme,
    deduc_elm,
    max_equation_energy,
    multiplicity_elm,
    plan_weights,
    verify_ground_state_preserved,
)
from .factoring import (
    Equation,
    EquationSystem,
    apply_simple_deductions,
    generate_factoring_system,
    load_system,
    parse_system,
    save_system,
    system_to_hamiltonian,
)
from .pbpoly import BinaryPolynomial, VariableTable, parse_polynomial
from .spectrum import SpectrumReport, compare_spectra, enumerate_spectrum, spectral_ratio

__version__ = "0.1.0"

__all__ = [
    "BinaryPolynomial",
    "Deduction",
    "Equation",
    "EquationSystem",
    "SpectrumReport",
    "VariableTable",
    "WeightScheme",
    "apply_simple_deductions",
    "compare_spectra",
    "deduc_elm",
    "enumerate_spectrum",
    "generate_factoring_system",
    "load_deductions",
    "load_system",
    "max_equation_energy",
    "multiplicity_elm",
    "parse_deductions",
    "parse_polynomial",
    "parse_system",
    "plan_weights",
    "save_system",
    "spectral_ratio",
    "system_to_hamiltonian",
    "verify_ground_state_preserved",
]
