import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elmkit.deduction import Deduction, DeductionError, format_deductions, load_deductions, parse_deductions
from elmkit.elm import (
    PreconditionError,
    deduc_elm,
    max_equation_energy,
    multiplicity_elm,
    plan_weights,
    verify_ground_state_preserved,
)
from elmkit.factoring import Equation, EquationSystem, load_system, parse_system, system_to_hamiltonian
from elmkit.pbpoly import BinaryPolynomial, parse_polynomial

from corpus import planted_system, random_polynomial
from oracles import assignments, naive_landscape, naive_value, terms_of

P = parse_polynomial
V = BinaryPolynomial.variable


def landscape(poly, names):
    return naive_landscape(terms_of(poly), names)


class TestDeductions:
    def test_implication_penalty_form(self):
        d = Deduction.implication("z24", {"p1": 1, "p2": 1, "q2": 1})
        assert d.penalty() == P("3*z24 - z24*p1 - z24*p2 - z24*q2")
        assert d.describe() == "z24*(3 - p1 - p2 - q2)"

    def test_second_implication_penalty_form(self):
        d = Deduction.implication("z79", {"p3": 1, "q3": 1, "z57": 1, "z67": 1})
        assert d.describe() == "z79*(4 - p3 - q3 - z57 - z67)"

    def test_zero_consequence(self):
        d = Deduction.implication("v", {"w": 0}, weight=3)
        assert d.penalty() == P("3*v*w")

    def test_relation_penalty(self):
        d = Deduction.relation(P("x0*x1"), P("x0"), weight=2)
        assert d.penalty() == 2 * P("x0*x1 - x0").square()

    def test_identical_sides_add_nothing(self):
        h = 3 * P("x + y") + 1
        assert deduc_elm(h, [Deduction.relation(P("x*y + x"), P("x + y*x"))]) == h

    @pytest.mark.parametrize("weight", [0, -2, 1.5])
    def test_non_positive_weight(self, weight):
        with pytest.raises(DeductionError):
            Deduction.relation("x", "y", weight=weight)

    @pytest.mark.parametrize("kwargs", [
        {"trigger": "v", "consequences": ()},
        {"trigger": "v", "consequences": (("v", 1),)},
        {"trigger": "v", "consequences": (("w", 1), ("w", 0))},
        {"trigger": "v", "consequences": (("w", 2),)},
        {"trigger": "1v", "consequences": (("w", 1),)},
    ])
    def test_malformed_implications(self, kwargs):
        with pytest.raises(DeductionError):
            Deduction("implication", **kwargs)

    def test_penalties_are_non_negative_and_vanish_exactly_where_satisfied(self):
        rng = random.Random(3)
        names = ["a", "b", "c", "d"]
        for _ in range(100):
            if rng.random() < 0.5:
                d = Deduction.relation(random_polynomial(rng, names, 4, 2, 3), random_polynomial(rng, names, 4, 2, 3),
                                       weight=rng.randint(1, 4))
            else:
                trigger, *rest = rng.sample(names, rng.randint(2, 4))
                d = Deduction.implication(trigger, {w: rng.randint(0, 1) for w in rest}, weight=rng.randint(1, 4))
            penalty = terms_of(d.penalty())
            for x in assignments(names):
                value = naive_value(penalty, x)
                assert value >= 0
                assert (value == 0) == d.holds(x)

    def test_file_round_trip(self, data_dir):
        shipped = load_deductions(data_dir / "841.deductions")
        assert [d.trigger for d in shipped] == ["z24", "z79"]
        assert all(d.weight == 1 for d in shipped)
        assert parse_deductions(format_deductions(shipped)) == shipped

    def test_parse_lambda_and_relations(self):
        text = "relation: x0*x1 == x0 [lambda=3]\nimply: a -> b=0, c=1 lambda=2  # note\n"
        rel, imp = parse_deductions(text)
        assert rel.weight == 3 and rel.f == P("x0*x1")
        assert imp.consequences == (("b", 0), ("c", 1)) and imp.weight == 2

    @pytest.mark.parametrize("line", ["relation: x = y", "imply: a b=1", "imply: a -> b=2", "guess: a", "relation: x == y lambda=0"])
    def test_parse_errors(self, line):
        with pytest.raises(DeductionError, match="line 1"):
            parse_deductions(line)


class TestMaxEquationEnergy:
    def test_two_term_equation(self):
        assert max_equation_energy(Equation(P("p1 + q1"), P("1"))) == 4

    def test_six_term_equation(self, data_dir):
        eq = load_system(data_dir / "551.eqs")[4]
        assert max_equation_energy(eq, "side_max") == 49

    def test_toy_second_equation(self):
        eq = Equation(P("x1 + x1*x2"), P("2*x2*x3 + x2 + 1"))
        assert max_equation_energy(eq, "side_max") == 16

    def test_difference_mode(self):
        assert max_equation_energy(Equation(P("p1 + q1"), P("1")), "diff_max") == 1
        assert max_equation_energy(Equation(P("a + 2*b"), P("c + 5")), "diff") == 36

    def test_strict_rejects_shared_variables(self):
        eq = Equation(P("x1 + x1*x2"), P("2*x2*x3 + x2 + 1"))
        with pytest.raises(PreconditionError, match="exact"):
            max_equation_energy(eq, strict=True)

    def test_exact_mode(self):
        eq = Equation(P("x1 + x1*x2"), P("2*x2*x3 + x2 + 1"))
        best = max(naive_value(terms_of(eq.residual().square()), x) for x in assignments(["x1", "x2", "x3"]))
        assert max_equation_energy(eq, "exact") == best == 16

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            max_equation_energy(Equation(P("a"), P("1")), "widest")

    def test_bounds_are_sound(self, data_dir):
        equations = [e for name in ("841.eqs", "551.eqs", "toy.eqs") for e in load_system(data_dir / name)]
        rng = random.Random(9)
        for _ in range(80):
            system, _ = planted_system(rng, rng.randint(1, 8), 1)
            equations.append(system[0])
        for eq in equations:
            names = eq.variables()
            assert len(names) <= 10
            worst = max(naive_value(terms_of(eq.residual().square()), x) for x in assignments(names))
            assert worst <= max_equation_energy(eq, "side_max")
            assert worst <= max_equation_energy(eq, "diff_max")
            assert worst == max_equation_energy(eq, "exact")


class TestWeightPlanning:
    def test_ceil_ratio_on_551(self, data_dir):
        scheme = plan_weights(load_system(data_dir / "551.eqs"), "ceil_ratio", "side_max")
        assert scheme.energies == (4, 4, 36, 36, 49, 36, 36, 9, 4)
        assert scheme.weights == (13, 13, 2, 2, 1, 2, 2, 6, 13)
        assert scheme.e_max == 49

    def test_ceil_ratio_is_a_function_of_the_energies(self):
        assert [-(-49 // e) for e in (4, 36, 49, 9)] == [13, 2, 1, 6]

    def test_indicator_on_551(self, data_dir):
        scheme = plan_weights(load_system(data_dir / "551.eqs"), "indicator")
        assert scheme.weights == (2, 2, 2, 2, 1, 2, 2, 2, 2)

    def test_uniform(self, data_dir):
        for name in ("841.eqs", "551.eqs"):
            system = load_system(data_dir / name)
            assert plan_weights(system, "uniform").weights == (1,) * len(system)

    def test_empty_system(self):
        with pytest.raises(ValueError):
            plan_weights(EquationSystem())

    def test_zero_energy_equation_gets_unit_weight(self):
        scheme = plan_weights(parse_system("0 = 0\na + b = 1"), "ceil")
        assert scheme.weights == (1, 1)

    def test_length_mismatch(self, data_dir):
        with pytest.raises(ValueError):
            multiplicity_elm(load_system(data_dir / "551.eqs"), [1, 2])

    def test_scheme_serialises(self, data_dir):
        doc = plan_weights(load_system(data_dir / "toy.eqs"), "ceil").to_dict()
        assert doc == {"kind": "ceil_ratio", "mode": "side_max", "e_max": 16,
                       "per_equation": [{"energy": 4, "lambda": 4}, {"energy": 16, "lambda": 1}]}


class TestPublishedTransforms:
    def test_841_deduction_chain(self, data_dir):
        system = load_system(data_dir / "841.eqs")
        first, second = load_deductions(data_dir / "841.deductions")
        h0 = system_to_hamiltonian(system)
        h1 = deduc_elm(h0, [first])
        h2 = deduc_elm(h1, [second])
        assert h1 - h0 == P("3*z24 - z24*p1 - z24*p2 - z24*q2")
        rows = []
        for h in (h0, h1, h2):
            levels, ground = landscape(h, system.variables)
            rows.append((levels[1][0], levels[1][1], levels[-1][0]))
            assert len(ground) == 1
        assert rows == [(1, 4, 166), (1, 2, 169), (2, 8, 171)]
        assert verify_ground_state_preserved(h0, h2, system.variables)

    def test_551_reweighting_preserves_ground_states(self, data_dir):
        system = load_system(data_dir / "551.eqs")
        h0 = system_to_hamiltonian(system)
        h1 = multiplicity_elm(system, plan_weights(system, "ceil"))
        result = verify_ground_state_preserved(h0, h1)
        assert result.preserved and result.witness is None


class TestVerification:
    def test_detects_a_broken_ground_state(self, data_dir):
        toy = load_system(data_dir / "toy.eqs")
        h = system_to_hamiltonian(toy)
        # Every toy state at energy 1 also has x1 = 1, so a unit penalty on x1
        # shifts them together; a penalty above the spectral width cannot.
        assert verify_ground_state_preserved(h, h + V("x1"), toy.variables)
        broken = h + 18 * V("x1")
        result = verify_ground_state_preserved(h, broken, toy.variables)
        assert not result
        witness = result.witness_assignment()
        # The witness minimises exactly one of the two polynomials.
        before, _ = landscape(h, toy.variables)
        after, _ = landscape(broken, toy.variables)
        lo_before = h.evaluate(witness) == before[0][0]
        lo_after = broken.evaluate(witness) == after[0][0]
        assert lo_before != lo_after

    def test_witness_is_lowest_index_difference(self):
        before = P("x*y")
        after = P("x*y + x")
        # Minimisers: {00, 01, 10} before, {00, 01} after; x is the high bit.
        result = verify_ground_state_preserved(before, after)
        assert result.witness == "10"
        assert result.witness_assignment() == {"x": 1, "y": 0}

    def test_universe_mismatch(self):
        with pytest.raises(ValueError, match="explicitly"):
            verify_ground_state_preserved(P("x"), P("x + y"))

    @given(st.integers(0, 2 ** 32), st.lists(st.integers(1, 9), min_size=1, max_size=6))
    def test_any_positive_scheme_keeps_the_zero_set(self, seed, weights):
        rng = random.Random(seed)
        system, _ = planted_system(rng, rng.randint(1, 8), len(weights))
        h = multiplicity_elm(system, weights)
        levels, ground = landscape(h, system.variables)
        assert levels[0][0] == 0
        base, base_ground = landscape(system_to_hamiltonian(system), system.variables)
        assert ground == base_ground
