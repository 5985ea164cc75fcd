import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elmkit.pbpoly import (
    BinaryPolynomial,
    MissingVariableError,
    ParseError,
    VariableTable,
    natural_key,
    parse_polynomial,
)

from corpus import random_polynomial
from oracles import assignments, naive_value, terms_of

P = parse_polynomial
NAMES = ["x0", "x1", "x2", "x3", "p1", "q2"]


def agrees_everywhere(a, b, names):
    return all(naive_value(terms_of(a), x) == naive_value(terms_of(b), x) for x in assignments(names))


monomials = st.lists(st.sampled_from(NAMES), max_size=4).map(tuple)
polynomials = st.lists(st.tuples(monomials, st.integers(-50, 50)), max_size=8).map(BinaryPolynomial)
full_assignments = st.fixed_dictionaries({v: st.integers(0, 1) for v in NAMES})


class TestArithmetic:
    def test_cancellation(self):
        assert P("x1 + x2") + P("-x2 + 1") == P("x1 + 1")

    def test_additive_identity(self):
        p = P("2*p1 + p2")
        assert p + 0 == p
        assert p + BinaryPolynomial() == p

    def test_addition_collects_like_terms(self):
        got = P("2*p1 + p2") + P("p2 + 3")
        assert got == P("2*p1 + 2*p2 + 3")
        assert agrees_everywhere(got, P("2*p1 + 2*p2 + 3"), ["p1", "p2"])

    def test_idempotence(self):
        x1 = BinaryPolynomial.variable("x1")
        assert x1 * x1 == x1

    def test_square_of_product_difference(self):
        got = (P("x0*x1 - x0")).square()
        assert got == P("x0 - x0*x1")
        values = {(a["x0"], a["x1"]): got.evaluate(a) for a in assignments(["x0", "x1"])}
        assert values == {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 0}

    def test_toy_residual_at_origin(self):
        r = P("x1 + x2 - x3 - 1").square()
        assert r.evaluate({"x1": 0, "x2": 0, "x3": 0}) == 1

    def test_square_of_zero(self):
        assert BinaryPolynomial().square().is_zero()

    def test_square_of_shifted_variable(self):
        assert P("x1 - 1").square() == P("1 - x1")

    def test_carry_residual_vanishes_at_zero(self):
        r = P("2*p1 + p2 + q2 - 2*z23 - 4*z24").square()
        assert r.evaluate({v: 0 for v in r.variables()}) == 0

    def test_big_coefficients_do_not_wrap(self):
        big = BinaryPolynomial.constant(2 ** 70) * P("x + 1")
        assert big.evaluate({"x": 1}) == 2 ** 71

    def test_power_matches_repeated_product(self):
        p = P("x + 2*y - 1")
        assert p ** 3 == p * p * p
        assert p ** 0 == 1


class TestEvaluate:
    def test_direct(self):
        assert P("x1 + 2*x2*x3 - 1").evaluate({"x1": 1, "x2": 1, "x3": 1}) == 2

    def test_constant(self):
        assert BinaryPolynomial.constant(5).evaluate({}) == 5

    def test_toy_solution(self):
        h0 = P("x1 + x2 - x3 - 1").square() + P("x1 + x1*x2 - 2*x2*x3 - x2 - 1").square()
        assert h0.evaluate({"x1": 1, "x2": 0, "x3": 0}) == 0

    def test_missing_variable_is_named(self):
        with pytest.raises(MissingVariableError, match="x3"):
            P("x1 + x3").evaluate({"x1": 0})

    def test_missing_variable_in_switched_off_term(self):
        # x1 = 0 would zero the term, but x3 is still unassigned.
        with pytest.raises(MissingVariableError, match="x3"):
            P("x1*x3").evaluate({"x1": 0})


class TestParse:
    def test_mixed_terms(self):
        p = P("2*p1 + p2*q2 + 4")
        assert p.terms == {("p1",): 2, ("p2", "q2"): 1, (): 4}

    def test_like_terms(self):
        assert P("x1 + x1").terms == {("x1",): 2}

    def test_repeated_factor(self):
        assert P("p1*p1").terms == {("p1",): 1}

    def test_integer_factors_multiply(self):
        assert P("2*x*3") == P("6*x")

    def test_whitespace_is_insignificant(self):
        assert P(" 2 * p1+p2 *q2 ") == P("2*p1 + p2*q2")

    @pytest.mark.parametrize("text,column", [("x +", 4), ("2*", 3), ("x $ y", 3), ("x y", 3), ("", 1), ("x + * y", 5)])
    def test_syntax_errors_report_column(self, text, column):
        with pytest.raises(ParseError) as info:
            P(text)
        assert f"column {column}" in str(info.value)

    def test_format_examples(self):
        assert P("p2*q2 + 2*p1 + 4").format() == "2*p1 + p2*q2 + 4"
        assert P("3 - x").format() == "-x + 3"
        assert BinaryPolynomial().format() == "0"


class TestCanonicalForm:
    def test_exhaustive_uniqueness_on_small_universe(self):
        # Every polynomial over two variables with coefficients in {-1,0,1}:
        # equal value tables must mean equal structure.
        names = ["a", "b"]
        monos = [(), ("a",), ("b",), ("a", "b")]
        seen = {}
        for coefs in itertools.product((-1, 0, 1), repeat=4):
            p = BinaryPolynomial(zip(monos, coefs))
            table = tuple(naive_value(terms_of(p), x) for x in assignments(names))
            if table in seen:
                assert seen[table] == p
            seen[table] = p
        assert len(seen) == 3 ** 4

    def test_randomized_uniqueness(self):
        rng = random.Random(7)
        names = [f"v{i}" for i in range(10)]
        for _ in range(30):
            p = random_polynomial(rng, names, max_terms=10)
            q = random_polynomial(rng, names, max_terms=10)
            same_values = agrees_everywhere(p, q, names)
            assert same_values == (p == q)
            # A rebuilt copy from shuffled, unreduced terms is still equal.
            noisy = [(m + m[:1], c) for m, c in p.items()]
            rng.shuffle(noisy)
            assert BinaryPolynomial(noisy) == p

    @given(polynomials, polynomials)
    def test_no_repeated_variables(self, p, q):
        for mono, coef in (p * q).items():
            assert len(set(mono)) == len(mono)
            assert coef != 0


class TestProperties:
    @settings(max_examples=1000)
    @given(polynomials, polynomials, full_assignments)
    def test_evaluation_is_a_ring_homomorphism(self, p, q, x):
        a, b = naive_value(terms_of(p), x), naive_value(terms_of(q), x)
        assert (p + q).evaluate(x) == a + b
        assert (p - q).evaluate(x) == a - b
        assert (p * q).evaluate(x) == a * b
        assert p.square().evaluate(x) == a * a

    @given(polynomials)
    def test_format_parse_round_trip(self, p):
        assert P(p.format()) == p

    @given(polynomials, full_assignments)
    def test_substitution_commutes_with_evaluation(self, p, x):
        fixed = {v: x[v] for v in NAMES[:3]}
        assert p.substitute(fixed).evaluate(x) == p.evaluate(x)


class TestVariableTable:
    def test_natural_order(self):
        names = ["z24", "q1", "p10", "p2", "z7", "p1"]
        assert sorted(names, key=natural_key) == ["p1", "p2", "p10", "q1", "z7", "z24"]
        table = VariableTable(names)
        assert table.names == ("p1", "p2", "p10", "q1", "z7", "z24")
        assert [table.index(v) for v in table] == list(range(6))

    def test_bitstring_round_trip(self):
        table = VariableTable(["b", "a", "c"])
        a = table.assignment("101")
        assert a == {"a": 1, "b": 0, "c": 1}
        assert table.bitstring(a) == "101"
