import unittest

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import QQ
from sympy.polys.domains import QQ_I

from gkreduce.common import make_rng
from gkreduce.generators import random_coeff, random_form, random_vector_field
from gkreduce.symcalc import (
    Chart,
    ChartMismatchError,
    ChartParser,
    DiffForm,
    EvaluationError,
    ExpressionError,
    VectorField,
    apply,
    basic_check,
    evaluate,
    exterior_d,
    interior,
    lie_derivative,
    restrict_to_level,
    restrict_vector_field,
    transfer,
    vector_bracket,
    wedge,
)

CHART = Chart.build("M", ["x", "y", ("phi", "angle"), "z"])
seeds = st.integers(min_value=0, max_value=10**6)


class TestCoefficients(unittest.TestCase):
    def setUp(self):
        self.parser = ChartParser(CHART)
        self.f = CHART.field

    def test_angle_coordinates_are_not_coefficient_variables(self):
        self.assertEqual(self.f.variables, ("x", "y", "z"))
        with self.assertRaises(ExpressionError):
            self.parser.coeff("phi + 1")

    def test_exact_rational_and_gaussian_arithmetic(self):
        half = self.parser.coeff("1/2")
        self.assertEqual(half + half, self.f.one)
        self.assertEqual(self.f.i * self.f.i, -1)
        value = self.parser.coeff("(x + i)/(x - i)")
        self.assertEqual(value * self.parser.coeff("x - i"), self.parser.coeff("x + i"))
        self.assertEqual(str(self.parser.coeff("0")), "0")

    def test_rejects_floats_and_symbolic_exponents(self):
        with self.assertRaises(ExpressionError):
            self.parser.coeff("0.5*x")
        with self.assertRaises(ExpressionError):
            self.parser.coeff("x^y")
        with self.assertRaises(ExpressionError):
            self.parser.coeff("w")

    def test_only_the_arithmetic_grammar_is_accepted(self):
        for text in (
            "Integer.__new__.__globals__",
            "Integer(3)",
            "x.diff(y)",
            "[x][0]",
            "'x'",
            "x, y",
            "x**2",
            "lambda: 0",
            "",
            "(x + 1",
        ):
            with self.subTest(text=text), self.assertRaises(ExpressionError):
                self.parser.coeff(text)
        self.assertEqual(self.parser.coeff(" -(x + 1)^2 / 2 "), self.parser.coeff("-(x^2 + 2*x + 1)/2"))

    def test_constant_value(self):
        self.assertEqual(self.parser.constant("1/2 + i"), QQ_I(QQ(1, 2), 1))
        with self.assertRaises(ExpressionError):
            self.parser.constant("x")

    def test_definitions_expand(self):
        parser = ChartParser(CHART, {"r2": "x^2 + y^2"})
        self.assertEqual(parser.coeff("1/r2") * parser.coeff("x^2 + y^2"), self.f.one)
        with self.assertRaises(ExpressionError):
            ChartParser(CHART, {"x": "y"})

    def test_evaluate_and_subs(self):
        c = self.parser.coeff("x*y + i*z")
        point = {"x": QQ_I(2, 0), "y": QQ_I(QQ(1, 2), 0), "z": QQ_I(3, 0)}
        self.assertEqual(c.evaluate(point), QQ_I(1, 3))
        self.assertEqual(c.subs({"x": 2}), self.parser.coeff("2*y + i*z"))
        with self.assertRaises(EvaluationError):
            self.parser.coeff("1/x").evaluate({"x": QQ_I(0, 0), "y": QQ_I(0, 0), "z": QQ_I(0, 0)})

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.sampled_from(["x", "y", "z", "phi"]))
    def test_partial_derivative_is_a_derivation(self, seed, name):
        rng = make_rng(seed, "diff")
        a = random_coeff(CHART, rng, gaussian=True)
        b = random_coeff(CHART, rng, gaussian=True) / self.parser.coeff("x^2 + y^2 + 1")
        self.assertEqual((a * b).diff(name), a.diff(name) * b + a * b.diff(name))


class TestForms(unittest.TestCase):
    def setUp(self):
        self.parser = ChartParser(CHART)

    def test_monomials_are_sorted_with_sign(self):
        self.assertEqual(self.parser.form({"dphi^dx": "1"}), self.parser.form({"dx^dphi": "-1"}))
        with self.assertRaises(ExpressionError):
            self.parser.form({"dx^dx": "1"})

    def test_d_skips_angles_and_constants(self):
        a = self.parser.form({"dphi": "x*y", "dz": "3"})
        self.assertEqual(exterior_d(a), self.parser.form({"dx^dphi": "y", "dy^dphi": "x"}))

    def test_zero_renders_as_zero(self):
        self.assertEqual(str(DiffForm.zero(CHART)), "0")
        self.assertEqual(str(VectorField.zero(CHART)), "0")
        self.assertTrue(DiffForm.zero(CHART).is_zero)

    def test_charts_do_not_mix(self):
        other = Chart.build("N", ["x", "y"])
        with self.assertRaises(ChartMismatchError):
            _ = DiffForm.differential(CHART, "x") + DiffForm.differential(other, "x")

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_d_squared_vanishes(self, seed):
        rng = make_rng(seed, "dd")
        a = random_form(CHART, rng, rng.randint(0, 2), terms=3)
        self.assertFalse(exterior_d(exterior_d(a)))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_wedge_is_graded_commutative(self, seed):
        rng = make_rng(seed, "wedge")
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        a, b = random_form(CHART, rng, p), random_form(CHART, rng, q)
        self.assertEqual(wedge(a, b), wedge(b, a).scale((-1) ** (p * q)))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_d_is_an_antiderivation(self, seed):
        rng = make_rng(seed, "leibniz")
        p = rng.randint(0, 2)
        a, b = random_form(CHART, rng, p), random_form(CHART, rng, 1)
        expected = wedge(exterior_d(a), b) + wedge(a, exterior_d(b)).scale((-1) ** p)
        self.assertEqual(exterior_d(wedge(a, b)), expected)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_lie_derivative_commutator_with_interior(self, seed):
        rng = make_rng(seed, "cartan")
        X, Y = random_vector_field(CHART, rng), random_vector_field(CHART, rng)
        a = random_form(CHART, rng, 2, terms=3)
        lhs = lie_derivative(X, interior(Y, a)) - interior(Y, lie_derivative(X, a))
        self.assertEqual(lhs, interior(vector_bracket(X, Y), a))

    @settings(max_examples=1000, deadline=None)
    @given(seeds)
    def test_difference_with_itself_has_no_terms(self, seed):
        rng = make_rng(seed, "cancel")
        a = random_form(CHART, rng, rng.randint(0, 3), terms=3, gaussian=True)
        self.assertEqual(dict((a - a).terms), {})

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_lie_derivative_of_bracket_is_commutator(self, seed):
        rng = make_rng(seed, "lie-bracket")
        X, Y = random_vector_field(CHART, rng), random_vector_field(CHART, rng)
        a = random_form(CHART, rng, rng.randint(0, 2))
        commutator = lie_derivative(X, lie_derivative(Y, a)) - lie_derivative(Y, lie_derivative(X, a))
        self.assertEqual(lie_derivative(vector_bracket(X, Y), a), commutator)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_lie_derivative_of_function_is_directional_derivative(self, seed):
        rng = make_rng(seed, "apply")
        X, f = random_vector_field(CHART, rng), random_coeff(CHART, rng)
        self.assertEqual(lie_derivative(X, DiffForm.scalar(CHART, f)), DiffForm.scalar(CHART, apply(X, f)))

    def test_evaluate_gives_constant_coefficients(self):
        a = self.parser.form({"dx^dz": "x*y", "dphi": "1/(1+z)"})
        point = {"x": QQ_I(1, 0), "y": QQ_I(2, 0), "z": QQ_I(1, 0)}
        self.assertEqual(evaluate(a, point), self.parser.form({"dx^dz": "2", "dphi": "1/2"}))


class TestLevelSetsAndQuotients(unittest.TestCase):
    def setUp(self):
        self.chart = Chart.build("M", ["t", "u", ("phi1", "angle"), ("phi2", "angle")])
        self.level = self.chart.without(["t"], "M0")
        self.parser = ChartParser(self.chart)

    def test_restriction_drops_fixed_differentials(self):
        a = self.parser.form({"dt^du": "u", "du^dphi1": "t + u", "dphi2": "t"})
        restricted = restrict_to_level(a, {"t": 0}, self.level)
        self.assertEqual(restricted, ChartParser(self.level).form({"du^dphi1": "u"}))

    def test_vector_field_must_be_tangent(self):
        X = self.parser.vector_field({"phi1": "1", "t": "t"})
        self.assertEqual(restrict_vector_field(X, {"t": 0}, self.level), VectorField.coordinate(self.level, "phi1"))
        with self.assertRaises(Exception):
            restrict_vector_field(self.parser.vector_field({"t": "1"}), {"t": 0}, self.level)

    def test_basic_check(self):
        verticals = [VectorField.coordinate(self.chart, "phi1")]
        self.assertTrue(basic_check(self.parser.form({"dt^du^dphi2": "u"}), verticals).basic)
        report = basic_check(self.parser.form({"du^dphi1": "1"}), verticals)
        self.assertFalse(report.horizontal)
        self.assertTrue(report.obstructions)

    def test_transfer_to_a_chart_with_the_same_coordinates(self):
        quotient = self.chart.without(["phi1"], "Q")
        a = self.parser.form({"dt^du": "u^2"})
        self.assertEqual(transfer(a, quotient), ChartParser(quotient).form({"dt^du": "u^2"}))
