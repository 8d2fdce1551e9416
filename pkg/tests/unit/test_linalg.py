import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from gkreduce.linalg import (
    DimensionMismatchError,
    LinearAlgebraError,
    Matrix,
    Subspace,
    inverse,
    is_positive_definite,
    is_skew,
    nullspace,
    rank,
    residual_text,
    signature,
    solve,
)
from gkreduce.symcalc import Chart, ChartParser, coeff_field

Q = coeff_field(())
small = st.integers(min_value=-3, max_value=3)


def vec(*values):
    return tuple(Q.from_int(v) for v in values)


class TestMatrix(unittest.TestCase):
    def test_products_and_transpose(self):
        A = Matrix.from_ints(Q, [[1, 2], [3, 4]])
        B = Matrix.from_ints(Q, [[0, 1], [1, 0]])
        self.assertEqual(A @ B, Matrix.from_ints(Q, [[2, 1], [4, 3]]))
        self.assertEqual((A @ B).T, B.T @ A.T)
        self.assertEqual(A.apply(vec(1, 1)), vec(3, 7))
        with self.assertRaises(DimensionMismatchError):
            _ = A @ Matrix.identity(Q, 3)

    def test_residual_text(self):
        self.assertEqual(residual_text(Matrix.zeros(Q, 2, 2)), "0")
        self.assertEqual(residual_text(Matrix.from_ints(Q, [[0, 0], [5, 0]])), "[1,0] = 5")

    def test_block_and_skew(self):
        J = Matrix.from_ints(Q, [[0, -1], [1, 0]])
        big = Matrix.block(Q, [[J, Matrix.zeros(Q, 2, 2)], [Matrix.zeros(Q, 2, 2), J]])
        self.assertEqual(big.shape, (4, 4))
        self.assertTrue(is_skew(big))
        self.assertEqual(big @ big, -Matrix.identity(Q, 4))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
    def test_rank_nullity(self, rows):
        m = Matrix.from_ints(Q, rows)
        kernel = nullspace(m)
        self.assertEqual(rank(m) + len(kernel), 3)
        for v in kernel:
            self.assertFalse(any(m.apply(v)))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
    def test_inverse_or_singular(self, rows):
        m = Matrix.from_ints(Q, rows)
        if rank(m) == 3:
            self.assertEqual(m @ inverse(m), Matrix.identity(Q, 3))
        else:
            with self.assertRaises(LinearAlgebraError):
                inverse(m)

    def test_solve(self):
        m = Matrix.from_ints(Q, [[1, 1], [1, 1]])
        self.assertIsNone(solve(m, vec(1, 2)))
        x = solve(m, vec(2, 2))
        self.assertEqual(m.apply(x), vec(2, 2))

    def test_generic_point_rank(self):
        parser = ChartParser(Chart.build("M", ["u"]))
        m = Matrix(parser.chart.field, [[parser.coeff("u"), parser.coeff("1")], [parser.coeff("u^2"), parser.coeff("u")]])
        self.assertEqual(rank(m), 1)
        m2 = Matrix(parser.chart.field, [[parser.coeff("u"), parser.coeff("1")], [parser.coeff("1"), parser.coeff("u")]])
        self.assertEqual(rank(m2), 2)
        self.assertEqual(m2 @ inverse(m2), Matrix.identity(parser.chart.field, 2))


class TestSubspace(unittest.TestCase):
    def test_span_is_canonical(self):
        a = Subspace.span(Q, 3, [vec(1, 1, 0), vec(1, -1, 0)])
        b = Subspace.span(Q, 3, [vec(1, 0, 0), vec(0, 1, 0), vec(2, 3, 0)])
        self.assertEqual(a, b)
        self.assertEqual(a.dim, 2)
        self.assertIn(vec(5, 7, 0), a)
        self.assertNotIn(vec(0, 0, 1), a)

    def test_sum_and_intersection(self):
        a = Subspace.span(Q, 3, [vec(1, 0, 0), vec(0, 1, 0)])
        b = Subspace.span(Q, 3, [vec(0, 1, 0), vec(0, 0, 1)])
        self.assertEqual((a + b).dim, 3)
        self.assertEqual(a.intersection(b), Subspace.span(Q, 3, [vec(0, 1, 0)]))
        self.assertTrue(a.intersection(b) <= a)
        self.assertEqual(a.intersection(Subspace.zero(Q, 3)).dim, 0)

    def test_image(self):
        a = Subspace.span(Q, 2, [vec(1, 0)])
        J = Matrix.from_ints(Q, [[0, -1], [1, 0]])
        self.assertEqual(a.image(J), Subspace.span(Q, 2, [vec(0, 1)]))


class TestSignature(unittest.TestCase):
    def test_inertia(self):
        self.assertEqual(signature(Matrix.from_ints(Q, [[2, 0], [0, -1]])), (1, 1, 0))
        self.assertEqual(signature(Matrix.from_ints(Q, [[1, 1], [1, 1]])), (1, 0, 1))
        self.assertTrue(is_positive_definite(Matrix.from_ints(Q, [[2, 1], [1, 2]])))

    def test_at_a_point(self):
        parser = ChartParser(Chart.build("M", ["u"]))
        m = Matrix(parser.chart.field, [[parser.coeff("u"), parser.coeff("0")], [parser.coeff("0"), parser.coeff("1-u")]])
        self.assertTrue(is_positive_definite(m, parser.point({"u": "1/2"})))
        self.assertFalse(is_positive_definite(m, parser.point({"u": "2"})))
        with self.assertRaises(LinearAlgebraError):
            signature(Matrix.from_ints(Q, [[0, 1], [0, 0]]))
