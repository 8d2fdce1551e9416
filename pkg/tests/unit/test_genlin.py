import unittest

from gkreduce.genlin import (
    HypothesisError,
    LinearGK,
    NotAStructureError,
    PairedSpace,
    b_transform,
    default_lagrangians,
    direct_sum,
    eigenspace,
    gcs_from_complex,
    gcs_from_symplectic,
    gcs_type,
    is_gcs,
    is_gk,
    lemma_double_split,
    lemma_dual_split,
    lemma_extend,
    lemma_kahler_split,
    lemma_missingrank,
    natural_pairing,
    p_k_matrix,
)
from gkreduce.linalg import Matrix, Subspace
from gkreduce.symcalc import coeff_field

Q = coeff_field(())
OMEGA = Matrix.from_ints(Q, [[0, 1], [-1, 0]])
COMPLEX = Matrix.from_ints(Q, [[0, 1], [-1, 0]])


def vec(*values):
    return tuple(Q.from_int(v) for v in values)


def span(*vectors):
    return Subspace.span(Q, len(vectors[0]), [vec(*v) for v in vectors])


def flat_plane() -> LinearGK:
    """Flat Kähler R² as a GK pair (symplectic, complex)."""
    return LinearGK(gcs_from_symplectic(OMEGA), gcs_from_complex(COMPLEX))


def two_planes(mixed: bool) -> LinearGK:
    # coordinates x1, y1, x2, y2 then dx1, dy1, dx2, dy2
    first = flat_plane()
    if not mixed:
        return LinearGK(direct_sum([first.J1, first.J1]), direct_sum([first.J2, first.J2]))
    second = LinearGK(gcs_from_complex(-COMPLEX), gcs_from_symplectic(-OMEGA))
    return LinearGK(direct_sum([first.J1, second.J1]), direct_sum([first.J2, second.J2]))


class TestPairedSpace(unittest.TestCase):
    def test_split_pairing(self):
        space = PairedSpace.of(Q, 4)
        x, y = vec(1, 0, 0, 3), vec(0, 0, 2, 0)
        self.assertEqual(space.pairing(x, y), Q.from_int(1))
        self.assertEqual(natural_pairing(x, y), natural_pairing(y, x))
        self.assertTrue(space.is_isotropic(space.tangent))
        self.assertTrue(space.is_isotropic(space.cotangent))
        self.assertEqual(space.annihilator(space.tangent), space.tangent)

    def test_gram(self):
        space = PairedSpace.of(Q, 4)
        gram = space.gram([vec(1, 0, 1, 0), vec(0, 1, 0, 1)])
        self.assertEqual(gram, Matrix.from_ints(Q, [[1, 0], [0, 1]]))


class TestClassicalStructures(unittest.TestCase):
    def test_symplectic_and_complex_are_generalized_complex(self):
        for J in (gcs_from_symplectic(OMEGA), gcs_from_complex(COMPLEX)):
            report = is_gcs(J)
            self.assertTrue(report.valid, report.violations)
            self.assertEqual(report.residuals["square"], "0")

    def test_types(self):
        self.assertEqual(gcs_type(gcs_from_symplectic(OMEGA)), 0)
        self.assertEqual(gcs_type(gcs_from_complex(COMPLEX)), 1)

    def test_rejects_non_structures(self):
        with self.assertRaises(NotAStructureError):
            gcs_from_symplectic(Matrix.from_ints(Q, [[1, 0], [0, 1]]))
        with self.assertRaises(NotAStructureError):
            gcs_from_symplectic(Matrix.zeros(Q, 2, 2))
        with self.assertRaises(NotAStructureError):
            gcs_from_complex(Matrix.identity(Q, 2))
        self.assertFalse(is_gcs(Matrix.identity(Q, 4)).valid)

    def test_b_transform_preserves_structure_and_type(self):
        J = gcs_from_symplectic(OMEGA)
        transformed = b_transform(Matrix.from_ints(Q, [[0, 2], [-2, 0]]), J)
        self.assertTrue(is_gcs(transformed).valid)
        self.assertEqual(gcs_type(transformed), 0)
        self.assertNotEqual(transformed, J)

    def test_eigenspace_is_maximal_isotropic(self):
        J = gcs_from_complex(COMPLEX)
        L = eigenspace(J)
        self.assertEqual(L.dim, 2)
        self.assertTrue(PairedSpace.of(Q, 4).is_isotropic(L))


class TestLinearGK(unittest.TestCase):
    def test_flat_kahler_plane(self):
        gk = flat_plane()
        report = is_gk(gk)
        self.assertTrue(report.valid, report.violations)
        self.assertEqual(report.residuals["positive at constant"], "0")
        self.assertEqual(gk.G @ gk.G, Matrix.identity(Q, 4))

    def test_indefinite_metric_is_reported(self):
        J = gcs_from_symplectic(OMEGA)
        report = is_gk(LinearGK(J, J))
        self.assertFalse(report.valid)
        self.assertEqual(report.violations, {"positive at constant": "violated"})

    def test_non_commuting_pair(self):
        J1 = gcs_from_symplectic(OMEGA)
        J2 = gcs_from_symplectic(Matrix.from_ints(Q, [[0, 2], [-2, 0]]))
        report = is_gk(LinearGK(J1, J2))
        self.assertIn("commute", report.violations)


class TestLemmas(unittest.TestCase):
    def test_extend(self):
        K, Kp = span((0, 0, 0, 0, 1, 0, 0, 0)), span((0, 1, 0, 0, 0, 0, 0, 0))
        report = lemma_extend(K, Kp)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.dimensions["V_K"], 4)
        self.assertEqual(report.dimensions["W_K"], 2)
        self.assertEqual(report.dimensions["kernel"], 2)

    def test_extend_hypotheses(self):
        dx1 = (0, 0, 0, 0, 1, 0, 0, 0)
        with self.assertRaises(HypothesisError) as raised:
            lemma_extend(span((1, 0, 0, 0, 0, 0, 0, 0)), span(dx1))
        self.assertEqual(raised.exception.condition, "K ⊆ V*")
        with self.assertRaises(HypothesisError) as raised:
            lemma_extend(span(dx1), span((0, 0, 0, 0, 0, 1, 0, 0)))
        self.assertEqual(raised.exception.condition, "(2)")
        with self.assertRaises(HypothesisError) as raised:
            lemma_extend(span(dx1), span((1, 0, 0, 0, 0, 0, 0, 0)))
        self.assertEqual(raised.exception.condition, "(1)")

    def test_missingrank(self):
        K = span((0, 0, 0, 0, 1, 0, 0, 0))
        Kp = span((0, 1, 0, 0, 0, 1, 0, 0))
        report = lemma_missingrank(K, Kp)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.dimensions["V'_K"], 5)
        self.assertEqual(report.dimensions["Ann_V(K)"], 3)

    def test_missingrank_needs_nondegenerate_complement(self):
        K = span((0, 0, 0, 0, 1, 0, 0, 0))
        with self.assertRaises(HypothesisError):
            lemma_missingrank(K, span((0, 1, 0, 0, 0, 0, 0, 0)))

    def test_kahler_split(self):
        K = span((0, 0, 0, 0, 1, 0, 0, 0))
        report = lemma_kahler_split(K, two_planes(mixed=False))
        self.assertTrue(report.passed, report.failures)
        self.assertTrue(report.outputs["direct"])
        self.assertEqual(report.dimensions["U1"], 6)
        self.assertEqual(report.dimensions["W_K"], 4)
        self.assertEqual(report.outputs["types"], {"J1": 0, "J2": 1})

    def test_kahler_split_without_direct_sum_reports_dimensions_only(self):
        # J1 = complex on the first plane maps dx1 into V*
        gk = two_planes(mixed=False)
        swapped = LinearGK(gk.J2, gk.J1)
        report = lemma_kahler_split(span((0, 0, 0, 0, 1, 0, 0, 0)), swapped)
        self.assertFalse(report.outputs["direct"])
        self.assertEqual(report.checks, [])
        self.assertTrue(report.notes)

    def test_double_split(self):
        K = span((0, 0, 0, 0, 1, 0, 1, 0))
        report = lemma_double_split(K, two_planes(mixed=True))
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.dimensions["Ṽ_K"], 5)
        self.assertEqual(report.dimensions["V_K"], 4)
        self.assertEqual(report.dimensions["kernel"], 1)

    def test_double_split_needs_both_images_off_cotangent(self):
        with self.assertRaises(HypothesisError) as raised:
            lemma_double_split(span((0, 0, 0, 0, 1, 0, 0, 0)), two_planes(mixed=True))
        self.assertEqual(raised.exception.condition, "(2) for J2")

    def test_dual_split(self):
        gk = two_planes(mixed=True)
        K = span((0, 0, 0, 0, 1, 0, 1, 0))
        P_K, _ = p_k_matrix(K, gk)
        self.assertEqual(P_K, Matrix.from_ints(Q, [[0, 1], [1, 0]]))
        report = lemma_dual_split(K, gk, default_lagrangians(K, gk)["J1K"])
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.dimensions["W_K'"], 2)
        self.assertEqual(report.dimensions["W_K"], 4)

    def test_dual_split_needs_lagrangian(self):
        gk = two_planes(mixed=True)
        K = span((0, 0, 0, 0, 1, 0, 1, 0))
        with self.assertRaises(HypothesisError):
            lemma_dual_split(K, gk, K.image(gk.J1) + K.image(gk.J2))
