import unittest

from gkreduce.courant import GenSection, TwistData
from gkreduce.linalg import Matrix
from gkreduce.pipelines import build_chart, build_gk, build_twist
from gkreduce.reduction import (
    ConnectionData,
    GroupElementError,
    Moment,
    MomentError,
    ReductionError,
    Side,
    SubtorusError,
    Tag,
    TorusActionData,
    b_shear,
    b_tilde,
    connection_checks,
    duality_check,
    generic_point_lemmas,
    hamiltonian_checks,
    level_checks,
    level_families,
    moment_sections,
    pairing_P,
    reduced_twisting,
    subtorus_reduction_check,
    tduality_transform,
)
from gkreduce.scenarios import load_bundled
from gkreduce.symcalc import Chart, ChartParser


class TestCP2InvariantChart(unittest.TestCase):
    """Toric GK structure on the invariant chart (t, u, phi1, phi2) reduced at t = 0."""

    @classmethod
    def setUpClass(cls):
        scenario = load_bundled("cp2-example")
        chart, parser = build_chart(scenario.chart, scenario.name)
        cls.parser = parser
        cls.act = TorusActionData(
            chart,
            [Moment(parser.coeff(m.function), Tag(m.tag)) for m in scenario.moments],
            build_gk(scenario.structures, parser, scenario.name),
            build_twist(scenario.H, parser, scenario.name),
            parser.point(scenario.level),
        )
        cls.sections = moment_sections(cls.act)
        cls.fam = level_families(cls.act, cls.sections)
        level = ChartParser(cls.fam.chart)
        cls.conn = ConnectionData([level.form({"dphi1": "1"})], [level.form({"dphi2": "-1"})])

    def test_moment_sections(self):
        p = self.parser
        self.assertEqual(self.sections[0], GenSection(p.vector_field({"phi1": "1"}), p.form({"dphi2": "-u"})))
        self.assertEqual(self.sections[1], GenSection(p.vector_field({"phi2": "-1"}), p.form({"dphi1": "1-u"})))

    def test_level_and_hamiltonian_identities(self):
        self.assertTrue(all(f.passed for f in level_checks(self.act)))
        findings = hamiltonian_checks(self.act, self.sections)
        self.assertTrue(findings)
        self.assertEqual([f for f in findings if not f.passed], [])

    def test_pairing_is_constant_and_nondegenerate(self):
        result = pairing_P(self.act, self.sections)
        self.assertEqual(result.matrix, Matrix.from_ints(self.act.chart.field, [[1]]))
        self.assertTrue(result.constant)
        self.assertTrue(result.nondegenerate)

    def test_families_live_on_the_level_set(self):
        self.assertEqual(self.fam.chart.name, "M0")
        self.assertEqual(self.fam.chart.names, ("u", "phi1", "phi2"))
        self.assertEqual(len(self.fam.T), 1)
        self.assertEqual(len(self.fam.T_hat), 1)
        self.assertTrue(all(f.passed for f in connection_checks(self.fam, self.conn)))

    def test_b_tilde(self):
        bt = b_tilde(self.fam, self.conn)
        self.assertEqual(bt.form, ChartParser(self.fam.chart).form({"dphi1^dphi2": "1-2*u"}))
        self.assertTrue(bt.invariant)

    def test_reduced_twisting_forms_vanish(self):
        for side in Side:
            reduced = reduced_twisting(self.fam, self.conn, side)
            self.assertFalse(reduced.form)
            self.assertTrue(reduced.basic.basic)
            self.assertFalse(any(reduced.crosscheck))
            self.assertIsNotNone(reduced.quotient)
        self.assertEqual(reduced_twisting(self.fam, self.conn, Side.T).quotient.chart.name, "M0/phi1")

    def test_duality(self):
        report = duality_check(self.fam, self.conn)
        self.assertTrue(report.passed)
        self.assertEqual(str(report.residual), "0")

    def test_group_elements(self):
        for g in ([[1, 0], [0, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, -1]], [[0, -1], [-1, 0]]):
            result = tduality_transform(g, self.fam, self.conn)
            self.assertTrue(result.report.passed, g)
        with self.assertRaises(GroupElementError):
            tduality_transform([[2, 0], [0, 1]], self.fam, self.conn)
        with self.assertRaises(GroupElementError):
            tduality_transform([[1.0, 0], [0, 1]], self.fam, self.conn)
        with self.assertRaises(GroupElementError):
            tduality_transform([[1, 0, 0], [0, 1, 0], [0, 0, 1]], self.fam, self.conn)

    def test_subtorus_routes(self):
        anti = subtorus_reduction_check(self.act, self.sections, [[1, -1]])
        self.assertEqual(anti.route, "nondegenerate")
        self.assertEqual(anti.gram, Matrix.from_ints(self.act.chart.field, [[-2]]))
        self.assertTrue(anti.passed, anti.lemma.failures)

        first = subtorus_reduction_check(self.act, self.sections, [[1, 0]])
        self.assertEqual(first.route, "isotropic")
        self.assertTrue(first.isotropic_case)
        self.assertTrue(first.passed, first.lemma.failures)

        with self.assertRaises(SubtorusError):
            subtorus_reduction_check(self.act, self.sections, [[1, 0]], "nondegenerate")
        with self.assertRaises(SubtorusError):
            subtorus_reduction_check(self.act, self.sections, [[1, 0, 0]])

    def test_generic_point_lemmas_cover_all_three(self):
        reports = generic_point_lemmas(self.act)
        self.assertEqual(set(reports), {"kahler_split", "double_split", "dual_split"})


class TestTorusActionValidation(unittest.TestCase):
    def setUp(self):
        scenario = load_bundled("cp2-example")
        self.chart, self.parser = build_chart(scenario.chart, scenario.name)
        self.gk = build_gk(scenario.structures, self.parser, scenario.name)
        self.tw = build_twist(scenario.H, self.parser, scenario.name)

    def test_rejects_missing_moments_and_foreign_twist(self):
        with self.assertRaises(ReductionError):
            TorusActionData(self.chart, [], self.gk, self.tw)
        moment = Moment(self.parser.coeff("t"), Tag.J1)
        with self.assertRaises(ReductionError):
            TorusActionData(self.chart, [moment], self.gk, TwistData.zero(Chart.build("N", ["a", "b", "c"])))

    def test_constant_moment_has_no_section(self):
        act = TorusActionData(self.chart, [Moment(self.parser.coeff("3"), Tag.J1)], self.gk, self.tw)
        with self.assertRaises(MomentError):
            moment_sections(act)


class TestBShear(unittest.TestCase):
    def test_shear_matrix(self):
        self.assertEqual(
            b_shear([[0, 1], [-1, 0]]),
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [-1, 0, 0, 1]],
        )

    def test_rejects_non_skew(self):
        with self.assertRaises(GroupElementError):
            b_shear([[0, 1], [1, 0]])
        with self.assertRaises(GroupElementError):
            b_shear([[0, 1]])
