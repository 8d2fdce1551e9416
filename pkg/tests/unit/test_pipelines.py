"""Unit tests for the verification pipelines."""

import json
import unittest

import pytest
from sympy import Rational
from sympy.polys.domains import QQ_I

from gkreduce.common import Finding
from gkreduce.pipelines import Collector, default_points, run_scenario
from gkreduce.report import Status
from gkreduce.scenarios import ScenarioError, load_bundled, parse_scenario
from gkreduce.symcalc import Chart


def q(p: int, r: int):
    return QQ_I.from_sympy(Rational(p, r))


SL2 = {"H,E": "2*E", "H,F": "-2*F", "E,F": "H"}


def bialg(**overrides) -> str:
    data = {"name": "inline-sl2", "kind": "bialg", "algebra": {"names": ["H", "E", "F"], "brackets": SL2}}
    data["r"] = {"E,F": "1", "H,H": "1/4"}
    data.update(overrides)
    return json.dumps(data)


def ids(report) -> list[str]:
    return [c.id for c in report.checks]


class TestCollector(unittest.TestCase):
    def test_guard_turns_exceptions_into_failures(self):
        col = Collector()
        with col.guard("cybe", "r"):
            raise ZeroDivisionError("division by zero")
        self.assertEqual(len(col.entries), 1)
        self.assertEqual(col.entries[0].status, Status.FAIL)
        self.assertEqual(col.entries[0].residual, "ZeroDivisionError: division by zero")

    def test_controls_pass_when_the_identity_breaks(self):
        col = Collector()
        col.control("perturbed", "-H", True)
        col.control("unchanged", "0", False)
        self.assertEqual([e.status for e in col.entries], [Status.PASS, Status.FAIL])
        self.assertEqual(col.entries[1].note, "control did not fail")
        self.assertEqual({e.id for e in col.entries}, {"negative-control"})

    def test_not_applicable(self):
        col = Collector()
        col.not_applicable("subtorus-case", "diagonal", "hypotheses do not hold")
        self.assertEqual(col.entries[0].status, Status.NOT_APPLICABLE)

    def test_timings_are_optional(self):
        plain, timed = Collector(), Collector(timings=True)
        for col in (plain, timed):
            col.add(Finding("cybe", "r", True))
        self.assertIsNone(plain.entries[0].timing_ms)
        self.assertGreaterEqual(timed.entries[0].timing_ms, 0)


class TestDefaultPoints(unittest.TestCase):
    def test_points_avoid_the_boundary(self):
        chart = Chart.build("M", ["t", "u", ("phi", "angle")])
        points = default_points(chart, 3)
        self.assertEqual(len(points), 3)
        self.assertEqual(points[0], {"t": q(1, 4), "u": q(1, 2)})
        self.assertEqual(points[2], {"t": q(3, 4), "u": q(1, 4)})

    def test_angle_only_chart_has_no_points(self):
        self.assertEqual(default_points(Chart.build("T", [("phi", "angle")]), 5), [])


class TestBialgPipeline(unittest.TestCase):
    def test_inline_sl2(self):
        report = run_scenario(parse_scenario(bialg()))
        self.assertTrue(report.passed, [c for c in report.failures])
        self.assertEqual(ids(report)[:6], ["jacobi", "cybe", "s-ad-invariant", "s-invertible", "factorizable", "cocommutator"])
        self.assertIn("manin-duality", ids(report))

    def test_bundled_sl2_with_controls(self):
        report = run_scenario(load_bundled("sl2-rmatrix"))
        self.assertTrue(report.passed, [c for c in report.failures])
        controls = [c for c in report.checks if c.id == "negative-control"]
        self.assertEqual(len(controls), 2)
        self.assertIn("[H,E,F]: -H", controls[0].residual)
        commuting = [c for c in report.checks if c.id == "commuting-abelian"]
        self.assertEqual([c.residual for c in commuting], ["false", "true", "true"])

    def test_broken_algebra_stops_after_jacobi(self):
        report = run_scenario(parse_scenario(bialg(algebra={"names": ["H", "E", "F"], "brackets": dict(SL2, **{"H,E": "3*E"})})))
        self.assertFalse(report.passed)
        self.assertEqual(ids(report), ["jacobi"])
        self.assertEqual(report.checks[0].residual, "[H,E,F]: -H")

    def test_wrong_expectation_fails(self):
        report = run_scenario(parse_scenario(bialg(expect={"factorizable": False})))
        self.assertFalse(report.passed)
        self.assertEqual([c.id for c in report.failures], ["factorizable"])

    def test_unreadable_bracket_is_a_scenario_error(self):
        with self.assertRaises(ScenarioError) as raised:
            run_scenario(parse_scenario(bialg(algebra={"names": ["H", "E"], "brackets": {"H,E": "E^2"}})))
        self.assertEqual(raised.exception.field, "algebra")


class TestSmallPipelines(unittest.TestCase):
    def test_courant_axioms(self):
        scenario = parse_scenario(
            json.dumps(
                {
                    "name": "small-axioms",
                    "kind": "courant-axioms",
                    "seed": 11,
                    "chart": {"name": "R3", "coordinates": [{"name": "x"}, {"name": "y"}, {"name": "z"}]},
                    "sections": 3,
                    "triples": 4,
                    "symmetrization_pairs": 2,
                    "psi_instances": 2,
                    "clifford_pairs": 2,
                    "naturality_pairs": 2,
                    "degree": 1,
                    "corrupted_control": False,
                }
            )
        )
        report = run_scenario(scenario, include_timings=True)
        self.assertTrue(report.passed, [c for c in report.failures])
        self.assertEqual(report.seed, 11)
        self.assertEqual(
            ids(report),
            [
                "courant-jacobi",
                "courant-symmetric",
                "courant-invariance",
                "symmetrization",
                "psi-translate",
                "clifford",
                "b-naturality",
            ],
        )
        self.assertTrue(all(c.timing_ms is not None for c in report.checks))

    def test_same_seed_same_report(self):
        data = {"name": "lemmas", "kind": "linear-lemmas", "seed": 5, "instances": 2, "planes": [1]}
        first = run_scenario(parse_scenario(json.dumps(data)))
        second = run_scenario(parse_scenario(json.dumps(data)))
        self.assertEqual(first, second)
        self.assertEqual(len(first.checks), 5)


@pytest.mark.slow
class TestBundledScenarios(unittest.TestCase):
    """Full runs of the bundled scenarios; enable with --run-slow."""

    def assert_passes(self, name: str):
        report = run_scenario(load_bundled(name))
        self.assertTrue(report.passed, [f"{c.id} [{c.subject}]: {c.residual}" for c in report.failures])
        return report

    def test_cp2_example(self):
        report = self.assert_passes("cp2-example")
        duality = [c for c in report.checks if c.id == "duality-residual"]
        self.assertEqual([c.residual for c in duality], ["0"])
        self.assertEqual(len([c for c in report.checks if c.id == "tduality-group"]), 4)

    def test_cp2_product_pairing_control(self):
        report = self.assert_passes("cp2-product")
        controls = [c for c in report.checks if c.id == "negative-control" and "P scaled by 2" in c.subject]
        self.assertEqual(len(controls), 1)
        self.assertNotEqual(controls[0].residual, "0")

    def test_antidiagonal_routes(self):
        report = self.assert_passes("antidiagonal")
        routes = [c.residual for c in report.checks if c.id == "subtorus-route"]
        self.assertEqual(routes, ["nondegenerate", "isotropic"])

    def test_bshear(self):
        self.assert_passes("bshear")

    def test_gk_cartesian(self):
        report = self.assert_passes("gk-cartesian")
        self.assertIn("spinor-integrability", ids(report))
        self.assertIn("negative-control", ids(report))

    def test_random_axioms(self):
        self.assert_passes("random-axioms")

    def test_linear_lemmas(self):
        self.assert_passes("linear-lemmas")
