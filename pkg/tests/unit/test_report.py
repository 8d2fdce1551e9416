import json
import unittest

from gkreduce.common import Finding, finding, make_rng
from gkreduce.report import (
    ANCHORS,
    CHECK_CATALOG,
    CheckEntry,
    Report,
    Status,
    UnknownCheckError,
    explain,
    parse_json,
    render_json,
    render_text,
)


def entry(check: str, passed: bool = True, residual: str = "0", **kwargs) -> CheckEntry:
    return CheckEntry.from_finding(Finding(check, "r", passed, residual), **kwargs)


class TestFindings(unittest.TestCase):
    def test_finding_passes_iff_residual_is_zero(self):
        self.assertTrue(finding("cybe", "r", 0).passed)
        failed = finding("cybe", "r", "E⊗F⊗H = 2")
        self.assertFalse(failed.passed)
        self.assertEqual(failed.residual, "E⊗F⊗H = 2")

    def test_random_streams_are_reproducible_and_independent(self):
        a = [make_rng(7, "sections").random() for _ in range(2)]
        self.assertEqual(a[0], a[1])
        self.assertNotEqual(make_rng(7, "sections").random(), make_rng(7, "twist").random())
        self.assertNotEqual(make_rng(7, "x", 1).random(), make_rng(7, "x", 2).random())


class TestReport(unittest.TestCase):
    def test_status(self):
        self.assertTrue(Report.assemble("demo", "bialg", [entry("cybe")]).passed)
        failed = Report.assemble("demo", "bialg", [entry("cybe"), entry("jacobi", False, "-H")])
        self.assertFalse(failed.passed)
        self.assertEqual([c.id for c in failed.failures], ["jacobi"])
        self.assertEqual(Report.assemble("demo", "bialg", []).status, Status.FAIL)

    def test_not_applicable_does_not_fail(self):
        na = entry("subtorus-case")
        na.status = Status.NOT_APPLICABLE
        self.assertTrue(Report.assemble("demo", "reduction", [entry("cybe"), na]).passed)

    def test_entries_carry_the_catalog_anchor(self):
        self.assertEqual(entry("duality-residual").anchor, ANCHORS["duality-residual"])
        with self.assertRaises(KeyError):
            entry("no-such-check")

    def test_text_rendering(self):
        report = Report.assemble("demo", "bialg", [entry("cybe")])
        self.assertEqual(
            render_text(report),
            "scenario: demo (bialg)\n"
            "PASS           cybe  [r]  residual: 0\n"
            "overall: PASS (1 checks, 0 failed, 0 not applicable)\n",
        )

    def test_text_rendering_of_seed_notes_and_timings(self):
        checks = [entry("jacobi", False, "-H", timing_ms=1.5)]
        checks[0].note = "perturbed"
        text = render_text(Report.assemble("demo", "bialg", checks, seed=3))
        self.assertIn("seed: 3\n", text)
        self.assertIn("FAIL           jacobi  [r]  residual: -H  (perturbed)  1.5 ms\n", text)
        self.assertTrue(text.endswith("overall: FAIL (1 checks, 1 failed, 0 not applicable)\n"))

    def test_json_is_stable(self):
        report = Report.assemble("demo", "bialg", [entry("cybe"), entry("jacobi", False, "-H")])
        rendered = render_json(report)
        self.assertEqual(rendered, render_json(parse_json(rendered)))
        data = json.loads(rendered)
        self.assertEqual(data["status"], "fail")
        self.assertNotIn("seed", data)
        self.assertNotIn("timing_ms", data["checks"][0])
        self.assertEqual(data["checks"][1]["residual"], "-H")


class TestExplain(unittest.TestCase):
    def test_known_ids(self):
        text = explain("cybe")
        self.assertTrue(text.startswith("cybe: "))
        self.assertIn("verifies:", text)
        self.assertIn("reference: Eq. app:yangbaxter", text)
        duality = explain("duality-residual")
        self.assertIn("Theorem torus:duality, Eq. torus:dualeq", duality)
        self.assertIn("d(Σ P_jk Θ̂_k ∧ Θ_j)", duality)

    def test_unknown_id(self):
        with self.assertRaises(UnknownCheckError):
            explain("nope")

    def test_every_entry_has_text(self):
        self.assertEqual(set(ANCHORS), set(CHECK_CATALOG))
        for check_id, info in CHECK_CATALOG.items():
            self.assertTrue(info.topic and info.formula and ANCHORS[check_id], check_id)
