"""Unit tests for scenario loading and validation."""

import json
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

from gkreduce.scenarios import (
    BialgScenario,
    ReductionScenario,
    ScenarioError,
    bundled_names,
    catalog,
    load_bundled,
    load_file,
    parse_scenario,
)

BUNDLED = [
    "antidiagonal",
    "bshear",
    "cp2-example",
    "cp2-product",
    "gk-cartesian",
    "linear-lemmas",
    "random-axioms",
    "sl2-rmatrix",
]

ABELIAN = {
    "name": "abelian-line",
    "kind": "bialg",
    "algebra": {"names": ["a"]},
    "r": {"a,a": "1"},
    "expect": {"factorizable": True, "commuting": True},
}


class TestParseScenario(unittest.TestCase):
    def test_minimal_bialg(self):
        scenario = parse_scenario(json.dumps(ABELIAN))
        self.assertIsInstance(scenario, BialgScenario)
        self.assertEqual(scenario.algebra.brackets, {})
        self.assertIsNone(scenario.controls.perturbed_brackets)

    def test_invalid_json_reports_line(self):
        with self.assertRaises(ScenarioError) as raised:
            parse_scenario('{\n  "name": "x",\n  "kind": }', "broken.json")
        self.assertEqual(raised.exception.line, 3)
        self.assertTrue(str(raised.exception).startswith("broken.json:3"))

    def test_missing_field_reports_path(self):
        with self.assertRaises(ScenarioError) as raised:
            parse_scenario(json.dumps({"name": "x", "kind": "bialg", "r": {}}))
        self.assertTrue(raised.exception.field.endswith("algebra"))

    def test_unknown_kind_and_extra_fields(self):
        with self.assertRaises(ScenarioError):
            parse_scenario(json.dumps({"name": "x", "kind": "nope"}))
        with self.assertRaises(ScenarioError):
            parse_scenario(json.dumps(dict(ABELIAN, colour="blue")))

    def test_structure_needs_exactly_one_source(self):
        data = json.loads(load_bundled("cp2-example").model_dump_json())
        data["structures"]["J1"]["matrix"] = [["1"]]
        with self.assertRaises(ScenarioError) as raised:
            parse_scenario(json.dumps(data))
        self.assertIn("exactly one of 'matrix' and 'blocks'", str(raised.exception))

    def test_tduality_needs_group_elements(self):
        data = json.loads(load_bundled("bshear").model_dump_json())
        data["group_elements"] = []
        with self.assertRaises(ScenarioError):
            parse_scenario(json.dumps(data))

    def test_linear_lemmas_plane_range(self):
        with self.assertRaises(ScenarioError):
            parse_scenario(json.dumps({"name": "x", "kind": "linear-lemmas", "seed": 1, "planes": [3]}))


class TestBundledScenarios(unittest.TestCase):
    def test_names(self):
        self.assertEqual(bundled_names(), BUNDLED)

    def test_every_bundled_scenario_validates(self):
        kinds = {name: load_bundled(name).kind for name in BUNDLED}
        self.assertEqual(kinds["cp2-example"], "reduction")
        self.assertEqual(kinds["bshear"], "tduality")
        self.assertEqual(kinds["random-axioms"], "courant-axioms")
        self.assertEqual(kinds["gk-cartesian"], "gk-verify")

    def test_reduction_scenario_fields(self):
        scenario = load_bundled("cp2-example")
        self.assertIsInstance(scenario, ReductionScenario)
        self.assertEqual([m.tag for m in scenario.moments], ["J1", "J2"])
        self.assertEqual(len(scenario.group_elements), 4)

    def test_unknown_name(self):
        with self.assertRaises(KeyError):
            load_bundled("nope")

    def test_catalog_rows(self):
        rows = {name: (kind, description) for name, kind, description in catalog()}
        self.assertEqual(rows["sl2-rmatrix"][0], "bialg")
        self.assertTrue(all(description for _, description in rows.values()))


class TestScenarioFiles(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_load_file(self):
        path = os.path.join(self.temp_dir, "abelian.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(ABELIAN, f)
        self.assertEqual(load_file(path).name, "abelian-line")

    def test_missing_file(self):
        with self.assertRaises(ScenarioError) as raised:
            load_file(os.path.join(self.temp_dir, "missing.json"))
        self.assertIn("cannot read file", str(raised.exception))

    @patch("gkreduce.scenarios.settings")
    def test_scenarios_dir_extends_the_catalog(self, mock_settings):
        """Files in GKREDUCE_SCENARIOS_DIR are listed next to the bundled ones; invalid ones are flagged."""
        mock_settings.scenarios_dir = self.temp_dir
        with open(os.path.join(self.temp_dir, "abelian-line.json"), "w", encoding="utf-8") as f:
            json.dump(ABELIAN, f)
        with open(os.path.join(self.temp_dir, "broken.json"), "w", encoding="utf-8") as f:
            f.write("{")

        self.assertIn("abelian-line", bundled_names())
        self.assertEqual(load_bundled("abelian-line").kind, "bialg")
        rows = {name: kind for name, kind, _ in catalog()}
        self.assertEqual(rows["broken"], "invalid")
        self.assertEqual(rows["cp2-example"], "reduction")
