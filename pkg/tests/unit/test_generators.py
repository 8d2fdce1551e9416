import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from gkreduce.common import make_rng
from gkreduce.generators import (
    random_closed_three_form,
    random_cotangent,
    random_kahler_gk,
    random_spinor,
    random_symmetry_pair,
)
from gkreduce.genlin import PairedSpace, gcs_type, is_gk
from gkreduce.symcalc import Chart, coeff_field, exterior_d

R4 = Chart.build("R4", ["x", "y", "z", "w"])
seeds = st.integers(min_value=0, max_value=10**6)


class TestRandomStructures(unittest.TestCase):
    @settings(max_examples=10, deadline=None)
    @given(seeds, st.sampled_from(["kahler", "mixed"]), st.sampled_from([1, 2]))
    def test_random_gk_is_valid(self, seed, kind, planes):
        gk = random_kahler_gk(make_rng(seed, "gk"), planes, kind)
        report = is_gk(gk)
        self.assertTrue(report.valid, report.violations)
        self.assertEqual(gk.J1.nrows, 4 * planes)

    def test_kahler_kind_keeps_symplectic_in_j1(self):
        gk = random_kahler_gk(make_rng(1, "types"), 2, "kahler")
        self.assertEqual(gcs_type(gk.J1), 0)
        self.assertEqual(gcs_type(gk.J2), 2)
        mixed = random_kahler_gk(make_rng(1, "types"), 2, "mixed")
        self.assertEqual(gcs_type(mixed.J1), 1)
        self.assertEqual(gcs_type(mixed.J2), 1)

    def test_same_seed_same_structure(self):
        self.assertEqual(random_kahler_gk(make_rng(5, "gk"), 2).J1, random_kahler_gk(make_rng(5, "gk"), 2).J1)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            random_kahler_gk(make_rng(0), 1, "hyperkahler")

    @settings(max_examples=20, deadline=None)
    @given(seeds, st.sampled_from([1, 2]))
    def test_random_cotangent(self, seed, dim):
        space = PairedSpace(4, coeff_field(()))
        K = random_cotangent(make_rng(seed, "K"), space, dim)
        self.assertEqual(K.dim, dim)
        self.assertTrue(K <= space.cotangent)


class TestRandomForms(unittest.TestCase):
    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_three_forms_and_symmetry_pairs_are_closed(self, seed):
        rng = make_rng(seed, "closed")
        self.assertFalse(exterior_d(random_closed_three_form(R4, rng)))
        self.assertFalse(exterior_d(random_symmetry_pair(R4, rng).A))

    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_spinors_are_nonzero(self, seed):
        self.assertTrue(random_spinor(R4, make_rng(seed, "spinor")))
