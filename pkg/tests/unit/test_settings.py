import logging
import os
import unittest
from unittest.mock import patch

from gkreduce.settings import Settings


class TestSettings(unittest.TestCase):
    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        s = Settings(_env_file=None)
        self.assertEqual(s.sample_points, 10)
        self.assertFalse(s.include_timings)
        self.assertIsNone(s.scenarios_dir)
        self.assertEqual(s.numeric_log_level, logging.WARNING)

    @patch.dict(
        os.environ,
        {"GKREDUCE_SAMPLE_POINTS": "3", "GKREDUCE_INCLUDE_TIMINGS": "true", "GKREDUCE_LOG_LEVEL": "debug"},
        clear=True,
    )
    def test_environment_overrides(self):
        s = Settings(_env_file=None)
        self.assertEqual(s.sample_points, 3)
        self.assertTrue(s.include_timings)
        self.assertEqual(s.numeric_log_level, logging.DEBUG)

    def test_unknown_log_level_falls_back_to_warning(self):
        self.assertEqual(Settings(_env_file=None, log_level="chatty").numeric_log_level, logging.WARNING)
