import os
from pathlib import Path
from unittest import TestCase, mock

from ytri.settings import (
    DEFAULT_TOLERANCE_BITS,
    resolve_log_level,
    resolve_settings,
)


class ResolveSettingsTests(TestCase):
    def test_defaults_when_unconfigured(self) -> None:
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = resolve_settings()
        self.assertEqual(settings.tolerance_bits, DEFAULT_TOLERANCE_BITS)
        self.assertEqual(settings.falsify_budget, 10_000)
        self.assertEqual(settings.falsify_seed, 0)
        self.assertEqual(settings.log_level, "WARNING")
        self.assertEqual(settings.seeds_path, Path("seeds/example_maps.yaml"))

    def test_environment_overrides(self) -> None:
        env = {
            "YTRI_TOLERANCE_BITS": "60",
            "YTRI_FALSIFY_BUDGET": "250",
            "YTRI_FALSIFY_SEED": "-3",
            "YTRI_REFINE_ROUNDS": "8",
            "YTRI_LOG_LEVEL": "debug",
            "YTRI_FIXTURES_DIR": "/tmp/ytri-fixtures",
        }
        with mock.patch.dict(os.environ, env, clear=True):
            settings = resolve_settings()
        self.assertEqual(settings.tolerance_bits, 60)
        self.assertEqual(settings.falsify_budget, 250)
        self.assertEqual(settings.falsify_seed, -3)
        self.assertEqual(settings.refine_rounds, 8)
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertEqual(settings.fixtures_dir, Path("/tmp/ytri-fixtures"))

    def test_empty_value_falls_back_to_default(self) -> None:
        with mock.patch.dict(os.environ, {"YTRI_FALSIFY_BUDGET": ""}, clear=True):
            self.assertEqual(resolve_settings().falsify_budget, 10_000)

    def test_non_integer_raises_runtime_error(self) -> None:
        with mock.patch.dict(os.environ, {"YTRI_TOLERANCE_BITS": "forty"}, clear=True):
            with self.assertRaises(RuntimeError):
                resolve_settings()

    def test_budget_below_minimum(self) -> None:
        with mock.patch.dict(os.environ, {"YTRI_FALSIFY_BUDGET": "0"}, clear=True):
            with self.assertRaisesRegex(RuntimeError, "at least 1"):
                resolve_settings()

    def test_unknown_log_level(self) -> None:
        with mock.patch.dict(os.environ, {"YTRI_LOG_LEVEL": "chatty"}, clear=True):
            with self.assertRaises(RuntimeError):
                resolve_log_level()

    def test_settings_are_frozen(self) -> None:
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = resolve_settings()
        with self.assertRaises(Exception):
            settings.falsify_budget = 1
