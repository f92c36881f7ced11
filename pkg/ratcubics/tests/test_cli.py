import contextlib
import io
import json
import os
import tempfile
import unittest

import run_ratcubics
from ratcubics import Config

REFERENCE_ARG = "2,3,-1,-3,1,2,-3,1"


def run(*argv: str) -> tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = run_ratcubics.main(["-l", "WARNING", *argv])
    return code, stdout.getvalue(), stderr.getvalue()


def run_json(test: unittest.TestCase, *argv: str) -> dict:
    code, out, err = run(*argv, "--json")
    test.assertEqual(code, 0, err)
    return json.loads(out)


class TestMapCommands(unittest.TestCase):
    def test_invariants(self):
        obj = run_json(self, "invariants", "--coeffs", REFERENCE_ARG)

        self.assertEqual(obj["schema"], 1)
        self.assertEqual(obj["j6"], "89360")
        self.assertEqual(obj["i6"], "-211")
        self.assertEqual(obj["aut"], "{e}")
        self.assertEqual(obj["xi_norm"], [128, 48, 108, -1312, -6784, 164608])

    def test_coefficient_orders(self):
        """Test that the ascending reading and a scaled tuple give the same record."""
        expected = run_json(self, "invariants", "--coeffs", REFERENCE_ARG)
        for argv in (
            ("--coeffs", "-3,-1,3,2,1,-3,2,1", "--order", "ascending"),
            ("--coeffs", "4,6,-2,-6,2,4,-6,2"),
        ):
            with self.subTest(argv=argv):
                self.assertEqual(run_json(self, "invariants", *argv), expected)

    def test_negative_leading_coefficient(self):
        """Test that a coefficient list starting with a minus sign is read as a value."""
        obj = run_json(self, "invariants", "--coeffs", "-3,0,0,1,0,1,0,0")
        self.assertEqual(obj["aut"], "C3")
        self.assertEqual(run_json(self, "invariants", "--coeffs=-3,0,0,1,0,1,0,0"), obj)

        code, out, _ = run("conjugate", "--coeffs", "-1,0,0,0,0,0,0,1", "--sigma", "-1,0,0,1")
        self.assertEqual((code, out.strip()), (0, "1,0,0,0,0,0,0,-1"))

    def test_attach_list_values(self):
        self.assertEqual(run_ratcubics.attach_list_values(["classify", "--coeffs", "-1,2", "--json"]),
                         ["classify", "--coeffs=-1,2", "--json"])
        self.assertEqual(run_ratcubics.attach_list_values(["classify", "--coeffs"]), ["classify", "--coeffs"])

    def test_text_output(self):
        code, out, _ = run("invariants", "--coeffs", REFERENCE_ARG)
        self.assertEqual(code, 0)
        self.assertIn("J6:           89360", out)
        self.assertIn("wheight:      5.66", out)

    def test_classify(self):
        self.assertEqual(run_json(self, "classify", "--coeffs", "0,0,0,1,1,0,0,0"), {
            "schema": 1, "aut": "D4", "aut_code": 3,
        })
        code, out, _ = run("classify", "--coeffs", "1,0,0,-3,0,-3,0,0")
        self.assertEqual((code, out.strip()), (0, "A4"))

    def test_conjugate(self):
        """Test that z^3 conjugated by z + 1 is (z + 1)^3 - 1."""
        obj = run_json(self, "conjugate", "--coeffs", "1,0,0,0,0,0,0,1", "--sigma", "1,1,0,1")
        self.assertEqual(obj["coeffs"], ["1", "3", "3", "0", "0", "0", "0", "1"])

    def test_bad_maps(self):
        for coeffs, message in (
            ("1,0,0,0,1,0,0,0", "not a degree-3 rational map (I6 = 0)"),
            ("1,2,3", "Expected 8 comma-separated coefficients"),
            ("1,0.5,0,0,0,0,0,1", "exact rational"),
        ):
            with self.subTest(coeffs=coeffs):
                code, _, err = run("classify", "--coeffs", coeffs)
                self.assertEqual(code, 2)
                self.assertIn(message, err)

    def test_singular_sigma(self):
        code, _, err = run("conjugate", "--coeffs", REFERENCE_ARG, "--sigma", "1,2,2,4")
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith("error: "))


class TestConfigOptions(unittest.TestCase):
    def test_bad_overrides(self):
        for override in "forest.seed", "forest.nope=1", "seed=3", "forest.weighted=maybe":
            with self.subTest(override=override):
                code, _, _ = run("-co", override, "classify", "--coeffs", REFERENCE_ARG)
                self.assertEqual(code, 2)

    def test_config_file_matches_defaults(self):
        path = os.path.join(os.path.dirname(os.path.abspath(run_ratcubics.__file__)), "config.ini")
        self.assertEqual(Config.from_filepath(path), Config.default())

    def test_export_options(self):
        config = Config.default()
        config.set_option("forest.test-fraction", "0.125")
        config.set_option("enumeration.dedupe-antipodal", "False")

        options = config.export_options()
        self.assertEqual(options["forest.test-fraction"], "0.125")
        self.assertEqual(options["enumeration.dedupe-antipodal"], "false")
        self.assertEqual(options["forest.workers"], "1")

    def test_set_option(self):
        config = Config.default()
        config.set_option("checks.log-locus-mismatches", "true")
        config.set_option("forest.seed", "7")
        self.assertTrue(config.checks_log_locus_mismatches)
        self.assertEqual(config.forest_seed, 7)
        self.assertEqual(Config.option_name("enumeration_output_dir"), "enumeration.output-dir")

        with self.assertRaises(KeyError):
            config.set_option("forest.depth", "3")
        with self.assertRaises(ValueError):
            config.set_option("forest.trees", "many")

    def test_override_messages(self):
        _, _, err = run("-co", "seed=3", "classify", "--coeffs", REFERENCE_ARG)
        self.assertIn("section.key=value", err)
        _, _, err = run("-co", "forest.nope=1", "classify", "--coeffs", REFERENCE_ARG)
        self.assertIn("Unknown config option 'forest.nope'", err)
        code, _, _ = run("-co", "forest.seed = 7", "classify", "--coeffs", REFERENCE_ARG)
        self.assertEqual(code, 0)

    def test_missing_config_file(self):
        code, _, err = run("-c", "no_such_config.ini", "classify", "--coeffs", REFERENCE_ARG)
        self.assertEqual(code, 2)
        self.assertIn("does not exist", err)

    def test_missing_command(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                run_ratcubics.main([])
        self.assertEqual(context.exception.code, 2)


class TestDatabaseCommands(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = tempfile.TemporaryDirectory()
        cls.path = os.path.join(cls.dir.name, "maps.jsonl")
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(io.StringIO()):
            code = run_ratcubics.main(["-l", "WARNING", "generate", "--height", "1", "--out", cls.path, "--json"])
        assert code == 0
        cls.generated = json.loads(stdout.getvalue())

    @classmethod
    def tearDownClass(cls):
        cls.dir.cleanup()

    def test_generate(self):
        self.assertEqual(self.generated["total"], 2248)
        self.assertEqual(self.generated["output"], self.path)
        self.assertEqual(self.generated["stats"]["strata"]["1"], [2128, 58, 46, 8, 4, 2, 0, 2])

    def test_stats_and_csv(self):
        csv_path = os.path.join(self.dir.name, "maps.csv")
        from_jsonl = run_json(self, "stats", self.path, "--csv", csv_path)
        from_csv = run_json(self, "stats", csv_path)

        self.assertEqual(from_jsonl["stats"]["total"], 2248)
        self.assertEqual(from_jsonl, from_csv)

    def test_ml(self):
        report_path = os.path.join(self.dir.name, "report.json")
        obj = run_json(self, "ml", self.path, "--trees", "2", "--features", "coeffs", "--weighted", "on",
                       "--report", report_path)

        self.assertEqual([run["name"] for run in obj["runs"]], ["majority baseline", "coeffs weighted"])
        self.assertEqual(obj["trees"], 2)
        with open(report_path, encoding="utf-8") as f:
            self.assertEqual(json.load(f)["runs"], obj["runs"])

    def test_missing_database(self):
        code, _, _ = run("stats", os.path.join(self.dir.name, "missing.jsonl"))
        self.assertEqual(code, 1)


if __name__ == "__main__":
    unittest.main()
