import dataclasses
import json
import os
import tempfile
import unittest

import numpy as np

from ratcubics import EmptyClassError, PreconditionError
from ratcubics.aut import AutLabel
from ratcubics.dataset import EnumerationConfig, Enumerator, build_record, enumerate_maps, read_jsonl
from ratcubics.invariants import WeightedPoint
from ratcubics.ml import (DecisionTree, FeatureMatrix, ForestExperiment, MajorityClassifier, RandomForest,
                          class_distribution, class_weights, derive_seed, evaluate, featurize, metrics_from_predictions,
                          stratified_indices, stratified_split, train_forest)
from ratcubics.tests.test_forms import REFERENCE_MAP


def clustered_matrix(rows_per_class: int = 20, seed: int = 0) -> FeatureMatrix:
    """Two classes separated along feature 0; feature 1 is constant."""
    rng = np.random.default_rng(seed)
    low = rng.uniform(0, 1, rows_per_class)
    high = rng.uniform(10, 11, rows_per_class)
    features = np.column_stack([np.concatenate([low, high]), np.full(2 * rows_per_class, 5.0)])
    labels = np.array([6] * rows_per_class + [3] * rows_per_class, dtype=np.int64)
    return FeatureMatrix(features, labels, "coeffs")


class TestFeatures(unittest.TestCase):
    def setUp(self):
        self.records = [build_record(c) for c in (REFERENCE_MAP, (0, 0, 0, 1, 1, 0, 0, 0))]

    def test_modes(self):
        coeffs = featurize(self.records, "coeffs")
        invariants = featurize(self.records, "invariants")

        self.assertEqual(coeffs.features.shape, (2, 8))
        self.assertEqual(invariants.features.shape, (2, 6))
        self.assertEqual(coeffs.features[0].tolist(), list(REFERENCE_MAP))
        self.assertEqual(invariants.features[0].tolist(), [128, 48, 108, -1312, -6784, 164608])
        self.assertEqual(invariants.labels.tolist(), [AutLabel.E.code, AutLabel.D4.code])
        self.assertIsNone(invariants.transform)
        self.assertEqual(featurize(self.records, "coefficients").mode, "coeffs")

    def test_large_values_use_signed_log(self):
        huge = dataclasses.replace(self.records[0], xi_normalized=WeightedPoint((2 ** 60, 0, 0, 0, 0, -(2 ** 60))))
        matrix = featurize([huge, self.records[1]], "invariants")

        self.assertEqual(matrix.transform, "signed-log1p")
        self.assertAlmostEqual(matrix.features[0, 0], np.log(2.0 ** 60 + 1))
        self.assertAlmostEqual(matrix.features[0, 5], -np.log(2.0 ** 60 + 1))
        self.assertEqual(matrix.features[0, 1], 0.0)

    def test_bad_input(self):
        with self.assertRaises(PreconditionError):
            featurize(self.records, "xi")
        with self.assertRaises(PreconditionError):
            featurize([], "coeffs")
        with self.assertRaises(PreconditionError):
            FeatureMatrix(np.zeros((2, 3)), np.zeros(3, dtype=np.int64), "coeffs")


class TestWeightsAndSplit(unittest.TestCase):
    def test_class_weights(self):
        weights = class_weights([0, 0, 0, 1])
        self.assertAlmostEqual(weights[0], 4 / 6)
        self.assertAlmostEqual(weights[1], 2.0)

        with self.assertRaises(EmptyClassError):
            class_weights([0, 0, 1], classes=[0, 1, 2])
        with self.assertRaises(EmptyClassError):
            class_weights([])

    def test_class_distribution(self):
        self.assertEqual(class_distribution([6, 6, 6, 3]), {6: (3, 0.75), 3: (1, 0.25)})

    def test_stratified_indices(self):
        labels = np.array([0] * 10 + [1] * 10 + [3] * 2 + [5])
        train, test = stratified_indices(labels, 0.2, seed=7)

        self.assertEqual(sorted(np.concatenate([train, test]).tolist()), list(range(labels.shape[0])))
        self.assertEqual(np.bincount(labels[test], minlength=6).tolist(), [2, 2, 0, 0, 0, 0])
        self.assertIn(22, train.tolist())

        again = stratified_indices(labels, 0.2, seed=7)
        self.assertEqual(test.tolist(), again[1].tolist())

    def test_split_keeps_one_training_row(self):
        train, test = stratified_indices(np.array([4, 4]), 0.9, seed=1)
        self.assertEqual((train.shape[0], test.shape[0]), (1, 1))

    def test_bad_fraction(self):
        for fraction in 0, 1, 1.5:
            with self.subTest(fraction=fraction):
                with self.assertRaises(PreconditionError):
                    stratified_indices(np.array([0, 1]), fraction, seed=0)

    def test_stratified_split(self):
        train, test = stratified_split(clustered_matrix(), 0.25, seed=3)
        self.assertEqual((train.rows, test.rows), (30, 10))
        self.assertEqual(np.bincount(test.labels, minlength=7)[[3, 6]].tolist(), [5, 5])

    def test_derive_seed(self):
        self.assertEqual(derive_seed(42, 3), derive_seed(42, 3))
        self.assertEqual(len({derive_seed(42, i) for i in range(100)}), 100)


class TestForest(unittest.TestCase):
    def test_tree_memorizes(self):
        """Test that an unpruned tree reproduces its training labels on distinct rows."""
        rng = np.random.default_rng(5)
        features = rng.normal(size=(60, 3))
        labels = rng.integers(0, 3, 60)
        tree = DecisionTree(3, rng=np.random.default_rng(1)).fit(features, labels)

        self.assertEqual(np.argmax(tree.predict_proba(features), axis=1).tolist(), labels.tolist())
        self.assertAlmostEqual(tree.feature_importances.sum(), 1.0)

    def test_forest_separates_clusters(self):
        matrix = clustered_matrix()
        forest = train_forest(matrix, tree_count=10, seed=1)

        self.assertEqual(forest.predict(matrix.features).tolist(), matrix.labels.tolist())
        self.assertEqual(forest.classes.tolist(), [3, 6])
        np.testing.assert_allclose(forest.feature_importances, [1.0, 0.0])

    def test_forest_is_deterministic(self):
        matrix = clustered_matrix(seed=2)
        first = RandomForest(5, seed=9).fit(matrix).predict_proba(matrix.features)
        second = RandomForest(5, seed=9).fit(matrix).predict_proba(matrix.features)
        np.testing.assert_array_equal(first, second)

    def test_workers_do_not_change_the_forest(self):
        matrix = clustered_matrix(seed=4)
        serial = RandomForest(6, seed=3).fit(matrix)
        threaded = RandomForest(6, seed=3, workers=3).fit(matrix)

        np.testing.assert_array_equal(serial.predict_proba(matrix.features), threaded.predict_proba(matrix.features))
        np.testing.assert_array_equal(serial.feature_importances, threaded.feature_importances)

    def test_weighted_forest(self):
        matrix = clustered_matrix()
        forest = train_forest(matrix, tree_count=3, seed=1, weights=class_weights(matrix.labels))
        self.assertEqual(forest.predict(matrix.features).tolist(), matrix.labels.tolist())

    def test_single_class(self):
        matrix = FeatureMatrix(np.arange(6, dtype=np.float64).reshape(3, 2), np.array([6, 6, 6]), "coeffs")
        forest = train_forest(matrix, tree_count=2)
        self.assertEqual(forest.predict(np.zeros((2, 2))).tolist(), [6, 6])

    def test_bad_forest(self):
        with self.assertRaises(PreconditionError):
            RandomForest(0)
        with self.assertRaises(PreconditionError):
            RandomForest(2, workers=0)
        with self.assertRaises(PreconditionError):
            RandomForest(1).fit(FeatureMatrix(np.zeros((0, 2)), np.zeros(0, dtype=np.int64), "coeffs"))

    def test_majority(self):
        model = MajorityClassifier().fit(FeatureMatrix(np.zeros((3, 1)), np.array([6, 3, 6]), "coeffs"))
        self.assertEqual(model.predict(np.zeros((2, 1))).tolist(), [6, 6])


class TestMetrics(unittest.TestCase):
    def test_report(self):
        metrics = metrics_from_predictions(np.array([6, 6, 3, 3]), np.array([6, 3, 3, 3]))

        self.assertEqual(metrics.accuracy, 0.75)
        self.assertEqual(metrics.per_class[6].precision, 1.0)
        self.assertEqual(metrics.per_class[6].recall, 0.5)
        self.assertAlmostEqual(metrics.per_class[6].f1, 2 / 3)
        self.assertAlmostEqual(metrics.per_class[3].precision, 2 / 3)
        self.assertAlmostEqual(metrics.per_class[3].f1, 0.8)
        self.assertAlmostEqual(metrics.macro.precision, (1 + 2 / 3) / 2)
        self.assertEqual(metrics.weighted.support, 4)

    def test_undefined_entries(self):
        """Test that classes without predictions or without support report None."""
        metrics = metrics_from_predictions(np.array([6, 3]), np.array([6, 6]), classes=[0, 3, 6])

        self.assertIsNone(metrics.per_class[3].precision)
        self.assertEqual(metrics.per_class[3].recall, 0.0)
        self.assertIsNone(metrics.per_class[3].f1)
        self.assertEqual(metrics.per_class[0].support, 0)
        self.assertIsNone(metrics.per_class[0].recall)
        self.assertAlmostEqual(metrics.macro.precision, 0.25)

        obj = json.loads(json.dumps(metrics.to_json()))
        self.assertIsNone(obj["per_class"]["D4"]["f1"])
        self.assertIn("A4", obj["per_class"])
        self.assertIn("null", metrics.format_table())

    def test_evaluate(self):
        matrix = clustered_matrix(seed=6)
        metrics = evaluate(train_forest(matrix, tree_count=3, seed=1), matrix)
        self.assertEqual(metrics.accuracy, 1.0)
        self.assertEqual(metrics.per_class[3].support, 20)

    def test_empty(self):
        with self.assertRaises(PreconditionError):
            metrics_from_predictions(np.array([]), np.array([]))


class TestForestExperiment(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        records = [build_record(c) for c in enumerate_maps(EnumerationConfig(1))]
        cls.experiment = ForestExperiment(records, tree_count=3, seed=42, test_fraction=0.10)
        cls.runs = cls.experiment.run_all()

    def test_runs(self):
        self.assertEqual([run.name for run in self.runs], [
            "majority baseline", "coeffs", "coeffs weighted", "invariants", "invariants weighted",
        ])
        self.assertEqual(len(self.runs[1].feature_importances), 8)
        self.assertEqual(len(self.runs[3].feature_importances), 6)

    def test_shared_split(self):
        """Test that both feature sets are evaluated on the same rows."""
        _, coeffs_test = self.experiment.matrices("coeffs")
        _, invariants_test = self.experiment.matrices("invariants")
        self.assertEqual(coeffs_test.labels.tolist(), invariants_test.labels.tolist())

    def test_baseline(self):
        _, test = self.experiment.matrices("coeffs")
        expected = float(np.mean(test.labels == AutLabel.E.code))
        self.assertEqual(self.runs[0].metrics.accuracy, expected)
        self.assertEqual(self.runs[0].metrics.per_class[AutLabel.C2_1.code].recall, 0.0)

    def test_report(self):
        report = self.experiment.report(self.runs)

        self.assertEqual(report["schema"], 1)
        self.assertEqual(report["class_distribution"]["{e}"]["count"], 2128)
        self.assertEqual(sum(v["count"] for v in report["class_distribution"].values()), 2248)

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "report.json")
            self.experiment.write_report(self.runs, path)
            with open(path, encoding="utf-8") as f:
                self.assertEqual(json.load(f)["runs"][1]["features"], "coeffs")

        self.assertIn("== invariants weighted ==", ForestExperiment.format_text(self.runs))

    def test_no_records(self):
        with self.assertRaises(PreconditionError):
            ForestExperiment([])


@unittest.skipUnless(os.environ.get("RATCUBICS_SLOW") == "1", "set RATCUBICS_SLOW=1 to run")
class TestForestAcceptance(unittest.TestCase):
    """The full experiment on the height <= 2 database with 100 trees and seed 42."""

    @classmethod
    def setUpClass(cls):
        workers = os.cpu_count() or 1
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "maps.jsonl")
            Enumerator(EnumerationConfig(2, worker_count=workers, output_path=path)).run()
            records = read_jsonl(path)
        cls.experiment = ForestExperiment(records, tree_count=100, seed=42, test_fraction=0.10, workers=workers)
        cls.runs = {run.name: run for run in cls.experiment.run_all()}

    def test_invariants_beat_coefficients(self):
        self.assertGreaterEqual(self.runs["invariants"].metrics.macro.f1, self.runs["coeffs"].metrics.macro.f1)

    def test_invariant_recall(self):
        for code, report in self.runs["invariants"].metrics.per_class.items():
            if report.support >= 2:
                with self.subTest(label=AutLabel.from_code(code).text, support=report.support):
                    self.assertGreaterEqual(report.recall, 0.9)

    def test_weighting_keeps_recall(self):
        for mode in "coeffs", "invariants":
            plain, weighted = self.runs[mode].metrics, self.runs[f"{mode} weighted"].metrics
            for code, report in plain.per_class.items():
                if code != AutLabel.E.code and report.support >= 2:
                    with self.subTest(mode=mode, label=AutLabel.from_code(code).text):
                        self.assertGreaterEqual(weighted.per_class[code].recall, report.recall - 0.05)

    def test_baseline_matches_prior(self):
        _, share = self.experiment.class_distribution()[AutLabel.E.text]
        self.assertAlmostEqual(self.runs["majority baseline"].metrics.accuracy, share, delta=0.001)



if __name__ == "__main__":
    unittest.main()
