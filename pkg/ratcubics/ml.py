"""Random-forest experiment: automorphism labels from coefficients versus from invariants."""
from __future__ import annotations

import collections
import concurrent.futures
import dataclasses
import json
import logging
import math
import typing

import numpy as np

from .aut import AutLabel
from .dataset import DatasetRecord
from .ratcubics_types import Config, EmptyClassError, PreconditionError

__all__ = [
    "FEATURE_MODES",
    "FeatureMatrix",
    "featurize",
    "class_weights",
    "class_distribution",
    "stratified_indices",
    "stratified_split",
    "splitmix64",
    "derive_seed",
    "DecisionTree",
    "RandomForest",
    "MajorityClassifier",
    "train_forest",
    "ClassReport",
    "ClassMetrics",
    "metrics_from_predictions",
    "evaluate",
    "ExperimentRun",
    "ForestExperiment",
]

FEATURE_MODES = ("coeffs", "invariants")

# beyond this magnitude int -> float conversion stops being exact
_EXACT_FLOAT_LIMIT = 2 ** 53


@dataclasses.dataclass
class FeatureMatrix:
    features: np.ndarray
    labels: np.ndarray
    mode: str
    transform: str | None = None

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise PreconditionError(f"{self.features.shape[0]} feature rows but {self.labels.shape[0]} labels.")

    @property
    def rows(self) -> int:
        return self.features.shape[0]

    def subset(self, indices: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(self.features[indices], self.labels[indices], self.mode, self.transform)


def _signed_log(value: int) -> float:
    # math.log accepts ints of any size
    return math.copysign(math.log(abs(value) + 1), value)


def featurize(records: typing.Sequence[DatasetRecord], mode: str) -> FeatureMatrix:
    """Coefficients (8 columns) or normalized invariants (6 columns) of every record."""
    if not records:
        raise PreconditionError("Cannot build a feature matrix from no records.")
    if mode in ("coeffs", "coefficients"):
        rows = [record.coeffs for record in records]
        mode = "coeffs"
    elif mode == "invariants":
        rows = [record.xi_normalized.coords for record in records]
    else:
        raise PreconditionError(f"Unknown feature mode {mode!r}. Use one of {FEATURE_MODES}.")

    labels = np.array([record.aut_label.code for record in records], dtype=np.int64)
    if any(abs(v) > _EXACT_FLOAT_LIMIT for row in rows for v in row):
        features = np.array([[_signed_log(v) for v in row] for row in rows], dtype=np.float64)
        return FeatureMatrix(features, labels, mode, transform="signed-log1p")
    return FeatureMatrix(np.array(rows, dtype=np.float64), labels, mode)


def class_weights(labels: typing.Sequence[int] | np.ndarray,
                  classes: typing.Iterable[int] | None = None) -> dict[int, float]:
    """``w_i = N / (C * n_i)`` for every class."""
    labels = np.asarray(labels)
    counts = collections.Counter(labels.tolist())
    classes = sorted(counts) if classes is None else sorted(set(classes))
    missing = [c for c in classes if counts[c] == 0]
    if missing or not classes:
        raise EmptyClassError(f"Classes without samples: {missing or 'all'}.")

    total = labels.shape[0]
    return {c: total / (len(classes) * counts[c]) for c in classes}


def class_distribution(labels: typing.Sequence[int] | np.ndarray) -> dict[int, tuple[int, float]]:
    """Count and share of every class code, largest first."""
    labels = np.asarray(labels)
    counts = collections.Counter(labels.tolist())
    total = labels.shape[0]
    return {c: (n, n / total) for c, n in counts.most_common()}


def stratified_indices(labels: np.ndarray, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Train and test row indices; every class is split proportionally and keeps one training row."""
    if not 0 < test_fraction < 1:
        raise PreconditionError(f"Test fraction must lie in (0, 1), got {test_fraction}.")

    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    train, test = [], []
    for code in np.unique(labels):
        indices = np.nonzero(labels == code)[0]
        indices = indices[rng.permutation(indices.shape[0])]
        test_count = min(int(round(indices.shape[0] * test_fraction)), indices.shape[0] - 1)
        test.append(indices[:test_count])
        train.append(indices[test_count:])
    if not train:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def stratified_split(matrix: FeatureMatrix, test_fraction: float,
                     seed: int) -> tuple[FeatureMatrix, FeatureMatrix]:
    train, test = stratified_indices(matrix.labels, test_fraction, seed)
    return matrix.subset(train), matrix.subset(test)


_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    z = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed of the ``index``-th tree; independent of how many trees are trained in parallel."""
    return splitmix64((master + index * 0x9E3779B97F4A7C15) & _MASK64)


class DecisionTree:
    """Binary tree on axis-aligned thresholds grown on weighted Gini impurity.

    Leaves store the weighted class distribution of their training rows. Depth is
    unlimited and a leaf may hold a single row.
    """

    def __init__(self, class_count: int, max_features: int | None = None,
                 rng: np.random.Generator | None = None):
        self.class_count = class_count
        self.max_features = max_features
        self.rng = rng or np.random.default_rng(0)

        self.feature = np.empty(0, dtype=np.intp)
        self.threshold = np.empty(0, dtype=np.float64)
        self.left = np.empty(0, dtype=np.intp)
        self.right = np.empty(0, dtype=np.intp)
        self.value = np.empty((0, class_count), dtype=np.float64)
        self.feature_importances = np.empty(0, dtype=np.float64)

    @property
    def node_count(self) -> int:
        return self.feature.shape[0]

    def fit(self, features: np.ndarray, labels: np.ndarray, sample_weight: np.ndarray | None = None) -> "DecisionTree":
        """``labels`` are class indices in ``range(class_count)``."""
        n_rows, n_features = features.shape
        if sample_weight is None:
            sample_weight = np.ones(n_rows, dtype=np.float64)
        max_features = self.max_features or n_features

        feature, threshold, left, right, value = [], [], [], [], []
        importances = np.zeros(n_features, dtype=np.float64)

        def new_node() -> int:
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(None)
            return len(feature) - 1

        stack = [(new_node(), np.arange(n_rows))]
        while stack:
            node, rows = stack.pop()
            y, w = labels[rows], sample_weight[rows]
            totals = np.bincount(y, weights=w, minlength=self.class_count)
            value[node] = totals / totals.sum()
            if np.count_nonzero(totals) <= 1:
                continue

            split = self._best_split(features[rows], y, w, totals, max_features)
            if split is None:
                continue
            split_feature, split_threshold, gain = split
            importances[split_feature] += totals.sum() * gain

            go_left = features[rows, split_feature] <= split_threshold
            left_node, right_node = new_node(), new_node()
            feature[node], threshold[node] = split_feature, split_threshold
            left[node], right[node] = left_node, right_node
            stack.append((right_node, rows[~go_left]))
            stack.append((left_node, rows[go_left]))

        self.feature = np.array(feature, dtype=np.intp)
        self.threshold = np.array(threshold, dtype=np.float64)
        self.left = np.array(left, dtype=np.intp)
        self.right = np.array(right, dtype=np.intp)
        self.value = np.vstack(value)
        total_importance = importances.sum()
        self.feature_importances = importances / total_importance if total_importance > 0 else importances
        return self

    def _best_split(self, features: np.ndarray, y: np.ndarray, w: np.ndarray, totals: np.ndarray,
                    max_features: int) -> tuple[int, float, float] | None:
        parent = 1.0 - np.sum((totals / totals.sum()) ** 2)
        best = None
        # keep drawing features past max_features until at least one valid split exists
        for position, candidate in enumerate(self.rng.permutation(features.shape[1])):
            if position >= max_features and best is not None:
                break
            found = self._best_threshold(features[:, candidate], y, w)
            if found is None:
                continue
            split_threshold, child = found
            if best is None or child < best[2]:
                best = (int(candidate), split_threshold, child)

        if best is None:
            return None
        return best[0], best[1], parent - best[2]

    def _best_threshold(self, column: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[float, float] | None:
        """Sorted sweep over all thresholds of one feature; returns (threshold, child impurity)."""
        order = np.argsort(column, kind="stable")
        sorted_values = column[order]
        change = np.nonzero(sorted_values[:-1] != sorted_values[1:])[0]
        if change.shape[0] == 0:
            return None

        n_rows = column.shape[0]
        weighted = np.zeros((n_rows, self.class_count), dtype=np.float64)
        weighted[np.arange(n_rows), y[order]] = w[order]
        cumulative = np.cumsum(weighted, axis=0)

        left_counts = cumulative[change]
        right_counts = cumulative[-1] - left_counts
        left_weight = left_counts.sum(axis=1)
        right_weight = right_counts.sum(axis=1)

        gini_left = 1.0 - np.sum((left_counts / left_weight[:, None]) ** 2, axis=1)
        gini_right = 1.0 - np.sum((right_counts / right_weight[:, None]) ** 2, axis=1)
        child = (left_weight * gini_left + right_weight * gini_right) / cumulative[-1].sum()

        best = int(np.argmin(child))
        i = change[best]
        low, high = sorted_values[i], sorted_values[i + 1]
        split_threshold = low / 2 + high / 2
        if not low <= split_threshold < high:
            split_threshold = low
        return float(split_threshold), float(child[best])

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        nodes = np.zeros(features.shape[0], dtype=np.intp)
        while True:
            split_feature = self.feature[nodes]
            rows = np.nonzero(split_feature >= 0)[0]
            if rows.shape[0] == 0:
                break
            current = nodes[rows]
            go_left = features[rows, split_feature[rows]] <= self.threshold[current]
            nodes[rows] = np.where(go_left, self.left[current], self.right[current])
        return self.value[nodes]


class RandomForest:
    """Bagged decision trees with sqrt(features) candidates per split and soft voting."""

    def __init__(self, tree_count: int = 100, seed: int = 42, class_weight: dict[int, float] | None = None,
                 workers: int = 1):
        if tree_count < 1:
            raise PreconditionError(f"A forest needs at least one tree, got {tree_count}.")
        if workers < 1:
            raise PreconditionError(f"workers must be positive, got {workers}.")
        self.tree_count = tree_count
        self.seed = seed
        self.class_weight = class_weight
        self.workers = workers
        self.classes = np.empty(0, dtype=np.int64)
        self.trees: list[DecisionTree] = []
        self._logger = logging.getLogger(self.__class__.__name__)

    def fit(self, matrix: FeatureMatrix) -> "RandomForest":
        if matrix.rows == 0:
            raise PreconditionError("Cannot train on an empty matrix.")

        self.classes = np.unique(matrix.labels)
        y = np.searchsorted(self.classes, matrix.labels)
        if self.class_weight is None:
            weights = np.ones(matrix.rows, dtype=np.float64)
        else:
            weights = np.array([self.class_weight[c] for c in self.classes], dtype=np.float64)[y]

        n_features = matrix.features.shape[1]
        max_features = max(1, int(math.sqrt(n_features)))

        def fit_tree(index: int) -> DecisionTree:
            rng = np.random.default_rng(derive_seed(self.seed, index))
            sample = rng.integers(0, matrix.rows, matrix.rows)
            tree = DecisionTree(self.classes.shape[0], max_features, rng)
            return tree.fit(matrix.features[sample], y[sample], weights[sample])

        self.trees = []
        # every tree owns its seed, so the forest does not depend on the number of workers
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.workers) as executor:
            for index, tree in enumerate(executor.map(fit_tree, range(self.tree_count))):
                self.trees.append(tree)
                if (index + 1) % 25 == 0 or index + 1 == self.tree_count:
                    self._logger.info(f"Trained {index + 1}/{self.tree_count} trees on {matrix.rows:_} rows "
                                      f"({matrix.mode}).")
        return self

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        return np.mean([tree.predict_proba(features) for tree in self.trees], axis=0)

    def predict(self, features: np.ndarray) -> np.ndarray:
        return self.classes[np.argmax(self.predict_proba(features), axis=1)]

    @property
    def feature_importances(self) -> np.ndarray:
        """Mean decrease in weighted impurity, averaged over trees."""
        return np.mean([tree.feature_importances for tree in self.trees], axis=0)


class MajorityClassifier:
    """Predicts the most frequent training class for every row."""

    def __init__(self):
        self.majority: int | None = None

    def fit(self, matrix: FeatureMatrix) -> "MajorityClassifier":
        if matrix.rows == 0:
            raise PreconditionError("Cannot train on an empty matrix.")
        codes, counts = np.unique(matrix.labels, return_counts=True)
        self.majority = int(codes[np.argmax(counts)])
        return self

    def predict(self, features: np.ndarray) -> np.ndarray:
        return np.full(features.shape[0], self.majority, dtype=np.int64)


def train_forest(train: FeatureMatrix, tree_count: int = 100, seed: int = 42,
                 weights: dict[int, float] | None = None, workers: int = 1) -> RandomForest:
    return RandomForest(tree_count, seed, weights, workers).fit(train)


@dataclasses.dataclass
class ClassReport:
    precision: float | None
    recall: float | None
    f1: float | None
    support: int


@dataclasses.dataclass
class ClassMetrics:
    """Per-class report plus accuracy and the macro and support-weighted averages.

    Undefined entries (no predictions, or no test rows) are ``None``. Averages
    range over the classes with test support and count an undefined precision as 0.
    """
    per_class: dict[int, ClassReport]
    accuracy: float
    macro: ClassReport
    weighted: ClassReport

    def to_json(self) -> dict:
        return {
            "per_class": {
                AutLabel.from_code(code).text: dataclasses.asdict(report)
                for code, report in sorted(self.per_class.items())
            },
            "accuracy": self.accuracy,
            "macro avg": dataclasses.asdict(self.macro),
            "weighted avg": dataclasses.asdict(self.weighted),
        }

    def format_table(self) -> str:
        def cell(value: float | None) -> str:
            return "null" if value is None else f"{value:.4f}"

        lines = [f"{'':>12} {'precision':>10} {'recall':>10} {'f1-score':>10} {'support':>10}"]
        for code, report in sorted(self.per_class.items()):
            lines.append(f"{AutLabel.from_code(code).text:>12} {cell(report.precision):>10} "
                         f"{cell(report.recall):>10} {cell(report.f1):>10} {report.support:>10}")
        lines.append("")
        lines.append(f"{'accuracy':>12} {'':>10} {'':>10} {cell(self.accuracy):>10} {self.weighted.support:>10}")
        for name, report in (("macro avg", self.macro), ("weighted avg", self.weighted)):
            lines.append(f"{name:>12} {cell(report.precision):>10} {cell(report.recall):>10} "
                         f"{cell(report.f1):>10} {report.support:>10}")
        return "\n".join(lines)


def metrics_from_predictions(y_true: np.ndarray, y_pred: np.ndarray,
                             classes: typing.Iterable[int] | None = None) -> ClassMetrics:
    y_true, y_pred = np.asarray(y_true), np.asarray(y_pred)
    if y_true.shape[0] == 0:
        raise PreconditionError("Cannot evaluate on an empty test set.")
    codes = sorted(set(np.unique(y_true).tolist()) | set(np.unique(y_pred).tolist())
                   | set(classes or ()))

    per_class = {}
    for code in codes:
        true_positive = int(np.sum((y_true == code) & (y_pred == code)))
        predicted = int(np.sum(y_pred == code))
        support = int(np.sum(y_true == code))
        precision = true_positive / predicted if predicted else None
        recall = true_positive / support if support else None
        if precision is None or recall is None:
            f1 = None
        elif precision + recall == 0:
            f1 = 0.0
        else:
            f1 = 2 * precision * recall / (precision + recall)
        per_class[code] = ClassReport(precision, recall, f1, support)

    present = [report for report in per_class.values() if report.support]
    total = sum(report.support for report in present)

    def average(attribute: str, weighted: bool) -> float:
        values = [(getattr(r, attribute) or 0.0, r.support if weighted else 1) for r in present]
        return sum(v * k for v, k in values) / sum(k for _, k in values)

    return ClassMetrics(
        per_class=per_class,
        accuracy=float(np.mean(y_true == y_pred)),
        macro=ClassReport(average("precision", False), average("recall", False), average("f1", False), total),
        weighted=ClassReport(average("precision", True), average("recall", True), average("f1", True), total),
    )


def evaluate(model: RandomForest | MajorityClassifier, test: FeatureMatrix,
             classes: typing.Iterable[int] | None = None) -> ClassMetrics:
    return metrics_from_predictions(test.labels, model.predict(test.features), classes)


@dataclasses.dataclass
class ExperimentRun:
    name: str
    mode: str
    weighted: bool
    metrics: ClassMetrics
    feature_importances: list[float] | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "features": self.mode,
            "weighted": self.weighted,
            "metrics": self.metrics.to_json(),
            "feature_importances": self.feature_importances,
        }


class ForestExperiment:
    """Trains forests on coefficient and invariant features over one shared stratified split."""

    def __init__(self, records: typing.Sequence[DatasetRecord], tree_count: int = 100, seed: int = 42,
                 test_fraction: float = 0.10, workers: int = 1):
        if not records:
            raise PreconditionError("The experiment needs at least one record.")
        self.records = records
        self.tree_count = tree_count
        self.seed = seed
        self.test_fraction = test_fraction
        self.workers = workers
        self._logger = logging.getLogger(self.__class__.__name__)

        # the split depends only on the labels, so both feature modes see the same rows
        labels = np.array([record.aut_label.code for record in records], dtype=np.int64)
        self.train_rows, self.test_rows = stratified_indices(labels, test_fraction, seed)
        self.classes = sorted(np.unique(labels).tolist())
        self._logger.info(f"Split {labels.shape[0]:_} records into {self.train_rows.shape[0]:_} train "
                          f"and {self.test_rows.shape[0]:_} test rows.")

    @classmethod
    def from_config(cls, records: typing.Sequence[DatasetRecord], config: Config) -> "ForestExperiment":
        return cls(records, config.forest_trees, config.forest_seed, config.forest_test_fraction,
                   config.forest_workers)

    def matrices(self, mode: str) -> tuple[FeatureMatrix, FeatureMatrix]:
        matrix = featurize(self.records, mode)
        return matrix.subset(self.train_rows), matrix.subset(self.test_rows)

    def class_distribution(self) -> dict[str, tuple[int, float]]:
        labels = [record.aut_label.code for record in self.records]
        return {AutLabel.from_code(code).text: share for code, share in class_distribution(labels).items()}

    def run(self, mode: str, weighted: bool) -> ExperimentRun:
        train, test = self.matrices(mode)
        weights = class_weights(train.labels) if weighted else None
        forest = train_forest(train, self.tree_count, self.seed, weights, self.workers)
        name = f"{mode}{' weighted' if weighted else ''}"
        self._logger.info(f"Evaluating {name} forest on {test.rows:_} rows.")
        return ExperimentRun(name, mode, weighted, evaluate(forest, test, self.classes),
                             forest.feature_importances.tolist())

    def baseline(self) -> ExperimentRun:
        train, test = self.matrices("coeffs")
        model = MajorityClassifier().fit(train)
        return ExperimentRun("majority baseline", "none", False, evaluate(model, test, self.classes))

    def run_all(self) -> list[ExperimentRun]:
        runs = [self.baseline()]
        for mode in FEATURE_MODES:
            for weighted in (False, True):
                runs.append(self.run(mode, weighted))
        return runs

    def report(self, runs: list[ExperimentRun]) -> dict:
        return {
            "schema": 1,
            "trees": self.tree_count,
            "seed": self.seed,
            "test_fraction": self.test_fraction,
            "class_distribution": {label: {"count": n, "share": share}
                                   for label, (n, share) in self.class_distribution().items()},
            "runs": [run.to_json() for run in runs],
        }

    def write_report(self, runs: list[ExperimentRun], path: str):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.report(runs), f, indent=2)

    @staticmethod
    def format_text(runs: list[ExperimentRun]) -> str:
        return "\n\n".join(f"== {run.name} ==\n{run.metrics.format_table()}" for run in runs)
