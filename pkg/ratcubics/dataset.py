"""Height-bounded database of rational cubics: enumeration, records, persistence and statistics."""
from __future__ import annotations

import collections
import concurrent.futures
import csv
import dataclasses
import itertools
import json
import logging
import math
import os
import shutil
import typing
from fractions import Fraction

from . import converters, explicit
from .aut import AutLabel, classify_invariants
from .forms import RationalMap3
from .invariants import (AbsoluteInvariants, WeightedPoint, XiTuple, absolute_invariants, coordinate_height,
                         i6_explicit, j6_explicit, normalize_weighted, weighted_height, xi_explicit)
from .ratcubics_types import Config, PreconditionError, RecordFormatError

__all__ = [
    "EnumerationConfig",
    "DatasetRecord",
    "DatasetStats",
    "EnumerationResult",
    "Enumerator",
    "blocks",
    "iter_block",
    "enumerate_maps",
    "naive_height",
    "build_record",
    "write_jsonl",
    "read_jsonl",
    "iter_jsonl",
    "write_csv",
    "read_csv",
    "height_strata",
    "stats",
]


@dataclasses.dataclass(frozen=True)
class EnumerationConfig:
    height_bound: int
    dedupe_antipodal: bool = True
    worker_count: int = 1
    output_path: str = "out/maps.jsonl"
    log_mismatches: bool = False

    def __post_init__(self):
        if self.height_bound < 1:
            raise PreconditionError(f"Height bound must be at least 1, got {self.height_bound}.")
        if self.worker_count < 1:
            raise PreconditionError(f"Worker count must be at least 1, got {self.worker_count}.")

    @classmethod
    def from_config(cls, config: Config, output_path: str | None = None) -> "EnumerationConfig":
        output_dir = os.environ.get("RATCUBICS_OUT_DIR", config.enumeration_output_dir)
        return cls(
            height_bound=config.enumeration_height,
            dedupe_antipodal=config.enumeration_dedupe_antipodal,
            worker_count=config.enumeration_workers,
            output_path=output_path or os.path.join(output_dir, f"maps_h{config.enumeration_height}.jsonl"),
            log_mismatches=config.checks_log_locus_mismatches,
        )


@dataclasses.dataclass(frozen=True)
class DatasetRecord:
    """One database row."""
    coeffs: tuple[int, ...]
    naive_height: int
    xi_raw: XiTuple
    xi_normalized: WeightedPoint
    weighted_height: float
    weighted_height_normalized: float
    i6: Fraction
    j6: Fraction
    aut_label: AutLabel
    abs_invariants: AbsoluteInvariants

    def to_json(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "h": self.naive_height,
            "xi": converters.xi_to_json(self.xi_raw),
            "xi_norm": converters.point_to_json(self.xi_normalized),
            "wheight": self.weighted_height,
            "wheight_norm": self.weighted_height_normalized,
            "i6": converters.rational_to_json(self.i6),
            "j6": converters.rational_to_json(self.j6),
            "aut": converters.label_to_json(self.aut_label),
            "aut_code": self.aut_label.code,
            "abs": converters.abs_to_json(self.abs_invariants),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DatasetRecord":
        if not isinstance(obj, dict):
            raise RecordFormatError(f"Expected a JSON object, got {type(obj).__name__}.")

        def field(name: str, parse: typing.Callable[[typing.Any], typing.Any]):
            if name not in obj:
                raise RecordFormatError(f"Missing field {name!r}.")
            try:
                return parse(obj[name])
            except (ValueError, TypeError, ZeroDivisionError) as e:
                raise RecordFormatError(f"Field {name!r}: {e}") from e

        label = field("aut", converters.label_from_json)
        if "aut_code" in obj and obj["aut_code"] != label.code:
            raise RecordFormatError(f"Field 'aut_code': {obj['aut_code']!r} does not match label {label.text!r}.")

        return cls(
            coeffs=field("coeffs", _parse_coeffs),
            naive_height=field("h", _parse_int),
            xi_raw=field("xi", converters.xi_from_json),
            xi_normalized=field("xi_norm", converters.point_from_json),
            weighted_height=field("wheight", _parse_float),
            weighted_height_normalized=field("wheight_norm", _parse_float),
            i6=field("i6", converters.rational_from_json),
            j6=field("j6", converters.rational_from_json),
            aut_label=label,
            abs_invariants=field("abs", converters.abs_from_json),
        )

    def to_row(self) -> list:
        return [
            *self.coeffs,
            self.naive_height,
            *converters.xi_to_json(self.xi_raw),
            *self.xi_normalized.coords,
            repr(self.weighted_height),
            repr(self.weighted_height_normalized),
            converters.rational_to_json(self.i6),
            converters.rational_to_json(self.j6),
            self.aut_label.text,
            self.aut_label.code,
            *converters.abs_to_json(self.abs_invariants),
        ]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "DatasetRecord":
        try:
            return cls.from_json({
                "coeffs": [int(row[f"c{i}"]) for i in range(8)],
                "h": int(row["h"]),
                "xi": [row[f"xi{i}"] for i in range(6)],
                "xi_norm": [int(row[f"xi_norm{i}"]) for i in range(6)],
                "wheight": float(row["wheight"]),
                "wheight_norm": float(row["wheight_norm"]),
                "i6": row["i6"],
                "j6": row["j6"],
                "aut": row["aut"],
                "aut_code": int(row["aut_code"]),
                "abs": [row[f"i{i}"] for i in range(1, 6)],
            })
        except KeyError as e:
            raise RecordFormatError(f"Missing column {e.args[0]!r}.") from e
        except ValueError as e:
            raise RecordFormatError(str(e)) from e


CSV_COLUMNS = (
    [f"c{i}" for i in range(8)] + ["h"] + [f"xi{i}" for i in range(6)] + [f"xi_norm{i}" for i in range(6)]
    + ["wheight", "wheight_norm", "i6", "j6", "aut", "aut_code"] + [f"i{i}" for i in range(1, 6)]
)


def _parse_coeffs(value) -> tuple[int, ...]:
    if not isinstance(value, list) or len(value) != 8 or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ValueError(f"Expected eight integers, got {value!r}.")
    return tuple(value)


def _parse_int(value) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"Expected an integer, got {value!r}.")
    return value


def _parse_float(value) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"Expected a number, got {value!r}.")
    return float(value)


def naive_height(coeffs: typing.Sequence[int]) -> int:
    return max(abs(c) for c in coeffs)


def _first_nonzero_positive(coeffs: typing.Sequence[int]) -> bool:
    for c in coeffs:
        if c:
            return c > 0
    return False


def blocks(height: int, dedupe_antipodal: bool) -> list[tuple[int, int]]:
    """The (c0, c1) prefixes in canonical order; antipodal deduplication drops negative leads."""
    prefixes = itertools.product(range(-height, height + 1), repeat=2)
    if not dedupe_antipodal:
        return list(prefixes)
    return [(c0, c1) for c0, c1 in prefixes if c0 > 0 or (c0 == 0 and c1 >= 0)]


def iter_block(height: int, prefix: tuple[int, int],
               dedupe_antipodal: bool) -> typing.Iterator[tuple[int, ...]]:
    """Valid primitive tuples with the given prefix, in lexicographic order."""
    values = range(-height, height + 1)
    for rest in itertools.product(values, repeat=6):
        coeffs = prefix + rest
        if dedupe_antipodal and not _first_nonzero_positive(coeffs):
            continue
        if math.gcd(*coeffs) != 1:
            continue
        if explicit.i6_polynomial(coeffs) == 0:
            continue
        yield coeffs


def enumerate_maps(config: EnumerationConfig) -> typing.Iterator[tuple[int, ...]]:
    """Every valid primitive integer tuple of naive height at most ``config.height_bound``."""
    for prefix in blocks(config.height_bound, config.dedupe_antipodal):
        yield from iter_block(config.height_bound, prefix, config.dedupe_antipodal)


def build_record(coeffs: typing.Sequence[int], log_mismatches: bool = False) -> DatasetRecord:
    if len(coeffs) != 8 or not all(isinstance(c, int) and not isinstance(c, bool) for c in coeffs):
        raise PreconditionError(f"A database record needs eight integers, got {coeffs!r}.")
    if math.gcd(*coeffs) != 1:
        raise PreconditionError(f"Coefficients {tuple(coeffs)} are not primitive.")

    phi = RationalMap3(tuple(coeffs))
    i6 = i6_explicit(phi)
    if i6 == 0:
        raise PreconditionError(f"not a degree-3 rational map (I6 = 0): {tuple(coeffs)}")

    xi = xi_explicit(phi)
    point = normalize_weighted(xi)
    return DatasetRecord(
        coeffs=tuple(coeffs),
        naive_height=naive_height(coeffs),
        xi_raw=xi,
        xi_normalized=point,
        weighted_height=coordinate_height(xi),
        weighted_height_normalized=weighted_height(point),
        i6=i6,
        j6=j6_explicit(phi),
        aut_label=classify_invariants(xi, i6, log_mismatches),
        abs_invariants=absolute_invariants(xi, i6),
    )


def _dumps(record: DatasetRecord) -> str:
    return json.dumps(record.to_json(), separators=(",", ":"))


def write_jsonl(records: typing.Iterable[DatasetRecord], path: str) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(_dumps(record) + "\n")
            count += 1
    return count


def iter_jsonl(path: str) -> typing.Iterator[DatasetRecord]:
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield DatasetRecord.from_json(json.loads(line))
            except json.JSONDecodeError as e:
                raise RecordFormatError(f"{path}:{line_number}: invalid JSON ({e.msg}).") from e
            except RecordFormatError as e:
                raise RecordFormatError(f"{path}:{line_number}: {e}") from e


def read_jsonl(path: str) -> list[DatasetRecord]:
    return list(iter_jsonl(path))


def write_csv(records: typing.Iterable[DatasetRecord], path: str) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow(record.to_row())
            count += 1
    return count


def read_csv(path: str) -> list[DatasetRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as f:
        for line_number, row in enumerate(csv.DictReader(f), start=2):
            try:
                records.append(DatasetRecord.from_row(row))
            except RecordFormatError as e:
                raise RecordFormatError(f"{path}:{line_number}: {e}") from e
    return records


@dataclasses.dataclass
class DatasetStats:
    """Label counts per exact naive height."""
    strata: dict[int, collections.Counter] = dataclasses.field(default_factory=dict)

    def add(self, height: int, label: AutLabel, count: int = 1):
        self.strata.setdefault(height, collections.Counter())[label] += count

    def merge(self, other: "DatasetStats"):
        for height, counter in other.strata.items():
            self.strata.setdefault(height, collections.Counter()).update(counter)

    def row(self, height: int) -> tuple[int, ...]:
        counter = self.strata.get(height, collections.Counter())
        return tuple(counter[label] for label in AutLabel.table_order())

    def cumulative_row(self, height: int) -> tuple[int, ...]:
        rows = [self.row(h) for h in self.strata if h <= height]
        return tuple(sum(column) for column in zip(*rows)) if rows else (0,) * len(AutLabel)

    def total(self, height: int | None = None) -> int:
        if height is None:
            return sum(sum(counter.values()) for counter in self.strata.values())
        return sum(self.row(height))

    def by_label(self) -> dict[AutLabel, int]:
        return dict(zip(AutLabel.table_order(), self.cumulative_row(max(self.strata, default=0))))

    def to_json(self) -> dict:
        return {
            "columns": [label.locus for label in AutLabel.table_order()],
            "labels": [label.text for label in AutLabel.table_order()],
            "strata": {str(h): list(self.row(h)) for h in sorted(self.strata)},
            "cumulative": {str(h): list(self.cumulative_row(h)) for h in sorted(self.strata)},
            "total": self.total(),
        }

    def format_table(self) -> str:
        """Rows per exact height and cumulative, columns L0..L7 and the total."""
        header = ["h"] + [label.locus for label in AutLabel.table_order()] + ["Total"]
        lines = []
        for h in sorted(self.strata):
            row = self.row(h)
            lines.append([str(h)] + [str(v) for v in row] + [str(sum(row))])
        for h in sorted(self.strata):
            row = self.cumulative_row(h)
            lines.append([f"<={h}"] + [str(v) for v in row] + [str(sum(row))])

        widths = [max(len(header[i]), *(len(line[i]) for line in lines)) if lines else len(header[i])
                  for i in range(len(header))]
        out = [" ".join(h.rjust(w) for h, w in zip(header, widths))]
        out.extend(" ".join(v.rjust(w) for v, w in zip(line, widths)) for line in lines)
        return "\n".join(out)


def height_strata(records: typing.Iterable[DatasetRecord]) -> dict[int, list[DatasetRecord]]:
    strata: dict[int, list[DatasetRecord]] = {}
    for record in records:
        strata.setdefault(record.naive_height, []).append(record)
    return dict(sorted(strata.items()))


def stats(records: typing.Iterable[DatasetRecord]) -> DatasetStats:
    out = DatasetStats()
    for record in records:
        out.add(record.naive_height, record.aut_label)
    return out


@dataclasses.dataclass
class EnumerationResult:
    output_path: str
    total: int
    stats: DatasetStats


def _write_block(height: int, prefix: tuple[int, int], dedupe_antipodal: bool, path: str,
                 log_mismatches: bool) -> DatasetStats:
    block_stats = DatasetStats()
    with open(path, "w", encoding="utf-8") as f:
        for coeffs in iter_block(height, prefix, dedupe_antipodal):
            record = build_record(coeffs, log_mismatches)
            f.write(_dumps(record) + "\n")
            block_stats.add(record.naive_height, record.aut_label)
    return block_stats


class Enumerator:
    """Builds the database by writing every (c0, c1) block to a private file and merging them in order."""

    def __init__(self, config: EnumerationConfig):
        self.config = config
        self._logger = logging.getLogger(self.__class__.__name__)

    def _part_path(self, parts_dir: str, index: int) -> str:
        return os.path.join(parts_dir, f"block_{index:05d}.jsonl")

    def run(self) -> EnumerationResult:
        config = self.config
        prefixes = blocks(config.height_bound, config.dedupe_antipodal)
        output_dir = os.path.dirname(config.output_path) or "."
        os.makedirs(output_dir, exist_ok=True)
        parts_dir = config.output_path + ".parts"
        os.makedirs(parts_dir, exist_ok=True)

        self._logger.info(f"Enumerating height <= {config.height_bound} over {len(prefixes)} blocks "
                          f"with {config.worker_count} worker(s). "
                          f"(dedupe-antipodal: {str(config.dedupe_antipodal).lower()})")

        jobs = [
            (config.height_bound, prefix, config.dedupe_antipodal, self._part_path(parts_dir, i),
             config.log_mismatches)
            for i, prefix in enumerate(prefixes)
        ]
        totals = DatasetStats()

        if config.worker_count == 1:
            results = (_write_block(*job) for job in jobs)
            for prefix, block_stats in zip(prefixes, results):
                self._log_block(prefix, block_stats)
                totals.merge(block_stats)
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=config.worker_count) as executor:
                futures = [executor.submit(_write_block, *job) for job in jobs]
                for prefix, future in zip(prefixes, futures):
                    block_stats = future.result()
                    self._log_block(prefix, block_stats)
                    totals.merge(block_stats)

        self._merge(parts_dir, len(prefixes))
        total = totals.total()
        self._logger.info(f"Wrote {total:_} records to {config.output_path!r}.")
        return EnumerationResult(config.output_path, total, totals)

    def _log_block(self, prefix: tuple[int, int], block_stats: DatasetStats):
        self._logger.info(f"Block {prefix}: {block_stats.total()} maps.")

    def _merge(self, parts_dir: str, count: int):
        with open(self.config.output_path, "wb") as out:
            for i in range(count):
                with open(self._part_path(parts_dir, i), "rb") as part:
                    shutil.copyfileobj(part, out)
        shutil.rmtree(parts_dir)
