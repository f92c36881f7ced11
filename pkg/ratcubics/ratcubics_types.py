from __future__ import annotations

import configparser
import dataclasses

__all__ = [
    "Config",
    "RatCubicsError",
    "PreconditionError",
    "NotARationalMapError",
    "DegenerateParameterError",
    "RecordFormatError",
    "EmptyClassError",
]


class RatCubicsError(Exception): ...


class PreconditionError(RatCubicsError, ValueError): ...


class NotARationalMapError(PreconditionError):
    def __init__(self, message: str = "not a degree-3 rational map (I6 = 0)"):
        super().__init__(message)


class DegenerateParameterError(PreconditionError): ...


class RecordFormatError(RatCubicsError): ...


class EmptyClassError(PreconditionError): ...


@dataclasses.dataclass
class Config:
    """Configuration for enumeration runs and the forest experiment."""
    enumeration_height: int
    enumeration_dedupe_antipodal: bool
    enumeration_workers: int
    enumeration_output_dir: str

    forest_trees: int
    forest_seed: int
    forest_test_fraction: float
    forest_weighted: bool
    forest_features: str
    forest_workers: int

    checks_log_locus_mismatches: bool

    @classmethod
    def from_file(cls, file) -> "Config":
        cp = configparser.ConfigParser()
        cp.read_file(file)

        return cls(
            enumeration_height=cp.getint("enumeration", "height"),
            enumeration_dedupe_antipodal=cp.getboolean("enumeration", "dedupe-antipodal"),
            enumeration_workers=cp.getint("enumeration", "workers"),
            enumeration_output_dir=cp.get("enumeration", "output-dir"),

            forest_trees=cp.getint("forest", "trees"),
            forest_seed=cp.getint("forest", "seed"),
            forest_test_fraction=cp.getfloat("forest", "test-fraction"),
            forest_weighted=cp.getboolean("forest", "weighted"),
            forest_features=cp.get("forest", "features"),
            forest_workers=cp.getint("forest", "workers"),

            checks_log_locus_mismatches=cp.getboolean("checks", "log-locus-mismatches"),
        )

    @classmethod
    def from_filepath(cls, filepath: str) -> "Config":
        with open(filepath) as f:
            return cls.from_file(f)

    @classmethod
    def default(cls) -> "Config":
        return cls(
            enumeration_height=1,
            enumeration_dedupe_antipodal=True,
            enumeration_workers=1,
            enumeration_output_dir="out",
            forest_trees=100,
            forest_seed=42,
            forest_test_fraction=0.10,
            forest_weighted=False,
            forest_features="invariants",
            forest_workers=1,
            checks_log_locus_mismatches=False,
        )

    @staticmethod
    def option_name(field_name: str) -> str:
        """``forest_test_fraction`` is set as ``forest.test-fraction``."""
        section, key = field_name.split("_", 1)
        return f"{section}.{key.replace('_', '-')}"

    @classmethod
    def option_fields(cls) -> dict[str, dataclasses.Field]:
        return {cls.option_name(field.name): field for field in dataclasses.fields(cls)}

    def set_option(self, option: str, text: str):
        """Assign one ``section.key`` option from its ini text; unknown options raise ``KeyError``."""
        field = self.option_fields()[option]
        setattr(self, field.name, _parse_option(text, field.type))

    def export_options(self) -> dict[str, str]:
        return {option: _format_option(getattr(self, field.name)) for option, field in self.option_fields().items()}


def _parse_option(text: str, type_name: str) -> bool | float | int | str:
    # field types are strings under postponed annotations
    if type_name == "bool":
        if text.lower() not in ("true", "false"):
            raise ValueError(f"Expected true or false, got {text!r}.")
        return text.lower() == "true"
    if type_name == "int":
        return int(text)
    if type_name == "float":
        return float(text)
    return text


def _format_option(value: bool | float | int | str) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return f"{value:g}" if isinstance(value, float) else str(value)
