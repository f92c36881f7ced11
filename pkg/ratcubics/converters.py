"""Functions that convert between the JSON wire form and the internal types.

Exact rationals travel as ``"p/q"`` strings (``"p"`` for integers) so that no
value ever passes through a float.
"""
from __future__ import annotations

import typing
from fractions import Fraction

from .aut import AutLabel
from .forms import BinaryForm, MobiusMap, RationalMap3
from .invariants import AbsoluteInvariants, WeightedPoint, XiTuple

__all__ = [
    "rational_to_json",
    "rational_from_json",
    "rationals_to_json",
    "rationals_from_json",
    "form_to_json",
    "form_from_json",
    "map_to_json",
    "map_from_json",
    "mobius_to_json",
    "mobius_from_json",
    "xi_to_json",
    "xi_from_json",
    "point_to_json",
    "point_from_json",
    "abs_to_json",
    "abs_from_json",
    "label_to_json",
    "label_from_json",
    "parse_coefficients",
]


def rational_to_json(value: Fraction | int) -> str:
    return str(Fraction(value))


def rational_from_json(value: str | int) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ValueError(f"Expected a rational string, got {value!r}.")
    if isinstance(value, str) and ("." in value or "e" in value.lower()):
        raise ValueError(f"Expected an exact rational, got {value!r}.")
    return Fraction(value)


def rationals_to_json(values: typing.Iterable[Fraction | int]) -> list[str]:
    return [rational_to_json(v) for v in values]


def rationals_from_json(values: typing.Sequence, length: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise ValueError(f"Expected a list, got {values!r}.")
    if length is not None and len(values) != length:
        raise ValueError(f"Expected {length} values, got {len(values)}.")
    return tuple(rational_from_json(v) for v in values)


def form_to_json(form: BinaryForm) -> list[str]:
    return rationals_to_json(form.coeffs)


def form_from_json(values: list) -> BinaryForm:
    return BinaryForm(rationals_from_json(values))


def map_to_json(phi: RationalMap3) -> list[str]:
    return rationals_to_json(phi.c)


def map_from_json(values: list) -> RationalMap3:
    return RationalMap3(rationals_from_json(values, 8))


def mobius_to_json(sigma: MobiusMap) -> list[str]:
    return rationals_to_json(sigma.as_tuple())


def mobius_from_json(values: list) -> MobiusMap:
    return MobiusMap(*rationals_from_json(values, 4))


def xi_to_json(xi: XiTuple) -> list[str]:
    return rationals_to_json(xi)


def xi_from_json(values: list) -> XiTuple:
    return XiTuple(rationals_from_json(values, 6))


def point_to_json(point: WeightedPoint) -> list[int]:
    return list(point.coords)


def point_from_json(values: list) -> WeightedPoint:
    if not isinstance(values, list) or len(values) != 6 or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise ValueError(f"Expected six integers, got {values!r}.")
    return WeightedPoint(tuple(values))


def abs_to_json(invariants: AbsoluteInvariants) -> list[str]:
    return rationals_to_json(invariants.as_tuple())


def abs_from_json(values: list) -> AbsoluteInvariants:
    return AbsoluteInvariants(*rationals_from_json(values, 5))


def label_to_json(label: AutLabel) -> str:
    return label.text


def label_from_json(value: str) -> AutLabel:
    return AutLabel.from_text(value)


def parse_coefficients(text: str, order: typing.Literal["descending", "ascending"] = "descending") -> RationalMap3:
    """Parse ``"c0,c1,...,c7"`` from the command line into an unvalidated map."""
    parts = [part for part in text.replace(" ", "").split(",") if part]
    if len(parts) != 8:
        raise ValueError(f"Expected 8 comma-separated coefficients, got {len(parts)}.")
    values = tuple(rational_from_json(part) for part in parts)
    if order == "ascending":
        return RationalMap3.from_ascending(values)
    return RationalMap3(values)
