"""Automorphism loci of rational cubics and the classifier built on them.

The loci are tested in the moduli space, i.e. on the weighted point
(xi_0, ..., xi_5) together with I6, so the label of a map does not depend on the
representative of its conjugacy class.
"""
from __future__ import annotations

import dataclasses
import enum
import logging
import typing
from fractions import Fraction

from .forms import RationalMap3, RationalLike, to_rational
from .invariants import XiTuple, xi_explicit
from .ratcubics_types import DegenerateParameterError, NotARationalMapError, PreconditionError

__all__ = [
    "AutLabel",
    "LocusResiduals",
    "family_representative",
    "locus_residuals",
    "printed_l1_residual",
    "printed_l3_residual",
    "printed_l5_residual",
    "c3_family_parameter",
    "c3_family_match",
    "classify",
    "classify_invariants",
    "l1_parameters",
    "l2_parameters",
]

_logger = logging.getLogger("AutClassifier")


class AutLabel(enum.Enum):
    """Automorphism group of a rational cubic, with its database text, numeric code, locus and group order."""
    E = ("{e}", 6, "L0", 1)
    C2_1 = ("C2-1", 1, "L1", 2)
    C2_2 = ("C2-2", 2, "L2", 2)
    C3 = ("C3", 7, "L3", 3)
    V4_1 = ("V4-1", 4, "L4", 4)
    V4_2 = ("V4-2", 5, "L5", 4)
    A4 = ("A4", 0, "L6", 12)
    D4 = ("D4", 3, "L7", 8)

    @property
    def text(self) -> str:
        return self.value[0]

    @property
    def code(self) -> int:
        return self.value[1]

    @property
    def locus(self) -> str:
        return self.value[2]

    @property
    def order(self) -> int:
        return self.value[3]

    @classmethod
    def from_text(cls, text: str) -> "AutLabel":
        for label in cls:
            if label.text == text or label.name == text or label.locus == text:
                return label
        raise ValueError(f"Unknown automorphism label {text!r}.")

    @classmethod
    def from_code(cls, code: int) -> "AutLabel":
        for label in cls:
            if label.code == code:
                return label
        raise ValueError(f"Unknown automorphism code {code!r}.")

    @classmethod
    def table_order(cls) -> list["AutLabel"]:
        """Labels ordered by locus L0..L7."""
        return sorted(cls, key=lambda label: label.locus)

    def __str__(self):
        return self.text


def _parameters(label: AutLabel, params: tuple, count: int) -> list[Fraction]:
    if len(params) != count:
        raise PreconditionError(f"Family {label.locus} takes {count} parameter(s), got {len(params)}.")
    return [to_rational(p) for p in params]


def family_representative(label: AutLabel, *params: RationalLike) -> RationalMap3:
    """The normal form of the family of maps whose automorphism group contains ``label``."""
    if label == AutLabel.E:
        raise PreconditionError("The trivial group has no normal-form family.")

    if label == AutLabel.C2_1:
        t, s = _parameters(label, params, 2)
        if t * s == 1:
            raise DegenerateParameterError("L1 requires t*s != 1 (I6 = -(t*s - 1)^2)")
        c = (1, 0, t, 0, 0, s, 0, 1)
    elif label == AutLabel.C2_2:
        t, s = _parameters(label, params, 2)
        if t * s == 1:
            raise DegenerateParameterError("L2 requires t*s != 1 (I6 = (t*s - 1)^2)")
        c = (0, s, 0, 1, 1, 0, t, 0)
    elif label == AutLabel.C3:
        t, = _parameters(label, params, 1)
        if t == 0:
            raise DegenerateParameterError("L3 requires t != 0 (I6 = -t^3)")
        c = (1, 0, 0, -1, 0, t, 0, 0)
    elif label == AutLabel.V4_1:
        t, = _parameters(label, params, 1)
        if t ** 2 == 1:
            raise DegenerateParameterError("L4 requires t^2 != 1 (I6 = (t^2 - 1)^2)")
        c = (0, t, 0, 1, 1, 0, t, 0)
    elif label == AutLabel.V4_2:
        s, = _parameters(label, params, 1)
        if s ** 2 == 1:
            raise DegenerateParameterError("L5 requires s^2 != 1 (I6 = -(s^2 - 1)^2)")
        c = (0, s, 0, -1, 1, 0, -s, 0)
    elif label == AutLabel.A4:
        _parameters(label, params, 0)
        c = (1, 0, 0, -3, 0, -3, 0, 0)
    else:
        _parameters(label, params, 0)
        c = (0, 0, 0, 1, 1, 0, 0, 0)

    return RationalMap3.validated(c)


@dataclasses.dataclass(frozen=True)
class LocusResiduals:
    """Values of the locus polynomials at one moduli point.

    A locus contains the point iff every entry of its residual vector vanishes.
    The printed single-equation forms of L1, L3 and L5 are carried separately;
    they are reported but do not decide membership.
    """
    residuals: typing.Mapping[AutLabel, tuple[Fraction, ...]]
    printed_l1: Fraction
    printed_l3: Fraction
    printed_l5: Fraction

    # weighted degree of every residual entry, in the order of ``residuals``
    degrees: typing.ClassVar[dict[AutLabel, tuple[int, ...]]] = {
        AutLabel.C2_1: (3, 3),
        AutLabel.C2_2: (6, 6, 7, 8),
        AutLabel.C3: (2, 2, 4),
        AutLabel.V4_1: (4, 3, 3, 6),
        AutLabel.V4_2: (2, 3, 4, 6),
        AutLabel.A4: (2, 2, 3, 4, 6),
        AutLabel.D4: (2, 3, 3, 4, 6),
    }
    # the printed L1 equation mixes weights 24, 26 and 28
    printed_degrees: typing.ClassVar[dict[str, int]] = {"l3": 42, "l5": 18}

    def vanishes(self, label: AutLabel) -> bool:
        return not any(self.residuals[label])


def printed_l1_residual(xi: XiTuple) -> Fraction:
    """The published equation for L1.

    It is not weighted-homogeneous: it vanishes on the normal forms
    ``(z^3 + t z) / (s z^2 + 1)`` themselves but not on their conjugates.
    """
    x0, x1, x4, x5 = xi[0], xi[1], xi[4], xi[5]
    return (
        x0 ** 6 * x1 ** 6
        - 54 * x0 ** 4 * x1 ** 4 * x4 ** 2
        - Fraction(27, 4) * x0 ** 4 * x1 ** 3 * x5 ** 2
        - 27 * x0 ** 3 * x1 ** 4 * x5 ** 2
        - 108 * x0 ** 3 * x1 ** 3 * x4 ** 3
        + 729 * x0 ** 2 * x1 ** 2 * x4 ** 4
        + Fraction(729, 4) * x0 ** 2 * x1 * x4 ** 2 * x5 ** 2
        + Fraction(729, 64) * x0 ** 2 * x5 ** 4
        + 729 * x0 * x1 ** 2 * x4 ** 2 * x5 ** 2
        + 2916 * x0 * x1 * x4 ** 5
        + Fraction(243, 8) * x0 * x1 * x5 ** 4
        + Fraction(729, 2) * x0 * x4 ** 3 * x5 ** 2
        + Fraction(729, 4) * x1 ** 2 * x5 ** 4
        + 1458 * x1 * x4 ** 3 * x5 ** 2
        + 2916 * x4 ** 6
        + Fraction(729, 2) * x4 * x5 ** 4
    )


def printed_l3_residual(xi: XiTuple, i6: RationalLike) -> Fraction:
    """The published degree-42 equation for L3; it does not vanish on the C3 family."""
    x0, x4, i = xi[0], xi[4], to_rational(i6)
    return (
        i ** 4 * x0 ** 9
        - 2834352 * i ** 3 * x0 ** 6 * x4 ** 3
        + 24794911296 * x0 ** 3 * x4 ** 9
        + 3779136 * i ** 5 * x0 ** 6
        + 892616806656 * i ** 2 * x0 ** 3 * x4 ** 6
        + 7140934453248 * i ** 4 * x0 ** 3 * x4 ** 3
        + 4760622968832 * i ** 6 * x0 ** 3
        + 1999004627104432128 * i ** 7
    )


def printed_l5_residual(xi: XiTuple, i6: RationalLike) -> Fraction:
    """The published degree-18 equation for L5; it does not vanish on the whole V4 family."""
    x1, x2, i = xi[1], xi[2], to_rational(i6)
    return (
        72 * x1 ** 6 * x2 ** 2
        - 16 * x1 ** 9
        + 96 * x1 ** 6 * i
        - 81 * x1 ** 3 * x2 ** 4
        - 216 * x1 ** 3 * x2 ** 2 * i
        - 144 * x1 ** 3 * i ** 2
        + 36 * x2 ** 4 * i
        + 96 * x2 ** 2 * i ** 2
        + 64 * i ** 3
    )


def _c2_1_residuals(xi: XiTuple, i6: Fraction) -> typing.Iterator[Fraction]:
    # the odd-weight invariants; this surface is the closure of the L1 family
    yield xi[2]
    yield xi[3]


def _c2_2_residuals(xi: XiTuple, i6: Fraction) -> typing.Iterator[Fraction]:
    x0, x1, x2, x3, x4, x5 = xi
    yield x5
    yield x0 ** 2 * x1 + 3 * x0 * x4 - 3 * x3 ** 2
    yield x0 ** 2 * x2 + Fraction(1, 2) * x0 * x1 * x3 - 3 * x3 * x4
    yield x0 * x1 * x4 - x0 * x2 * x3 - Fraction(1, 2) * x1 * x3 ** 2 + 3 * x4 ** 2


def _c3_residuals(xi: XiTuple, i6: Fraction) -> typing.Iterator[Fraction]:
    # on this surface the syzygy leaves xi_5^2 = -xi_2 xi_3^3 / 6, the closure of the L3 family
    yield xi[0]
    yield xi[1]
    yield xi[4]


def _v4_1_residuals(xi: XiTuple, i6: Fraction) -> typing.Iterator[Fraction]:
    yield xi[0] * xi[1] + 3 * xi[4]
    yield xi[2]
    yield xi[3]
    yield xi[5]


def _zero_pattern(*indices: int) -> typing.Callable[[XiTuple, Fraction], typing.Iterator[Fraction]]:
    def residuals(xi: XiTuple, i6: Fraction) -> typing.Iterator[Fraction]:
        return (xi[i] for i in indices)
    return residuals


# residuals are generators so that a membership test stops at the first nonzero entry
_RESIDUALS = {
    AutLabel.C2_1: _c2_1_residuals,
    AutLabel.C2_2: _c2_2_residuals,
    AutLabel.C3: _c3_residuals,
    AutLabel.V4_1: _v4_1_residuals,
    AutLabel.V4_2: _zero_pattern(0, 3, 4, 5),
    AutLabel.A4: _zero_pattern(0, 1, 3, 4, 5),
    AutLabel.D4: _zero_pattern(0, 2, 3, 4, 5),
}


def _vanishes(label: AutLabel, xi: XiTuple, i6: Fraction) -> bool:
    return not any(_RESIDUALS[label](xi, i6))


def locus_residuals(xi: XiTuple, i6: RationalLike) -> LocusResiduals:
    i6 = to_rational(i6)
    return LocusResiduals(
        residuals={label: tuple(residuals(xi, i6)) for label, residuals in _RESIDUALS.items()},
        printed_l1=printed_l1_residual(xi),
        printed_l3=printed_l3_residual(xi, i6),
        printed_l5=printed_l5_residual(xi, i6),
    )


def c3_family_parameter(xi: XiTuple, i6: RationalLike) -> Fraction | None:
    """The parameter t of the C3 normal form ``(z^3 - 1) / (t z^2)`` whose moduli point is ``xi``, if any.

    t is the multiplier of the fixed point at infinity. Along the family
    ``xi_5 / xi_3^2 = (t - 1) / (4 (t + 3))``, which is inverted here; the A4
    point t = -3 is the one member with ``xi_3 = 0``.
    """
    i6 = to_rational(i6)
    if i6 == 0 or not _vanishes(AutLabel.C3, xi, i6):
        return None
    x2, x3, x5 = xi[2], xi[3], xi[5]
    if 6 * x5 ** 2 + x2 * x3 ** 3 != 0:
        return None
    if x3 == 0:
        return Fraction(-3) if x2 != 0 and x5 == 0 else None

    v = x5 / x3 ** 2
    if 4 * v == 1:
        return None
    t = (1 + 12 * v) / (1 - 4 * v)
    return t if t != 0 else None


def c3_family_match(xi: XiTuple, i6: RationalLike) -> bool:
    return c3_family_parameter(xi, i6) is not None


def classify_invariants(xi: XiTuple, i6: RationalLike, log_mismatches: bool = False) -> AutLabel:
    """Label of the moduli point ``xi``; the most special locus containing it wins."""
    i6 = to_rational(i6)
    if i6 == 0:
        raise NotARationalMapError()

    for label in (AutLabel.D4, AutLabel.A4, AutLabel.V4_1):
        if _vanishes(label, xi, i6):
            return label

    if _vanishes(AutLabel.V4_2, xi, i6):
        if log_mismatches and (printed := printed_l5_residual(xi, i6)) != 0:
            _logger.debug(f"V4-2 zero pattern with nonzero printed L5 equation ({printed}) at {xi.xi}.")
        return AutLabel.V4_2

    if _vanishes(AutLabel.C3, xi, i6) and c3_family_match(xi, i6):
        if log_mismatches and printed_l3_residual(xi, i6) != 0:
            _logger.debug(f"C3 family point with nonzero printed L3 equation at {xi.xi}.")
        return AutLabel.C3

    if _vanishes(AutLabel.C2_1, xi, i6):
        if log_mismatches and printed_l1_residual(xi) != 0:
            _logger.debug(f"C2-1 point with nonzero printed L1 equation at {xi.xi}.")
        return AutLabel.C2_1

    if _vanishes(AutLabel.C2_2, xi, i6):
        return AutLabel.C2_2

    return AutLabel.E


def classify(phi: RationalMap3, log_mismatches: bool = False) -> AutLabel:
    phi.validate()
    return classify_invariants(xi_explicit(phi), phi.i6, log_mismatches)


def l1_parameters(xi: XiTuple) -> tuple[Fraction, Fraction]:
    """``(t + s, t * s)`` for the moduli point of the L1 normal form itself (lambda = 1)."""
    u = (xi[0] / 2 - 2 * xi[1] - 8) / 4
    v = 2 * xi[1] - 1 + u
    return u, v


def l2_parameters(xi: XiTuple) -> tuple[Fraction, Fraction]:
    """``((t + s)^2, s - t)`` for the moduli point of the L2 normal form itself; needs J6 != 0."""
    if xi[0] == 0:
        raise PreconditionError("L2 parameters are undefined when xi_0 = 0 (J6 = 0).")
    return -xi[0] / 2, -3 * xi[3] / xi[0]
