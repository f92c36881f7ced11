"""The six invariants xi_0..xi_5 of a rational cubic, I6, J6 and the weighted projective point."""
from __future__ import annotations

import dataclasses
import functools
import math
import typing
from fractions import Fraction

import sympy

from . import explicit
from .forms import (BinaryForm, RationalMap3, associated_pair, resultant, to_rational, transvectant,
                    RationalLike)
from .ratcubics_types import NotARationalMapError, PreconditionError

__all__ = [
    "WEIGHTS",
    "XiTuple",
    "WeightedPoint",
    "AbsoluteInvariants",
    "xi_explicit",
    "xi_from_pair",
    "xi_via_transvectants",
    "i6_from_xi",
    "i6_from_xi_misprinted",
    "i6_explicit",
    "j6",
    "j6_resultant",
    "j6_explicit",
    "j6_from_xi",
    "syzygy_residual",
    "absolute_invariants",
    "normalization_scale",
    "normalize_weighted",
    "coordinate_height",
    "weighted_height",
    "weighted_points_equal",
]

WEIGHTS = (2, 2, 3, 3, 4, 6)


@dataclasses.dataclass(frozen=True)
class XiTuple:
    """A point of the weighted projective space P(2, 2, 3, 3, 4, 6), not normalized."""
    xi: tuple[Fraction, ...]

    weights: typing.ClassVar[tuple[int, ...]] = WEIGHTS

    def __post_init__(self):
        if len(self.xi) != 6:
            raise PreconditionError(f"Expected six invariants, got {len(self.xi)}.")
        object.__setattr__(self, "xi", tuple(to_rational(v) for v in self.xi))

    @classmethod
    def of(cls, *values: RationalLike) -> "XiTuple":
        return cls(tuple(values))

    def __iter__(self):
        return iter(self.xi)

    def __getitem__(self, index: int) -> Fraction:
        return self.xi[index]

    def __len__(self):
        return 6

    def is_zero(self) -> bool:
        return not any(self.xi)

    def scaled(self, factor: RationalLike) -> "XiTuple":
        """``factor * xi`` in the weighted sense: each coordinate picks up ``factor**w_i``."""
        factor = to_rational(factor)
        return XiTuple(tuple(factor ** w * x for w, x in zip(WEIGHTS, self.xi)))

    def zero_pattern(self) -> tuple[bool, ...]:
        return tuple(x == 0 for x in self.xi)


@dataclasses.dataclass(frozen=True)
class WeightedPoint:
    """wgcd-reduced integer representative of a weighted projective point."""
    coords: tuple[int, ...]

    weights: typing.ClassVar[tuple[int, ...]] = WEIGHTS

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, index: int) -> int:
        return self.coords[index]

    def as_xi(self) -> XiTuple:
        return XiTuple(self.coords)


@dataclasses.dataclass(frozen=True)
class AbsoluteInvariants:
    i1: Fraction
    i2: Fraction
    i3: Fraction
    i4: Fraction
    i5: Fraction

    def as_tuple(self) -> tuple[Fraction, ...]:
        return self.i1, self.i2, self.i3, self.i4, self.i5


def _coefficients(phi: RationalMap3) -> tuple:
    # the compiled polynomials are much faster on ints than on Fractions
    if all(v.denominator == 1 for v in phi.c):
        return tuple(int(v) for v in phi.c)
    return phi.c


def xi_explicit(phi: RationalMap3) -> XiTuple:
    """Evaluate the explicit polynomials of xi_0..xi_5 in c0..c7."""
    bodies = explicit.xi_bodies(_coefficients(phi))
    return XiTuple(tuple(prefactor * body for prefactor, body in zip(explicit.XI_PREFACTORS, bodies)))


def xi_from_pair(i_form: BinaryForm, j_form: BinaryForm) -> XiTuple:
    """The six joint invariants of a quartic ``I`` and a quadratic ``J``."""
    if i_form.degree != 4 or j_form.degree != 2:
        raise PreconditionError("Expected a quartic and a quadratic form.")

    ii2 = transvectant(i_form, i_form, 2)
    j_squared = j_form * j_form
    return XiTuple((
        transvectant(j_form, j_form, 2).constant(),
        transvectant(i_form, i_form, 4).constant(),
        transvectant(ii2, i_form, 4).constant(),
        transvectant(i_form, j_squared, 4).constant(),
        transvectant(ii2, j_squared, 4).constant(),
        transvectant(j_squared * j_form, transvectant(i_form, ii2, 1), 6).constant(),
    ))


def xi_via_transvectants(phi: RationalMap3) -> XiTuple:
    return xi_from_pair(*associated_pair(phi))


def i6_explicit(phi: RationalMap3) -> Fraction:
    return to_rational(explicit.i6_polynomial(_coefficients(phi)))


def i6_from_xi(xi: XiTuple) -> Fraction:
    x0, x1, x2, x3, x4, x5 = xi
    return (
        - Fraction(1, 8) * x1 ** 3
        - Fraction(1, 384) * x0 ** 2 * x1
        + Fraction(3, 4) * x2 ** 2
        - Fraction(3, 16) * x1 * x4
        - Fraction(1, 256) * x3 ** 2
        + Fraction(3, 16) * x2 * x3
        + Fraction(1, 64) * x0 * x4
        - Fraction(1, 8) * x5
    )


def i6_from_xi_misprinted(xi: XiTuple) -> Fraction:
    """The superseded expression for I6; it is not weighted-homogeneous."""
    x0, x1, x2, x3, x4, x5 = xi
    return (
        Fraction(1, 8) * x1 ** 3
        + Fraction(1, 384) * x1 * x0 ** 2
        - Fraction(3, 4) * x2 ** 2
        - Fraction(3, 16) * x2 * x4
        + Fraction(1, 256) * x4 ** 2
        + Fraction(3, 16) * x1 * x3
        - Fraction(1, 64) * x0 * x3
        - Fraction(1, 8) * x5
    )


def j6_resultant(phi: RationalMap3) -> Fraction:
    """``Res(I, J)``; zero when J vanishes identically."""
    i_form, j_form = associated_pair(phi)
    if j_form.is_zero():
        return Fraction(0)
    return resultant(i_form, j_form)


def j6_explicit(phi: RationalMap3) -> Fraction:
    return to_rational(explicit.j6_polynomial(_coefficients(phi)))


def j6_from_xi(xi: XiTuple) -> Fraction:
    x0, x1, _, x3, x4, _ = xi
    return x3 ** 2 - 4 * x4 * x0 + Fraction(2, 3) * x0 ** 2 * x1


def j6(phi: RationalMap3) -> Fraction:
    return j6_explicit(phi)


def syzygy_residual(xi: XiTuple) -> Fraction:
    """Left side minus right side of the relation between xi_0..xi_5; zero on every map."""
    x0, x1, x2, x3, x4, x5 = xi
    rhs = (
        Fraction(1, 108) * x0 ** 3 * x1 ** 3
        - Fraction(1, 18) * x0 ** 3 * x2 ** 2
        - Fraction(1, 24) * x0 * x1 ** 2 * x3 ** 2
        - Fraction(1, 6) * x2 * x3 ** 3
        + Fraction(1, 2) * x0 * x2 * x3 * x4
        + Fraction(1, 4) * x1 * x3 ** 2 * x4
        - Fraction(1, 4) * x0 * x1 * x4 ** 2
        - Fraction(1, 2) * x4 ** 3
    )
    return x5 ** 2 - rhs


def absolute_invariants(xi: XiTuple, i6: RationalLike) -> AbsoluteInvariants:
    i6 = to_rational(i6)
    if i6 == 0:
        raise NotARationalMapError()
    square = i6 ** 2
    x0, x1, x2, x3, x4, _ = xi
    return AbsoluteInvariants(x0 ** 6 / square, x1 ** 6 / square, x2 ** 4 / square, x3 ** 4 / square,
                              x4 ** 3 / square)


def _valuation(value: int, prime: int) -> int:
    count = 0
    while value % prime == 0:
        value //= prime
        count += 1
    return count


@functools.lru_cache(maxsize=65536)
def _prime_factors(value: int) -> tuple[int, ...]:
    return tuple(sympy.factorint(value))


def normalization_scale(xi: XiTuple | typing.Sequence[RationalLike]) -> Fraction:
    """The positive rational lambda that takes ``xi`` to its wgcd-reduced integer representative."""
    values = tuple(to_rational(v) for v in xi)
    if not any(values):
        raise PreconditionError("Cannot normalize the zero point.")

    nonzero = [(w, v) for w, v in zip(WEIGHTS, values) if v]
    denominators = math.lcm(*(v.denominator for _, v in nonzero))
    numerators = math.gcd(*(v.numerator for _, v in nonzero))
    primes = set(_prime_factors(denominators)) | set(_prime_factors(numerators))

    scale = Fraction(1)
    for p in sorted(primes):
        exponent = max(
            -((_valuation(v.numerator, p) - _valuation(v.denominator, p)) // w)
            for w, v in nonzero
        )
        scale *= Fraction(p) ** exponent
    return scale


def normalize_weighted(xi: XiTuple | typing.Sequence[RationalLike]) -> WeightedPoint:
    """Scale by a positive rational so that the coordinates are wgcd-reduced integers."""
    values = tuple(to_rational(v) for v in xi)
    scale = normalization_scale(values)
    coords = tuple(scale ** w * v for w, v in zip(WEIGHTS, values))
    assert all(c.denominator == 1 for c in coords)
    return WeightedPoint(tuple(int(c) for c in coords))


def coordinate_height(values: typing.Sequence[RationalLike]) -> float:
    """``max |x_i| ** (1 / w_i)`` on the coordinates exactly as given, without rescaling."""
    return max(
        (float(abs(to_rational(x))) ** (1 / w) for w, x in zip(WEIGHTS, values) if x),
        default=0.0,
    )


def weighted_height(point: WeightedPoint | XiTuple | typing.Sequence[RationalLike]) -> float:
    """Height of the weighted point, read on its wgcd-reduced representative; used for reporting only.

    Any representative of the point gives the same value. ``coordinate_height``
    is the reading on a raw tuple.
    """
    if not isinstance(point, WeightedPoint):
        if not any(to_rational(x) for x in point):
            return 0.0
        point = normalize_weighted(point)
    return coordinate_height(point.coords)


def _bezout(values: typing.Sequence[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` with coefficients ``a`` such that ``sum(a_i v_i) = gcd``."""
    g, coefficients = values[0], [1]
    for value in values[1:]:
        old_r, r = g, value
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        g = old_r
        coefficients = [a * old_s for a in coefficients] + [old_t]
    return g, coefficients


def _rational_root(value: Fraction, n: int) -> Fraction | None:
    """The real rational n-th root of ``value`` if it exists (positive for even n)."""
    if value < 0:
        if n % 2 == 0:
            return None
        root = _rational_root(-value, n)
        return None if root is None else -root
    numerator, exact_numerator = sympy.integer_nthroot(value.numerator, n)
    denominator, exact_denominator = sympy.integer_nthroot(value.denominator, n)
    if not (exact_numerator and exact_denominator):
        return None
    return Fraction(int(numerator), int(denominator))


def weighted_points_equal(p: XiTuple | typing.Sequence[RationalLike],
                          q: XiTuple | typing.Sequence[RationalLike]) -> bool:
    """True iff ``q = lambda * p`` in P(2, 2, 3, 3, 4, 6) for some nonzero rational lambda."""
    p = tuple(to_rational(v) for v in p)
    q = tuple(to_rational(v) for v in q)
    if not any(p) or not any(q):
        raise PreconditionError("The zero point is not a weighted projective point.")
    if tuple(v == 0 for v in p) != tuple(v == 0 for v in q):
        return False

    support = [i for i in range(6) if p[i]]
    ratios = {i: q[i] / p[i] for i in support}
    g, exponents = _bezout([WEIGHTS[i] for i in support])
    power = Fraction(1)
    for i, a in zip(support, exponents):
        power *= ratios[i] ** a

    scale = _rational_root(power, g)
    if scale is None:
        return False
    return all(scale ** WEIGHTS[i] == ratios[i] for i in support)
