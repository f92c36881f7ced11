"""Exact algebra of binary forms and degree-3 rational maps.

Coefficient conventions used throughout the package:

* A ``BinaryForm`` of degree d stores ``coeffs[i]`` as the coefficient of
  ``x**i * y**(d - i)``.
* A ``RationalMap3`` stores c0..c7 with
  ``phi(z) = (c0 z^3 + c1 z^2 + c2 z + c3) / (c4 z^3 + c5 z^2 + c6 z + c7)``,
  so ``f0 = c0 x^3 + c1 x^2 y + c2 x y^2 + c3 y^3`` and likewise ``f1``.
  Under this reading the explicit invariant polynomials reproduce the published
  database record for (2, 3, -1, -3, 1, 2, -3, 1).
"""
from __future__ import annotations

import dataclasses
import functools
import math
import typing
from fractions import Fraction

import sympy

from .ratcubics_types import NotARationalMapError, PreconditionError

__all__ = [
    "RationalLike",
    "to_rational",
    "BinaryForm",
    "MobiusMap",
    "RationalMap3",
    "transvectant",
    "act",
    "resultant",
    "determinant",
    "conjugate_map",
    "associated_pair",
    "inverse_associated",
    "modular_resultant",
    "fixed_point_form",
    "rational_fixed_points",
    "cubic_invariant",
    "quartic_invariants",
    "I6_SIGN",
]

RationalLike = typing.Union[int, Fraction, str, sympy.Rational]

# I6 = I6_SIGN * Sylvester(f0, f1); matches the "- c0^3 c7^3" monomial of the explicit I6.
I6_SIGN = -1


def to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, float):
        raise TypeError(f"Refusing inexact coefficient {value!r}.")
    return Fraction(value)


@dataclasses.dataclass(frozen=True)
class BinaryForm:
    """A binary form; ``coeffs[i]`` multiplies ``x**i * y**(degree - i)``."""
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise PreconditionError("A binary form needs at least one coefficient.")
        object.__setattr__(self, "coeffs", tuple(to_rational(c) for c in self.coeffs))

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls((0,) * (degree + 1))

    @classmethod
    def monomial(cls, degree: int, x_power: int, coefficient: RationalLike = 1) -> "BinaryForm":
        coeffs = [0] * (degree + 1)
        coeffs[x_power] = coefficient
        return cls(tuple(coeffs))

    @classmethod
    def x(cls) -> "BinaryForm":
        return cls((0, 1))

    @classmethod
    def y(cls) -> "BinaryForm":
        return cls((1, 0))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check_same_degree(self, other: "BinaryForm"):
        if self.degree != other.degree:
            raise PreconditionError(f"Degree mismatch: {self.degree} != {other.degree}.")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check_same_degree(other)
        return BinaryForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        self._check_same_degree(other)
        return BinaryForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(tuple(-a for a in self.coeffs))

    def scale(self, factor: RationalLike) -> "BinaryForm":
        factor = to_rational(factor)
        return BinaryForm(tuple(factor * a for a in self.coeffs))

    def __mul__(self, other: "BinaryForm | RationalLike") -> "BinaryForm":
        if not isinstance(other, BinaryForm):
            return self.scale(other)

        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(tuple(out))

    def __rmul__(self, other: RationalLike) -> "BinaryForm":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "BinaryForm":
        out = BinaryForm((1,))
        for _ in range(exponent):
            out = out * self
        return out

    def derivative_x(self) -> "BinaryForm":
        if self.degree == 0:
            raise PreconditionError("Cannot differentiate a form of degree 0.")
        return BinaryForm(tuple((i + 1) * self.coeffs[i + 1] for i in range(self.degree)))

    def derivative_y(self) -> "BinaryForm":
        if self.degree == 0:
            raise PreconditionError("Cannot differentiate a form of degree 0.")
        return BinaryForm(tuple((self.degree - i) * self.coeffs[i] for i in range(self.degree)))

    def partial(self, x_order: int, y_order: int) -> "BinaryForm":
        out = self
        for _ in range(x_order):
            out = out.derivative_x()
        for _ in range(y_order):
            out = out.derivative_y()
        return out

    def evaluate(self, x: RationalLike, y: RationalLike) -> Fraction:
        x, y = to_rational(x), to_rational(y)
        return sum((a * x ** i * y ** (self.degree - i) for i, a in enumerate(self.coeffs)), Fraction(0))

    def constant(self) -> Fraction:
        """The value of a degree-0 form."""
        if self.degree != 0:
            raise PreconditionError(f"Form of degree {self.degree} is not a constant.")
        return self.coeffs[0]

    def descending(self) -> list[Fraction]:
        """Coefficients from x^d down to y^d."""
        return list(reversed(self.coeffs))

    def to_standard_form(self) -> tuple[Fraction, ...]:
        """Coefficients a_i with ``f = sum(binom(d, i) a_i x^i y^(d-i))``."""
        return tuple(a / math.comb(self.degree, i) for i, a in enumerate(self.coeffs))

    @classmethod
    def from_standard_form(cls, a: typing.Sequence[RationalLike]) -> "BinaryForm":
        d = len(a) - 1
        return cls(tuple(math.comb(d, i) * to_rational(v) for i, v in enumerate(a)))

    def is_proportional(self, other: "BinaryForm") -> bool:
        """True if both forms are nonzero and differ by a nonzero scalar."""
        return _projectively_equal(self.coeffs, other.coeffs)

    def __str__(self):
        terms = []
        for i, a in reversed(list(enumerate(self.coeffs))):
            if not a:
                continue
            monomial = "*".join(
                f"{v}^{p}" if p > 1 else v for v, p in (("x", i), ("y", self.degree - i)) if p
            )
            terms.append(f"({a})*{monomial}" if monomial else f"({a})")
        return " + ".join(terms) or "0"


def _projectively_equal(a: typing.Sequence[Fraction], b: typing.Sequence[Fraction]) -> bool:
    if len(a) != len(b) or not any(a) or not any(b):
        return False
    pivot = next(i for i, v in enumerate(a) if v)
    if not b[pivot]:
        return False
    ratio = b[pivot] / a[pivot]
    return all(ratio * u == v for u, v in zip(a, b))


@dataclasses.dataclass(frozen=True)
class MobiusMap:
    """The matrix [[a, b], [c, e]], acting on forms by ``f(ax + by, cx + ey)``."""
    a: Fraction
    b: Fraction
    c: Fraction
    e: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "e"):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if self.det == 0:
            raise PreconditionError(f"Singular matrix {self.as_tuple()}.")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.e - self.b * self.c

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.e

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
        )

    def inverse(self) -> "MobiusMap":
        d = self.det
        return MobiusMap(self.e / d, -self.b / d, -self.c / d, self.a / d)

    def apply(self, z: Fraction | None) -> Fraction | None:
        """Evaluate ``(az + b) / (cz + e)``; ``None`` stands for the point at infinity."""
        if z is None:
            return None if self.c == 0 else self.a / self.c
        denominator = self.c * z + self.e
        if denominator == 0:
            return None
        return (self.a * z + self.b) / denominator


@dataclasses.dataclass(frozen=True)
class RationalMap3:
    """Coefficients c0..c7 of a degree-3 rational map.

    Constructing the container only checks the shape; use ``validated`` or
    ``validate`` to also require a nonzero resultant.
    """
    c: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.c) != 8:
            raise PreconditionError(f"A rational cubic needs 8 coefficients, got {len(self.c)}.")
        object.__setattr__(self, "c", tuple(to_rational(v) for v in self.c))

    @classmethod
    def validated(cls, c: typing.Sequence[RationalLike]) -> "RationalMap3":
        return cls(tuple(c)).validate()

    @classmethod
    def from_forms(cls, f0: BinaryForm, f1: BinaryForm) -> "RationalMap3":
        if f0.degree != 3 or f1.degree != 3:
            raise PreconditionError("Numerator and denominator must be cubic forms.")
        return cls(tuple(f0.descending()) + tuple(f1.descending()))

    @classmethod
    def from_ascending(cls, c: typing.Sequence[RationalLike]) -> "RationalMap3":
        """Read c0..c3 (and c4..c7) as coefficients of 1, z, z^2, z^3."""
        c = tuple(c)
        return cls(tuple(reversed(c[:4])) + tuple(reversed(c[4:])))

    def ascending(self) -> tuple[Fraction, ...]:
        return tuple(reversed(self.c[:4])) + tuple(reversed(self.c[4:]))

    def validate(self) -> "RationalMap3":
        if not any(self.c[:4]) or not any(self.c[4:]) or self.i6 == 0:
            raise NotARationalMapError()
        return self

    @property
    def f0(self) -> BinaryForm:
        return BinaryForm(tuple(reversed(self.c[:4])))

    @property
    def f1(self) -> BinaryForm:
        return BinaryForm(tuple(reversed(self.c[4:])))

    @functools.cached_property
    def i6(self) -> Fraction:
        if self.f0.is_zero() or self.f1.is_zero():
            return Fraction(0)
        return I6_SIGN * resultant(self.f0, self.f1)

    def is_valid(self) -> bool:
        return any(self.c[:4]) and any(self.c[4:]) and self.i6 != 0

    def scaled(self, factor: RationalLike) -> "RationalMap3":
        factor = to_rational(factor)
        return RationalMap3(tuple(factor * v for v in self.c))

    def projectively_equal(self, other: "RationalMap3") -> bool:
        return _projectively_equal(self.c, other.c)

    def primitive(self) -> "RationalMap3":
        """Scale to coprime integers whose first nonzero entry is positive."""
        denominator = math.lcm(*(v.denominator for v in self.c))
        ints = [int(v * denominator) for v in self.c]
        divisor = math.gcd(*ints)
        if divisor == 0:
            return self
        sign = 1 if next(v for v in ints if v) > 0 else -1
        return RationalMap3(tuple(sign * v // divisor for v in ints))

    def __call__(self, z: Fraction | None) -> Fraction | None:
        x, y = (Fraction(1), Fraction(0)) if z is None else (to_rational(z), Fraction(1))
        numerator, denominator = self.f0.evaluate(x, y), self.f1.evaluate(x, y)
        if denominator == 0:
            return None
        return numerator / denominator


def transvectant(f: BinaryForm, g: BinaryForm, r: int) -> BinaryForm:
    """The r-th transvectant (f, g)_r with prefactor (m-r)!(n-r)!/(m!n!)."""
    m, n = f.degree, g.degree
    if r < 0 or r > min(m, n):
        raise PreconditionError(f"Transvectant order {r} exceeds the degrees ({m}, {n}).")

    prefactor = Fraction(math.factorial(m - r) * math.factorial(n - r), math.factorial(m) * math.factorial(n))
    out = BinaryForm.zero(m + n - 2 * r)
    for k in range(r + 1):
        term = f.partial(r - k, k) * g.partial(k, r - k)
        out = out + term.scale((-1) ** k * math.comb(r, k))
    return out.scale(prefactor)


def act(f: BinaryForm, m: MobiusMap) -> BinaryForm:
    """``f^M(x, y) = f(ax + by, cx + ey)``."""
    first = BinaryForm((m.b, m.a))
    second = BinaryForm((m.e, m.c))
    out = BinaryForm.zero(f.degree)
    for i, coefficient in enumerate(f.coeffs):
        if coefficient:
            out = out + (first ** i * second ** (f.degree - i)).scale(coefficient)
    return out


def determinant(rows: typing.Sequence[typing.Sequence[Fraction]]) -> Fraction:
    matrix = [[to_rational(v) for v in row] for row in rows]
    size = len(matrix)
    result = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if matrix[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
            result = -result
        pivot_value = matrix[col][col]
        result *= pivot_value
        for r in range(col + 1, size):
            factor = matrix[r][col] / pivot_value
            if factor:
                for k in range(col, size):
                    matrix[r][k] -= factor * matrix[col][k]
    return result


def sylvester_matrix(f: BinaryForm, g: BinaryForm) -> list[list[Fraction]]:
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    for shift in range(n):
        rows.append([Fraction(0)] * shift + f.descending() + [Fraction(0)] * (size - m - 1 - shift))
    for shift in range(m):
        rows.append([Fraction(0)] * shift + g.descending() + [Fraction(0)] * (size - n - 1 - shift))
    return rows


def resultant(f: BinaryForm, g: BinaryForm) -> Fraction:
    """Sylvester resultant of two forms, coefficients taken from x^d downwards."""
    if f.is_zero() or g.is_zero():
        raise PreconditionError("The resultant of a zero form is undefined.")
    return determinant(sylvester_matrix(f, g))


def conjugate_map(phi: RationalMap3, sigma: MobiusMap) -> RationalMap3:
    """``sigma^-1 . phi . sigma`` as (e f0^s - b f1^s) / (-c f0^s + a f1^s)."""
    f0s, f1s = act(phi.f0, sigma), act(phi.f1, sigma)
    g0 = f0s.scale(sigma.e) - f1s.scale(sigma.b)
    g1 = f1s.scale(sigma.a) - f0s.scale(sigma.c)
    return RationalMap3.from_forms(g0, g1)


def associated_pair(phi: RationalMap3) -> tuple[BinaryForm, BinaryForm]:
    """``(I, J) = (y f0 - x f1, df0/dx + df1/dy)``."""
    f0, f1 = phi.f0, phi.f1
    i_form = BinaryForm.y() * f0 - BinaryForm.x() * f1
    j_form = f0.derivative_x() + f1.derivative_y()
    return i_form, j_form


def _inverse_numerators(f: BinaryForm, g: BinaryForm) -> tuple[BinaryForm, BinaryForm]:
    if f.degree != 4 or g.degree != 2:
        raise PreconditionError("Expected a quartic and a quadratic form.")
    numerator = BinaryForm.x() * g + f.derivative_y()
    denominator = BinaryForm.y() * g - f.derivative_x()
    return numerator, denominator


def modular_resultant(f: BinaryForm, g: BinaryForm) -> Fraction:
    """``Res(x g + df/dy, y g - df/dx)``; zero when either side vanishes identically."""
    numerator, denominator = _inverse_numerators(f, g)
    if numerator.is_zero() or denominator.is_zero():
        return Fraction(0)
    return resultant(numerator, denominator)


def inverse_associated(f: BinaryForm, g: BinaryForm) -> RationalMap3:
    """The cubic whose associated pair is proportional to (f, g)."""
    if modular_resultant(f, g) == 0:
        raise NotARationalMapError("the pair lies on the modular resultant locus (Delta = 0)")
    numerator, denominator = _inverse_numerators(f, g)
    return RationalMap3.from_forms(numerator, denominator)


def fixed_point_form(phi: RationalMap3) -> tuple[Fraction, ...]:
    """Coefficients of ``S(t) = F(t) - t G(t)`` from t^0 up to t^4."""
    f = tuple(reversed(phi.c[:4]))
    g = tuple(reversed(phi.c[4:]))
    return tuple(
        (f[k] if k < 4 else 0) - (g[k - 1] if k >= 1 else 0)
        for k in range(5)
    )


def rational_fixed_points(phi: RationalMap3) -> list[Fraction | None]:
    """Rational fixed points in increasing order, then ``None`` for infinity if fixed."""
    t = sympy.Symbol("t")
    coeffs = fixed_point_form(phi)
    poly = sympy.Poly(sum(sympy.Rational(v.numerator, v.denominator) * t ** k for k, v in enumerate(coeffs)), t,
                      domain=sympy.QQ)
    points: list[Fraction | None] = sorted(to_rational(root) for root in poly.ground_roots())
    if coeffs[4] == 0:
        points.append(None)
    return points


def cubic_invariant(f: BinaryForm) -> Fraction:
    """Generator of the invariants of a binary cubic: twice its discriminant.

    Read on the raw coefficients ``f = b3 x^3 + b2 x^2 y + b1 x y^2 + b0 y^3``;
    equals 27 * ((f, f)_2, (f, f)_2)_2 and picks up det(M)^6 under ``act``.
    """
    if f.degree != 3:
        raise PreconditionError("Expected a cubic form.")
    b0, b1, b2, b3 = f.coeffs
    return (-54 * b0 ** 2 * b3 ** 2 + 36 * b1 * b3 * b0 * b2 - 8 * b2 ** 3 * b0 - 8 * b1 ** 3 * b3
            + 2 * b2 ** 2 * b1 ** 2)


def quartic_invariants(f: BinaryForm) -> tuple[Fraction, Fraction]:
    """The generators (f, f)_4 and (f, (f, f)_2)_4 of the invariants of a binary quartic.

    In standard-form coefficients the first one is 2 * (a0 a4 - 4 a1 a3 + 3 a2^2).
    """
    if f.degree != 4:
        raise PreconditionError("Expected a quartic form.")
    return transvectant(f, f, 4).constant(), transvectant(f, transvectant(f, f, 2), 4).constant()
