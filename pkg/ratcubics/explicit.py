"""Explicit invariant polynomials of a rational cubic in its coefficients c0..c7.

The bodies below are integer polynomials; the rational prefactor of each is kept
separately in ``XI_PREFACTORS``. They are compiled once with sympy into plain
Python functions, so evaluation on ints or Fractions stays exact.

Coefficient convention: c0..c3 multiply z^3, z^2, z, 1 in the numerator and
c4..c7 do the same in the denominator. ``_J6_ASCENDING_BODY`` is written for the
reversed reading and must be evaluated on block-reversed coefficients.
"""
from __future__ import annotations

import typing
from fractions import Fraction

import sympy

__all__ = [
    "COEFFICIENT_SYMBOLS",
    "XI_PREFACTORS",
    "expression",
    "compile_polynomial",
    "xi_bodies",
    "i6_polynomial",
    "j6_polynomial",
]

COEFFICIENT_SYMBOLS = sympy.symbols("c0:8")

XI_PREFACTORS = (Fraction(2), Fraction(-1, 6), Fraction(-1, 72), Fraction(1, 3), Fraction(-1, 9), Fraction(-1, 4))

_XI0_BODY = (
    "3*c2*c0 + c2*c5 - c1**2 - 2*c1*c6 + 9*c0*c7 + 3*c7*c5 - c6**2"
)

_XI1_BODY = (
    "12*c3*c4 + 3*c2*c0 - 3*c2*c5 - c1**2 + 2*c1*c6 - 3*c0*c7 + 3*c7*c5 - c6**2"
)

_XI2_BODY = (
    "72*c3*c1*c4 + 27*c3*c0**2 - 54*c3*c0*c5 - 72*c3*c6*c4 + 27*c3*c5**2 - 27*c2**2*c4 - 9*c2*c1*c0"
    " + 9*c2*c1*c5 + 9*c2*c0*c6 + 54*c2*c7*c4 - 9*c2*c6*c5 + 2*c1**3 - 6*c1**2*c6 + 9*c1*c0*c7"
    " - 9*c1*c7*c5 + 6*c1*c6**2 - 9*c0*c7*c6 - 27*c7**2*c4 + 9*c7*c6*c5 - 2*c6**3"
)

_XI3_BODY = (
    "27*c3*c0**2 + 18*c3*c0*c5 + 3*c3*c5**2 - 3*c2**2*c4 - 9*c2*c1*c0 + c2*c1*c5 - 15*c2*c0*c6"
    " + 9*c7*c6*c5 - 2*c6**3 - 18*c2*c7*c4 - c2*c6*c5 + 2*c1**3 + 2*c1**2*c6 + 9*c1*c0*c7"
    " + 15*c1*c7*c5 - 2*c1*c6**2 - 9*c0*c7*c6 - 27*c7**2*c4"
)

_XI4_BODY = (
    "18*c3*c2*c0*c4 + 6*c3*c2*c5*c4 + 12*c3*c1**2*c4 - 36*c3*c1*c0*c5 + 24*c3*c1*c6*c4"
    " - 12*c3*c1*c5**2 + 54*c3*c0**2*c6 + 54*c3*c0*c7*c4 + 18*c3*c7*c5*c4 + 12*c3*c6**2*c4"
    " - 6*c3*c6*c5**2 - 6*c2**2*c1*c4 + 9*c2**2*c0**2 + 6*c2**2*c0*c5 - 12*c2**2*c6*c4"
    " + 3*c2**2*c5**2 - 6*c2*c1**2*c0 + 2*c2*c1**2*c5 - 6*c2*c1*c0*c6 + 2*c2*c1*c6*c5"
    " - 18*c2*c0**2*c7 - 24*c2*c0*c7*c5 + 6*c2*c0*c6**2 - 36*c2*c7*c6*c4 + 6*c2*c7*c5**2"
    " + 2*c2*c6**2*c5 + c1**4 + 6*c1**2*c0*c7 + 6*c1**2*c7*c5 - 2*c1**2*c6**2 - 6*c1*c0*c7*c6"
    " + 54*c1*c7**2*c4 - 6*c1*c7*c6*c5 + 27*c0**2*c7**2 - 18*c0*c7**2*c5 + 6*c0*c7*c6**2"
    " + 9*c7**2*c5**2 - 6*c7*c6**2*c5 + c6**4"
)

_XI5_BODY = (
    "36*c3**2*c1*c0**2*c4 + 24*c3**2*c1*c0*c5*c4 + 4*c3**2*c1*c5**2*c4 + 27*c3**2*c0**4"
    " + 36*c3**2*c0**2*c6*c4 - 18*c3**2*c0**2*c5**2 + 24*c3**2*c0*c6*c5*c4 - 8*c3**2*c0*c5**3"
    " + 4*c3**2*c6*c5**2*c4 - c3**2*c5**4 + 4*c3*c2**2*c1*c4**2 - 6*c3*c2**2*c0**2*c4"
    " - 8*c3*c2**2*c0*c5*c4 + 4*c3*c2**2*c6*c4**2 - 2*c3*c2**2*c5**2*c4 - 8*c3*c2*c1**2*c0*c4"
    " - 8*c3*c2*c1**2*c5*c4 - 18*c3*c2*c1*c0**3 - 18*c3*c2*c1*c0**2*c5 - 16*c3*c2*c1*c0*c6*c4"
    " + 2*c3*c2*c1*c0*c5**2 + 24*c3*c2*c1*c7*c4**2 - 16*c3*c2*c1*c6*c5*c4 + 2*c3*c2*c1*c5**3"
    " + 18*c3*c2*c0**3*c6 + 6*c3*c2*c0**2*c6*c5 - 24*c3*c2*c0*c7*c5*c4 - 8*c3*c2*c0*c6**2*c4"
    " + 6*c3*c2*c0*c6*c5**2 + 24*c3*c2*c7*c6*c4**2 - 8*c3*c2*c7*c5**2*c4 - 8*c3*c2*c6**2*c5*c4"
    " + 2*c3*c2*c6*c5**3 + 4*c3*c1**3*c0**2 + 8*c3*c1**3*c0*c5 + 4*c3*c1**3*c5**2"
    " - 12*c3*c1**2*c0**2*c6 + 24*c3*c1**2*c0*c7*c4 - 8*c3*c1**2*c0*c6*c5 - 8*c3*c1**2*c7*c5*c4"
    " + 4*c3*c1**2*c6*c5**2 + 18*c3*c1*c0**3*c7 - 6*c3*c1*c0**2*c7*c5 + 48*c3*c1*c0*c7*c6*c4"
    " + 14*c3*c1*c0*c7*c5**2 - 16*c3*c1*c0*c6**2*c5 + 36*c3*c1*c7**2*c4**2 - 16*c3*c1*c7*c6*c5*c4"
    " + 6*c3*c1*c7*c5**3 + 18*c3*c0**3*c7*c6 + 54*c3*c0**2*c7**2*c4 - 42*c3*c0**2*c7*c6*c5"
    " + 16*c3*c0**2*c6**3 + 24*c3*c0*c7*c6**2*c4 - 10*c3*c0*c7*c6*c5**2 + 36*c3*c7**2*c6*c4**2"
    " - 6*c3*c7**2*c5**2*c4 - 8*c3*c7*c6**2*c5*c4 + 2*c3*c7*c6*c5**3 - c2**4*c4**2 + 2*c2**3*c1*c0*c4"
    " + 2*c2**3*c1*c5*c4 + 4*c2**3*c0**3 + 4*c2**3*c0**2*c5 + 6*c2**3*c0*c6*c4 - 8*c2**3*c7*c4**2"
    " + 2*c2**3*c6*c5*c4 - c2**2*c1**2*c0**2 - 2*c2**2*c1**2*c0*c5 - c2**2*c1**2*c5**2"
    " + 2*c2**2*c1*c0**2*c6 - 10*c2**2*c1*c0*c7*c4 + 6*c2**2*c1*c7*c5*c4 + 4*c2**2*c1*c6**2*c4"
    " - 2*c2**2*c1*c6*c5**2 - 12*c2**2*c0**3*c7 - 4*c2**2*c0**2*c7*c5 + 3*c2**2*c0**2*c6**2"
    " + 14*c2**2*c0*c7*c6*c4 - 8*c2**2*c0*c7*c5**2 + 2*c2**2*c0*c6**2*c5 - 18*c2**2*c7**2*c4**2"
    " + 2*c2**2*c7*c6*c5*c4 + 4*c2**2*c6**3*c4 - c2**2*c6**2*c5**2 + 2*c2*c1**2*c0**2*c7"
    " + 4*c2*c1**2*c0*c7*c5 - 16*c2*c1**2*c7*c6*c4 + 2*c2*c1**2*c7*c5**2 - 8*c2*c1*c0**2*c7*c6"
    " - 42*c2*c1*c0*c7**2*c4 + 8*c2*c1*c0*c7*c6*c5 + 6*c2*c1*c7**2*c5*c4 - 8*c2*c1*c7*c6**2*c4"
    " + 24*c2*c0**2*c7**2*c5 - 10*c2*c0**2*c7*c6**2 - 6*c2*c0*c7**2*c6*c4 - 4*c2*c0*c7**2*c5**2"
    " + 4*c2*c0*c7*c6**2*c5 - 18*c2*c7**2*c6*c5*c4 + 4*c2*c7**2*c5**3 + 8*c2*c7*c6**3*c4"
    " - 2*c2*c7*c6**2*c5**2 + 16*c1**3*c7**2*c4 + 3*c1**2*c0**2*c7**2 - 10*c1**2*c0*c7**2*c5"
    " + 3*c1**2*c7**2*c5**2 + 6*c1*c0**2*c7**2*c6 + 18*c1*c0*c7**3*c4 - 8*c1*c0*c7**2*c6*c5"
    " + 18*c1*c7**3*c5*c4 - 12*c1*c7**2*c6**2*c4 + 2*c1*c7**2*c6*c5**2 + 3*c0**2*c7**2*c6**2"
    " + 18*c0*c7**3*c6*c4 - 12*c0*c7**3*c5**2 + 2*c0*c7**2*c6**2*c5 + 27*c7**4*c4**2 + 4*c7**3*c5**3"
    " + 4*c7**2*c6**3*c4 - 18*c7**3*c6*c5*c4 - c7**2*c6**2*c5**2"
)

_I6_BODY = (
    "c3**3*c4**3 - c0**3*c7**3 + c3*c0**2*c6**3 - c2**3*c7*c4**2 + c1**3*c7**2*c4 - c3**2*c2*c5*c4**2"
    " - c3**2*c0*c5**3 - 2*c3**2*c1*c6*c4**2 + c3*c2**2*c6*c4**2 + c3**2*c1*c5**2*c4"
    " - 3*c3**2*c0*c7*c4**2 - c1**2*c0*c7**2*c5 + c1*c0**2*c7**2*c6 + 2*c2*c0**2*c7**2*c5"
    " + 3*c3*c0**2*c7**2*c4 - c2**2*c0*c7*c5**2 + 3*c3**2*c0*c6*c5*c4 - 2*c3*c2*c0*c6**2*c4"
    " + c3*c2*c0*c6*c5**2 + 3*c3*c2*c1*c7*c4**2 + 2*c3*c1*c0*c7*c5**2 - c3*c1*c0*c6**2*c5"
    " - c2*c1**2*c7*c6*c4 - 3*c2*c1*c0*c7**2*c4 + c2**2*c1*c7*c5*c4 + 2*c2**2*c0*c7*c6*c4"
    " - c3*c2*c1*c6*c5*c4 - c3*c2*c0*c7*c5*c4 + c3*c1*c0*c7*c6*c4 + c3*c1**2*c6**2*c4"
    " - c2*c0**2*c7*c6**2 + c2*c1*c0*c7*c6*c5 - 3*c3*c0**2*c7*c6*c5 - 2*c3*c1**2*c7*c5*c4"
)

_J6_ASCENDING_BODY = (
    "81*c3**4*c0**2 - 54*c3**3*c2*c1*c0 + 54*c3**3*c2*c0*c4 + 12*c3**3*c1**3 - 36*c3**3*c1**2*c4"
    " + 54*c3**3*c1*c0*c5 - 108*c3**3*c1*c4**2 + 108*c3**3*c0**2*c6 + 378*c3**3*c0*c5*c4"
    " + 324*c3**3*c4**3 + 12*c3**2*c2**3*c0 - 3*c3**2*c2**2*c1**2 + 6*c3**2*c2**2*c1*c4"
    " - 36*c3**2*c2**2*c0*c5 + 45*c3**2*c2**2*c4**2 + 12*c7*c5**3*c4**2 + 6*c3**2*c2*c1**2*c5"
    " - 126*c3**2*c2*c1*c0*c6 - 60*c3**2*c2*c1*c5*c4 - 162*c3**2*c2*c0*c6*c4 - 108*c3**2*c2*c0*c5**2"
    " - 234*c3**2*c2*c5*c4**2 + 28*c3**2*c1**3*c6 - 18*c3**2*c1**2*c0*c7 + 12*c3**2*c1**2*c6*c4"
    " + 45*c3**2*c1**2*c5**2 - 108*c3**2*c1*c0*c7*c4 - 18*c3**2*c1*c0*c6*c5 - 252*c3**2*c1*c6*c4**2"
    " + 150*c3**2*c1*c5**2*c4 + 54*c3**2*c0**2*c6**2 - 162*c3**2*c0*c7*c4**2 + 162*c3**2*c0*c6*c5*c4"
    " - 60*c3**2*c0*c5**3 - 108*c3**2*c6*c4**3 + 45*c3**2*c5**2*c4**2 + 40*c3*c2**3*c0*c6"
    " - 10*c3*c2**2*c1**2*c6 + 20*c3*c2**2*c1*c6*c4 + 144*c3*c2**2*c0*c7*c4 + 72*c3*c2**2*c0*c6*c5"
    " + 150*c3*c2**2*c6*c4**2 - 10*c3*c2*c1**3*c7 - 28*c3*c2*c1**2*c6*c5 + 96*c3*c2*c1*c0*c7*c5"
    " - 66*c3*c2*c1*c0*c6**2 + 162*c3*c2*c1*c7*c4**2 - 54*c7*c6*c5*c4**3 + 288*c3*c2*c0*c7*c5*c4"
    " - 126*c3*c2*c0*c6**2*c4 + 24*c3*c2*c0*c6*c5**2 + 378*c3*c2*c7*c4**3 + 81*c7**2*c4**4"
    " - 22*c3*c1**3*c7*c5 + 20*c3*c1**3*c6**2 - 12*c3*c1**2*c0*c7*c6 - 126*c3*c1**2*c7*c5*c4"
    " + 68*c3*c1**2*c6**2*c4 + 4*c0*c6**2*c5**3 - 72*c3*c1*c0*c7*c6*c4 + 48*c3*c1*c0*c7*c5**2"
    " - 30*c3*c1*c0*c6**2*c5 - 162*c3*c1*c7*c5*c4**2 + 48*c0*c7*c6*c5**2*c4 + 20*c3*c1*c6*c5**2*c4"
    " + 12*c3*c0**2*c6**3 - 108*c3*c0*c7*c6*c4**2 + 144*c3*c0*c7*c5**2*c4 - 18*c3*c0*c6**2*c5*c4"
    " - 10*c0*c6**3*c5*c4 - 8*c3*c0*c6*c5**3 + 54*c3*c7*c5*c4**3 - 36*c3*c6**2*c4**3"
    " + 6*c3*c6*c5**2*c4**2 - 16*c2**4*c0*c7 + 4*c2**3*c1**2*c7 - 8*c2**3*c1*c7*c4"
    " + 12*c2**3*c0*c6**2 - 60*c2**3*c7*c4**2 + 20*c2**2*c1**2*c7*c5 - 3*c2**2*c1**2*c6**2"
    " + 16*c2**2*c1*c0*c7*c6 + 12*c6**3*c4**3 - 3*c6**2*c5**2*c4**2 + 24*c2**2*c1*c7*c5*c4"
    " + 6*c2**2*c1*c6**2*c4 + 48*c2**2*c0*c7*c6*c4 - 96*c2**2*c0*c7*c5**2 + 28*c2**2*c0*c6**2*c5"
    " - 108*c2**2*c7*c5*c4**2 - 6*c2*c1**3*c7*c6 - 30*c2*c1**2*c7*c6*c4 + 28*c2*c1**2*c7*c5**2"
    " - 10*c2*c1**2*c6**2*c5 + 32*c2*c1*c0*c7*c6*c5 - 10*c2*c1*c0*c6**3 + 72*c2*c1*c7*c5**2*c4"
    " - 28*c2*c1*c6**2*c5*c4 + 96*c2*c0*c7*c6*c5*c4 - 64*c2*c0*c7*c5**3 - 22*c2*c0*c6**3*c4"
    " + 20*c2*c0*c6**2*c5**2 - 36*c2*c7*c5**2*c4**2 + 6*c2*c6**2*c5*c4**2 + c1**4*c7**2"
    " + 12*c1**3*c7**2*c4 - 10*c1**3*c7*c6*c5 + 4*c1**3*c6**3 - 2*c1**2*c0*c7*c6**2"
    " + 54*c1**2*c7**2*c4**2 - 66*c1**2*c7*c6*c5*c4 + 12*c1**2*c7*c5**3 + 20*c1**2*c6**3*c4"
    " - 3*c1**2*c6**2*c5**2 - 12*c1*c0*c7*c6**2*c4 + 16*c1*c0*c7*c6*c5**2 - 6*c1*c0*c6**3*c5"
    " + 108*c1*c7**2*c4**3 - 126*c1*c7*c6*c5*c4**2 + 40*c1*c7*c5**3*c4 + 28*c1*c6**3*c4**2"
    " - 10*c1*c6**2*c5**2*c4 + c0**2*c6**4 - 18*c0*c7*c6**2*c4**2 + 48*c3*c2**2*c1*c0*c7"
    " - 64*c2**3*c0*c7*c5 - 16*c0*c7*c5**4 + 45*c2**2*c6**2*c4**2 - 18*c2*c1*c7*c6*c4**2"
    " + 54*c2*c7*c6*c4**3 - 104*c3*c2*c1*c6*c5*c4 - 18*c3*c2*c1**2*c7*c4 + 6*c3*c1**2*c6*c5**2"
    " + 12*c3*c1*c6**2*c4**2 - 60*c3*c2*c6*c5*c4**2"
)


def expression(text: str) -> sympy.Expr:
    return sympy.sympify(text, locals={str(s): s for s in COEFFICIENT_SYMBOLS})


def compile_polynomial(text: str) -> typing.Callable[..., typing.Any]:
    """Compile a polynomial in c0..c7 into a function of eight positional arguments."""
    return sympy.lambdify(COEFFICIENT_SYMBOLS, expression(text), modules="math")


_XI_FUNCTIONS = tuple(
    compile_polynomial(body)
    for body in (_XI0_BODY, _XI1_BODY, _XI2_BODY, _XI3_BODY, _XI4_BODY, _XI5_BODY)
)
_I6_FUNCTION = compile_polynomial(_I6_BODY)
_J6_FUNCTION = compile_polynomial(_J6_ASCENDING_BODY)


def xi_bodies(c: typing.Sequence) -> tuple:
    """The six integer bodies; multiply by ``XI_PREFACTORS`` to get xi_0..xi_5."""
    return tuple(f(*c) for f in _XI_FUNCTIONS)


def i6_polynomial(c: typing.Sequence):
    return _I6_FUNCTION(*c)


def j6_polynomial(c: typing.Sequence):
    c0, c1, c2, c3, c4, c5, c6, c7 = c
    return _J6_FUNCTION(c3, c2, c1, c0, c7, c6, c5, c4)
