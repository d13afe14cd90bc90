"""Overflow-safe complex arithmetic.

The evaluators in this package routinely produce factors behaving like
``exp(+nu*rho)`` and ``exp(-nu*rho)`` whose product is of order one but whose
individual magnitudes can leave the double range.  :class:`ScaledComplex`
carries such values as ``mantissa * exp(exponent)`` with the mantissa kept
near unit modulus, so products, quotients and aligned sums never overflow
for exponents up to +-1e4.

A small double-double toolkit (Dekker splitting, error-free transforms) is
included for the compensated difference-of-products path used at very high
orders, where the two terms of the regular wronskian cancel heavily.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ScaledComplex:
    """A complex value stored as ``mantissa * exp(exponent)``.

    ``|mantissa|`` is normalised into [1/2, 2] (mantissa 0 with exponent 0 is
    the canonical zero), so that reconstruction costs exactly one rounding
    step and scaled products cannot overflow.
    """

    mantissa: complex
    exponent: float

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_complex(value: complex, exponent: float = 0.0) -> "ScaledComplex":
        return _normalized(complex(value), float(exponent))

    @staticmethod
    def zero() -> "ScaledComplex":
        return ScaledComplex(0j, 0.0)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        """Natural log of the modulus; -inf for the zero value."""
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    def phase(self) -> float:
        return cmath.phase(self.mantissa)

    def to_complex(self) -> complex:
        """Collapse to a plain complex.

        Raises OverflowError when the represented magnitude exceeds the
        double range; callers that may hit that regime should stay in scaled
        form and use :meth:`log_abs`/:meth:`phase`.
        """
        if self.mantissa == 0:
            return 0j
        return self.mantissa * math.exp(self.exponent)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other: "ScaledComplex | complex | float") -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return _normalized(self.mantissa * other.mantissa,
                              self.exponent + other.exponent)
        return _normalized(self.mantissa * complex(other), self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other: "ScaledComplex | complex | float") -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return _normalized(self.mantissa / other.mantissa,
                              self.exponent - other.exponent)
        return _normalized(self.mantissa / complex(other), self.exponent)

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exponent)

    def __add__(self, other: "ScaledComplex") -> "ScaledComplex":
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        # Align to the larger exponent; the rescale factor is <= 1 so the
        # aligned mantissa cannot overflow.
        if self.exponent >= other.exponent:
            hi, lo = self, other
        else:
            hi, lo = other, self
        shift = lo.exponent - hi.exponent
        scale = math.exp(shift) if shift > -745.0 else 0.0
        return _normalized(hi.mantissa + lo.mantissa * scale, hi.exponent)

    def __sub__(self, other: "ScaledComplex") -> "ScaledComplex":
        if not isinstance(other, ScaledComplex):
            other = ScaledComplex.from_complex(other)
        return self + (-other)

    def scale_exp(self, delta: float) -> "ScaledComplex":
        """Multiply by exp(delta) without touching the mantissa."""
        if self.mantissa == 0:
            return self
        return ScaledComplex(self.mantissa, self.exponent + delta)


def _normalized(mantissa: complex, exponent: float) -> ScaledComplex:
    if mantissa == 0:
        return ScaledComplex(0j, 0.0)
    mod = abs(mantissa)
    if not (0.5 <= mod <= 2.0):
        if mod == math.inf or mod != mod:  # inf/nan mantissa: leave as-is
            return ScaledComplex(mantissa, exponent)
        shift = math.log(mod)
        mantissa = mantissa / mod
        exponent = exponent + shift
    return ScaledComplex(mantissa, exponent)


# ---------------------------------------------------------------------------
# Double-double helpers (error-free transforms without FMA).
# ---------------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    s, e = _two_sum(s, e)
    return s, e


def _dd_mul_d(x: tuple[float, float], a: float) -> tuple[float, float]:
    p, e = _two_prod(x[0], a)
    e += x[1] * a
    p, e = _two_sum(p, e)
    return p, e


def dd_complex_mul(x: complex, y: complex) -> tuple[tuple[float, float], tuple[float, float]]:
    """Complex product in double-double: returns ((re_hi, re_lo), (im_hi, im_lo))."""
    rr, rr_e = _two_prod(x.real, y.real)
    ii, ii_e = _two_prod(x.imag, y.imag)
    ri, ri_e = _two_prod(x.real, y.imag)
    ir, ir_e = _two_prod(x.imag, y.real)
    re = _dd_add((rr, rr_e), (-ii, -ii_e))
    im = _dd_add((ri, ri_e), (ir, ir_e))
    return re, im


def dd_diff_of_products(a: complex, b: complex, c: complex, d: complex,
                        scale_cd: float = 1.0) -> complex:
    """Compensated evaluation of ``a*b - scale_cd * c*d``.

    The individual products are formed with error-free transforms so the
    subtraction sees the exact product values; only the final collapse
    rounds.  This removes the extra digit loss of a naive multiply-subtract
    when the two products nearly cancel (the inputs themselves are still
    ordinary doubles).
    """
    re1, im1 = dd_complex_mul(a, b)
    re2, im2 = dd_complex_mul(c, d)
    if scale_cd != 1.0:
        re2 = _dd_mul_d(re2, scale_cd)
        im2 = _dd_mul_d(im2, scale_cd)
    re = _dd_add(re1, (-re2[0], -re2[1]))
    im = _dd_add(im1, (-im2[0], -im2[1]))
    return complex(re[0] + re[1], im[0] + im[1])
