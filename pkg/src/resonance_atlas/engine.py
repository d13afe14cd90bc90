"""Exact channel characteristic functions and zero location.

For a radial step barrier of height v0 and unit radius in even dimension d,
each angular channel of order nu has a characteristic function on the
physical sheet built from the interior momentum Sigma = lambda*(1 - v0/lambda^2)^(1/2):

    outgoing:  F0 = Sigma J'_nu(Sigma) H1_nu(lambda) - lambda J_nu(Sigma) H1'_nu(lambda)
    regular:   G0 = Sigma J'_nu(Sigma) J_nu(lambda)  - lambda J_nu(Sigma) J'_nu(lambda)

and the sheet-m function is (-1)^(m nu) (F0 - 2 m G0), whose zeros in the
upper half-plane (in sheet-0 coordinates) are the resonances on sheet m.

Zeros are found three independent ways: Newton refinement from asymptotic
seeds, argument-principle winding counts along contours, and Rouché
rectangles in the rho-plane certifying exactly one zero near each model
zero.  The test suite requires the three to agree.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import asymptotics as asym
from . import surface_maps as sm
from .errors import ConvergenceError, DomainError
from .scaled import ScaledComplex, dd_diff_of_products
from .special_functions import (
    bessel_j,
    bessel_j_prime,
    continue_bessel,
    continue_hankel1,
    hankel1,
    hankel1_prime,
)

logger = logging.getLogger(__name__)

FREE_MAGNITUDE = 2.0 / math.pi
#: Scaled-residual acceptance threshold for converged zeros.
RESIDUAL_TOL = 1e-8
#: Cancellation severity (decimal digits) above which the regular wronskian
#: carries a precision warning.
CANCELLATION_WARN_DIGITS = 6.0
#: Order above which the regular-wronskian difference switches to the
#: compensated double-double product path.
COMPENSATED_ORDER = 150.0

# Plain-double vectorized evaluation is safe while exp(2|Im lambda|) and the
# raw Bessel magnitudes stay in range; beyond this the scalar scaled path
# must be used.
_GRID_IMAG_LIMIT = 300.0


def _spherical_multiplicity(ell: int, d: int) -> int:
    if ell < 0 or d < 2:
        raise DomainError("need ell >= 0 and d >= 2")
    first = math.comb(ell + d - 1, ell)
    second = math.comb(ell + d - 3, ell - 2) if ell >= 2 else 0
    return first - second


# ---------------------------------------------------------------------------
# Domain types.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepPotential:
    """Barrier of height v0 on the unit ball in even dimension d.

    v0 = 0 is accepted for the free-case validation suites only; the search
    entry points reject it.
    """

    d: int
    v0: float

    #: The barrier radius is fixed at 1; lengths are measured in units of it.
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.d < 2 or self.d % 2:
            raise DomainError(f"dimension must be even and >= 2, got {self.d}")
        if self.v0 < 0:
            raise DomainError(f"barrier height must be >= 0, got {self.v0}")
        if self.radius != 1.0:
            raise DomainError("only the unit barrier radius is supported")


@dataclass(frozen=True)
class Channel:
    """One angular sector: order nu = ell + (d-2)/2 with its harmonic weight."""

    ell: int
    d: int
    nu: float
    multiplicity: int

    def __post_init__(self) -> None:
        if self.ell < 0:
            raise DomainError("ell must be >= 0")
        if self.d < 2 or self.d % 2:
            raise DomainError("d must be even and >= 2")
        expected_nu = self.ell + (self.d - 2) // 2
        if self.nu != expected_nu:
            raise DomainError(f"nu must equal ell + (d-2)/2 = {expected_nu}")
        if self.multiplicity != _spherical_multiplicity(self.ell, self.d):
            raise DomainError("multiplicity inconsistent with (ell, d)")

    @staticmethod
    def open(ell: int, d: int) -> "Channel":
        return Channel(ell=ell, d=d, nu=float(ell + (d - 2) // 2),
                       multiplicity=_spherical_multiplicity(ell, d))


@dataclass(frozen=True)
class SheetPoint:
    """A point of the logarithmic surface: modulus and unreduced argument."""

    modulus: float
    argument: float

    def __post_init__(self) -> None:
        if not self.modulus > 0:
            raise DomainError("modulus must be positive")

    @property
    def sheet(self) -> int:
        return math.floor(self.argument / math.pi)


@dataclass(frozen=True)
class ResonanceZero:
    """A converged zero of the sheet characteristic function.

    ``lambda0`` is the sheet-0 coordinate (Im > 0); ``lambda_on_sheet`` is
    the same point written on sheet m of the surface.  ``residual`` is
    |F_m| at convergence in units of the free magnitude 2/pi.
    """

    lambda0: complex
    sheet: int
    channel: Channel
    residual: float
    seed_k: int | None
    lambda_on_sheet: SheetPoint

    def __post_init__(self) -> None:
        if not self.lambda0.imag > 0:
            raise DomainError("resonance coordinate must have Im > 0")
        if self.residual < 0:
            raise DomainError("residual must be nonnegative")
        if self.lambda_on_sheet.sheet != self.sheet:
            raise DomainError("surface point lies on the wrong sheet")

    @staticmethod
    def build(lambda0: complex, sheet: int, channel: Channel,
              residual: float, seed_k: int | None) -> "ResonanceZero":
        surface = SheetPoint(modulus=abs(lambda0),
                             argument=cmath.phase(lambda0) + sheet * math.pi)
        return ResonanceZero(lambda0=lambda0, sheet=sheet, channel=channel,
                             residual=residual, seed_k=seed_k,
                             lambda_on_sheet=surface)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned closed rectangle in a complex plane."""

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self) -> None:
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise DomainError("rectangle must have positive width and height")

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.re_lo, self.im_lo), complex(self.re_hi, self.im_lo),
                complex(self.re_hi, self.im_hi), complex(self.re_lo, self.im_hi))

    def contains(self, w: complex) -> bool:
        return self.re_lo <= w.real <= self.re_hi and self.im_lo <= w.imag <= self.im_hi

    def shifted(self, delta: complex) -> "Rectangle":
        return Rectangle(self.re_lo + delta.real, self.re_hi + delta.real,
                         self.im_lo + delta.imag, self.im_hi + delta.imag)

    def boundary_points(self, per_side: int) -> np.ndarray:
        c = self.corners()
        sides = []
        for a, b in zip(c, c[1:] + c[:1]):
            sides.append(a + (b - a) * np.arange(per_side) / per_side)
        return np.concatenate(sides)


@dataclass(frozen=True)
class RoucheBox:
    """A rho-plane rectangle on which |f - g| < |g| certifies one zero."""

    k: int
    alpha: float
    corners: tuple[complex, complex, complex, complex]
    nu: float
    m: int
    v0: float
    rho_k: complex

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise DomainError("alpha must exceed 1")


# ---------------------------------------------------------------------------
# Exact evaluators.
# ---------------------------------------------------------------------------


def interior_momentum(lam: complex, v0: float) -> complex:
    """Sigma(lambda) = lambda (1 - v0/lambda^2)^(1/2), principal root with
    real-axis values taken as upper-boundary limits; invariant under the
    sheet rotation lambda -> -lambda."""
    lam = complex(lam)
    if lam == 0:
        raise DomainError("Sigma undefined at lambda = 0")
    w = 1.0 - v0 / (lam * lam)
    if w.imag == 0.0:
        w = complex(w.real, 0.0)  # collapse -0.0: upper-boundary limit
    return lam * cmath.sqrt(w)


def outgoing_wronskian(nu: float, lam: complex, v0: float) -> complex:
    """F0: the sheet-0 characteristic function; equals -2i/pi when v0 = 0."""
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 outside the evaluator domain")
    s = interior_momentum(lam, v0)
    jp_s = bessel_j_prime(nu, s) * s
    h = hankel1(nu, lam)
    j_s = bessel_j(nu, s) * lam
    hp = hankel1_prime(nu, lam)
    return (jp_s * h - j_s * hp).to_complex()


def regular_wronskian_info(nu: float, lam: complex, v0: float) -> tuple[complex, float, bool]:
    """G0 with its cancellation diagnosis.

    Returns (value, cancellation_digits, warning): the difference of the two
    scaled products loses ``cancellation_digits`` decimal digits; the flag is
    set above CANCELLATION_WARN_DIGITS.  For nu > COMPENSATED_ORDER the
    difference is reassembled with error-free transforms.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 outside the evaluator domain")
    if v0 == 0:
        # The two products coincide identically; the difference is 0 in
        # structure, not merely numerically.
        return 0j, 0.0, False
    s = interior_momentum(lam, v0)
    a = bessel_j_prime(nu, s) * s
    b = bessel_j(nu, lam)
    c = bessel_j(nu, s) * lam
    d = bessel_j_prime(nu, lam)
    t1 = a * b
    t2 = c * d
    diff = t1 - t2
    top = max(t1.log_abs(), t2.log_abs())
    if diff.is_zero():
        cancel = math.inf if top > -math.inf else 0.0
    else:
        cancel = max(0.0, (top - diff.log_abs()) / math.log(10.0))
    if nu > COMPENSATED_ORDER and not (t1.is_zero() or t2.is_zero()):
        shared = max(t1.exponent, t2.exponent)
        a_m = a.mantissa * math.exp(a.exponent + b.exponent - shared)
        c_m = c.mantissa * math.exp(c.exponent + d.exponent - shared)
        mantissa = dd_diff_of_products(a_m, b.mantissa, c_m, d.mantissa)
        diff = ScaledComplex.from_complex(mantissa, shared)
    warn = cancel > CANCELLATION_WARN_DIGITS
    if warn:
        logger.warning("regular wronskian lost %.1f digits at nu=%s lambda=%s",
                       cancel, nu, lam)
    return diff.to_complex(), cancel, warn


def regular_wronskian(nu: float, lam: complex, v0: float) -> complex:
    """G0: the companion difference with J in place of H1; 0 when v0 = 0."""
    return regular_wronskian_info(nu, lam, v0)[0]


def _sheet_sign(m: int, nu: float) -> float:
    n = round(nu)
    if abs(nu - n) > 1e-12:
        raise DomainError("sheet formulas require an integer order")
    return -1.0 if (m * n) % 2 else 1.0


def sheet_wronskian(m: int, nu: float, lam: complex, v0: float) -> complex:
    """F_m = (-1)^(m nu) (F0 - 2 m G0) in sheet-0 coordinates."""
    if m == 0:
        return outgoing_wronskian(nu, lam, v0)
    sign = _sheet_sign(m, nu)
    return sign * (outgoing_wronskian(nu, lam, v0)
                   - 2.0 * m * regular_wronskian(nu, lam, v0))


def sheet_wronskian_continued(m: int, nu: float, lam: complex, v0: float) -> complex:
    """F_m evaluated the long way round: rotate lambda by m half-turns and
    push the rotation through the continuation rules for J, H1 and their
    derivatives.  Must agree with sheet_wronskian to 1e-10 relative."""
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 outside the evaluator domain")
    if m == 0:
        return outgoing_wronskian(nu, lam, v0)
    n = round(nu)
    if abs(nu - n) > 1e-12:
        raise DomainError("sheet continuation requires an integer order")
    s = interior_momentum(lam, v0)  # invariant under the rotation
    h = hankel1(nu, lam).to_complex()
    hp = hankel1_prime(nu, lam).to_complex()
    j = bessel_j(nu, lam).to_complex()
    jp = bessel_j_prime(nu, lam).to_complex()
    h_rot = continue_hankel1(n, m, h, j)
    hp_rot = continue_hankel1(n, m, hp, jp, derivative=True)
    lam_rot = lam if m % 2 == 0 else -lam
    jp_s = (bessel_j_prime(nu, s) * s).to_complex()
    j_s = bessel_j(nu, s).to_complex()
    return jp_s * h_rot - lam_rot * j_s * hp_rot


def sheet_wronskian_prime(m: int, nu: float, lam: complex, v0: float) -> complex:
    """Analytic d/d lambda of sheet_wronskian.

    Derived from the Bessel equation and the Wronskian of the interior pair:
    d F0 = v0 [ (nu^2/(Sigma^2 lambda)) J(Sigma) H(lambda) - (1/Sigma) J'(Sigma) H'(lambda) ],
    d G0 the same with H -> J; identically 0 when v0 = 0.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("lambda = 0 outside the evaluator domain")
    if v0 == 0:
        return 0j
    s = interior_momentum(lam, v0)
    if s == 0:
        raise DomainError("derivative undefined at the interior turning point Sigma = 0")
    j_s = bessel_j(nu, s)
    jp_s = bessel_j_prime(nu, s)
    h = hankel1(nu, lam)
    hp = hankel1_prime(nu, lam)
    nu2 = nu * nu
    d_f0 = (v0 * ((j_s * h) * (nu2 / (s * s * lam)) - (jp_s * hp) * (1.0 / s))).to_complex()
    if m == 0:
        return d_f0
    sign = _sheet_sign(m, nu)
    j = bessel_j(nu, lam)
    jp = bessel_j_prime(nu, lam)
    d_g0 = (v0 * ((j_s * j) * (nu2 / (s * s * lam)) - (jp_s * jp) * (1.0 / s))).to_complex()
    return sign * (d_f0 - 2.0 * m * d_g0)


def free_sheet_constant(m: int, nu: float) -> complex:
    """The constant value of the sheet function when v0 = 0."""
    sign = 1.0 if m == 0 else _sheet_sign(m, nu)
    return sign * (-2j / math.pi)


def spherical_wronskian(nu: float, lam: complex, v0: float, d: int) -> complex:
    """The radial-solution Wronskian at the barrier radius, in dimension d.

    Equals (pi^2/(4 Sigma lambda))^((d-2)/2) times the outgoing wronskian:
    the spherical prefactors never vanish, so the zero set is unchanged.
    """
    if d < 2 or d % 2:
        raise DomainError("dimension must be even and >= 2")
    lam = complex(lam)
    s = interior_momentum(lam, v0)
    power = (d - 2) / 2.0
    prefactor = (math.pi ** 2 / (4.0 * s * lam)) ** power
    return prefactor * outgoing_wronskian(nu, lam, v0)


# ---------------------------------------------------------------------------
# Vectorized grid evaluation (plain doubles; for contours and quadrature).
# ---------------------------------------------------------------------------


def sheet_wronskian_grid(m: int, nu: float, lams: np.ndarray, v0: float) -> np.ndarray:
    """F_m on an array of sheet-0 points, via scipy ufuncs in plain doubles.

    Valid while the exponential envelopes stay in double range; enforced by
    requiring |Im lambda| <= 300 and |lambda| <= 5000.
    """
    lams = np.asarray(lams, dtype=complex)
    if lams.size and (np.max(np.abs(lams.imag)) > _GRID_IMAG_LIMIT
                      or np.max(np.abs(lams)) > 5000.0):
        raise DomainError("grid evaluation outside the plain-double envelope")
    if np.any(lams == 0):
        raise DomainError("lambda = 0 outside the evaluator domain")
    w = 1.0 - v0 / (lams * lams)
    w = np.where(w.imag == 0.0, w.real + 0j, w)
    s = lams * np.sqrt(w)
    j_s = _sp.jv(nu, s)
    jp_s = _sp.jv(nu - 1.0, s) - (nu / s) * j_s
    h = _sp.hankel1(nu, lams)
    hp = _sp.hankel1(nu - 1.0, lams) - (nu / lams) * h
    f0 = s * jp_s * h - lams * j_s * hp
    if m == 0:
        out = f0
    else:
        j = _sp.jv(nu, lams)
        jp = _sp.jv(nu - 1.0, lams) - (nu / lams) * j
        g0 = s * jp_s * j - lams * j_s * jp
        out = _sheet_sign(m, nu) * (f0 - 2.0 * m * g0)
    if not np.all(np.isfinite(out)):
        raise DomainError("grid evaluation left the double range")
    return out


# ---------------------------------------------------------------------------
# Newton refinement from asymptotic seeds.
# ---------------------------------------------------------------------------

_NEWTON_MAX_STEPS = 50
_NEWTON_STEP_TOL = 1e-11


def _newton_zero(m: int, nu: float, v0: float, start: complex) -> tuple[complex, float]:
    """Refine a zero of the sheet function from ``start``; returns
    (lambda, scaled residual) or raises ConvergenceError."""
    lam = complex(start)
    f = sheet_wronskian(m, nu, lam, v0)
    for _ in range(_NEWTON_MAX_STEPS):
        fp = sheet_wronskian_prime(m, nu, lam, v0)
        if fp == 0:
            raise ConvergenceError(f"vanishing derivative at {lam}")
        step = f / fp
        trial = lam - step
        f_trial = sheet_wronskian(m, nu, trial, v0)
        halvings = 0
        while abs(f_trial) > abs(f) and halvings < 10:
            step *= 0.5
            trial = lam - step
            f_trial = sheet_wronskian(m, nu, trial, v0)
            halvings += 1
        lam, f = trial, f_trial
        if abs(step) < _NEWTON_STEP_TOL * (1.0 + abs(lam)):
            residual = abs(f) / FREE_MAGNITUDE
            if residual < RESIDUAL_TOL:
                return lam, residual
            raise ConvergenceError(
                f"stalled with residual {residual:.2e} at {lam}")
    raise ConvergenceError(f"no convergence from {start} in {_NEWTON_MAX_STEPS} steps")


def find_channel_zeros(channel: Channel, m: int, v0: float,
                       spec: sm.RegionSpec, r_max: float,
                       failures: list | None = None) -> list[ResonanceZero]:
    """Newton zeros of the sheet function for one channel, from the model
    seed lattice; deduplicated at half the model spacing and sorted by the
    rho-plane height of lambda/nu.

    Per-seed failures are appended to ``failures`` (if given) and logged; a
    ConvergenceError is raised only when fewer than half the seeds converge.
    """
    if m == 0:
        raise DomainError("the physical sheet carries no resonances")
    if not v0 > 0:
        raise DomainError("zero search requires a positive barrier")
    if spec is None:
        spec = sm.RegionSpec.for_margin(0.1)
    nu = channel.nu
    if nu < 4:
        raise DomainError("seeded search needs nu >= 4; use the contour path below that")
    seed_list = asym.seeds(nu, m, v0, spec)
    found: list[tuple[complex, float, int]] = []
    n_failed = 0
    for seed in seed_list:
        start = nu * seed.z_k
        try:
            lam, residual = _newton_zero(m, nu, v0, start)
        except (ConvergenceError, DomainError) as exc:
            n_failed += 1
            if failures is not None:
                failures.append((seed.k, str(exc)))
            logger.warning("seed k=%d (nu=%s, m=%d) failed: %s", seed.k, nu, m, exc)
            continue
        if lam.imag <= 0 or abs(lam) > r_max:
            continue
        found.append((lam, residual, seed.k))
    if seed_list and n_failed > len(seed_list) / 2:
        raise ConvergenceError(
            f"{n_failed}/{len(seed_list)} seeds failed for nu={nu}, m={m}")
    # Deduplicate: two seeds that ran into the same zero sit closer than half
    # the model spacing pi |dz/drho| in lambda.
    deduped: list[tuple[complex, float, int]] = []
    for lam, residual, k in found:
        z = lam / nu
        spacing = math.pi * abs(z / sm.sqrt_one_minus_z2(z))
        duplicate = False
        for prev, _, _ in deduped:
            if abs(lam - prev) < 0.5 * spacing:
                duplicate = True
                break
        if not duplicate:
            deduped.append((lam, residual, k))
    deduped.sort(key=lambda item: sm.rho(item[0] / nu).imag)
    return [ResonanceZero.build(lam, m, channel, residual, k)
            for lam, residual, k in deduped]


# ---------------------------------------------------------------------------
# Argument-principle counting.
# ---------------------------------------------------------------------------

_MIN_BOUNDARY_MODULUS = 1e-6 * FREE_MAGNITUDE
_MAX_CONTOUR_POINTS = 400_000


def _winding_number(m: int, nu: float, v0: float, contour: np.ndarray) -> int:
    """Winding of the sheet function along a closed polyline.

    Refines segments by midpoint insertion until every phase step is below
    pi/2, then sums the steps.  Raises ConvergenceError when the boundary
    passes too close to a zero or the refinement budget is exhausted.
    """
    p = np.asarray(contour, dtype=complex)
    v = sheet_wronskian_grid(m, nu, p, v0)
    if np.min(np.abs(v)) < _MIN_BOUNDARY_MODULUS:
        raise ConvergenceError("contour passes too close to a zero")
    # Wrapped phase steps alone can alias a full 2 pi slip to zero, so a
    # segment is also refined when the modulus jumps by more than a factor
    # e, or when it is long compared to its distance from the origin: the
    # characteristic function carries a |lambda|^(-nu)-type singular factor
    # there whose phase rate nu/|lambda| is known in advance.
    phase_scale = max(nu, 1.0)

    def refine(p: np.ndarray, v: np.ndarray):
        while True:
            np_next = np.roll(p, -1)
            nv_next = np.roll(v, -1)
            steps = np.angle(nv_next / v)
            seg = np.abs(np_next - p)
            origin_dist = np.maximum(np.minimum(np.abs(p), np.abs(np_next)),
                                     1e-30)
            mod_jump = np.abs(np.log(np.abs(nv_next) / np.abs(v)))
            suspicious = (np.abs(steps) >= math.pi / 2) | (mod_jump >= 1.0) \
                | (phase_scale * seg / origin_dist >= 1.2)
            bad = np.flatnonzero(suspicious)
            if bad.size == 0:
                return p, v, float(steps.sum() / (2.0 * math.pi))
            if p.size + bad.size > _MAX_CONTOUR_POINTS:
                raise ConvergenceError("contour refinement budget exhausted")
            mids = (p[bad] + np_next[bad]) / 2.0
            mid_vals = sheet_wronskian_grid(m, nu, mids, v0)
            if np.min(np.abs(mid_vals)) < _MIN_BOUNDARY_MODULUS:
                raise ConvergenceError("contour passes too close to a zero")
            p = np.insert(p, bad + 1, mids)
            v = np.insert(v, bad + 1, mid_vals)

    p, v, total = refine(p, v)
    # A converged refinement can still hide a whole-turn slip inside one
    # segment, so the count is only accepted once it survives a doubling
    # of the polyline.
    for _ in range(5):
        mids = (p + np.roll(p, -1)) / 2.0
        if 2 * p.size > _MAX_CONTOUR_POINTS:
            raise ConvergenceError("contour refinement budget exhausted")
        mid_vals = sheet_wronskian_grid(m, nu, mids, v0)
        if np.min(np.abs(mid_vals)) < _MIN_BOUNDARY_MODULUS:
            raise ConvergenceError("contour passes too close to a zero")
        p2 = np.empty(2 * p.size, dtype=complex)
        v2 = np.empty(2 * p.size, dtype=complex)
        p2[0::2], p2[1::2] = p, mids
        v2[0::2], v2[1::2] = v, mid_vals
        p2, v2, total2 = refine(p2, v2)
        w1, w2 = round(total), round(total2)
        if (abs(total - w1) <= 0.05 and abs(total2 - w2) <= 0.05
                and w1 == w2):
            return int(w1)
        p, v, total = p2, v2, total2
    raise ConvergenceError(f"winding failed to stabilise (last {total:.4f})")


def count_zeros_box(nu: float, m: int, v0: float, box: Rectangle,
                    per_side: int = 64) -> int:
    """Number of zeros of the sheet function inside a lambda-plane rectangle,
    by adaptive phase tracking along its boundary.

    If the boundary runs too close to a zero the box is retried once after
    a small diagonal shift; a second failure propagates.
    """
    try:
        return _winding_number(m, nu, v0, box.boundary_points(per_side))
    except ConvergenceError:
        shift = 1e-3 * box.diameter * (1.0 + 1.0j) / math.sqrt(2.0)
        logger.info("retrying box %s shifted by %s", box, shift)
        return _winding_number(m, nu, v0, box.shifted(shift).boundary_points(per_side))


def _rho_rectangle_contour(nu: float, rect: Rectangle, per_side: int) -> np.ndarray:
    """Map a rho-plane rectangle boundary to the lambda plane via the
    inverse exponent map, warm-starting each inversion at its neighbour."""
    rhos = Rectangle(rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi).boundary_points(per_side)
    z = None
    out = []
    for r in rhos:
        seed = z if z is not None else asym._nearest_boundary_point(r.imag)
        z = sm.inverse_rho(complex(r), seed)
        out.append(nu * z)
    return np.array(out)


def count_zeros_rho_rectangle(nu: float, m: int, v0: float, rect: Rectangle,
                              per_side: int = 96) -> int:
    """Zero count inside the lambda-image of a rho-plane rectangle (the
    covering region used to cross-check the seeded search)."""
    contour = _rho_rectangle_contour(nu, rect, per_side)
    return _winding_number(m, nu, v0, contour)


def covering_rectangle(zeros: list[ResonanceZero], nu: float,
                       alpha: float = 1.5) -> Rectangle:
    """The rho-plane rectangle enclosing all given zeros' images with half a
    model spacing of vertical slack and the Rouché depth on the left."""
    if not zeros:
        raise DomainError("no zeros to cover")
    heights = [sm.rho(rz.lambda0 / nu).imag for rz in zeros]
    pad = math.pi / (2.0 * nu)
    depth = alpha * math.log(nu) / nu
    return Rectangle(-depth, 1e-9, min(heights) - pad, max(heights) + pad)


# ---------------------------------------------------------------------------
# Rouché rectangles.
# ---------------------------------------------------------------------------


def rescaled_characteristic(z: complex, nu: float, m: int, v0: float) -> complex:
    """The exact function compared against the model on Rouché contours:

        (i pi / 2) nu^2 e^{2 nu rho(z)} (F0 - 2 m G0)(nu z).

    The normalization is chosen so that the dominant exponential term tracks
    the model's nu^2 e^{2 nu rho} to relative O(1/nu) uniformly over the
    certification boxes ((i pi/2) F0 = 1 + O(1/nu) there).  Weighting by an
    extra (1-z^2) would instead distort that term by an O(1) factor near the
    eye corner (z^2 ~ -z0^2) and the certificate inequality measurably fails
    there; with this normalization every interior box holds at desk scale.
    """
    r = sm.rho(z)
    bracket = outgoing_wronskian(nu, nu * z, v0) - 2.0 * m * regular_wronskian(nu, nu * z, v0)
    return 0.5j * math.pi * nu * nu * cmath.exp(2.0 * nu * r) * bracket


def build_rouche_box(nu: float, m: int, v0: float, k: int, alpha: float = 1.5,
                     spec: sm.RegionSpec | None = None) -> RoucheBox:
    """Rouché rectangle around the model zero rho_k: right side on the
    imaginary axis, left side at depth alpha log(nu)/nu, horizontal sides at
    the midpoints between consecutive model zeros."""
    if nu < 20:
        raise DomainError("Rouché certification needs nu >= 20")
    if alpha <= 1:
        raise DomainError("alpha must exceed 1")
    if spec is None:
        spec = sm.RegionSpec.for_margin(0.1)
    rho_k = asym.model_zero(k, nu, m, v0)
    h = spec.h_eps
    if not (-math.pi + 2.0 * h < rho_k.imag < -2.0 * h):
        raise DomainError(f"seed k={k} is not interior at margin {spec.epsilon}")
    depth = alpha * math.log(nu) / nu
    half = math.pi / (2.0 * nu)
    lo, hi = rho_k.imag - half, rho_k.imag + half
    corners = (complex(-depth, lo), complex(0.0, lo),
               complex(0.0, hi), complex(-depth, hi))
    return RoucheBox(k=k, alpha=alpha, corners=corners, nu=nu, m=m, v0=v0,
                     rho_k=rho_k)


def verify_rouche_box(box: RoucheBox, samples: int = 256) -> tuple[float, bool]:
    """Evaluate min(|g| - |f - g|) over >= ``samples`` boundary points of the
    box, where g is the comparison model and f the rescaled exact function;
    a positive minimum certifies exactly one zero inside."""
    per_side = max(64, (samples + 3) // 4)
    a, b, c, d = box.corners
    sides = []
    for p, q in ((a, b), (b, c), (c, d), (d, a)):
        sides.append(p + (q - p) * np.arange(per_side) / per_side)
    rhos = np.concatenate(sides)
    margin = math.inf
    z = None
    for r in rhos:
        seed = z if z is not None else asym._nearest_boundary_point(r.imag)
        z = sm.inverse_rho(complex(r), seed)
        g = asym.comparison_model(complex(r), box.nu, box.m, box.v0)
        f = rescaled_characteristic(z, box.nu, box.m, box.v0)
        margin = min(margin, abs(g) - abs(f - g))
    return margin, margin > 0


def _count_with_retries(nu: float, m: int, v0: float, rect: Rectangle,
                        per_side: int) -> int:
    try:
        return count_zeros_box(nu, m, v0, rect, per_side)
    except ConvergenceError:
        return count_zeros_box(nu, m, v0, rect, 2 * per_side)


_SPLIT_FRACTIONS = ((0.5, 0.5), (0.45, 0.55), (0.57, 0.44), (0.52, 0.61))


def _split_counted(nu: float, m: int, v0: float, rect: Rectangle,
                   per_side: int, expected: int) -> list[tuple[Rectangle, int]]:
    """Split a rectangle in four and count each child, nudging the split
    lines until the child counts reconcile with the parent count.

    Reconciliation is the safeguard against zeros sitting so close to a
    split line that the shifted-retry inside the child counts drops them:
    a partition whose counts do not sum to the parent's is rejected and
    the split lines are moved.
    """
    last_error: Exception | str | None = None
    for fx, fy in _SPLIT_FRACTIONS:
        xm = rect.re_lo + fx * (rect.re_hi - rect.re_lo)
        ym = rect.im_lo + fy * (rect.im_hi - rect.im_lo)
        children = [Rectangle(rect.re_lo, xm, rect.im_lo, ym),
                    Rectangle(xm, rect.re_hi, rect.im_lo, ym),
                    Rectangle(rect.re_lo, xm, ym, rect.im_hi),
                    Rectangle(xm, rect.re_hi, ym, rect.im_hi)]
        try:
            counted = [(child, _count_with_retries(nu, m, v0, child, per_side))
                       for child in children]
        except ConvergenceError as exc:
            last_error = exc
            continue
        total = sum(c for _, c in counted)
        if total == expected:
            return counted
        last_error = f"child counts {total} != parent {expected}"
    raise ConvergenceError(f"could not split {rect}: {last_error}")


def contour_channel_zeros(channel: Channel, m: int, v0: float, r_max: float,
                          failures: list | None = None,
                          im_floor: float = 0.02) -> list[ResonanceZero]:
    """Exhaustive zero search for one channel over the upper half-disk
    |lambda| <= r_max, by rectangle subdivision with argument-principle
    counts and Newton polishing of isolated zeros.

    This is the only search path for nu < 4 (no asymptotic seeds there) and
    the capture path for zero families away from the eye boundary, such as
    the strings that hug the real axis.  Zeros carry seed_k = None.
    """
    if m == 0:
        raise DomainError("the physical sheet carries no resonances")
    if not v0 > 0:
        raise DomainError("zero search requires a positive barrier")
    nu = channel.nu
    im_cap = max(5.0, 0.8 * nu + 4.0, 0.6 * math.log(max(r_max, 3.0)) + 4.0)
    re_pad = r_max + 2.0
    tile = 12.0
    # Keep every contour at least 0.3 away from the origin: the outgoing
    # factor is singular at lambda = 0, which both poisons winding numbers
    # on contours passing nearby and prevents zeros from accumulating
    # there, so the small notch below height 0.35 needs no search.
    notch = 0.3
    tiles: list[Rectangle] = [Rectangle(-notch, notch, 0.35, im_cap)]
    for sign in (-1.0, 1.0):
        lo, hi = notch, re_pad
        n_tiles = max(1, math.ceil((hi - lo) / tile))
        edges = np.linspace(lo, hi, n_tiles + 1)
        for x0, x1 in zip(edges[:-1], edges[1:]):
            a, b = sorted((sign * float(x0), sign * float(x1)))
            tiles.append(Rectangle(a, b, im_floor, im_cap))
    pending: list[tuple[Rectangle, int]] = []
    for rect in tiles:
        dx = min(abs(rect.re_lo), abs(rect.re_hi))
        if math.hypot(dx, rect.im_lo) > r_max + 1.0:
            continue  # tile cannot intersect the half-disk
        try:
            n = _count_with_retries(nu, m, v0, rect, 64)
        except ConvergenceError as exc:
            if failures is not None:
                failures.append((rect, str(exc)))
            logger.warning("unresolvable tile %s: %s", rect, exc)
            continue
        if n:
            pending.append((rect, n))
    accepted: list[tuple[complex, float]] = []
    while pending:
        rect, n = pending.pop()
        center = complex(0.5 * (rect.re_lo + rect.re_hi),
                         0.5 * (rect.im_lo + rect.im_hi))
        if n == 1 and rect.diameter <= 1.0:
            try:
                lam, residual = _newton_zero(m, nu, v0, center)
            except (ConvergenceError, DomainError):
                lam, residual = None, math.nan
            pad = 0.25 * rect.diameter
            inside = lam is not None and \
                Rectangle(rect.re_lo - pad, rect.re_hi + pad,
                          max(rect.im_lo - pad, 1e-9), rect.im_hi + pad).contains(lam)
            if inside and lam.imag > 0:
                accepted.append((lam, residual))
                continue
            if rect.diameter <= 0.02:
                # Winding certifies a zero here even though polishing failed;
                # keep the center estimate and flag it.
                scaled = abs(sheet_wronskian(m, nu, center, v0)) / FREE_MAGNITUDE
                accepted.append((center, scaled))
                if failures is not None:
                    failures.append((rect, "unpolished zero estimate"))
                continue
        elif n >= 1 and rect.diameter <= 0.02:
            scaled = abs(sheet_wronskian(m, nu, center, v0)) / FREE_MAGNITUDE
            for _ in range(n):
                accepted.append((center, scaled))
            if failures is not None:
                failures.append((rect, f"cluster of {n} unresolved"))
            continue
        try:
            children = _split_counted(nu, m, v0, rect, 32, n)
        except ConvergenceError as exc:
            if failures is not None:
                failures.append((rect, str(exc)))
            logger.warning("dropping unresolvable rectangle %s: %s", rect, exc)
            continue
        for child, c in children:
            if c:
                pending.append((child, c))
    # Deduplicate polished zeros that drifted across leaf borders.
    unique: list[tuple[complex, float]] = []
    for lam, residual in sorted(accepted, key=lambda p: (p[0].real, p[0].imag)):
        if any(abs(lam - q) < 1e-6 * (1.0 + abs(lam)) for q, _ in unique):
            continue
        unique.append((lam, residual))
    return [ResonanceZero.build(lam, m, channel, residual, None)
            for lam, residual in unique
            if abs(lam) <= r_max and lam.imag > 0]


def rouche_box_zero_count(box: RoucheBox, per_side: int = 96) -> int:
    """Independent winding count of the sheet function over the lambda-image
    of the box (should be exactly 1 when the certificate holds)."""
    rect = Rectangle(box.corners[0].real, box.corners[1].real + 1e-12,
                     box.corners[0].imag, box.corners[2].imag)
    return count_zeros_rho_rectangle(box.nu, box.m, box.v0, rect, per_side)
