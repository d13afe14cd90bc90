"""Conformal geometry of the eye-shaped region and its exponent map.

The scaled spectral variable z = lambda/nu lives near the closed eye-shaped
region K bounded by the curves

    z(t) = +-sqrt(t*coth(t) - t^2) + i*sqrt(t^2 - t*tanh(t)),   0 <= t <= t0,

where t0 is the positive root of t = coth(t).  The exponent map

    rho(z) = log((1 + sqrt(1-z^2))/z) - sqrt(1-z^2)

(principal branches throughout, valid on the upper half-plane away from the
branch points +-1 together with the real interval (0,1)) sends the upper
boundary of K onto the segment (0, -i*pi) of the imaginary axis and the
interval (0,1) onto the positive reals.  zeta = (3*rho/2)^(2/3) and the
amplitude functions phi, psi, chi feed the uniform large-order asymptotics.

Everything here is pure; the boundary polyline is a cached immutable table.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

_BRANCH_POINT_RADIUS = 1e-8


# ---------------------------------------------------------------------------
# The corner constants: t0 (root of t = coth t) and z0 = sqrt(t0^2 - 1).
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def corner_parameter() -> float:
    """The positive root t0 of t*tanh(t) = 1, by bisection to 1e-14."""
    lo, hi = 1.0, 1.5
    f = lambda t: t * math.tanh(t) - 1.0
    assert f(lo) < 0 < f(hi)
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def corner_height() -> float:
    """z0 = sqrt(t0^2 - 1): the eye's top corner is at i*z0."""
    t0 = corner_parameter()
    return math.sqrt(t0 * t0 - 1.0)


@dataclass(frozen=True)
class RegionSpec:
    """Working-region parameters: the margin strip around the upper boundary
    of the eye, and the end-segment height excluded in the rho-plane."""

    epsilon: float
    h_eps: float
    t0: float
    z0: float

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        if not 0.0 < self.h_eps < math.pi / 4.0:
            raise DomainError("h_eps must lie in (0, pi/4)")

    @staticmethod
    def for_margin(epsilon: float) -> "RegionSpec":
        """Standard construction: end-segment height h = 2*epsilon."""
        return RegionSpec(epsilon=float(epsilon), h_eps=2.0 * float(epsilon),
                          t0=corner_parameter(), z0=corner_height())


# ---------------------------------------------------------------------------
# The map rho and its companions.
# ---------------------------------------------------------------------------


def _reject_near_branch_points(z: complex) -> None:
    if 0.0 < abs(z - 1.0) <= _BRANCH_POINT_RADIUS or 0.0 < abs(z + 1.0) <= _BRANCH_POINT_RADIUS:
        raise DomainError(f"z = {z} too close to a branch point +-1")


def sqrt_one_minus_z2(z: complex) -> complex:
    """Principal branch of sqrt(1 - z^2), the branch used everywhere here."""
    return cmath.sqrt(1.0 - z * z)


def rho(z: complex) -> complex:
    """Exponent map rho(z) on the closed upper half-plane minus {0}.

    Real positive on (0,1); maps the upper eye boundary onto (0, -i*pi);
    z = 1 returns the limit value 0 exactly.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("rho is singular at z = 0")
    if z.imag < 0:
        raise DomainError("rho is defined on the closed upper half-plane")
    if z == 1:
        return 0j
    _reject_near_branch_points(z)
    w = sqrt_one_minus_z2(z)
    return cmath.log((1.0 + w) / z) - w


def rho_prime(z: complex) -> complex:
    """d rho / dz = -sqrt(1-z^2)/z."""
    z = complex(z)
    if z == 0:
        raise DomainError("rho' is singular at z = 0")
    return -sqrt_one_minus_z2(z) / z


@dataclass(frozen=True)
class MapImage:
    """All map quantities at one point, sharing a single branch choice."""

    z: complex
    rho: complex
    zeta: complex
    phi: complex
    chi: complex
    psi: complex
    sqrt1mz2: complex


def _in_map_domain(z: complex) -> bool:
    if z.imag > 0:
        return True
    return z.imag == 0 and 0.0 < z.real < 1.0


def map_image(z: complex) -> MapImage:
    """Populate rho, zeta, phi, chi, psi at z.

    Domain: open upper half-plane plus the real interval (0,1), excluding
    small disks at the branch points +-1.  The real ray z >= 1 (where the
    geometry demands the negative-zeta continuation) is rejected.
    """
    z = complex(z)
    if z == 0 or not _in_map_domain(z):
        raise DomainError(f"z = {z} outside the validated map domain")
    _reject_near_branch_points(z)
    if abs(z - 1.0) <= _BRANCH_POINT_RADIUS or abs(z + 1.0) <= _BRANCH_POINT_RADIUS:
        raise DomainError(f"z = {z} at a branch point")
    w = sqrt_one_minus_z2(z)
    r = cmath.log((1.0 + w) / z) - w
    zt = (1.5 * r) ** (2.0 / 3.0)
    one_minus_z2 = 1.0 - z * z
    phi = (4.0 * zt / one_minus_z2) ** 0.25
    psi = 2.0 / (z * phi)
    chi = (4.0 - z * z * phi ** 6) / (16.0 * zt)
    return MapImage(z=z, rho=r, zeta=zt, phi=phi, chi=chi, psi=psi, sqrt1mz2=w)


def zeta(z: complex) -> complex:
    """zeta(z) = (3 rho(z) / 2)^(2/3), principal 2/3-power."""
    return map_image(z).zeta


def inverse_rho(target: complex, seed: complex) -> complex:
    """Solve rho(z) = target by Newton from ``seed`` (within ~0.5 of a root).

    Uses rho'(z) = -sqrt(1-z^2)/z; converges to |rho(z) - target| < 1e-12
    or raises ConvergenceError after 50 steps.
    """
    z = complex(seed)
    target = complex(target)
    for _ in range(50):
        if z == 0 or abs(z - 1.0) < 1e-13 or abs(z + 1.0) < 1e-13:
            raise ConvergenceError(f"Newton iterate hit a singular point: {z}")
        w = sqrt_one_minus_z2(z)
        value = cmath.log((1.0 + w) / z) - w
        if abs(value - target) < 1e-12:
            if z.imag < 0:
                raise ConvergenceError(f"inverse_rho converged below the real axis: {z}")
            return z
        deriv = -w / z
        step = (value - target) / deriv
        if abs(step) > 0.5:
            step *= 0.5 / abs(step)
        z = z - step
    raise ConvergenceError(
        f"inverse_rho: no convergence to {target} from seed {seed} in 50 steps")


# ---------------------------------------------------------------------------
# The eye boundary.
# ---------------------------------------------------------------------------


def k_boundary(t: float, sign: int = 1) -> complex:
    """Point on the upper eye boundary at curve parameter t in [0, t0].

    sign +1 gives the right half (from +1 up to i*z0), -1 the left half.
    Near t = 0 the coth/tanh combinations are replaced by their Taylor
    series to avoid 0/0 noise.
    """
    t0 = corner_parameter()
    if not -1e-12 <= t <= t0 + 1e-12:
        raise DomainError(f"t = {t} outside [0, t0 = {t0:.6f}]")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    t = min(max(t, 0.0), t0)
    if t < 1e-3:
        t2 = t * t
        re2 = 1.0 - 2.0 * t2 / 3.0 - t2 * t2 / 45.0 + 2.0 * t2 ** 3 / 945.0
        im2 = t2 * t2 / 3.0 - 2.0 * t2 ** 3 / 15.0 + 17.0 * t2 ** 4 / 315.0
    else:
        re2 = t / math.tanh(t) - t * t
        im2 = t * t - t * math.tanh(t)
    return complex(sign * math.sqrt(max(re2, 0.0)), math.sqrt(max(im2, 0.0)))


@lru_cache(maxsize=4)
def boundary_polyline(samples: int = 2048) -> np.ndarray:
    """Immutable polyline along the full upper boundary, +1 -> i*z0 -> -1.

    The parameter t = t0*(2u - u^2) concentrates vertices near the corner
    i*z0 where the curve bends fastest.
    """
    t0 = corner_parameter()
    half = samples // 2
    u = np.linspace(0.0, 1.0, half)
    ts = t0 * (2.0 * u - u * u)
    right = np.array([k_boundary(t, 1) for t in ts])
    left = np.array([k_boundary(t, -1) for t in ts[-2::-1]])
    pts = np.concatenate([right, left])
    pts.setflags(write=False)
    return pts


def distance_to_upper_boundary(z: complex, samples: int = 2048) -> float:
    """Euclidean distance from z to the polyline approximation of the
    upper eye boundary (vertex + segment projection, vectorized)."""
    pts = boundary_polyline(samples)
    a = pts[:-1]
    b = pts[1:]
    ab = b - a
    az = complex(z) - a
    denom = (ab.real ** 2 + ab.imag ** 2)
    s = np.clip((az.real * ab.real + az.imag * ab.imag) / denom, 0.0, 1.0)
    proj = a + s * ab
    return float(np.min(np.abs(complex(z) - proj)))


def omega1_contains(z: complex, spec: RegionSpec) -> bool:
    """Membership in the working region: upper half-plane points within
    ``spec.epsilon`` of the upper eye boundary, outside the epsilon-disks
    at the branch points +-1."""
    z = complex(z)
    if not z.imag > 0:
        return False
    if abs(z - 1.0) <= spec.epsilon or abs(z + 1.0) <= spec.epsilon:
        return False
    return distance_to_upper_boundary(z) < spec.epsilon
