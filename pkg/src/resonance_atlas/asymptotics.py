"""Large-order asymptotic models for the channel characteristic functions.

The exact outgoing/regular wronskians of the engine admit printed leading
truncations after the uniform large-order Bessel/Hankel asymptotics are
pushed through the barrier shift.  This module evaluates exactly those
truncations — nothing beyond the leading printed orders — plus the model
function whose explicit zeros seed the Newton search:

    comparison_model(rho) = nu^2 exp(2 nu rho) - i m V0 / 4,

with zero lattice
    rho_k = log(|m| V0 / 4)/(2 nu) - log(nu)/nu + i (pi/nu)(k + sgn(m)/4).

Error orders are not asserted here; the test suite measures slopes of the
relative deviation against the exact evaluators over a nu-ladder.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .scaled import ScaledComplex
from . import surface_maps as sm

logger = logging.getLogger(__name__)

_TWO_OVER_PI = 2.0 / math.pi

#: Most permissive working-region margin accepted by the leading-order
#: formulas when no explicit RegionSpec is given.
_DEFAULT_MARGIN = 0.3


def _require_region(z: complex, spec: sm.RegionSpec | None) -> None:
    if spec is None:
        spec = sm.RegionSpec.for_margin(_DEFAULT_MARGIN)
    if not sm.omega1_contains(z, spec):
        raise DomainError(f"z = {z} outside the boundary working region")


def f0_leading(nu: float, z: complex, v0: float,
               spec: sm.RegionSpec | None = None) -> complex:
    """Leading truncation of the outgoing wronskian at lambda = nu z.

    Relative deviation from the exact value is O(nu^-2) on the upper eye
    boundary; the v0 = 0 case collapses to the free constant -2i/pi.
    """
    if nu < 4:
        raise DomainError("leading-order formulas need nu >= 4")
    _require_region(z, spec)
    w = sm.sqrt_one_minus_z2(z)
    return (-2j / math.pi) * (1.0 - v0 * w / (2.0 * nu * z * z))


def g0_leading(nu: float, z: complex, v0: float,
               spec: sm.RegionSpec | None = None) -> complex:
    """Leading truncation of the regular wronskian at lambda = nu z.

    The bracket is O(nu^-2) with an O(nu^-3) error, so the relative
    deviation of this truncation is O(nu^-1); vanishes when v0 = 0.
    """
    if nu < 4:
        raise DomainError("leading-order formulas need nu >= 4")
    _require_region(z, spec)
    r = sm.rho(z)
    return cmath.exp(-2.0 * nu * r) / (2.0 * math.pi) \
        * v0 / (2.0 * nu * nu * (1.0 - z * z))


# ---------------------------------------------------------------------------
# Uniform leading terms for the individual special functions.
# ---------------------------------------------------------------------------


def _uniform_image(nu: float, z: complex) -> sm.MapImage:
    if nu < 8:
        raise DomainError("uniform leading terms need nu >= 8")
    if abs(z - 1.0) <= 0.1 or abs(z + 1.0) <= 0.1:
        raise DomainError("uniform leading terms invalid near the turning points")
    return sm.map_image(z)


def uniform_bessel_leading(nu: float, z: complex) -> ScaledComplex:
    """Leading uniform approximation of J_nu(nu z): decays like exp(-nu rho)."""
    mi = _uniform_image(nu, z)
    amp = mi.phi / (2.0 * math.sqrt(math.pi * nu) * mi.zeta ** 0.25)
    return _with_exponential(amp, -nu * mi.rho)


def uniform_bessel_prime_leading(nu: float, z: complex) -> ScaledComplex:
    """Leading uniform approximation of J'_nu(nu z)."""
    mi = _uniform_image(nu, z)
    amp = mi.psi * mi.zeta ** 0.25 / (2.0 * math.sqrt(math.pi * nu))
    return _with_exponential(amp, -nu * mi.rho)


def uniform_hankel_leading(nu: float, z: complex) -> ScaledComplex:
    """Leading uniform approximation of H1_nu(nu z): grows like exp(+nu rho)."""
    mi = _uniform_image(nu, z)
    amp = -1j * mi.phi / (math.sqrt(math.pi * nu) * mi.zeta ** 0.25)
    return _with_exponential(amp, nu * mi.rho)


def uniform_hankel_prime_leading(nu: float, z: complex) -> ScaledComplex:
    """Leading uniform approximation of H1'_nu(nu z)."""
    mi = _uniform_image(nu, z)
    amp = 1j * mi.psi * mi.zeta ** 0.25 / (math.sqrt(math.pi * nu))
    return _with_exponential(amp, nu * mi.rho)


def _with_exponential(amplitude: complex, exponent: complex) -> ScaledComplex:
    # exp(exponent) = exp(Re) * unit-phase; keep the real part as the scale.
    phase = cmath.exp(1j * exponent.imag)
    return ScaledComplex.from_complex(amplitude * phase, exponent.real)


# ---------------------------------------------------------------------------
# Auxiliary barrier-shift expansions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxExpansion:
    """Printed truncations of the barrier-shifted quantities at (nu, z, v0).

    ``z_tilde_1``: shifted argument z - V0/(2 nu^2 z)            (error O(nu^-4))
    ``rho_tilde_1``: rho at the shifted argument                  (error O(nu^-4))
    ``zeta_ratio_1``: zeta(shifted)/zeta(z)                       (error O(nu^-4))
    ``phi_ratio_1``: phi(shifted)/phi(z)                          (error O(nu^-4))
    ``exp_factor_2``: exp(-nu (rho_tilde - rho)) to second order  (error O(nu^-3))
    """

    z_tilde_1: complex
    rho_tilde_1: complex
    zeta_ratio_1: complex
    phi_ratio_1: complex
    exp_factor_2: complex


def aux_expansions(nu: float, z: complex, v0: float) -> AuxExpansion:
    """Evaluate all printed barrier-shift truncations at one point."""
    z = complex(z)
    if abs(z) <= 0.2:
        raise DomainError("barrier-shift expansions need |z| > 0.2")
    mi = sm.map_image(z)
    w = mi.sqrt1mz2
    z2 = z * z
    shift = v0 / (2.0 * nu * nu)
    z_tilde_1 = z - shift / z
    rho_tilde_1 = mi.rho + shift * w / z2
    zeta_ratio_1 = 1.0 + shift * w / (mi.zeta ** 1.5 * z2)
    phi_ratio_1 = 1.0 - v0 / (4.0 * nu * nu * (1.0 - z2))
    lead = v0 * w / (2.0 * nu * z2)
    exp_factor_2 = 1.0 - lead + 0.5 * lead * lead
    return AuxExpansion(z_tilde_1=z_tilde_1, rho_tilde_1=rho_tilde_1,
                        zeta_ratio_1=zeta_ratio_1, phi_ratio_1=phi_ratio_1,
                        exp_factor_2=exp_factor_2)


# ---------------------------------------------------------------------------
# The comparison model and its explicit zero lattice.
# ---------------------------------------------------------------------------


def comparison_model(rho: complex, nu: float, m: int, v0: float) -> complex:
    """The model function nu^2 exp(2 nu rho) - i m V0/4 whose zeros seed the
    exact search; periodic in Im rho with period pi/nu."""
    return nu * nu * cmath.exp(2.0 * nu * complex(rho)) - 1j * m * v0 / 4.0


@dataclass(frozen=True)
class AsymptoticSeed:
    """One explicit model zero and its pull-back to the z-plane."""

    k: int
    rho_k: complex
    z_k: complex
    nu: float
    m: int


def model_zero(k: int, nu: float, m: int, v0: float) -> complex:
    """Closed-form zero rho_k of the comparison model."""
    if m == 0:
        raise DomainError("the model has no zeros on the physical sheet (m = 0)")
    re = math.log(abs(m) * v0 / 4.0) / (2.0 * nu) - math.log(nu) / nu
    sgn = 1.0 if m > 0 else -1.0
    im = (math.pi / nu) * (k + sgn * 0.25)
    return complex(re, im)


def _boundary_seed_table(samples: int = 512) -> list[tuple[float, complex]]:
    """(Im rho, z) pairs along the upper eye boundary, for Newton seeding."""
    pts = sm.boundary_polyline(2048)[8:-8:4]
    table = []
    for z in pts:
        table.append((sm.rho(complex(z)).imag, complex(z)))
    return table


_SEED_TABLE: list[tuple[float, complex]] | None = None


def _nearest_boundary_point(im_rho: float) -> complex:
    global _SEED_TABLE
    if _SEED_TABLE is None:
        _SEED_TABLE = _boundary_seed_table()
    best = min(_SEED_TABLE, key=lambda pair: abs(pair[0] - im_rho))
    return best[1]


def seeds(nu: float, m: int, v0: float, spec: sm.RegionSpec) -> list[AsymptoticSeed]:
    """All model zeros with Im rho_k inside (-pi + h, -h), pulled back to z.

    Individual pull-back failures are logged and skipped; they do not abort
    the construction.
    """
    if nu < 4:
        raise DomainError("asymptotic seeds need nu >= 4")
    if m == 0:
        raise DomainError("seeds require a nonzero sheet index")
    if not v0 > 0:
        raise DomainError("seeds require a positive barrier height")
    h = spec.h_eps
    out: list[AsymptoticSeed] = []
    # Im rho_k = (pi/nu)(k + sgn/4) in (-pi + h, -h)  <=>  k in an integer range.
    sgn = 0.25 if m > 0 else -0.25
    k_lo = math.ceil((-math.pi + h) * nu / math.pi - sgn)
    k_hi = math.floor(-h * nu / math.pi - sgn)
    for k in range(k_lo, k_hi + 1):
        rho_k = model_zero(k, nu, m, v0)
        if not -math.pi + h < rho_k.imag < -h:
            continue
        try:
            z_k = sm.inverse_rho(rho_k, _nearest_boundary_point(rho_k.imag))
        except ConvergenceError as exc:
            logger.warning("seed k=%d at nu=%s could not be pulled back: %s", k, nu, exc)
            continue
        out.append(AsymptoticSeed(k=k, rho_k=rho_k, z_k=z_k, nu=nu, m=m))
    out.sort(key=lambda s: s.k)
    return out
