"""Self-check suites exposed through the command line.

Each suite runs a battery of identities or cross-checks that the library
must satisfy, and returns a verdict plus human-readable detail lines.
They are deliberately cheaper than the full test suite: the intent is a
quick field check of an installed build, not a replacement for the tests.
"""

from __future__ import annotations

import cmath
import json
import math
from collections.abc import Callable

import numpy as np

from . import asymptotics as asym
from . import engine
from . import surface_maps as sm
from .errors import DomainError
from .special_functions import (
    airy_ai,
    airy_ai_prime,
    AiryArgument,
    airy_asymptotic,
    bessel_j,
    bessel_j_prime,
    continue_bessel,
    continue_hankel1,
    hankel1,
    hankel1_prime,
)

SuiteResult = tuple[bool, list[str]]

WRONSKIAN_SCALE = 2.0 / math.pi


def _check(lines: list[str], label: str, ok: bool, detail: str = "") -> bool:
    status = "ok" if ok else "FAIL"
    lines.append(f"  [{status}] {label}" + (f" ({detail})" if detail else ""))
    return ok


def suite_special(v0: float = 10.0) -> SuiteResult:
    """Cylinder-function cross-identities on a strip grid."""
    del v0
    lines: list[str] = []
    ok = True
    worst = 0.0
    target = complex(0.0, -WRONSKIAN_SCALE)
    for nu in (0.0, 0.5, 1.0, 2.5, 5.0, 10.0, 20.5, 40.0, 60.0):
        for re in (1.0, 3.0, 10.0, 50.0, 120.0, 200.0):
            for im in (-2.0, -0.5, 0.0, 1.0, 2.0):
                z = complex(re, im)
                value = (bessel_j_prime(nu, z) * hankel1(nu, z)
                         - bessel_j(nu, z) * hankel1_prime(nu, z))
                err = abs(z * value.to_complex() - target) / WRONSKIAN_SCALE
                worst = max(worst, err)
    ok &= _check(lines, "cross-product identity z(J'H - JH') = -2i/pi",
                 worst < 1e-10, f"worst rel {worst:.2e}")

    # Sheet continuation composes like a one-parameter group on J.
    worst = 0.0
    for nu in (0.0, 1.0, 3.5, 7.0):
        z = complex(2.3, 0.7)
        j = bessel_j(nu, z).to_complex()
        for m1 in (-2, -1, 1, 2):
            for m2 in (-1, 1, 3):
                once = continue_bessel(nu, m1 + m2, j)
                twice = continue_bessel(nu, m2, continue_bessel(nu, m1, j))
                worst = max(worst, abs(once - twice) / max(abs(once), 1e-300))
    ok &= _check(lines, "rotation composition on the regular solution",
                 worst < 1e-12, f"worst rel {worst:.2e}")

    # Integer-order outgoing continuation against its defining combination.
    worst = 0.0
    for nu in (0.0, 1.0, 2.0, 5.0):
        z = complex(3.1, 0.4)
        h = hankel1(nu, z).to_complex()
        j = bessel_j(nu, z).to_complex()
        for m in (-2, -1, 1, 2, 3):
            lhs = continue_hankel1(nu, m, h, j)
            rhs = (-1.0) ** (m * round(nu)) * (h - 2.0 * m * j)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    ok &= _check(lines, "integer-order outgoing continuation",
                 worst < 1e-12, f"worst rel {worst:.2e}")

    # Turning-point expansion against the directly computed Airy function.
    w = 10.0 + 0.0j
    approx = airy_asymptotic(AiryArgument.from_w(w), 3)
    direct = airy_ai(w)
    rel = abs(approx[0] - direct) / abs(direct)
    ok &= _check(lines, "turning-point expansion at w=10", rel < 1e-6,
                 f"rel {rel:.2e}")
    rel = abs(approx[1] - airy_ai_prime(w)) / abs(airy_ai_prime(w))
    ok &= _check(lines, "turning-point derivative at w=10", rel < 1e-6,
                 f"rel {rel:.2e}")
    return ok, lines


def suite_maps(v0: float = 10.0) -> SuiteResult:
    """Conformal-map identities and boundary geometry."""
    del v0
    lines: list[str] = []
    ok = True
    ok &= _check(lines, "rho(1) = 0", sm.rho(1.0 + 0.0j) == 0.0)
    z0 = sm.corner_height()
    top = sm.rho(complex(0.0, z0))
    ok &= _check(lines, "rho at the corner equals -i pi/2",
                 abs(top + 1j * math.pi / 2.0) < 1e-12,
                 f"err {abs(top + 1j*math.pi/2.0):.2e}")

    t0 = sm.corner_parameter()
    worst = 0.0
    for u in np.linspace(0.02, 0.98, 100):
        t = t0 * (2.0 * u - u * u)
        for sign in (+1, -1):
            worst = max(worst, abs(sm.rho(sm.k_boundary(float(t), sign)).real))
    ok &= _check(lines, "boundary stays on the zero level of Re rho",
                 worst < 1e-8, f"worst {worst:.2e}")

    worst = {"zeta": 0.0, "phi": 0.0, "psi": 0.0, "chi": 0.0, "deriv": 0.0,
             "inverse": 0.0}
    rng = np.random.default_rng(20260823)
    count = 0
    while count < 100:
        z = complex(rng.uniform(-0.9, 0.9), rng.uniform(0.05, 1.2))
        if abs(z - 1.0) < 0.15 or abs(z + 1.0) < 0.15 or abs(z) < 0.1:
            continue
        count += 1
        image = sm.map_image(z)
        s = image.sqrt1mz2
        worst["zeta"] = max(worst["zeta"],
                            abs(image.zeta ** 1.5 - 1.5 * image.rho))
        worst["phi"] = max(worst["phi"],
                           abs(image.phi ** 4 * (1.0 - z * z) - 4.0 * image.zeta))
        worst["psi"] = max(worst["psi"], abs(image.psi * z * image.phi - 2.0))
        worst["chi"] = max(worst["chi"],
                           abs(16.0 * image.zeta * image.chi
                               - (4.0 - z * z * image.phi ** 6)))
        step = 1e-6
        fd = (sm.rho(z + step) - sm.rho(z - step)) / (2.0 * step)
        worst["deriv"] = max(worst["deriv"], abs(fd + s / z))
        back = sm.inverse_rho(image.rho, z + 0.05 + 0.02j)
        worst["inverse"] = max(worst["inverse"], abs(back - z))
    ok &= _check(lines, "zeta branch pairing", worst["zeta"] < 1e-10,
                 f"worst {worst['zeta']:.2e}")
    ok &= _check(lines, "amplitude fourth power", worst["phi"] < 1e-10,
                 f"worst {worst['phi']:.2e}")
    ok &= _check(lines, "reciprocal amplitude", worst["psi"] < 1e-10,
                 f"worst {worst['psi']:.2e}")
    ok &= _check(lines, "curvature combination", worst["chi"] < 1e-10,
                 f"worst {worst['chi']:.2e}")
    ok &= _check(lines, "derivative of rho", worst["deriv"] < 1e-5,
                 f"worst fd {worst['deriv']:.2e}")
    ok &= _check(lines, "Newton inversion round trip", worst["inverse"] < 1e-9,
                 f"worst {worst['inverse']:.2e}")
    return ok, lines


def _ladder_slope(values: dict[int, float]) -> float:
    xs = np.log(sorted(values))
    ys = np.log([values[nu] for nu in sorted(values)])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def measure_slopes(v0: float = 10.0) -> dict[str, float]:
    """Decay rates of the leading-term errors on the order ladder.

    Returns the fitted log-log slope of the relative deviation for the
    two scalar leading terms and each auxiliary expansion, measured at a
    fixed interior point of the eye.
    """
    t0 = sm.corner_parameter()
    z = sm.k_boundary(0.7 * t0, +1) + complex(0.0, 0.12)
    ladder = (16, 32, 64, 128)
    devs: dict[str, dict[int, float]] = {name: {} for name in
                                         ("f0", "g0", "z_tilde", "rho_tilde",
                                          "zeta_ratio", "phi_ratio",
                                          "exp_factor")}
    for nu in ladder:
        lam = nu * z
        f_exact = engine.outgoing_wronskian(nu, lam, v0)
        f_lead = asym.f0_leading(nu, z, v0)
        devs["f0"][nu] = abs(f_exact - f_lead) / abs(f_lead)
        g_exact = engine.regular_wronskian(nu, lam, v0)
        g_lead = asym.g0_leading(nu, z, v0)
        devs["g0"][nu] = abs(g_exact - g_lead) / abs(g_lead)
        aux = asym.aux_expansions(nu, z, v0)
        s = cmath.sqrt(1.0 - z * z)
        # Exact shifted variable that the first-order expansions truncate.
        zt = z * cmath.sqrt(1.0 - v0 / (nu * nu * z * z))
        devs["z_tilde"][nu] = abs(aux.z_tilde_1 - zt)
        devs["rho_tilde"][nu] = abs(aux.rho_tilde_1 - sm.rho(zt))
        image = sm.map_image(z)
        devs["zeta_ratio"][nu] = abs(aux.zeta_ratio_1
                                     - sm.zeta(zt) / image.zeta)
        # The amplitude ratio expansion covers only the algebraic
        # (1 - z^2) part of phi; the zeta part is tracked separately.
        amp = ((1.0 - z * z) / (1.0 - zt * zt)) ** 0.25
        devs["phi_ratio"][nu] = abs(aux.phi_ratio_1 - amp)
        damping = v0 * s / (2.0 * nu * z * z)
        devs["exp_factor"][nu] = abs(aux.exp_factor_2 - cmath.exp(-damping))
    return {name: _ladder_slope(vals) for name, vals in devs.items()}


#: Expected decay slope per measured quantity, from the construction of
#: each expansion (shared with the asymptotics suite and the tests).
EXPECTED_SLOPES = {
    "f0": -2.0,
    "g0": -1.0,
    "z_tilde": -4.0,
    "rho_tilde": -4.0,
    "zeta_ratio": -4.0,
    "phi_ratio": -4.0,
    "exp_factor": -3.0,
}


def suite_asymptotics(v0: float = 10.0) -> SuiteResult:
    """Leading terms sharpen on the order ladder at their design rates."""
    lines: list[str] = []
    ok = True
    slopes = measure_slopes(v0)
    ok &= _check(lines, "outgoing leading-term slope",
                 -2.4 <= slopes["f0"] <= -1.6, f"slope {slopes['f0']:.3f}")
    ok &= _check(lines, "regular leading-term slope",
                 -1.4 <= slopes["g0"] <= -0.6, f"slope {slopes['g0']:.3f}")
    for name in ("z_tilde", "rho_tilde", "zeta_ratio", "phi_ratio",
                 "exp_factor"):
        want = EXPECTED_SLOPES[name]
        ok &= _check(lines, f"auxiliary slope {name}",
                     abs(slopes[name] - want) <= 0.5,
                     f"slope {slopes[name]:.3f}, design {want}")
    lines.append("  slopes json: " + json.dumps(slopes, sort_keys=True))
    return ok, lines


def suite_rouche(v0: float = 10.0) -> SuiteResult:
    """Dominance margins and unit windings for the enclosure boxes."""
    lines: list[str] = []
    ok = True
    nu, m = 40.0, 1
    spec = sm.RegionSpec.for_margin(0.1)
    seeds = asym.seeds(nu, m, v0, spec)
    built = []
    for seed in seeds:
        try:
            built.append(engine.build_rouche_box(nu, m, v0, seed.k,
                                                 spec=spec))
        except DomainError:
            continue   # seed outside the interior gate
    margins = []
    counts = []
    for box in built:
        holds, margin = engine.verify_rouche_box(box)
        margins.append(margin)
        counts.append(engine.rouche_box_zero_count(box))
    ok &= _check(lines, "dominance margin positive on every box",
                 bool(built) and min(margins) > 0.0,
                 f"{len(built)} boxes, min margin {min(margins):.3f}")
    ok &= _check(lines, "each box winds exactly once",
                 all(c == 1 for c in counts))
    return ok, lines


def suite_symmetry(v0: float = 10.0) -> SuiteResult:
    """Zeros reflect into zeros of the opposite sheet function."""
    lines: list[str] = []
    nu, m = 20.0, 1
    spec = sm.RegionSpec.for_margin(0.1)
    zeros = engine.find_channel_zeros(engine.Channel.open(20, 2), m, v0,
                                      spec, 1e9)
    worst = 0.0
    for z in zeros:
        mirrored = engine.sheet_wronskian(-m, nu, -z.lambda0.conjugate(), v0)
        worst = max(worst, abs(mirrored) / engine.FREE_MAGNITUDE)
    ok = _check(lines, "reflection maps zeros across sheets",
                bool(zeros) and worst < 1e-6,
                f"{len(zeros)} zeros, worst scaled residual {worst:.2e}")
    return ok, lines


def suite_freecase(v0: float = 10.0) -> SuiteResult:
    """Vanishing barrier collapses the sheet function to a constant."""
    del v0
    lines: list[str] = []
    ok = True
    rng = np.random.default_rng(6)
    for m in (1, 2, -1):
        for nu in (1.0, 5.0, 20.0):
            expect = engine.free_sheet_constant(m, nu)
            worst = 0.0
            for _ in range(50):
                lam = complex(rng.uniform(-40.0, 40.0),
                              rng.uniform(0.05, 10.0))
                value = engine.sheet_wronskian(m, nu, lam, 0.0)
                worst = max(worst, abs(value - expect))
            ok &= _check(lines, f"sheet {m}, order {nu:g}",
                         worst < 1e-9 * engine.FREE_MAGNITUDE,
                         f"worst {worst:.2e}")
    return ok, lines


def suite_oracle3d(v0: float = 10.0) -> SuiteResult:
    """Half-integer order reduces to the elementary closed form."""
    lines: list[str] = []
    worst = 0.0
    rng = np.random.default_rng(35)
    for _ in range(100):
        lam = complex(rng.uniform(-30.0, 30.0), rng.uniform(0.1, 6.0))
        sigma = engine.interior_momentum(lam, v0)
        closed = (-2.0 / (math.pi * cmath.sqrt(sigma) * cmath.sqrt(lam))
                  * cmath.exp(1j * lam)
                  * (1j * sigma * cmath.cos(sigma) + lam * cmath.sin(sigma)))
        direct = engine.outgoing_wronskian(0.5, lam, v0)
        worst = max(worst, abs(direct - closed) / abs(closed))
    ok = _check(lines, "order-1/2 closed form", worst < 1e-10,
                f"worst rel {worst:.2e}")
    return ok, lines


SUITES: dict[str, Callable[[float], SuiteResult]] = {
    "special": suite_special,
    "maps": suite_maps,
    "asymptotics": suite_asymptotics,
    "rouche": suite_rouche,
    "symmetry": suite_symmetry,
    "freecase": suite_freecase,
    "oracle3d": suite_oracle3d,
}


def run_suites(names: list[str], v0: float = 10.0) -> tuple[bool, list[str]]:
    all_ok = True
    lines: list[str] = []
    for name in names:
        ok, detail = SUITES[name](v0)
        all_ok &= ok
        lines.append(f"suite {name}: {'pass' if ok else 'FAIL'}")
        lines.extend(detail)
    return all_ok, lines
