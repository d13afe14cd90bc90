"""End-to-end acceptance gate.

Each test certifies one advertised guarantee of the package: the free-case
constant, the cross-product identity, the eye-map anchors, the error-decay
rates of the large-order expansions, zero finding against independent
winding counts, the dominance certificates, counting-function growth, the
reflection pairing, the half-integer collapse, the log-integral growth
probe, and the Airy tail expansion.

Every test prints exactly one verdict line (visible with ``pytest -s`` and
in the captured output of a failing run) carrying the measured quantity,
its tolerance, and the wall-clock cost against the budget, then asserts.
"""

from __future__ import annotations

import cmath
import math
import time

import numpy as np

from resonance_atlas import counting, engine, validation
from resonance_atlas import surface_maps as sm
from resonance_atlas.errors import DomainError
from resonance_atlas.special_functions import (
    AiryArgument,
    AiryCoefficients,
    airy_ai,
    airy_ai_prime,
    airy_asymptotic,
    bessel_j,
    bessel_j_prime,
    hankel1,
    hankel1_prime,
)

FREE = engine.FREE_MAGNITUDE
V0 = 10.0


def _verdict(num: int, label: str, ok: bool, detail: str,
             elapsed: float, budget: float) -> None:
    word = "PASS" if ok and elapsed <= budget else "FAIL"
    print(f"criterion {num:2d} {word}  {label}: {detail}"
          f"  [{elapsed:.2f}s / budget {budget:.0f}s]")
    assert ok, f"criterion {num}: {detail}"
    assert elapsed <= budget, f"criterion {num}: over budget ({elapsed:.1f}s)"


def test_01_free_case_is_the_sheet_constant(rng):
    # With the barrier switched off the characteristic function is the
    # constant (-1)^(m*nu) * (-2i/pi) on every sheet, at every point.
    start = time.perf_counter()
    worst = 0.0
    for m in (1, 2, -1):
        for nu in (1, 5, 20):
            expected = (-1.0) ** (m * nu) * (-2j / math.pi)
            for _ in range(50):
                lam = complex(rng.uniform(-40.0, 40.0), rng.uniform(0.1, 10.0))
                got = engine.sheet_wronskian(m, float(nu), lam, 0.0)
                worst = max(worst, abs(got - expected))
    elapsed = time.perf_counter() - start
    _verdict(1, "free-case constant", worst < 1e-9 * FREE,
             f"worst deviation {worst:.3e} (tol {1e-9 * FREE:.3e})",
             elapsed, 5.0)


def test_02_cross_product_identity_on_the_grid():
    # z * (J' H - J H') = -2i/pi across orders and a wide strip, including
    # points below the real axis and deep in the evanescent regime.
    start = time.perf_counter()
    worst = 0.0
    for nu in (0.0, 0.5, 1.0, 2.5, 5.0, 10.0, 20.5, 40.0, 60.0):
        for re in (1.0, 3.0, 10.0, 50.0, 120.0, 200.0):
            for im in (-2.0, -0.5, 0.0, 1.0, 2.0):
                z = complex(re, im)
                j = bessel_j(nu, z)
                jp = bessel_j_prime(nu, z)
                h = hankel1(nu, z)
                hp = hankel1_prime(nu, z)
                w = (jp * h - j * hp).to_complex() * z
                worst = max(worst, abs(w + 2j / math.pi) / FREE)
    elapsed = time.perf_counter() - start
    _verdict(2, "cross-product identity", worst < 1e-10,
             f"worst relative error {worst:.3e} over 270 points (tol 1e-10)",
             elapsed, 10.0)


def test_03_eye_map_anchor_points():
    # rho sends 1 to 0, the corner i*z0 to -i*pi/2, and the whole upper
    # boundary curve onto the imaginary axis.
    start = time.perf_counter()
    corner_err = abs(sm.rho(0.66274j) + 1j * math.pi / 2.0)
    right_err = abs(sm.rho(1.0 + 0.0j))
    t0 = sm.corner_parameter()
    flat = 0.0
    for sign in (1, -1):
        for u in np.linspace(0.02, 0.999, 50):
            t = t0 * (2.0 * u - u * u)
            flat = max(flat, abs(sm.rho(sm.k_boundary(float(t), sign)).real))
    ok = corner_err < 1e-4 and right_err <= 1e-12 and flat < 1e-8
    elapsed = time.perf_counter() - start
    _verdict(3, "eye-map anchors", ok,
             f"corner {corner_err:.2e} (tol 1e-4), rho(1) {right_err:.1e} "
             f"(tol 1e-12), max |Re rho| on boundary {flat:.2e} (tol 1e-8)",
             elapsed, 1.0)


def test_04_expansion_error_decay_rates():
    # The leading large-order terms lose accuracy like nu^-2 and nu^-1,
    # and each auxiliary expansion at its design rate, on the ladder
    # nu = 16, 32, 64, 128.
    start = time.perf_counter()
    slopes = validation.measure_slopes(V0)
    checks = {name: abs(slopes[name] - want) <= 0.5
              if name not in ("f0", "g0") else True
              for name, want in validation.EXPECTED_SLOPES.items()}
    checks["f0"] = -2.4 <= slopes["f0"] <= -1.6
    checks["g0"] = -1.4 <= slopes["g0"] <= -0.6
    ok = all(checks.values())
    bad = sorted(name for name, good in checks.items() if not good)
    elapsed = time.perf_counter() - start
    _verdict(4, "expansion decay rates", ok,
             "all slopes in band" if ok else f"out of band: {bad}",
             elapsed, 30.0)


def test_05_refined_zeros_match_covering_winding():
    # At order 40 the model-lattice seeds refine to at least 30 distinct
    # zeros, and a winding count over a rectangle covering all of them
    # agrees with the list length exactly.
    start = time.perf_counter()
    channel = engine.Channel.open(40, 2)
    spec = sm.RegionSpec.for_margin(0.1)
    zeros = engine.find_channel_zeros(channel, 1, V0, spec, r_max=1e9)
    points = [z.lambda0 for z in zeros]
    min_gap = min(abs(a - b) for i, a in enumerate(points)
                  for b in points[i + 1:])
    residual_worst = max(abs(engine.sheet_wronskian(1, 40.0, w, V0))
                         for w in points)
    cover = engine.covering_rectangle(zeros, 40.0)
    winding = engine.count_zeros_rho_rectangle(40.0, 1, V0, cover)
    ok = (len(zeros) >= 30 and min_gap > 1e-4
          and residual_worst < 1e-8 * FREE and winding == len(zeros))
    elapsed = time.perf_counter() - start
    _verdict(5, "zeros vs covering winding", ok,
             f"{len(zeros)} zeros (>=30), min gap {min_gap:.2e}, worst "
             f"|F| {residual_worst:.2e} (tol {1e-8 * FREE:.1e}), "
             f"winding {winding}",
             elapsed, 60.0)


def test_06_dominance_boxes_certify_unit_zeros():
    # Every interior lattice box at order 40 passes the dominance check
    # |g| - |f - g| > 0 on 256 perimeter samples and winds exactly once.
    start = time.perf_counter()
    margins = []
    counts = []
    for k in range(-45, 10):
        try:
            box = engine.build_rouche_box(40.0, 1, V0, k, alpha=1.5)
        except DomainError:
            continue
        margin, passed = engine.verify_rouche_box(box, samples=256)
        margins.append(margin if passed else -abs(margin))
        counts.append(engine.rouche_box_zero_count(box))
    ok = (len(margins) >= 30 and min(margins) > 0.0
          and all(c == 1 for c in counts))
    elapsed = time.perf_counter() - start
    _verdict(6, "dominance certificates", ok,
             f"{len(margins)} boxes, min margin {min(margins):.3f} (> 0), "
             f"all windings 1: {all(c == 1 for c in counts)}",
             elapsed, 60.0)


def test_07_counting_function_growth_orders():
    # The resonance counting function grows like r^d: fitted order within
    # [1.7, 2.3] in dimension 2 and [3.5, 4.5] in dimension 4, with the
    # upper-bound sanity check holding in both.
    start = time.perf_counter()
    spec = sm.RegionSpec.for_margin(0.1)
    report2 = counting.assemble_counting(
        engine.StepPotential(2, V0), 1, 60.0, 20, spec, r_min=20.0)
    order2 = counting.fit_order(report2)
    bound2 = counting.growth_bound_check(report2)
    report4 = counting.assemble_counting(
        engine.StepPotential(4, V0), 1, 40.0, 20, spec)
    order4 = counting.fit_order(report4)
    bound4 = counting.growth_bound_check(report4)
    ok = (1.7 <= order2 <= 2.3 and bound2
          and 3.5 <= order4 <= 4.5 and bound4)
    elapsed = time.perf_counter() - start
    _verdict(7, "counting growth", ok,
             f"d=2 order {order2:.4f} in [1.7, 2.3] bound {bound2}; "
             f"d=4 order {order4:.4f} in [3.5, 4.5] bound {bound4}",
             elapsed, 600.0)


def test_08_reflection_pairs_zeros_across_the_axis():
    # If F_1 vanishes at w then F_{-1} vanishes at -conj(w): each zero of
    # the order-20 channel maps to a zero of the opposite sheet.
    start = time.perf_counter()
    channel = engine.Channel.open(20, 2)
    spec = sm.RegionSpec.for_margin(0.1)
    zeros = engine.find_channel_zeros(channel, 1, V0, spec, r_max=1e9)
    worst = max(abs(engine.sheet_wronskian(-1, 20.0, -z.lambda0.conjugate(), V0))
                for z in zeros)
    ok = len(zeros) > 0 and worst < 1e-6 * FREE
    elapsed = time.perf_counter() - start
    _verdict(8, "reflection pairing", ok,
             f"{len(zeros)} zeros, worst mirrored |F| {worst:.3e} "
             f"(tol {1e-6 * FREE:.1e})",
             elapsed, 20.0)


def test_09_half_integer_order_collapses_to_elementary(rng):
    # In three dimensions the s-wave characteristic function has an
    # elementary closed form; the general evaluator must reproduce it.
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        lam = complex(rng.uniform(-30.0, 30.0), rng.uniform(0.1, 6.0))
        sigma = engine.interior_momentum(lam, V0)
        closed = (-2.0 / (math.pi * cmath.sqrt(sigma) * cmath.sqrt(lam))
                  * cmath.exp(1j * lam)
                  * (1j * sigma * cmath.cos(sigma) + lam * cmath.sin(sigma)))
        direct = engine.outgoing_wronskian(0.5, lam, V0)
        worst = max(worst, abs(direct - closed) / abs(closed))
    elapsed = time.perf_counter() - start
    _verdict(9, "half-integer collapse", worst < 1e-10,
             f"worst relative error {worst:.3e} over 100 points (tol 1e-10)",
             elapsed, 5.0)


def test_10_log_integral_growth_matches_zero_count():
    # Two independent probes of channel growth - direct zero counting and
    # the boundary log-integral of |F| - must agree on the order.
    start = time.perf_counter()
    order_count = counting.channel_count_order(
        engine.Channel.open(5, 2), 1, V0, 200.0)
    order_log = counting.log_integral_order(
        lambda w: engine.sheet_wronskian(1, 5.0, w, V0), 8.0, 200.0, 10)
    diff = abs(order_count - order_log)
    elapsed = time.perf_counter() - start
    _verdict(10, "log-integral growth", diff <= 0.3,
             f"zero-count order {order_count:.4f}, log-integral order "
             f"{order_log:.4f}, difference {diff:.4f} (tol 0.3)",
             elapsed, 120.0)


def test_11_airy_tail_expansion():
    # Three correction terms reach 1e-6 at argument 10, with the first
    # coefficient pair exactly -5/72 and 7/72.
    start = time.perf_counter()
    arg = AiryArgument.from_w(10.0 + 0j)
    ai, aip = airy_asymptotic(arg, terms=3)
    err_ai = abs(ai / airy_ai(10.0 + 0j) - 1.0)
    err_aip = abs(aip / airy_ai_prime(10.0 + 0j) - 1.0)
    coeffs = AiryCoefficients.build(1)
    exact = coeffs.c[1] == -5.0 / 72.0 and coeffs.d[1] == 7.0 / 72.0
    ok = err_ai < 1e-6 and err_aip < 1e-6 and exact
    elapsed = time.perf_counter() - start
    _verdict(11, "Airy tail expansion", ok,
             f"Ai error {err_ai:.3e}, Ai' error {err_aip:.3e} (tol 1e-6), "
             f"coefficients exact: {exact}",
             elapsed, 1.0)
