"""Counting functions for resonances: per-potential assembly across
channels, power-law order fits, the polynomial upper-bound check, and the
log-integral route to the growth order.

The central object is a step report: for a barrier of height v0 supported
on the unit ball in even dimension d, and a fixed non-physical sheet m, the
counting function n(r) adds the spherical-harmonic multiplicity of every
channel zero with modulus at most r.  Its growth order should match the
dimension d, and two independent estimates of that order are provided: a
log-log fit of n(r) itself and a tail fit of the boundary integral of
log-modulus of the characteristic function.
"""

from __future__ import annotations

import concurrent.futures
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _integrate

from . import engine
from . import surface_maps as sm
from .errors import ConvergenceError, DomainError, FitError

logger = logging.getLogger(__name__)

#: Channels with order below this have no usable seed lattice and are
#: searched by contour subdivision instead.
SEEDED_ORDER_MIN = 4.0

#: Extra channel headroom beyond r_max / z0; zeros of higher channels all
#: have modulus beyond r_max.
CHANNEL_MARGIN = 2.0

THREADS_ENV = "RESONANCE_ATLAS_THREADS"


def harmonic_multiplicity(ell: int, d: int) -> int:
    """Dimension of the degree-ell spherical-harmonic space on S^(d-1)."""
    return engine._spherical_multiplicity(ell, d)


@dataclass(frozen=True)
class CountingReport:
    """Counting function of one potential on one sheet, with totals.

    samples holds (r, n(r)) pairs on an increasing radius grid.
    seed_total and contour_total split the (multiplicity-weighted) zero
    count by search path; contour_total is None when no contour search ran.
    fitted_order is filled by fit_order and starts as None.
    """

    potential: engine.StepPotential
    sheet: int
    samples: tuple[tuple[float, int], ...]
    fit_window: tuple[float, float]
    seed_total: int
    contour_total: int | None
    fitted_order: float | None = None
    warnings: tuple[str, ...] = ()

    def with_order(self, order: float) -> "CountingReport":
        return CountingReport(self.potential, self.sheet, self.samples,
                              self.fit_window, self.seed_total,
                              self.contour_total, order, self.warnings)


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        logger.warning("ignoring malformed %s=%r", THREADS_ENV, raw)
        return 1
    return max(1, n)


def channel_ladder(d: int, r_max: float, spec: sm.RegionSpec) -> list[engine.Channel]:
    """All channels that can carry zeros of modulus <= r_max.

    A channel of order nu has its zeros outside |lambda| = nu * z0, so the
    ladder stops once nu exceeds r_max / z0 (plus a safety margin).
    """
    nu_cap = r_max / spec.z0 + CHANNEL_MARGIN
    out = []
    ell = 0
    while True:
        nu = ell + (d - 2) / 2.0
        if nu > nu_cap:
            break
        out.append(engine.Channel.open(ell, d))
        ell += 1
    return out


def channel_zeros(channel: engine.Channel, m: int, v0: float, r_max: float,
                  spec: sm.RegionSpec,
                  failures: list | None = None) -> list[engine.ResonanceZero]:
    """Zeros of one channel with modulus <= r_max, by the appropriate path.

    Low orders (nu < 4) go through contour subdivision; higher orders use
    the seeded Newton search, which covers every zero up to r_max because
    the whole zero set of such a channel lies along the seeded arc.
    """
    if channel.nu < SEEDED_ORDER_MIN:
        return engine.contour_channel_zeros(channel, m, v0, r_max,
                                            failures=failures)
    return [z for z in engine.find_channel_zeros(channel, m, v0, spec, r_max,
                                                 failures=failures)
            if abs(z.lambda0) <= r_max]


def assemble_counting(potential: engine.StepPotential, m: int, r_max: float,
                      grid_points: int, spec: sm.RegionSpec,
                      r_min: float | None = None) -> CountingReport:
    """Gather all channel zeros up to modulus r_max and tabulate n(r).

    The radius grid is linspace(r_min, r_max, grid_points) with r_min
    defaulting to r_max / 3.  A channel whose search fails contributes a
    warning instead of aborting the whole report.  Worker threads for the
    per-channel searches are capped by the RESONANCE_ATLAS_THREADS
    environment variable (default 1); results are merged in channel order
    so the report does not depend on scheduling.
    """
    if m == 0:
        raise DomainError("counting lives on the non-physical sheets")
    if not potential.v0 > 0:
        raise DomainError("counting requires a positive barrier")
    if grid_points < 2:
        raise DomainError("need at least two radius grid points")
    if r_min is None:
        r_min = r_max / 3.0
    if not 0 < r_min < r_max:
        raise DomainError("radius window must satisfy 0 < r_min < r_max")
    channels = channel_ladder(potential.d, r_max, spec)
    warnings: list[str] = []
    results: dict[int, list[engine.ResonanceZero]] = {}

    def run(channel: engine.Channel) -> list[engine.ResonanceZero]:
        fails: list = []
        zeros = channel_zeros(channel, m, potential.v0, r_max, spec, fails)
        for _, msg in fails:
            warnings.append(f"channel ell={channel.ell}: {msg}")
        return zeros

    workers = min(_worker_count(), len(channels)) or 1
    if workers == 1:
        for ch in channels:
            try:
                results[ch.ell] = run(ch)
            except (ConvergenceError, DomainError) as exc:
                warnings.append(f"channel ell={ch.ell} failed: {exc}")
    else:
        with concurrent.futures.ThreadPoolExecutor(workers) as pool:
            futures = {pool.submit(run, ch): ch for ch in channels}
            for fut in concurrent.futures.as_completed(futures):
                ch = futures[fut]
                try:
                    results[ch.ell] = fut.result()
                except (ConvergenceError, DomainError) as exc:
                    warnings.append(f"channel ell={ch.ell} failed: {exc}")

    seed_total = 0
    contour_total: int | None = None
    moduli: list[tuple[float, int]] = []
    for ch in channels:
        for z in results.get(ch.ell, []):
            moduli.append((abs(z.lambda0), ch.multiplicity))
            if z.seed_k is None:
                contour_total = (contour_total or 0) + ch.multiplicity
            else:
                seed_total += ch.multiplicity
    moduli.sort()
    radii = np.linspace(r_min, r_max, grid_points)
    mods = np.array([mu for mu, _ in moduli])
    weights = np.array([w for _, w in moduli])
    counts = [int(weights[: np.searchsorted(mods, r, side="right")].sum())
              for r in radii]
    samples = tuple((float(r), n) for r, n in zip(radii, counts))
    window = (math.sqrt(r_min * r_max), float(r_max))
    return CountingReport(potential, m, samples, window, seed_total,
                          contour_total, None, tuple(warnings))


def fit_order(report: CountingReport) -> float:
    """Least-squares slope of log n against log r over the report's upper
    fit window.  Radii with n = 0 are excluded; fewer than five usable
    samples raise FitError."""
    lo, hi = report.fit_window
    pts = [(r, n) for r, n in report.samples if lo <= r <= hi and n > 0]
    if len(pts) < 5:
        raise FitError(f"only {len(pts)} usable samples in window [{lo:.3g}, {hi:.3g}]")
    x = np.log([r for r, _ in pts])
    y = np.log([n for _, n in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def growth_bound_check(report: CountingReport, factor: float = 10.0) -> bool:
    """Check n(r) <= C <r>^d with a stable constant: the largest value of
    n(r) / <r>^d over the samples must not exceed ``factor`` times the
    median, where <r> = sqrt(1 + r^2)."""
    d = report.potential.d
    ratios = [n / math.hypot(1.0, r) ** d for r, n in report.samples if n > 0]
    if len(ratios) < 3:
        raise FitError("too few nonzero samples for a bound check")
    return max(ratios) <= factor * float(np.median(ratios))


def log_integral_order(evaluator, r_start: float, r_max: float,
                       steps: int) -> float:
    """Growth order of a function holomorphic on the closed upper half
    plane, from the upper-boundary integral of its log-modulus.

    For each radius r on a geometric ladder from r_start to r_max the
    integral I(r) of log|h(r e^{i theta})| over theta in [0, pi] is
    computed by adaptive quadrature; the order is the slope of log I(r)
    against log r over the upper half of the ladder.  Radii where I(r)
    <= 0 carry no information about polynomial growth and are dropped.
    """
    if not 0 < r_start < r_max:
        raise DomainError("need 0 < r_start < r_max")
    if steps < 4:
        raise DomainError("need at least four ladder radii")
    radii = np.geomspace(r_start, r_max, steps)
    integrals = []
    for r in radii:
        def g(theta: float) -> float:
            value = evaluator(r * complex(math.cos(theta), math.sin(theta)))
            mod = abs(value)
            if not mod > 0 or not math.isfinite(mod):
                raise ConvergenceError(
                    f"log-modulus undefined at r={r:.3g}, theta={theta:.3g}")
            return math.log(mod)

        val, err = _integrate.quad(g, 0.0, math.pi, limit=200)
        if not math.isfinite(val) or err > 1e-4 * max(1.0, abs(val)):
            raise ConvergenceError(
                f"quadrature failed at r={r:.3g} (I={val:.3g}, err={err:.1e})")
        integrals.append(val)
    lo = math.sqrt(r_start * r_max)
    tail = [(r, val) for r, val in zip(radii, integrals) if r >= lo and val > 0]
    if len(tail) < 3:
        raise FitError("too few positive integrals in the fit tail")
    x = np.log([r for r, _ in tail])
    y = np.log([val for _, val in tail])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def channel_count_order(channel: engine.Channel, m: int, v0: float,
                        r_max: float, grid_points: int = 24,
                        r_min: float | None = None) -> float:
    """Zero-count growth order of a single channel, via the contour search
    (so string families far beyond the seeded arc are included)."""
    if r_min is None:
        r_min = max(4.0, r_max / 16.0)
    zeros = engine.contour_channel_zeros(channel, m, v0, r_max)
    mods = np.sort(np.array([abs(z.lambda0) for z in zeros]))
    radii = np.geomspace(r_min, r_max, grid_points)
    lo = math.sqrt(r_min * r_max)
    pts = [(r, int(np.searchsorted(mods, r, side="right"))) for r in radii]
    usable = [(r, n) for r, n in pts if r >= lo and n > 0]
    if len(usable) < 3:
        raise FitError("too few usable radii for a channel order fit")
    x = np.log([r for r, _ in usable])
    y = np.log([n for _, n in usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
