"""Delimited output for resonance tables, counting reports and region
boundaries.

All writers are deterministic: given the same inputs they produce the same
bytes.  Floats are rendered with repr, which is the shortest string that
round-trips to the same double (and never loses precision, unlike a fixed
significant-digit format).  Files are written atomically via a temporary
sibling and os.replace, so a crash never leaves a half-written report.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Sequence

import numpy as np

from . import engine
from .counting import CountingReport

RESONANCE_HEADER = ("ell,nu,sheet,re_lambda0,im_lambda0,modulus,"
                    "arg_on_sheet,multiplicity,residual,seed_k")

COUNT_HEADER = "r,n"

REGION_HEADER = "t,re_z,im_z"


def fmt(x: float) -> str:
    """Shortest representation that parses back to the same double."""
    return repr(float(x))


def _row_key(z: engine.ResonanceZero):
    # Seeded zeros order by their lattice index; contour zeros follow,
    # ordered by position.
    if z.seed_k is not None:
        return (z.channel.nu, 0, z.seed_k, 0.0, 0.0)
    return (z.channel.nu, 1, 0, z.lambda0.real, z.lambda0.imag)


def resonance_rows(zeros: Iterable[engine.ResonanceZero]) -> list[str]:
    rows = []
    for z in sorted(zeros, key=_row_key):
        point = z.lambda_on_sheet
        rows.append(",".join((
            str(z.channel.ell),
            fmt(z.channel.nu),
            str(z.sheet),
            fmt(z.lambda0.real),
            fmt(z.lambda0.imag),
            fmt(point.modulus),
            fmt(point.argument),
            str(z.channel.multiplicity),
            fmt(z.residual),
            "" if z.seed_k is None else str(z.seed_k),
        )))
    return rows


def resonance_csv(zeros: Iterable[engine.ResonanceZero]) -> str:
    return "\n".join([RESONANCE_HEADER, *resonance_rows(zeros)]) + "\n"


def resonance_json(zeros: Iterable[engine.ResonanceZero]) -> str:
    items = []
    for z in sorted(zeros, key=_row_key):
        point = z.lambda_on_sheet
        items.append({
            "ell": z.channel.ell,
            "nu": z.channel.nu,
            "sheet": z.sheet,
            "re_lambda0": z.lambda0.real,
            "im_lambda0": z.lambda0.imag,
            "modulus": point.modulus,
            "arg_on_sheet": point.argument,
            "multiplicity": z.channel.multiplicity,
            "residual": z.residual,
            "seed_k": z.seed_k,
        })
    return json.dumps({"resonances": items}, indent=2) + "\n"


def counting_json(report: CountingReport) -> str:
    payload = {
        "dim": report.potential.d,
        "v0": report.potential.v0,
        "sheet": report.sheet,
        "grid": [[r, n] for r, n in report.samples],
        "fitted_order": report.fitted_order,
        "seed_total": report.seed_total,
        "contour_total": report.contour_total,
        "warnings": list(report.warnings),
    }
    return json.dumps(payload, indent=2) + "\n"


def counting_csv(report: CountingReport) -> str:
    rows = [f"{fmt(r)},{n}" for r, n in report.samples]
    return "\n".join([COUNT_HEADER, *rows]) + "\n"


def region_samples(n: int, samples_hint: int = 4096) -> list[tuple[float, complex]]:
    """(t, z) pairs tracing the upper eye boundary from +1 to -1.

    The trace runs along the right half (t ascending from 0) and back down
    the left half (t descending to 0), with the corner-concentrated
    parametrization that keeps consecutive points close near the top.
    """
    if n < 2:
        raise ValueError("need at least two boundary samples")
    from . import surface_maps as sm
    t0 = sm.corner_parameter()
    n_right = (n + 1) // 2
    n_left = n - n_right
    pairs: list[tuple[float, complex]] = []
    for u in np.linspace(0.0, 1.0, n_right):
        t = t0 * (2.0 * u - u * u)
        pairs.append((float(t), sm.k_boundary(float(t), +1)))
    for u in np.linspace(1.0, 0.0, n_left + 1)[1:]:
        t = t0 * (2.0 * u - u * u)
        pairs.append((float(t), sm.k_boundary(float(t), -1)))
    return pairs


def region_csv(pairs: Sequence[tuple[float, complex]]) -> str:
    rows = [f"{fmt(t)},{fmt(z.real)},{fmt(z.imag)}" for t, z in pairs]
    return "\n".join([REGION_HEADER, *rows]) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write text to path through a temporary sibling and an atomic rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
