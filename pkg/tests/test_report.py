"""Delimited writers: schemas, ordering, determinism, atomic replacement."""

import json
import math
import os

import pytest

from resonance_atlas import engine, report
from resonance_atlas import surface_maps as sm
from resonance_atlas.counting import CountingReport


def _zero(lam, ell=5, sheet=1, seed_k=0, residual=1e-12, d=2):
    ch = engine.Channel.open(ell, d)
    return engine.ResonanceZero.build(lam, sheet, ch, residual, seed_k)


def test_headers_are_pinned():
    assert report.RESONANCE_HEADER == ("ell,nu,sheet,re_lambda0,im_lambda0,"
                                       "modulus,arg_on_sheet,multiplicity,"
                                       "residual,seed_k")
    assert report.COUNT_HEADER == "r,n"
    assert report.REGION_HEADER == "t,re_z,im_z"


def test_fmt_round_trips():
    for x in (0.1, 1.0 / 3.0, 2.0 ** -40, 12345.6789, 0.0):
        assert float(report.fmt(x)) == x


def test_resonance_csv_rows():
    zeros = [_zero(5.0 + 1.0j, seed_k=2), _zero(4.0 + 0.5j, seed_k=-1),
             _zero(6.5 + 0.25j, seed_k=None)]
    text = report.resonance_csv(zeros)
    lines = text.splitlines()
    assert lines[0] == report.RESONANCE_HEADER
    assert len(lines) == 4 and text.endswith("\n")
    # Seeded rows come first (by lattice index), contour rows after with an
    # empty seed column.
    first = lines[1].split(",")
    assert first[-1] == "-1"
    assert lines[3].split(",")[-1] == ""
    row = lines[2].split(",")
    assert row[0] == "5" and float(row[1]) == 5.0 and row[2] == "1"
    assert float(row[3]) == 5.0 and float(row[4]) == 1.0
    assert float(row[5]) == abs(5.0 + 1.0j)
    assert float(row[6]) == pytest.approx(math.atan2(1.0, 5.0) + math.pi)
    assert row[7] == "2"


def test_resonance_json_schema():
    zeros = [_zero(5.0 + 1.0j, seed_k=None)]
    doc = json.loads(report.resonance_json(zeros))
    assert list(doc) == ["resonances"]
    item = doc["resonances"][0]
    assert list(item) == ["ell", "nu", "sheet", "re_lambda0", "im_lambda0",
                          "modulus", "arg_on_sheet", "multiplicity",
                          "residual", "seed_k"]
    assert item["seed_k"] is None
    assert item["re_lambda0"] == 5.0 and item["im_lambda0"] == 1.0


def test_counting_writers():
    pot = engine.StepPotential(d=2, v0=10.0)
    rep = CountingReport(pot, 1, ((10.0, 4), (20.0, 9)), (10.0, 20.0),
                         seed_total=7, contour_total=2,
                         fitted_order=2.25, warnings=("note",))
    doc = json.loads(report.counting_json(rep))
    assert list(doc) == ["dim", "v0", "sheet", "grid", "fitted_order",
                         "seed_total", "contour_total", "warnings"]
    assert doc["grid"] == [[10.0, 4], [20.0, 9]]
    assert doc["fitted_order"] == 2.25 and doc["warnings"] == ["note"]
    csv = report.counting_csv(rep)
    assert csv == "r,n\n10.0,4\n20.0,9\n"


def test_writers_are_deterministic():
    zeros = [_zero(5.0 + 1.0j, seed_k=3), _zero(4.0 + 0.5j, seed_k=None)]
    assert report.resonance_csv(zeros) == report.resonance_csv(list(reversed(zeros)))
    assert report.resonance_json(zeros) == report.resonance_json(list(reversed(zeros)))
    pairs = report.region_samples(64)
    assert report.region_csv(pairs) == report.region_csv(report.region_samples(64))


def test_region_samples_trace():
    pairs = report.region_samples(101)
    assert len(pairs) == 101
    zs = [z for _, z in pairs]
    assert zs[0] == pytest.approx(1.0 + 0j)
    assert zs[-1] == pytest.approx(-1.0 + 0j, abs=1e-12)
    top = max(zs, key=lambda z: z.imag)
    assert top.imag == pytest.approx(sm.corner_height(), abs=1e-7)
    # Continuous trace: adjacent samples stay close, including across the
    # corner where the right and left halves meet.
    gaps = [abs(b - a) for a, b in zip(zs, zs[1:])]
    assert max(gaps) < 0.1
    with pytest.raises(ValueError):
        report.region_samples(1)


def test_region_csv_parses_back():
    text = report.region_csv(report.region_samples(16))
    lines = text.splitlines()
    assert lines[0] == "t,re_z,im_z"
    t, re_z, im_z = map(float, lines[1].split(","))
    assert (t, re_z, im_z) == (0.0, 1.0, 0.0)


def test_write_atomic(tmp_path):
    target = tmp_path / "out.csv"
    report.write_atomic(str(target), "hello\n")
    assert target.read_text() == "hello\n"
    report.write_atomic(str(target), "replaced\n")
    assert target.read_text() == "replaced\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_write_atomic_cleans_up_on_error(tmp_path):
    class Boom:
        def __str__(self):
            raise RuntimeError("boom")

    target = tmp_path / "out.csv"
    with pytest.raises(TypeError):
        report.write_atomic(str(target), Boom())  # type: ignore[arg-type]
    assert list(tmp_path.iterdir()) == []
