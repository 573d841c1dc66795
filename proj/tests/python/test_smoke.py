import json
import math

import numpy as np
import pytest

import pyfloquet as fq


def test_free_fiber_is_squared_norms():
    lat = fq.Lattice.standard(2)
    k = np.array([0.31, 0.17])
    ev = fq.fiber_eigenvalues(k, lat, fq.zero_symbol(lat), 1.0, 3.0)
    pts = [
        (k[0] + a) ** 2 + (k[1] + b) ** 2
        for a in range(-4, 5)
        for b in range(-4, 5)
        if math.hypot(k[0] + a, k[1] + b) <= 3.0
    ]
    assert np.allclose(ev, sorted(pts), rtol=1e-13)


def test_mathieu_gap_opens():
    lat = fq.Lattice.standard(1)
    sym = fq.cosine_symbol(lat, np.array([1], dtype=np.int32), 0.05)
    table = fq.scan_bands(lat, sym, 1.0, 6.0, [64])
    fq.refine_band_edges(table, lat, sym, 0.0, 2.0, 1e-10)
    gaps = table.gaps(0.1, 0.4)
    assert len(gaps) == 1
    assert gaps[0].width == pytest.approx(0.1, rel=0.05)


def test_region_preset_and_classification():
    p = fq.auto_region_params(2, 1.0, 0.0, 100.0, 1, 1.1, 0.02, 2.2)
    assert p.q == pytest.approx([0.4, 0.6])
    ctx = fq.RegionContext(fq.Lattice.standard(2), p)
    assert ctx.table_size == 5
    xi = 100.0 * np.array([math.cos(0.4137), math.sin(0.4137)])
    assert ctx.classify(xi) == "non_resonance_B"
    assert ctx.classify(np.array([300.0, 1.0])) == "outside_A"


def test_invalid_params_raise():
    p = fq.auto_region_params(2, 1.0, 0.0, 100.0, 1, 1.1, 0.02, 2.2)
    p.rho = -1.0
    with pytest.raises(ValueError):
        p.validate(2)


def test_run_volumes_report():
    text = fq.run("volumes", "[region]\nrho = 50\n[run]\nsamples = 4000\nseed = 3\n")
    report = json.loads(text)
    assert report["schema_version"] == 1
    assert report["results"]["samples"] == 4000
    assert text == fq.run("volumes", "[region]\nrho = 50\n[run]\nsamples = 4000\nseed = 3\n")
