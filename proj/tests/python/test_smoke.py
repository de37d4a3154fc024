import json
import math
import os

import pytest

import hcv


def test_vacuum_is_exact():
    res = hcv.run(charge=0, nr=64, nt=16)
    assert res["exit_code"] == 0
    assert res["converged"]
    assert res["flux"] == 0.0
    assert res["charge"] == 0.0
    assert res["action_density"] == 0.0
    assert res["action_flux"] == 0.0
    assert res["windings"] == []
    assert res["summary"].startswith("N=0 flux/2pi=0.000000")


def test_single_vortex_coarse_run(tmp_path):
    out = str(tmp_path / "run")
    res = hcv.run(vortices=[(1.0, 0.5)], nr=128, nt=32, out=out, return_fields=True)
    assert res["exit_code"] == 0
    assert res["converged"]
    assert abs(res["charge"] - 1.0) < 0.15
    assert abs(res["action_density"] / (2 * math.pi**2) - 1.0) < 0.15
    assert res["windings"] == [1]
    assert res["iterations"] > 3

    # field arrays come back on the (Nr+1) x Nt node set
    assert res["v"].shape == (129, 32)
    assert res["u"].shape == (129, 32)
    assert res["phi2"].shape == (129, 32)
    assert res["F_tr"].shape == (129, 32)
    assert res["r"].shape == (129,)
    assert res["t"].shape == (32,)
    assert float(res["phi2"].min()) >= 0.0

    report = json.loads((tmp_path / "run" / "report.json").read_text())
    assert abs(report["charge"] - res["charge"]) < 1e-15
    for f in ("v.csv", "u.csv", "phi2.csv", "F_tr.csv"):
        assert os.path.exists(os.path.join(out, f))


def test_g_integral_matches_topology():
    for pts, n in [([(1.0, 0.5)], 1), ([(1.0, 0.5), (1.0, 0.5)], 2),
                   ([(0.8, 0.1), (1.1, 0.9), (1.4, 1.7)], 3)]:
        val = hcv.g_integral(pts)
        assert abs(val / (4 * math.pi * n) - 1.0) < 1e-5


def test_expu0_vanishes_exactly_at_the_vortex():
    assert hcv.expu0(1.0, 0.5, [(1.0, 0.5)]) == 0.0
    assert hcv.expu0(5.0, 0.5, [(1.0, 0.5)]) == 1.0
    mid = hcv.expu0(1.2, 0.6, [(1.0, 0.5)])
    assert 0.0 < mid < 1.0


def test_validation_surfaces_as_value_error():
    with pytest.raises(ValueError):
        hcv.run(charge=1, vortices=[(1.0, 0.5)], nr=64, nt=16)
    with pytest.raises(ValueError):
        hcv.run(charge=-1, nr=64, nt=16)
    with pytest.raises(ValueError):
        hcv.run(vortices=[(-1.0, 0.5)], nr=64, nt=16)
