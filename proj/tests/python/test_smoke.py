import math

import numpy as np
import pytest

import mwlab


def test_grid_shape():
    g = mwlab.Grid(2, 1)
    assert g.cells_per_axis == 6
    assert g.cell_count == 36


def test_identity_weight_has_unit_characteristic():
    g = mwlab.Grid(1, 3)
    w = mwlab.MatrixWeight.identity(g, 2)
    assert abs(mwlab.ap_characteristic(w, 2.0) - 1.0) < 1e-12
    assert abs(mwlab.ap_characteristic(w, 3.0, dual=True) - 1.0) < 1e-12


def test_weight_array_round_trip():
    g = mwlab.Grid(1, 2)
    w = mwlab.rotated_weight(g, 2, seed=3)
    cells = w.to_numpy()
    assert cells.shape == (g.cell_count, 2, 2)
    back = mwlab.MatrixWeight(g, cells)
    assert np.allclose(back.to_numpy(), cells)


def test_non_hermitian_weight_rejected():
    g = mwlab.Grid(1, 1)
    cells = np.zeros((g.cell_count, 2, 2), dtype=complex)
    cells[:, 0, 0] = 1.0
    cells[:, 1, 1] = -1.0
    with pytest.raises(ValueError):
        mwlab.MatrixWeight(g, cells)


def test_luxemburg_power_closed_form():
    assert abs(mwlab.luxemburg_power([1.0] * 8, 2.0) - 1.0 / math.sqrt(2.0)) < 1e-12


def test_commutator_norm_of_constant_symbol_vanishes():
    g = mwlab.Grid(1, 3)
    b = mwlab.MatrixField(g, np.tile(np.eye(2, dtype=complex), (g.cell_count, 1, 1)))
    w = mwlab.MatrixWeight.identity(g, 2)
    r = mwlab.commutator_norm(b, w, w)
    assert r["value"] < 1e-10
    assert r["mode"] == "exact-p2"


def test_suite_runs():
    assert "ave_prop" in mwlab.suite_names()
    assert mwlab.default_config("ave_prop")["suite"] == "ave_prop"
    report = mwlab.run_suite("ave_prop", instances=2, depths=[3])
    assert report["verdict"] == "PASS"
    with pytest.raises(ValueError):
        mwlab.run_suite("ave_prop", bogus=1)
