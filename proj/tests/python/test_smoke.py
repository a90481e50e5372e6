"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import wbrm


def test_generate_and_reproducibility():
    a = wbrm.generate(60, 3, 1.5, 42)
    b = wbrm.generate(60, 3, 1.5, 42)
    assert a.n == 60 and a.b == 3 and a.lam == 1.5
    ha = wbrm.hamiltonian_dense(a)
    hb = wbrm.hamiltonian_dense(b)
    assert np.array_equal(ha, hb)
    assert np.array_equal(ha, ha.T)
    # banded structure
    assert ha[0, 5] == 0.0
    # round-trip through the JSON parameters
    c = wbrm.instance_from_json(a.to_json())
    assert np.array_equal(wbrm.hamiltonian_dense(c), ha)


def test_validation():
    with pytest.raises(ValueError):
        wbrm.generate(10, 10, 1.0, 1)
    with pytest.raises(ValueError):
        wbrm.generate(1, 1, 1.0, 1)


def test_diagonalize_matches_numpy():
    inst = wbrm.generate(40, 2, 1.0, 7)
    energies, components = wbrm.diagonalize(inst)
    h = wbrm.hamiltonian_dense(inst)
    ref = np.linalg.eigvalsh(h)
    assert np.allclose(energies, ref, atol=1e-9)
    # rows are normalized eigenvectors
    assert np.allclose(np.sum(components**2, axis=1), 1.0, atol=1e-10)


def test_npt_methods_agree():
    inst = wbrm.generate(150, 4, 3.0, 11)
    energies = wbrm.eigenvalues(inst)
    agreements = 0
    for alpha in range(60, 90, 4):
        e = energies[alpha - 1]
        it = wbrm.npt_iterative(inst, e)
        orc = wbrm.npt_oracle(inst, e)
        assert it["p1"] <= math.floor(e) < it["p2"]
        if it["width"] > inst.b:
            assert (it["p1"], it["p2"]) == (orc["p1"], orc["p2"])
            agreements += 1
    assert agreements > 0


def test_lambda_zero_width_one():
    inst = wbrm.generate(50, 2, 0.0, 3)
    region = wbrm.npt_iterative(inst, 25.0)
    assert region["width"] == 1
    assert region["p1"] == 25


def test_quartic_against_numpy():
    rng = np.random.default_rng(5)
    for _ in range(50):
        v = rng.standard_normal(4)
        f = 1.0 + rng.uniform()
        lam = 0.1 + rng.uniform()
        s = wbrm.quartic_s(list(v), f, lam)
        dense = wbrm.assemble_u_up(list(v), f, lam)
        ref = np.max(np.abs(np.linalg.eigvals(dense)))
        assert abs(s - ref) < 1e-9


def test_shapes_and_width_laws():
    inst = wbrm.generate(120, 4, 2.0, 9)
    energies, components = wbrm.diagonalize(inst)
    bins = wbrm.ef_profile(energies, components)
    total = sum(bins.values())
    assert abs(total - 1.0) < 1e-6
    assert wbrm.half_width(bins) > 0.0

    assert wbrm.erfc(0.0) == pytest.approx(1.0)
    assert wbrm.mean_np_small(1e-9, 0.5, 1.0) == pytest.approx(1.0)
    assert wbrm.mean_np_large(math.e, 0.7) == pytest.approx(0.7 * math.e)

    row = np.zeros(10)
    row[4] = 1.0
    assert wbrm.localization_length(row) == pytest.approx(1.0)
