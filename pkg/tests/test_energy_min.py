"""Kernel assembly, Frank-Wolfe minimization, and its oracles."""

import numpy as np
import pytest

from fracdim.errors import MaxIterExceeded, NetTooLarge, TooLarge
from fracdim.energy_min import (DENSE_NET_CAP, EnergyResult, KernelMatrix,
                                SimplexWeights, build_kernel, is_psd,
                                kkt_certificate, min_energy,
                                min_energy_bruteforce, refinement_stability)
from fracdim.process_models import KernelFamily, LaplaceExponent
from fracdim.set_models import CompactSet, DeltaNet, discretize
from fracdim.verify import random_psd_kernel

RNG = np.random.default_rng(7)


def _km(values, pts=None):
    values = np.asarray(values, dtype=float)
    pts = np.arange(values.shape[0], dtype=float) if pts is None else pts
    return KernelMatrix(values, 1.0, "test", pts)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def test_build_kernel_examples():
    net = DeltaNet(np.array([0.0, 1.0]), 0.5, "x")
    K = build_kernel(KernelFamily.fh(0.5), 0.25, net)
    np.testing.assert_allclose(K.values, [[1, 0.5], [0.5, 1]])

    K = build_kernel(KernelFamily.subordinator_exp(
        LaplaceExponent.compound_poisson_drift(0, 1, 1)), np.log(2), net)
    np.testing.assert_allclose(K.values, [[1, 0.5], [0.5, 1]])

    net3 = DeltaNet(np.array([0.0, 0.5, 1.0]), 0.5, "x")
    K = build_kernel(KernelFamily.fh(1.0), 0.5, net3)
    np.testing.assert_allclose(K.values, [[1, 1, 0.5], [1, 1, 1], [0.5, 1, 1]])


def test_build_kernel_invariants_random():
    net = discretize(CompactSet.interval(0, 1), 0.01)
    for fam in (KernelFamily.fh(0.7), KernelFamily.stable_sandwich(1.2, 1),
                KernelFamily.subordinator_exp(LaplaceExponent.stable(0.5))):
        K = build_kernel(fam, 0.05, net).values
        assert np.all(np.diag(K) == 1.0)
        assert np.all((K >= 0) & (K <= 1))
        np.testing.assert_array_equal(K, K.T)


def test_build_kernel_net_cap():
    net = DeltaNet(np.linspace(0, 1, DENSE_NET_CAP + 2), 1e-4, "x")
    with pytest.raises(NetTooLarge):
        build_kernel(KernelFamily.fh(1.0), 0.1, net)


def test_subordinator_kernels_are_psd():
    for _ in range(5):
        pts = np.sort(RNG.uniform(0, 1, 60))
        net = DeltaNet(pts, 0.1, "x")
        lam = float(RNG.uniform(0.5, 50))
        K = build_kernel(KernelFamily.subordinator_exp(
            LaplaceExponent.stable(0.6)), lam, net)
        assert is_psd(K.values)


# ---------------------------------------------------------------------------
# minimization
# ---------------------------------------------------------------------------

def test_min_energy_two_by_two_family():
    for k in (0.0, 0.25, 0.5, 0.9):
        res = min_energy(_km([[1, k], [k, 1]]))
        assert abs(res.value - (1 + k) / 2) <= 1e-10
        np.testing.assert_allclose(res.weights.w, [0.5, 0.5], atol=1e-10)
        assert res.duality_gap <= 1e-6 * res.value + 1e-15


def test_min_energy_identity_matrix():
    res = min_energy(_km(np.eye(3)))
    assert abs(res.value - 1 / 3) < 1e-10
    np.testing.assert_allclose(res.weights.w, np.full(3, 1 / 3), atol=1e-8)


def test_min_energy_matches_bruteforce_on_random_psd():
    for i in range(8):
        n = int(RNG.integers(2, 7))
        km = random_psd_kernel(RNG, n)
        res = min_energy(km)
        bf = min_energy_bruteforce(km, resolution=1 / 60 if n >= 5 else 1 / 100)
        assert abs(res.value - bf) <= 1e-3
        assert res.converged and not res.flagged_nonconvex
        # reported value is exactly the energy of the reported weights
        recomputed = float(res.weights.w @ km.values @ res.weights.w)
        assert abs(recomputed - res.value) < 1e-12


def test_min_energy_nonconvex_flag_and_multistart():
    net = discretize(CompactSet.interval(0, 1), 0.34)
    km = build_kernel(KernelFamily.fh(1.0), 0.5, net)
    assert not is_psd(km.values)
    res = min_energy(km, seed=3)
    assert res.flagged_nonconvex and res.restarts_used == 8
    bf = min_energy_bruteforce(km, resolution=1 / 200)
    assert res.value <= bf + 1e-9


def test_min_energy_max_iter_exceeded_carries_result():
    pts = np.array([0.0, 0.3, 1.0])
    D = np.abs(pts[:, None] - pts[None, :])
    km = _km(np.exp(-3.0 * D), pts)
    with pytest.raises(MaxIterExceeded) as ei:
        min_energy(km, tol=1e-12, max_iter=1)
    res = ei.value.result
    assert isinstance(res, EnergyResult) and not res.converged
    assert 0 < res.value <= 1.0


def test_min_energy_monotone_in_scale():
    net = discretize(CompactSet.interval(0, 1), 0.02)
    fh = [min_energy(build_kernel(KernelFamily.fh(0.8), s, net), restarts=2).value
          for s in (0.02, 0.05, 0.1, 0.3)]
    assert np.all(np.diff(fh) >= -1e-9)      # kernel grows with eps
    sub = [min_energy(build_kernel(KernelFamily.subordinator_exp(
        LaplaceExponent.stable(0.5)), lam, net)).value
        for lam in (2.0, 8.0, 32.0)]
    assert np.all(np.diff(sub) <= 1e-9)      # kernel shrinks with lam


def test_energy_bounds_sandwich():
    for _ in range(5):
        km = random_psd_kernel(RNG, 6)
        res = min_energy(km)
        assert km.values.min() - 1e-12 <= res.value <= 1.0


def test_refinement_stability_report():
    rep = refinement_stability(CompactSet.interval(0, 1), KernelFamily.fh(1.0),
                               0.1, 0.01, restarts=2)
    assert rep["change"] <= rep["kernel_modulus"] + 1e-6


# ---------------------------------------------------------------------------
# bruteforce oracle
# ---------------------------------------------------------------------------

def test_bruteforce_examples():
    assert abs(min_energy_bruteforce(_km([[1, 0.5], [0.5, 1]])) - 0.75) < 1e-12
    assert abs(min_energy_bruteforce(_km(np.eye(2))) - 0.5) < 1e-12


def test_bruteforce_vs_fw_on_3x3_fh_kernel():
    net = DeltaNet(np.array([0.0, 0.5, 1.0]), 0.5, "x")
    km = build_kernel(KernelFamily.fh(1.0), 0.5, net)
    bf = min_energy_bruteforce(km, resolution=1 / 200)
    res = min_energy(km)
    assert abs(bf - res.value) <= 1e-3


def test_bruteforce_budget_and_size_guards():
    km = random_psd_kernel(RNG, 6)
    with pytest.raises(TooLarge):
        min_energy_bruteforce(km)               # 2.9e9 lattice points at 1/200
    big = _km(np.eye(9))
    with pytest.raises(TooLarge):
        min_energy_bruteforce(big, resolution=0.5)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_kkt_certificate_examples():
    km = _km([[1, 0.3], [0.3, 1]])
    ok, _ = kkt_certificate(km, SimplexWeights(np.array([0.5, 0.5]),
                                               km.points), tol=1e-9)
    assert ok
    ok, rep = kkt_certificate(_km(np.eye(2)),
                              SimplexWeights(np.array([1.0, 0.0]),
                                             np.array([0.0, 1.0])), tol=1e-6)
    assert not ok and not rep["lower_bound_ok"]


def test_kkt_holds_on_converged_outputs_fuzz():
    for _ in range(10):
        km = random_psd_kernel(RNG, int(RNG.integers(2, 7)))
        res = min_energy(km)
        ok, _ = kkt_certificate(km, res.weights, tol=1e-5)
        assert ok


def test_simplex_weights_validation():
    with pytest.raises(ValueError):
        SimplexWeights(np.array([0.5, 0.6]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        SimplexWeights(np.array([-0.1, 1.1]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        SimplexWeights(np.array([1.0]), np.array([0.0, 1.0]))
