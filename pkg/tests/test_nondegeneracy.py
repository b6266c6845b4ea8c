"""Bordered-determinant and quasiconvexity checks."""

from __future__ import annotations

import numpy as np
import pytest

from toruslab import HessianForm, bordered_determinant, is_quasiconvex
from toruslab.nondegeneracy import frequency_orthocomplement


def test_bordered_identity_two_torus():
    det, nondegenerate = bordered_determinant(HessianForm(np.eye(2)), [1.0, 0.0])
    assert det == pytest.approx(-1.0)
    assert nondegenerate


def test_bordered_zero_hessian_closed_form():
    det, nondegenerate = bordered_determinant(HessianForm(np.zeros((1, 1))), [0.7])
    assert det == pytest.approx(-0.49)
    assert nondegenerate


def test_bordered_zero_frequency_degenerate():
    det, nondegenerate = bordered_determinant(HessianForm(np.eye(2)), [0.0, 0.0])
    assert det == pytest.approx(0.0)
    assert not nondegenerate


def test_bordered_dimension_mismatch():
    with pytest.raises(ValueError):
        bordered_determinant(HessianForm(np.eye(2)), [1.0, 0.0, 0.0])


def test_quasiconvex_identity_any_frequency():
    rng = np.random.default_rng(3)
    for n in range(1, 6):
        omega = rng.standard_normal(n)
        assert is_quasiconvex(HessianForm(np.eye(n)), omega)


def test_quasiconvex_null_direction():
    H = HessianForm(np.diag([1.0, -1.0]))
    assert not is_quasiconvex(H, [1.0, 1.0])


def test_quasiconvex_one_dimensional_restriction():
    H = HessianForm(np.diag([1.0, -1.0]))
    assert not is_quasiconvex(H, [1.0, 0.0])


def test_quasiconvex_rejects_zero_frequency():
    with pytest.raises(ValueError):
        is_quasiconvex(HessianForm(np.eye(2)), [0.0, 0.0])


def test_hessian_symmetry_enforced():
    with pytest.raises(ValueError):
        HessianForm(np.array([[1.0, 0.5], [0.2, 1.0]]))


def test_orthocomplement_is_orthonormal_and_orthogonal():
    rng = np.random.default_rng(12)
    for n in range(2, 6):
        omega = rng.standard_normal(n)
        B = frequency_orthocomplement(omega)
        assert B.shape == (n, n - 1)
        assert np.allclose(B.T @ B, np.eye(n - 1), atol=1e-12)
        assert np.allclose(B.T @ omega, 0.0, atol=1e-10)


def test_quasiconvexity_implies_nondegeneracy_sampled():
    rng = np.random.default_rng(2024)
    quasiconvex_seen = 0
    for _ in range(200):
        n = int(rng.integers(2, 6))
        base = rng.standard_normal((n, n))
        if rng.random() < 0.5:
            H = HessianForm(base @ base.T + 0.1 * np.eye(n))
        else:
            H = HessianForm(0.5 * (base + base.T))
        omega = rng.standard_normal(n)
        if is_quasiconvex(H, omega):
            quasiconvex_seen += 1
            _, nondegenerate = bordered_determinant(H, omega)
            assert nondegenerate
    assert quasiconvex_seen >= 20


def test_determinant_orthogonal_invariance():
    rng = np.random.default_rng(55)
    for _ in range(50):
        n = int(rng.integers(2, 6))
        H = rng.standard_normal((n, n))
        H = HessianForm(0.5 * (H + H.T))
        omega = rng.standard_normal(n)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        det1, _ = bordered_determinant(H, omega)
        det2, _ = bordered_determinant(HessianForm(Q @ H.entries @ Q.T), Q @ omega)
        assert abs(abs(det1) - abs(det2)) <= 1e-9 * max(1.0, abs(det1))


def test_quasiconvexity_scale_invariance():
    rng = np.random.default_rng(77)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        base = rng.standard_normal((n, n))
        H = HessianForm(0.5 * (base + base.T))
        omega = rng.standard_normal(n)
        verdict = is_quasiconvex(H, omega)
        for factor in (2.0, -3.5, 0.125):
            assert is_quasiconvex(H, factor * omega) == verdict
