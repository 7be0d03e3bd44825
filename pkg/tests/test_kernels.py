"""Kernel unit tests: hand-computed values, symmetry, positive definiteness."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfes import MultiFidelityKernel, RationalQuadratic, augment


def test_rq_hand_computed_value():
    # sigma^2 (1 + d^2 / (2 alpha l^2))^(-alpha) with sigma^2=2, alpha=0.5, l=2, d=3
    k = RationalQuadratic(2.0, 0.5, (2.0,))
    got = k(np.array([[0.0]]), np.array([[3.0]]))[0, 0]
    assert got == pytest.approx(2.0 / np.sqrt(1.0 + 9.0 / 4.0), rel=1e-12)


def test_rq_diagonal_is_variance():
    k = RationalQuadratic(3.7, 1.3, (0.5, 2.0))
    X = np.random.default_rng(0).uniform(-5, 5, size=(7, 2))
    assert np.allclose(np.diag(k(X)), 3.7)
    assert np.allclose(k.diag(X), 3.7)


def test_rq_symmetry_and_bounds():
    rng = np.random.default_rng(1)
    X = rng.uniform(-3, 3, size=(20, 3))
    k = RationalQuadratic(1.5, 0.25, (1.0, 2.0, 0.7))
    K = k(X)
    assert np.allclose(K, K.T)
    assert np.all(K <= 1.5 + 1e-12)
    assert np.all(K > 0.0)  # RQ never reaches zero at finite distance


def test_rq_ard_lengthscales_weight_dimensions():
    k = RationalQuadratic(1.0, 2.0, (1.0, 100.0))
    a = np.array([[0.0, 0.0]])
    move_short = np.array([[1.0, 0.0]])
    move_long = np.array([[0.0, 1.0]])
    # A unit move along the short lengthscale decorrelates much more.
    assert k(a, move_short)[0, 0] < k(a, move_long)[0, 0]


def test_rq_large_alpha_approaches_squared_exponential():
    k = RationalQuadratic(1.0, 1e7, (1.5,))
    d = 2.3
    got = k(np.array([[0.0]]), np.array([[d]]))[0, 0]
    assert got == pytest.approx(np.exp(-(d**2) / (2 * 1.5**2)), rel=1e-5)


def test_rq_rejects_bad_hyperparameters():
    for bad in (
        dict(variance=-1.0, alpha=1.0, lengthscales=(1.0,)),
        dict(variance=1.0, alpha=0.0, lengthscales=(1.0,)),
        dict(variance=1.0, alpha=1.0, lengthscales=(0.0,)),
        dict(variance=1.0, alpha=1.0, lengthscales=()),
    ):
        with pytest.raises(ValueError):
            RationalQuadratic(**bad)


def test_mf_kernel_block_structure():
    """sim-sim = k_sim, real-real = k_sim + k_eps, cross = k_sim."""
    ks = RationalQuadratic(2.0, 0.5, (1.0,))
    ke = RationalQuadratic(0.5, 2.0, (2.0,))
    kmf = MultiFidelityKernel(ks, ke)
    rng = np.random.default_rng(2)
    X = rng.uniform(0, 4, size=(6, 1))
    S, R = augment(X, 0), augment(X, 1)
    assert np.allclose(kmf(S, S), ks(X))
    assert np.allclose(kmf(R, R), ks(X) + ke(X))
    assert np.allclose(kmf(S, R), ks(X))
    assert np.allclose(kmf(R, S), ks(X))


def test_mf_kernel_mixed_matrix_matches_formula():
    ks = RationalQuadratic(1.2, 0.25, (0.8, 1.3))
    ke = RationalQuadratic(0.4, 4.0, (1.1, 0.6))
    kmf = MultiFidelityKernel(ks, ke)
    rng = np.random.default_rng(3)
    X = rng.uniform(-2, 2, size=(9, 2))
    flags = rng.integers(0, 2, size=9)
    A = np.hstack([flags[:, None].astype(float), X])
    K = kmf(A)
    expected = ks(X) + np.outer(flags, flags) * ke(X)
    assert np.allclose(K, expected, atol=1e-12)


def test_mf_kernel_diag():
    ks = RationalQuadratic(2.0, 1.0, (1.0,))
    ke = RationalQuadratic(0.3, 1.0, (1.0,))
    kmf = MultiFidelityKernel(ks, ke)
    A = np.array([[0.0, 1.0], [1.0, 2.0], [1.0, -1.0]])
    assert np.allclose(kmf.diag(A), [2.0, 2.3, 2.3])
    assert np.allclose(kmf.diag(A), np.diag(kmf(A)))


def test_mf_kernel_dimension_mismatch():
    with pytest.raises(ValueError):
        MultiFidelityKernel(
            RationalQuadratic(1.0, 1.0, (1.0,)), RationalQuadratic(1.0, 1.0, (1.0, 1.0))
        )
    kmf = MultiFidelityKernel(
        RationalQuadratic(1.0, 1.0, (1.0,)), RationalQuadratic(1.0, 1.0, (1.0,))
    )
    with pytest.raises(ValueError):
        kmf(np.array([[0.0, 1.0, 2.0]]))  # two parameter dims for 1-D kernels


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mf_kernel_gram_is_positive_semidefinite(seed):
    rng = np.random.default_rng(seed)
    ks = RationalQuadratic(
        float(rng.uniform(0.1, 5)), float(rng.uniform(0.1, 8)),
        tuple(rng.uniform(0.2, 4, size=2)),
    )
    ke = RationalQuadratic(
        float(rng.uniform(0.1, 5)), float(rng.uniform(0.1, 8)),
        tuple(rng.uniform(0.2, 4, size=2)),
    )
    X = rng.uniform(-5, 5, size=(25, 2))
    flags = rng.integers(0, 2, size=25).astype(float)
    A = np.hstack([flags[:, None], X])
    K = MultiFidelityKernel(ks, ke)(A)
    assert np.linalg.eigvalsh(K).min() >= -1e-9
