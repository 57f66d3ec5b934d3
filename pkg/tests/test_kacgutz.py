# tests/test_kacgutz.py
import math

import numpy as np
import pytest
from scipy import integrate

from core.errors import DomainError
from core.model import partition_function_bruteforce, validate_params
from core.specialfns import hermite
from modules.kacgutz.basis import enumerate_basis
from modules.kacgutz.kernel import (gaussian_identity_check, kac_B_matrix, kernel_K, kernel_tilde,
                                    kernel_trace_quadrature, quadratic_form_identity, reduced_kernel,
                                    reduced_kernel_eigenvalue)
from modules.kacgutz.matrix import (assemble_matrix, assemble_symmetric, gtrace_closed, gtrace_partial,
                                    matrix_element, matrix_element_series)
from modules.ruelle.transfer import ruelle_trace_closed


# ----------------------
# basis
# ----------------------
def test_basis_order_and_size():
    assert enumerate_basis(1, 3).indices == ((0,), (1,), (2,), (3,))
    assert enumerate_basis(2, 2).indices == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert enumerate_basis(2, 2, "even").indices == ((0, 0), (2, 0), (1, 1), (0, 2))
    assert len(enumerate_basis(3, 10)) == math.comb(13, 3)


@pytest.mark.parametrize("m, N, parity", [(0, 3, "both"), (2, -1, "both"), (2, 3, "all")])
def test_basis_rejects(m, N, parity):
    with pytest.raises(DomainError):
        enumerate_basis(m, N, parity)


# ----------------------
# matrix elements
# ----------------------
def test_matrix_element_hand_values(half1):
    assert matrix_element(half1, 0.0, (0,), (0,)) == pytest.approx(2.0)
    assert matrix_element(half1, 1.0, (1,), (0,)) == 0.0
    assert matrix_element(half1, 1.0, (2,), (0,)) == pytest.approx(0.5 / math.sqrt(2.0), rel=1e-14)
    assert matrix_element(half1, 1.0, (0,), (2,)) == pytest.approx(math.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("beta", [0.7, -0.4])
def test_matrix_element_matches_series(two_channel, beta):
    for alpha in [(0, 0), (2, 1), (3, 1), (1, 4)]:
        for delta in [(0, 0), (1, 1), (2, 3), (0, 4), (4, 2)]:
            expected = matrix_element_series(two_channel, beta, alpha, delta)
            assert matrix_element(two_channel, beta, alpha, delta) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_beta0_matrix_is_diagonal(two_channel):
    G = assemble_matrix(two_channel, 0.0, enumerate_basis(2, 6))
    expected = [2.0 * 0.3 ** a * 0.2 ** b for a, b in G.basis.indices]
    np.testing.assert_allclose(G.entries, np.diag(expected), rtol=1e-14, atol=0.0)


def test_odd_total_degree_entries_vanish(two_channel):
    G = assemble_matrix(two_channel, 1.3, enumerate_basis(2, 8))
    deg = G.basis.degrees
    mixed = (deg[:, None] + deg[None, :]) % 2 == 1
    assert np.all(G.entries[mixed] == 0.0)
    even, odd = G.parity_blocks()
    assert even.shape[0] + odd.shape[0] == G.size


@pytest.mark.parametrize("beta", [1.0, -1.0])
def test_similarity_transform_is_symmetric(three_channel, beta):
    G = assemble_matrix(three_channel, beta, enumerate_basis(3, 8))
    assert G.symmetry_defect() <= 1e-12 * np.max(np.abs(G.entries))
    S = G.symmetrized()
    np.testing.assert_allclose(S, G.similarity_transform(), rtol=1e-12, atol=1e-14)
    np.testing.assert_array_equal(S, assemble_symmetric(three_channel, beta, G.basis))


def test_assemble_rejects_wrong_basis(two_channel):
    with pytest.raises(DomainError):
        assemble_matrix(two_channel, 1.0, enumerate_basis(3, 4))


def test_matrix_trace_converges(half1):
    G = assemble_matrix(half1, 1.0, enumerate_basis(1, 60))
    assert G.trace() == pytest.approx(4.0 * math.e, rel=1e-8)
    assert gtrace_closed(half1, 1.0) == pytest.approx(ruelle_trace_closed(half1, 1.0).real, rel=1e-14)
    assert gtrace_partial(half1, 1.0, 60) == pytest.approx(G.trace(), rel=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0])
def test_trace_powers_give_partition_functions(half1, beta):
    gaps = {}
    for N in (10, 20, 40, 60):
        G = assemble_matrix(half1, beta, enumerate_basis(1, N))
        for n in range(1, 5):
            Z = partition_function_bruteforce(half1, beta, n)
            gaps.setdefault(n, []).append(abs((1 - 0.5 ** n) * G.trace_power(n) - Z) / Z)
    for n, g in gaps.items():
        assert g[-1] <= 1e-6
        for a, b in zip(g, g[1:]):
            assert b < a or b < 1e-11


# ----------------------
# kernels
# ----------------------
def test_kernel_values(half1):
    assert kernel_tilde(half1, [0.0], [0.0]) == pytest.approx(0.651470, rel=1e-6)
    assert kernel_K(half1, 0.0, [0.4], [-0.2]) == pytest.approx(kernel_tilde(half1, [0.4], [-0.2]), rel=1e-15)
    assert kernel_K(half1, 1.2, [0.4], [-0.2]) == pytest.approx(kernel_K(half1, 1.2, [-0.2], [0.4]), rel=1e-15)
    with pytest.raises(DomainError):
        kernel_K(half1, -0.1, [0.0], [0.0])


def test_kernel_K_weight(half1):
    s = math.sqrt(1.2)
    expected = math.sqrt(math.cosh(0.4 * s) * math.cosh(0.2 * s)) * kernel_tilde(half1, [0.4], [-0.2])
    assert kernel_K(half1, 1.2, [0.4], [-0.2]) == pytest.approx(expected, rel=1e-14)


def test_kernel_K_far_from_origin(half1, two_channel):
    assert kernel_K(half1, 1.0, [1000.0], [1000.0]) == 0.0
    assert kernel_K(half1, 1.0, [1000.0], [-1000.0]) == 0.0
    assert kernel_K(two_channel, 2.0, [800.0, -600.0], [800.0, -600.0]) == 0.0
    strong = validate_params(1, [0.3], [2.0])
    value = kernel_K(strong, 1.0, [40.0], [40.0])
    assert math.isfinite(value) and value >= 0.0


def test_kernel_is_positive_semidefinite(two_channel):
    rng = np.random.default_rng(7)
    pts = rng.normal(scale=1.5, size=(25, 2))
    gram = np.array([[kernel_K(two_channel, 1.0, p, q) for q in pts] for p in pts])
    w = np.linalg.eigvalsh(gram)
    assert w.min() >= -1e-12 * w.max()


@pytest.mark.parametrize("a", [0, 1, 4])
@pytest.mark.parametrize("x", [0.0, 0.35])
def test_reduced_kernel_eigenfunctions(half1, a, x):
    value, _ = integrate.quad(lambda y: reduced_kernel(half1, [x], [y]) * hermite((a,), [y]),
                              -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)
    expected = reduced_kernel_eigenvalue(half1, (a,)) * hermite((a,), [x])
    assert value == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
def test_kernel_trace_quadrature_m1(half1, beta):
    assert kernel_trace_quadrature(half1, beta) == pytest.approx(ruelle_trace_closed(half1, beta).real, rel=1e-8)


def test_kernel_trace_quadrature_m2(two_channel):
    assert kernel_trace_quadrature(two_channel, 0.5) == pytest.approx(
        ruelle_trace_closed(two_channel, 0.5).real, rel=1e-7)


def test_kernel_trace_quadrature_rejects_m3(three_channel):
    with pytest.raises(DomainError):
        kernel_trace_quadrature(three_channel, 0.5)


# ----------------------
# B-matrices and Gaussian identities
# ----------------------
def test_B_matrix_determinants():
    gamma = math.log(2.0)
    assert kac_B_matrix(1.0, gamma, 2).det == pytest.approx(1.0, rel=1e-12)
    assert kac_B_matrix(1.0, gamma, 4).det == pytest.approx(25.0 / 9.0, rel=1e-12)
    for n in range(2, 9):
        for betaJ, g in ((0.5, 0.3), (2.0, 1.7)):
            report = kac_B_matrix(betaJ, g, n)
            assert report.det_relative_error <= 1e-10
            assert report.positive_definite
    with pytest.raises(DomainError):
        kac_B_matrix(1.0, gamma, 1)


def test_quadratic_form_identity():
    rng = np.random.default_rng(3)
    for _ in range(100):
        x = rng.normal(size=rng.integers(2, 9))
        lhs, rhs = quadratic_form_identity(0.8, x)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_gaussian_identity():
    assert gaussian_identity_check([[1.0]], [0.0]) == pytest.approx((1.0, 1.0), rel=1e-9)
    lhs, rhs = gaussian_identity_check([[2.0]], [1.0])
    assert lhs == pytest.approx(math.e, rel=1e-15)
    assert rhs == pytest.approx(math.e, rel=1e-9)
    with pytest.raises(DomainError):
        gaussian_identity_check([[1.0, 2.0], [2.0, 1.0]], [0.0, 0.0])


@pytest.mark.parametrize("A, x", [
    ([[0.5]], [1.3]),
    ([[3.0]], [-0.4]),
    ([[7.5]], [0.2]),
    ([[2.0, 1.0], [1.0, 2.0]], [0.3, -0.2]),
    ([[1.0, 0.3], [0.3, 0.5]], [-0.6, 0.8]),
    ([[4.0, -1.5], [-1.5, 1.0]], [0.25, 0.5]),
])
def test_gaussian_identity_positive_definite(A, x):
    lhs, rhs = gaussian_identity_check(A, x)
    assert lhs == pytest.approx(math.exp(0.5 * float(np.asarray(x) @ np.asarray(A) @ np.asarray(x))), rel=1e-14)
    assert rhs == pytest.approx(lhs, rel=1e-8)
