# tests/test_ruelle.py
import math

import numpy as np
import pytest

from core.errors import DomainError
from core.model import partition_function_bruteforce, validate_params
from modules.ruelle.eigenfamilies import beta0_eigenpolynomial, half_eigenfunction, parity_split, zero_eigenfunction
from modules.ruelle.transfer import (AffineContraction, apply_ruelle, atiyah_bott_trace, branch_map, ruelle_residual,
                                     ruelle_trace_closed, ruelle_trace_power, sample_function, spectrum_beta0)

BETAS = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]


def test_affine_contraction_fixed_point():
    psi = AffineContraction([0.5], [0.5])
    assert psi.fixed_point() == pytest.approx([1.0])
    np.testing.assert_allclose(psi(psi.fixed_point()), psi.fixed_point())
    # psi_+ o psi_- for lambda = 1/2: z/4 + 1/4
    composed = branch_map(validate_params(1, [0.5], [1.0]), [1.0]).compose(
        branch_map(validate_params(1, [0.5], [1.0]), [-1.0]))
    np.testing.assert_allclose(composed.scale, [0.25])
    np.testing.assert_allclose(composed.fixed_point(), [[1.0 / 3.0]])
    with pytest.raises(DomainError):
        AffineContraction([1.0], [0.0])
    with pytest.raises(DomainError):
        AffineContraction([0.5, 0.5], [0.0])


def test_branch_map_fixed_points(two_channel):
    lam = np.array([0.3, 0.2])
    fixed = branch_map(two_channel, [1.0, -1.0]).fixed_point()
    np.testing.assert_allclose(fixed, [lam / (1.0 - lam), -lam / (1.0 - lam)], rtol=1e-15)


def test_atiyah_bott_trace():
    assert atiyah_bott_trace(1.0, [0.5]) == pytest.approx(2.0)
    assert atiyah_bott_trace(1.0, [0.5, 0.25]) == pytest.approx(8.0 / 3.0)
    with pytest.raises(DomainError):
        atiyah_bott_trace(1.0, [1.0])


def test_ruelle_trace_power_hand_values(half1):
    assert ruelle_trace_power(half1, 0.0, 1) == pytest.approx(4.0)
    assert ruelle_trace_power(half1, 1.0, 1) == pytest.approx(4.0 * math.e, rel=1e-14)


@pytest.mark.parametrize("fixture", ["half1", "two_channel", "three_channel"])
def test_partition_function_from_trace(fixture, request):
    params = request.getfixturevalue(fixture)
    for beta in BETAS:
        for n in range(1, 11):
            Z = partition_function_bruteforce(params, beta, n)
            from_trace = float(np.prod(1.0 - params.lam ** n)) * ruelle_trace_power(params, beta, n)
            assert from_trace.real == pytest.approx(Z, rel=1e-10)
            assert abs(from_trace.imag) <= 1e-12 * Z


def test_mixed_channel_trace():
    p = validate_params(2, [0.3, 0.5], [1.0, 2.0])
    Z = partition_function_bruteforce(p, 0.7, 4)
    trace = ruelle_trace_power(p, 0.7, 4)
    assert (1 - 0.3 ** 4) * (1 - 0.5 ** 4) * trace.real == pytest.approx(Z, rel=1e-10)


@pytest.mark.parametrize("fixture", ["half1", "two_channel", "three_channel"])
def test_closed_trace_matches_power_one(fixture, request):
    params = request.getfixturevalue(fixture)
    for beta in BETAS:
        closed = ruelle_trace_closed(params, beta)
        assert ruelle_trace_power(params, beta, 1) == pytest.approx(closed, rel=1e-12)


def test_closed_trace_half_model_at_zero():
    p = validate_params(2, [0.5, 0.5], [1.0, 1.0])
    assert ruelle_trace_closed(p, 0.0) == pytest.approx(8.0)


def test_apply_ruelle_on_constant(two_channel):
    one = sample_function(two_channel, lambda z: 1.0)
    z = np.array([0.3 + 0.1j, -0.2])
    expected = 2.0 * np.cosh(0.8 * np.dot(two_channel.J, z))
    assert apply_ruelle(two_channel, 0.8, one, z) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(DomainError):
        apply_ruelle(two_channel, 0.8, one, [0.1])


def test_apply_ruelle_outside_polydisc(half1):
    F = sample_function(half1, lambda z: 1.0 / (3.0 - z[0]), entire=False)
    with pytest.raises(DomainError):
        apply_ruelle(half1, 1.0, F, [10.0])


def test_apply_ruelle_real_on_real_axis(three_channel):
    F = sample_function(three_channel, lambda z: np.exp(0.3 * z[0] - z[1] * z[2]))
    value = apply_ruelle(three_channel, -0.7, F, [0.2, -0.4, 0.9])
    assert abs(value.imag) == 0.0


def test_parity_is_preserved(half1):
    F = sample_function(half1, lambda z: np.exp(0.3 * z[0] + z[0] ** 2))
    even, odd = parity_split(F)
    for z in (0.4, 0.2 + 0.3j):
        LE = apply_ruelle(half1, 0.9, even, [z])
        LO = apply_ruelle(half1, 0.9, odd, [z])
        assert apply_ruelle(half1, 0.9, even, [-z]) == pytest.approx(LE, rel=1e-13)
        assert apply_ruelle(half1, 0.9, odd, [-z]) == pytest.approx(-LO, rel=1e-13)


@pytest.mark.parametrize("n, alpha", [((0,), (1,)), ((1,), (1,)), ((0,), (3,))])
def test_zero_eigenfunctions_m1(half1, n, alpha):
    f = zero_eigenfunction(half1, 1.0, n, alpha)
    assert ruelle_residual(half1, 1.0, f, 0.0) <= 1e-10


def test_zero_eigenfunction_two_channels(two_channel):
    f = zero_eigenfunction(two_channel, 0.6, (0, 1), (1, 0))
    assert ruelle_residual(two_channel, 0.6, f, 0.0) <= 1e-10
    with pytest.raises(DomainError):
        zero_eigenfunction(two_channel, 0.6, (0, 0), (1, 1))


@pytest.mark.parametrize("beta", [0.3, 1.0, -0.8])
def test_half_eigenfunctions(beta):
    half1 = validate_params(1, [0.5], [1.0])
    F, rho = half_eigenfunction(half1, beta)
    assert rho == pytest.approx(math.exp(beta))
    assert ruelle_residual(half1, beta, F, rho) <= 1e-12

    half2 = validate_params(2, [0.5, 0.5], [0.6, 0.4])
    G, rho2 = half_eigenfunction(half2, beta, coefficients=[1.0, -1.0], degree=1)
    assert rho2 == pytest.approx(math.exp(beta) / 2.0)
    assert ruelle_residual(half2, beta, G, rho2) <= 1e-12


def test_half_eigenfunction_rejects(two_channel):
    with pytest.raises(DomainError):
        half_eigenfunction(two_channel, 1.0)
    half2 = validate_params(2, [0.5, 0.5], [1.0, 1.0])
    with pytest.raises(DomainError):
        half_eigenfunction(half2, 1.0, coefficients=[1.0, 1.0], degree=1)


def test_spectrum_beta0():
    assert spectrum_beta0(validate_params(1, [0.5], [1.0]), 3) == pytest.approx([2.0, 1.0, 0.5, 0.25])
    assert spectrum_beta0(validate_params(2, [0.5, 0.5], [1.0, 1.0]), 1) == pytest.approx([2.0, 1.0, 1.0])
    assert spectrum_beta0(validate_params(1, [0.3], [1.0]), 2) == pytest.approx([2.0, 0.6, 0.18])


@pytest.mark.parametrize("lam", [0.5, 0.3])
def test_beta0_eigenpolynomials(lam):
    p = validate_params(1, [lam], [1.0])
    q2 = beta0_eigenpolynomial(p, 2)
    assert q2.coef[0] == pytest.approx(lam ** 2 / (lam ** 2 - 1.0), rel=1e-14)
    for k in range(6):
        q = beta0_eigenpolynomial(p, k)
        F = sample_function(p, lambda z, q=q: q(z[0]))
        assert ruelle_residual(p, 0.0, F, 2.0 * lam ** k) <= 1e-12
