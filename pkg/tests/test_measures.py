import math

import numpy as np
import pytest
import scipy.integrate

from micromaser.measures import (
    DegenerateMeasureError,
    TimeMeasure,
    average,
    build_basis,
    cross_moment_identity,
    expansion_coeffs,
    moment,
)


def test_exponential_moments_are_factorials():
    m = TimeMeasure.exponential()
    for n in range(10):
        assert moment(m, n) == math.factorial(n)


def test_quadrature_measure_reproduces_exponential_moments():
    m = TimeMeasure.gauss_laguerre(60)
    for n in range(8):
        assert moment(m, n) == pytest.approx(math.factorial(n), rel=1e-10)


def test_discrete_measure_normalizes_nodes_to_unit_mean():
    m = TimeMeasure.discrete([1.0, 3.0], [0.5, 0.5])
    assert m.tau_bar == pytest.approx(2.0)
    assert float(m.weights @ m.nodes) == pytest.approx(1.0)
    assert m.support_size == 2


def test_measure_validation_rejects_bad_weights():
    with pytest.raises(ValueError):
        TimeMeasure("discrete", 1.0, np.array([1.0]), np.array([0.5]))
    with pytest.raises(ValueError):
        TimeMeasure("discrete", 1.0, np.array([0.5, 1.5]), np.array([0.7, -0.3]))
    with pytest.raises(ValueError):
        TimeMeasure("nonsense", 1.0)


def test_average_against_scipy_quad():
    m = TimeMeasure.exponential()
    got = average(m, lambda x: np.sin(0.4 * x) ** 2)
    want, _ = scipy.integrate.quad(lambda x: np.sin(0.4 * x) ** 2 * np.exp(-x), 0, np.inf)
    assert got == pytest.approx(want, abs=1e-12)


class TestExponentialBasis:
    """The orthonormal family of e^{-x} dx with leading signs (-1)^k."""

    def test_first_polynomials(self):
        basis = build_basis(TimeMeasure.exponential(), 3)
        assert np.allclose(basis.coeffs[0], [1.0], atol=1e-12)
        assert np.allclose(basis.coeffs[1], [1.0, -1.0], atol=1e-12)
        assert np.allclose(basis.coeffs[2], [1.0, -2.0, 0.5], atol=1e-12)
        # degree 3: 1 - 3x + 3x^2/2 - x^3/6
        assert np.allclose(
            basis.coeffs[3], [1.0, -3.0, 1.5, -1.0 / 6.0], atol=1e-12
        )

    def test_orthonormality(self):
        basis = build_basis(TimeMeasure.exponential(), 6)
        gram = np.array(
            [
                [basis.inner(basis.coeffs[i], basis.coeffs[j]) for j in range(7)]
                for i in range(7)
            ]
        )
        assert np.abs(gram - np.eye(7)).max() < 1e-10

    def test_expansion_coefficients_closed_form(self):
        # a_nk = (-1)^k n! C(n, k) for the exponential measure
        basis = build_basis(TimeMeasure.exponential(), 5)
        for n in range(6):
            got = expansion_coeffs(basis, n)
            want = [
                (-1.0) ** k * math.factorial(n) * math.comb(n, k) for k in range(6)
            ]
            assert np.allclose(got[: n + 1], want[: n + 1], rtol=1e-9, atol=1e-9)
            assert np.abs(got[n + 1 :]).max() < 1e-8 if n < 5 else True

    def test_cross_moments_give_factorials(self):
        basis = build_basis(TimeMeasure.exponential(), 8)
        for n in range(5):
            for m in range(5):
                got = cross_moment_identity(basis, n, m)
                assert got == pytest.approx(math.factorial(n + m), rel=1e-9)

    def test_expansion_reconstructs_monomial_pointwise(self):
        basis = build_basis(TimeMeasure.exponential(), 4)
        a = expansion_coeffs(basis, 3)
        x = np.linspace(0.0, 4.0, 9)
        total = sum(a[k] * basis.evaluate(k, x) for k in range(5))
        assert np.allclose(total, x**3, rtol=1e-9, atol=1e-9)


def test_expansion_beyond_degree_needs_finite_support():
    basis = build_basis(TimeMeasure.exponential(), 2)
    with pytest.raises(ValueError):
        expansion_coeffs(basis, 3)


def test_point_mass_spans_everything():
    m = TimeMeasure.discrete([1.0], [1.0])
    basis = build_basis(m, 0)
    # x^3 = 1 at the single support point, so a_30 = 1
    assert expansion_coeffs(basis, 3) == pytest.approx([1.0])


def test_two_point_measure_basis_and_degeneracy():
    m = TimeMeasure.discrete([0.5, 1.5], [0.5, 0.5])
    basis = build_basis(m, 1)
    assert np.allclose(basis.coeffs[1], [2.0, -2.0], atol=1e-10)  # f1 = 2 - 2x
    with pytest.raises(DegenerateMeasureError):
        build_basis(m, 2)


def test_gauss_laguerre_basis_matches_exponential():
    exact = build_basis(TimeMeasure.exponential(), 3)
    quad = build_basis(TimeMeasure.gauss_laguerre(80), 3)
    for k in range(4):
        assert np.allclose(exact.coeffs[k], quad.coeffs[k], rtol=1e-8, atol=1e-8)
