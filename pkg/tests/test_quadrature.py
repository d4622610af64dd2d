import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphladder.quadrature import (
    AccuracyError,
    MAX_NODES,
    gauss_legendre,
    integrate,
)


class TestGaussLegendre:
    def test_single_node_is_midpoint(self):
        rule = gauss_legendre(1)
        assert rule.nodes.tolist() == [0.0]
        assert rule.weights.tolist() == [2.0]

    def test_two_nodes_solve_moment_equations(self):
        # symmetric ansatz {-x, x} with weights {w, w}:
        # moment 0: 2w = 2, moment 2: 2 w x^2 = 2/3 => x = sqrt(1/3)
        rule = gauss_legendre(2)
        x = math.sqrt(1.0 / 3.0)
        assert rule.nodes == pytest.approx([-x, x], rel=1e-15)
        assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-15)

    def test_two_nodes_integrate_x_squared(self):
        rule = gauss_legendre(2)
        val = float(np.sum(rule.weights * rule.nodes**2))
        assert val == pytest.approx(2.0 / 3.0, rel=1e-15)

    @pytest.mark.parametrize("n", [0, -3, MAX_NODES + 1])
    def test_invalid_node_counts(self, n):
        with pytest.raises(ValueError):
            gauss_legendre(n)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 10, 64, 129, 256])
    def test_weights_sum_to_measure(self, n):
        rule = gauss_legendre(n)
        assert abs(math.fsum(rule.weights.tolist()) - 2.0) <= 1e-13
        assert np.all(rule.weights > 0)

    @pytest.mark.parametrize("n", [2, 3, 7, 10, 64, 129])
    def test_nodes_increasing_and_symmetric(self, n):
        rule = gauss_legendre(n)
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.nodes == -rule.nodes[::-1])
        assert np.all(rule.weights == rule.weights[::-1])

    @pytest.mark.parametrize("n", [4, 9, 33])
    def test_even_moments(self, n):
        rule = gauss_legendre(n)
        for j in range(n):
            val = float(np.sum(rule.weights * rule.nodes ** (2 * j)))
            want = 2.0 / (2 * j + 1)
            assert abs(val - want) <= 1e-12 * want

    def test_exactness_at_degree_2n_minus_1(self):
        # degree 99 polynomial x^98 + x^99 integrated by the 50-node rule
        rule = gauss_legendre(50)
        val = float(np.sum(rule.weights * (rule.nodes**98 + rule.nodes**99)))
        assert val == pytest.approx(2.0 / 99.0, rel=1e-12)

    def test_rules_are_immutable_and_cached(self):
        rule = gauss_legendre(7)
        assert gauss_legendre(7) is rule
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0

    def test_largest_supported_rule(self):
        rule = gauss_legendre(MAX_NODES)
        assert len(rule) == MAX_NODES
        assert abs(math.fsum(rule.weights.tolist()) - 2.0) <= 1e-13
        assert np.all(np.diff(rule.nodes) > 0)
        second_moment = float(np.sum(rule.weights * rule.nodes**2))
        assert second_moment == pytest.approx(2.0 / 3.0, rel=1e-12)


class TestIntegrate:
    def test_sine_over_period(self):
        val = integrate(math.sin, 0.0, math.pi, tol=1e-12)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_arcsine_integral_with_both_flags(self):
        val = integrate(lambda x: 1.0 / math.sqrt(1.0 - x * x), -1.0, 1.0,
                        tol=1e-12, endpoint_singularity="sqrt_at_both")
        assert val == pytest.approx(math.pi, abs=1e-11)

    def test_inverse_sqrt_at_left_endpoint(self):
        val = integrate(lambda x: 1.0 / math.sqrt(x), 0.0, 1.0,
                        tol=1e-12, endpoint_singularity="sqrt_at_a")
        assert val == pytest.approx(2.0, abs=1e-11)

    def test_sqrt_cusp_at_right_endpoint(self):
        # integrand vanishing like a square root is the turning-point case
        val = integrate(lambda x: math.sqrt(1.0 - x), 0.0, 1.0,
                        tol=1e-12, endpoint_singularity="sqrt_at_b")
        assert val == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_full_energy_loop_at_two_thirds(self):
        # loop integral of tau d(phi) = 2 pi (1 - c); c = 2/3 gives 2 pi / 3
        c = 2.0 / 3.0
        lo, hi = math.asin(c), math.pi - math.asin(c)

        def integrand(psi):
            v = 1.0 - c * c / math.sin(psi) ** 2
            return math.sqrt(v) if v > 0.0 else 0.0

        loop = 2.0 * integrate(integrand, lo, hi, tol=1e-12,
                               endpoint_singularity="sqrt_at_both")
        assert loop == pytest.approx(2.0 * math.pi / 3.0, abs=1e-10)

    def test_unflagged_singularity_raises_accuracy_error(self):
        with pytest.raises(AccuracyError) as info:
            integrate(lambda x: 1.0 / math.sqrt(x), 0.0, 1.0, tol=1e-13)
        err = info.value
        assert err.estimate == pytest.approx(2.0, abs=1e-4)
        assert err.error_bound > 0.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            integrate(math.sin, 1.0, 0.0, tol=1e-8)
        with pytest.raises(ValueError):
            integrate(math.sin, 0.0, 1.0, tol=0.0)
        with pytest.raises(ValueError):
            integrate(math.sin, 0.0, 1.0, tol=1e-8,
                      endpoint_singularity="cube_at_a")

    @given(alpha=st.floats(-3.0, 3.0), beta=st.floats(-3.0, 3.0))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, alpha, beta):
        f = math.cos
        g = lambda x: x * x  # noqa: E731
        tol = 1e-10
        combined = integrate(lambda x: alpha * f(x) + beta * g(x),
                             0.0, 2.0, tol=tol)
        separate = (alpha * integrate(f, 0.0, 2.0, tol=tol)
                    + beta * integrate(g, 0.0, 2.0, tol=tol))
        assert abs(combined - separate) <= 2.0 * tol * (1 + abs(alpha) + abs(beta))

    @given(split=st.floats(0.1, 1.9))
    @settings(max_examples=25, deadline=None)
    def test_interval_additivity(self, split):
        f = lambda x: math.exp(-x) * math.sin(3 * x)  # noqa: E731
        tol = 1e-10
        whole = integrate(f, 0.0, 2.0, tol=tol)
        parts = integrate(f, 0.0, split, tol=tol) + integrate(f, split, 2.0, tol=tol)
        assert abs(whole - parts) <= 2.0 * tol
