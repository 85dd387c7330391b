"""Tests for the stabilized moment determinants."""

import numpy as np
import pytest

from skew_aztec_kernels.domain.exceptions import QuadratureError
from skew_aztec_kernels.domain.services.moment_ensemble import (
    MomentEnsemble,
    WeightedNodes,
    bilinear_form,
    ensemble_from_rule,
)
from skew_aztec_kernels.domain.services.quadrature import (
    andreief_det,
    circle,
    moment_matrix,
    nodes_weights,
)

U, V = np.array([2.0, 2.5 + 0.5j]), np.array([3.0, -2.2])


def _weight(r: int):
    """exp(w) / w^(2r): moments 1/(2r - 1 - k)! for k < 2r."""
    return lambda w: np.exp(w) / w ** (2 * r)


def _ensemble(r: int) -> MomentEnsemble:
    nodes, weights = nodes_weights(circle(1.0, 128))
    return ensemble_from_rule(nodes, weights, nodes - 2 * r * np.log(nodes), r)


def _direct(r: int, size: int, factor) -> np.ndarray:
    """Plain moment determinants of weight * factor(u, v, w), normalized."""
    contour = circle(1.0, 128)
    norm = andreief_det(moment_matrix(contour, _weight(r), r), r)
    out = np.empty((len(U), len(V)), dtype=complex)
    for i, u in enumerate(U):
        for j, v in enumerate(V):
            def weighted(w, u=u, v=v):
                return _weight(r)(w) * factor(u, v, w)

            out[i, j] = andreief_det(moment_matrix(contour, weighted, size), size) / norm
    return out


def _direct_coincident(r: int, size: int, factor) -> np.ndarray:
    """_direct along u = v, with factor(u, w)."""
    contour = circle(1.0, 128)
    norm = andreief_det(moment_matrix(contour, _weight(r), r), r)
    out = np.empty(len(U), dtype=complex)
    for i, u in enumerate(U):
        def weighted(w, u=u):
            return _weight(r)(w) * factor(u, w)

        out[i] = andreief_det(moment_matrix(contour, weighted, size), size) / norm
    return out


class TestMomentEnsemble:
    """Each ratio against the unstabilized moment determinants."""

    @pytest.mark.parametrize("r", [1, 2])
    def test_log_moment_det(self, r):
        direct = andreief_det(moment_matrix(circle(1.0, 128), _weight(r), r), r)

        assert np.exp(_ensemble(r).log_moment_det) == pytest.approx(direct, rel=1e-9)

    @pytest.mark.parametrize("r", [1, 2])
    def test_ratio(self, r):
        expected = _direct(r, r, lambda u, v, w: (v - w) / (u - w))

        np.testing.assert_allclose(_ensemble(r).ratio(U, V), expected, rtol=1e-8)

    @pytest.mark.parametrize("r", [1, 2])
    def test_plus_ratio(self, r):
        expected = _direct(r, r - 1, lambda u, v, w: (u - w) * (v - w))

        np.testing.assert_allclose(_ensemble(r).plus_ratio(U, V), expected, rtol=1e-8)

    @pytest.mark.parametrize("r", [1, 2])
    def test_minus_ratio(self, r):
        expected = _direct(r, r + 1, lambda u, v, w: 1 / ((u - w) * (v - w)))

        np.testing.assert_allclose(_ensemble(r).minus_ratio(U, V), expected, rtol=1e-8)

    @pytest.mark.parametrize("r", [1, 2])
    def test_plus_ratio_at_coincident_arguments(self, r):
        expected = _direct_coincident(r, r - 1, lambda u, w: (u - w) ** 2)

        np.testing.assert_allclose(_ensemble(r).plus_ratio_coincident(U), expected, rtol=1e-8)

    @pytest.mark.parametrize("r", [1, 2])
    def test_minus_ratio_at_coincident_arguments(self, r):
        expected = _direct_coincident(r, r + 1, lambda u, w: 1 / (u - w) ** 2)

        np.testing.assert_allclose(_ensemble(r).minus_ratio_coincident(U), expected, rtol=1e-8)

    def test_empty_ensemble(self):
        """r = 0: ratio 1, no plus term, and the minus term is a single moment."""
        nodes, weights = nodes_weights(circle(1.0, 128))
        ensemble = ensemble_from_rule(nodes, weights, nodes - np.log(nodes), 0)

        np.testing.assert_allclose(ensemble.ratio(U, V), 1.0)
        np.testing.assert_allclose(ensemble.plus_ratio(U, V), 0.0)
        np.testing.assert_allclose(
            ensemble.minus_ratio(U, V), 1 / np.multiply.outer(U, V), rtol=1e-10
        )

    def test_negative_size_rejected(self):
        nodes, weights = nodes_weights(circle(1.0, 32))

        with pytest.raises(QuadratureError):
            MomentEnsemble(nodes, np.log(weights), -1)

    def test_non_finite_weight_rejected(self):
        nodes, weights = nodes_weights(circle(1.0, 32))
        logs = np.log(weights.astype(complex))
        logs[3] = np.nan

        with pytest.raises(QuadratureError):
            MomentEnsemble(nodes, logs, 1)


class TestBilinearForm:
    """Test cases for pruned double sums."""

    def test_residues_on_two_circles(self):
        left_nodes = nodes_weights(circle(1.0, 64))
        right_nodes = nodes_weights(circle(2.0, 64))
        left = WeightedNodes.of(left_nodes, np.zeros(64, dtype=complex))
        right = WeightedNodes.of(right_nodes, np.zeros(64, dtype=complex))

        value = bilinear_form(left, right, lambda u, v: 1 / np.multiply.outer(u, v))

        assert value == pytest.approx(1.0, abs=1e-12)

    def test_overflow_rejected(self):
        nodes = np.array([1.0 + 0j])
        big = WeightedNodes(nodes, np.array([1.0 + 0j]), 400.0)

        with pytest.raises(QuadratureError):
            bilinear_form(big, big, lambda u, v: np.ones((len(u), len(v))))
