import pytest

from tracelab import (
    classify_alpha_z,
    classify_gamma,
    classify_lambda,
    classify_omega,
    classify_psi,
)


class TestGamma:
    @pytest.mark.parametrize("p,s,expected", [
        (0.3, 1.0, "concave"),
        (0.5, 2.0, "concave"),      # boundary s = 1/p inclusive
        (0.5, 2.1, "neither"),
        (1.0, 0.5, "concave"),
        (1.0, 1.0, "affine"),       # concave and convex at once
        (0.0, 7.0, "affine"),       # constant functional
        (-1.0, 1.0, "convex"),
        (-0.5, 3.0, "convex"),
        (2.0, 0.5, "convex"),       # boundary s = 1/p inclusive
        (2.0, 0.4, "neither"),
        (1.5, 1.0, "convex"),
        (3.0, 1.0, "neither"),
        (-1.5, 1.0, "neither"),
        (0.5, -1.0, "unknown"),
    ])
    def test_classification(self, p, s, expected):
        assert classify_gamma(p, s) == expected


class TestLambda:
    @pytest.mark.parametrize("r,s,expected", [
        (1.0, 0.5, "convex"),
        (1.0, 3.0, "convex"),
        (1.0, 0.49, "neither"),
        (0.5, 1.0, "neither"),
        (2.0, 1.0, "neither"),
        (-1.0, 0.5, "neither"),
        (0.0, 1.0, "affine"),
        (1.0, -0.5, "unknown"),
    ])
    def test_classification(self, r, s, expected):
        assert classify_lambda(r, s) == expected

    def test_convex_cells_exactly_r1_s_half(self):
        cells = [(r, s) for r in (-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0)
                 for s in (0.25, 0.5, 1.0, 2.0)
                 if classify_lambda(r, s) == "convex"]
        assert cells == [(1.0, 0.5), (1.0, 1.0), (1.0, 2.0)]


class TestPsi:
    @pytest.mark.parametrize("p,q,s,expected", [
        (1.0, 0.0, 1.0, "affine"),      # linear functional
        (0.5, 0.5, 1.0, "concave"),     # boundary s = 1/(p+q)
        (0.5, 0.5, 1.1, "neither"),
        (1.0, 1.0, 0.5, "concave"),
        (-0.5, -0.5, 1.0, "convex"),
        (2.0, -0.5, 1.0, "convex"),     # s >= 1/(p+q) = 2/3
        (2.0, -0.5, 0.5, "neither"),
        (1.0, -1.0, 5.0, "neither"),    # the excluded corner
        (0.0, 0.0, 1.0, "affine"),
        (0.5, 1.0, 0.5, "concave"),     # swap normalization q <= p
        (3.0, -0.5, 1.0, "neither"),
    ])
    def test_classification(self, p, q, s, expected):
        assert classify_psi(p, q, s) == expected


class TestOmega:
    @pytest.mark.parametrize("p,q,r,expected", [
        (-0.5, 2.0, -0.4, "convex"),     # -1 <= p+r < 0 with q=2
        (-0.5, 2.0, -0.5, "convex"),     # boundary p+r = -1
        (-0.7, 2.0, -0.5, "neither"),    # p+r < -1
        (-0.5, 1.0, -0.4, "neither"),    # q != 2
        (0.5, 2.0, -0.4, "neither"),     # p > 0
        (0.0, 2.0, -0.4, "unknown"),
    ])
    def test_classification(self, p, q, r, expected):
        assert classify_omega(p, q, r) == expected


class TestAlphaZ:
    @pytest.mark.parametrize("alpha,z,expected", [
        (0.5, 0.7, "monotone"),
        (1.5, 1.0, "monotone"),
        (1.5, 0.6, "not_monotone"),
        (3.0, 2.5, "monotone"),
        (1.0, 1.0, "unknown"),
    ])
    def test_classification(self, alpha, z, expected):
        assert classify_alpha_z(alpha, z) == expected
