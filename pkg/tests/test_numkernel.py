"""Substrate tests: roots, eigenvalues, null spaces, determinants, matching."""

import numpy as np
import pytest

from nahmkit.numkernel import (
    MAX_POLY_DEGREE,
    NumericalError,
    as_poly,
    cokernel_basis,
    det_polymatrix,
    eigenvalues,
    multiset_match,
    numerical_rank,
    poly_from_roots,
    poly_roots,
)


def _sorted(zs):
    return sorted(np.asarray(zs).tolist(), key=lambda z: (z.real, z.imag))


class TestPolyRoots:
    def test_quadratic_factorization(self):
        roots = poly_roots([-1, 0, 1])  # z^2 - 1
        assert multiset_match(roots, [1, -1], 1e-10).ok

    def test_double_root_at_zero(self):
        roots = poly_roots([0, 0, 1])  # z^2
        assert len(roots) == 2
        assert max(abs(r) for r in roots) < 1e-6

    def test_linear_from_scaling(self):
        # q = 2*lam/xi with lam=1, xi=2 gives the monic linear factor z - 1
        roots = poly_roots([-1, 1])
        assert multiset_match(roots, [1], 1e-12).ok

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError, match="identically zero"):
            poly_roots([0.0])

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            poly_roots([1.0] * (MAX_POLY_DEGREE + 2))

    def test_backward_error_contract(self, rng):
        # refactoring the monic polynomial from its roots reproduces it
        for _ in range(50):
            deg = int(rng.integers(1, 13))
            coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            coeffs[-1] += 2.0  # keep the leading term away from zero
            roots = poly_roots(coeffs, tol=1e-8)
            rebuilt = poly_from_roots(roots, leading=coeffs[-1])
            scale = np.max(np.abs(coeffs))
            assert np.max(np.abs(rebuilt - as_poly(coeffs))) <= 1e-8 * scale


class TestEigenvalues:
    def test_diagonal(self):
        assert multiset_match(eigenvalues(np.diag([1, 2j])), [1, 2j], 1e-12).ok

    def test_nilpotent(self):
        eigs = eigenvalues([[0, 1], [0, 0]])
        assert max(abs(e) for e in eigs) < 1e-8

    def test_similarity_invariance(self, rng):
        for _ in range(20):
            g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            m = g @ np.diag([0.3, -0.2]) @ np.linalg.inv(g)
            assert multiset_match(eigenvalues(m), [0.3, -0.2], 1e-8).ok

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            eigenvalues(np.eye(17))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            eigenvalues(np.zeros((2, 3)))


class TestCokernel:
    def test_identity_has_empty_cokernel(self):
        assert cokernel_basis(np.eye(3)).shape == (3, 0)

    def test_zero_matrix_full_basis(self):
        assert cokernel_basis(np.zeros((2, 2))).shape == (2, 2)

    def test_rank_one(self):
        basis = cokernel_basis([[1, 0], [0, 0]])
        assert basis.shape == (2, 1)
        v = basis[:, 0]
        assert abs(abs(v[1]) - 1) < 1e-12 and abs(v[0]) < 1e-12

    def test_nullity_plus_rank(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 6))
            k = int(rng.integers(0, n + 1))
            u = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
            v = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
            m = u @ v
            assert cokernel_basis(m).shape[1] + numerical_rank(m) == n

    def test_external_scale_floor(self):
        # roundoff-sized entries are full rank relatively, zero against a scale
        m = 1e-15 * np.ones((1, 1))
        assert cokernel_basis(m).shape[1] == 0
        assert cokernel_basis(m, scale=1.0).shape[1] == 1


class TestDetPolymatrix:
    def test_scalar(self):
        d = det_polymatrix([[np.array([-1, 1])]])
        assert np.allclose(d, [-1, 1])

    def test_diagonal_is_product(self):
        d = det_polymatrix([[[0, 1], [0]], [[0], [1, 1]]])
        assert np.max(np.abs(d - np.array([0, 1, 1]))) <= 1e-12

    def test_two_by_two_cofactor(self):
        d = det_polymatrix([[[0, 1], [1]], [[1], [0, 1]]])
        assert np.max(np.abs(d - np.array([-1, 0, 1]))) <= 1e-12

    def test_random_diagonal_products(self, rng):
        for _ in range(20):
            r = int(rng.integers(1, 4))
            diags = [rng.normal(size=int(rng.integers(1, 4))) + 0j for _ in range(r)]
            entries = [
                [diags[i] if i == j else np.zeros(1) for j in range(r)] for i in range(r)
            ]
            expected = np.ones(1, dtype=complex)
            for dpoly in diags:
                expected = np.polynomial.polynomial.polymul(expected, dpoly)
            got = det_polymatrix(entries)
            scale = max(1.0, np.max(np.abs(expected)))
            assert np.max(np.abs(as_poly(expected) - got)) <= 1e-12 * scale


class TestMultisetMatch:
    def test_permutation(self):
        assert multiset_match([1, 1j], [1j, 1], 1e-12).ok

    def test_distance_exceeds_tol(self):
        res = multiset_match([0], [1e-6], 1e-9)
        assert not res.ok
        assert res.max_distance == pytest.approx(1e-6)

    def test_assignment_cost(self):
        assert multiset_match([1, 1 + 1e-13], [1, 1], 1e-10).ok

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            multiset_match([1], [1, 2], 1e-9)

    def test_shuffle_invariance(self, rng):
        for _ in range(20):
            s = rng.normal(size=6) + 1j * rng.normal(size=6)
            t = rng.permutation(s)
            res = multiset_match(s, t, 1e-12)
            assert res.ok and res.max_distance == 0.0
