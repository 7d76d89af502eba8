import math

import numpy as np
import pytest

from svdlab.errors import DimensionMismatch, LengthMismatch, ZeroVector
from svdlab.matrix import (
    EPS,
    EigResult,
    Permutation,
    SvdResult,
    SymmetricMatrix,
    TridiagonalMatrix,
    apply_permutation,
    givens,
    householder_vector,
    orth_tol,
    read_matrix_text,
    sorting_permutation,
    svd_from_eig,
    write_matrix_text,
)


class TestSymmetricMatrix:
    def test_construction_enforces_exact_symmetry(self):
        a = SymmetricMatrix([[1.0, 2.0], [2.0 + 1e-14, 3.0]])
        assert a.entries[1, 0] == a.entries[0, 1]

    def test_rejects_asymmetry(self):
        with pytest.raises(ValueError, match="not symmetric"):
            SymmetricMatrix([[1.0, 2.0], [2.5, 3.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            SymmetricMatrix(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            SymmetricMatrix([[np.nan, 0.0], [0.0, 1.0]])

    def test_entries_read_only(self):
        a = SymmetricMatrix(np.eye(3))
        with pytest.raises(ValueError):
            a.entries[0, 0] = 5.0

    def test_array_protocol(self):
        a = SymmetricMatrix(np.eye(3))
        assert np.array_equal(np.asarray(a), np.eye(3))

    def test_frobenius(self):
        a = SymmetricMatrix([[3.0, 0.0], [0.0, 4.0]])
        assert a.frobenius() == 5.0


class TestTridiagonalMatrix:
    def test_dense(self):
        t = TridiagonalMatrix([1.0, 2.0, 3.0], [4.0, 5.0])
        expect = np.array([[1, 4, 0], [4, 2, 5], [0, 5, 3]], dtype=float)
        assert np.array_equal(t.dense(), expect)

    def test_single_entry(self):
        t = TridiagonalMatrix([7.0], [])
        assert t.n == 1
        assert np.array_equal(t.dense(), [[7.0]])

    def test_length_validation(self):
        with pytest.raises(DimensionMismatch):
            TridiagonalMatrix([1.0, 2.0], [1.0, 1.0])


class TestResults:
    def test_eig_reconstruction_and_residual(self):
        x = np.array([[1.0, 0.0], [0.0, 1.0]])
        r = EigResult(x=x, lam=np.array([2.0, -3.0]))
        assert np.array_equal(r.reconstruction(), np.diag([2.0, -3.0]))
        assert r.residual(np.diag([2.0, -3.0])) == 0.0
        assert r.orth_defect() == 0.0

    def test_svd_rejects_unsorted_sigma(self):
        eye = np.eye(2)
        with pytest.raises(ValueError, match="non-increasing"):
            SvdResult(u=eye, sigma=np.array([1.0, 2.0]), v=eye)

    def test_svd_rejects_negative_sigma(self):
        eye = np.eye(2)
        with pytest.raises(ValueError):
            SvdResult(u=eye, sigma=np.array([1.0, -2.0]), v=eye)

    def test_svd_shape_validation(self):
        with pytest.raises(DimensionMismatch):
            SvdResult(u=np.eye(2), sigma=np.ones(3), v=np.eye(2))

    def test_residual_of_zero_matrix(self):
        eye = np.eye(2)
        r = SvdResult(u=eye, sigma=np.zeros(2), v=eye)
        assert r.residual(np.zeros((2, 2))) == 0.0


class TestSvdFromEig:
    def test_sign_and_sort(self):
        x = np.eye(3)
        e = EigResult(x=x, lam=np.array([-5.0, 1.0, 3.0]))
        s = svd_from_eig(e)
        assert np.array_equal(s.sigma, [5.0, 3.0, 1.0])
        # u keeps the eigenvector, v flips on negative eigenvalues
        assert np.array_equal(s.u[:, 0], x[:, 0])
        assert np.array_equal(s.v[:, 0], -x[:, 0])
        assert np.array_equal(s.v[:, 1], x[:, 2])

    def test_tie_keeps_input_order(self):
        e = EigResult(x=np.eye(2), lam=np.array([2.0, -2.0]))
        s = svd_from_eig(e)
        assert s.u[0, 0] == 1.0 and s.u[1, 1] == 1.0

    def test_zero_eigenvalue_sign_positive(self):
        e = EigResult(x=np.eye(1), lam=np.array([0.0]))
        s = svd_from_eig(e)
        assert s.v[0, 0] == 1.0


class TestPermutation:
    def test_sorts_known_pairs(self):
        d = np.array([13.1247, 201.9311, 0.0693, 26.7189])
        u = np.array([-0.5421, -0.4540, 0.2128, -0.6743])
        perm = sorting_permutation(d)
        ds, us = apply_permutation(perm, d, u)
        assert np.array_equal(ds, [0.0693, 13.1247, 26.7189, 201.9311])
        assert np.array_equal(us, [0.2128, -0.5421, -0.6743, -0.4540])

    def test_already_sorted_is_identity(self):
        d = np.array([1.0, 2.0, 3.0])
        perm = sorting_permutation(d)
        assert np.array_equal(perm.map, [0, 1, 2])

    def test_symbolic_relabeling(self):
        ds, us = apply_permutation(
            sorting_permutation([3.0, 1.0, 2.0]), [3.0, 1.0, 2.0], [10.0, 20.0, 30.0]
        )
        assert np.array_equal(ds, [1.0, 2.0, 3.0])
        assert np.array_equal(us, [20.0, 30.0, 10.0])

    def test_ties_stable(self):
        perm = sorting_permutation([1.0, 1.0, 0.0])
        assert np.array_equal(perm.map, [2, 0, 1])

    def test_inverse_roundtrip(self):
        perm = Permutation(np.array([2, 0, 1, 3]))
        both = perm.map[perm.inverse().map]
        assert np.array_equal(both, np.arange(4))

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation(np.array([0, 0, 1]))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            apply_permutation(sorting_permutation([1.0, 2.0]), [1.0, 2.0, 3.0], [0.0, 0.0, 0.0])


class TestGivens:
    @pytest.mark.parametrize("a,b", [(3.0, 4.0), (1.0, 0.0), (0.0, 2.0), (-5.0, 1e-3), (1e160, 1e160)])
    def test_zeroes_second_component(self, a, b):
        c, s = givens(a, b)
        r = c * a - s * b
        assert abs(s * a + c * b) <= 8.0 * EPS * abs(r)
        assert abs(c * c + s * s - 1.0) <= 4.0 * EPS

    def test_extreme_scale_no_overflow(self):
        c, s = givens(1e-300, 1e300)
        assert math.isfinite(c) and math.isfinite(s)


class TestHouseholder:
    def test_reflects_to_single_entry(self):
        x = np.array([3.0, 4.0, 0.0, 12.0])
        u, lead = householder_vector(x)
        beta = 2.0 / float(u @ u)
        hx = x - beta * float(u @ x) * u
        assert abs(abs(lead) - 13.0) <= 13.0 * 8.0 * EPS
        assert abs(hx[0] - lead) <= 13.0 * 8.0 * EPS
        assert np.all(np.abs(hx[1:]) <= 13.0 * 8.0 * EPS)

    def test_zero_vector_raises(self):
        with pytest.raises(ZeroVector):
            householder_vector(np.zeros(3))

    def test_extreme_scaling(self):
        u, lead = householder_vector(np.array([1e-300, 1e-300]))
        assert math.isfinite(lead) and abs(lead) > 0.0
        u, lead = householder_vector(np.array([1e300, -1e300]))
        assert math.isfinite(lead)


class TestMatrixText:
    def test_roundtrip_exact(self, tmp_path, sym):
        a = sym(5, seed=99).entries
        p = tmp_path / "a.txt"
        write_matrix_text(p, a)
        assert np.array_equal(read_matrix_text(p), a)

    def test_header_is_dimension(self, tmp_path):
        p = tmp_path / "a.txt"
        write_matrix_text(p, np.eye(3))
        assert p.read_text().splitlines()[0] == "3"

    @pytest.mark.parametrize(
        "body,msg",
        [
            ("", "empty"),
            ("x\n1.0\n", "dimension"),
            ("2\n1 0\n", "expected 2 rows"),
            ("2\n1 0\n0 1 2\n", "entries"),
            ("1\nfoo\n", "non-numeric"),
            ("1\ninf\n", "non-finite"),
            ("0\n", "positive"),
        ],
    )
    def test_malformed(self, tmp_path, body, msg):
        p = tmp_path / "bad.txt"
        p.write_text(body)
        with pytest.raises(ValueError, match=msg):
            read_matrix_text(p)


def test_orth_tol_scales_linearly():
    assert orth_tol(2) == 2.0 * orth_tol(1)
    assert orth_tol(100) == 64.0 * 100.0 * EPS
