import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ginibre
from spectral_var.errors import DimensionError, ParameterError, ShapeError, StructureError
from spectral_var.linalg_core import (
    adjoint,
    as_matrix,
    block_decompose,
    block_diagonal,
    complete_basis,
    imag_part,
    is_hermitian,
    real_part,
    require_hermitian,
    schur_decompose,
    sorted_eigen_order,
    split_blocks,
    strict_upper_split,
    validate_selection,
)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(DimensionError):
        as_matrix([1.0, 2.0])
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((0, 3)))
    with pytest.raises(StructureError):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])


def test_as_matrix_is_complex_and_copies():
    data = np.eye(2)
    m = as_matrix(data)
    m[0, 0] = 5
    assert m.dtype == np.complex128
    assert data[0, 0] == 1.0


def test_real_and_imaginary_parts_recompose(rng):
    t = ginibre(rng, 5)
    re, im = real_part(t), imag_part(t)
    assert is_hermitian(re) and is_hermitian(im)
    np.testing.assert_allclose(re + 1j * im, t, atol=1e-14)


def test_require_hermitian():
    with pytest.raises(StructureError):
        require_hermitian([[0, 1], [0, 0]])
    np.testing.assert_array_equal(require_hermitian([[2, 1j], [-1j, 3]]), [[2, 1j], [-1j, 3]])


def test_block_decompose_round_trip(rng):
    t = ginibre(rng, 5)
    parts = block_decompose(t, 2)
    assert parts.t1.shape == (2, 2) and parts.t2.shape == (2, 3)
    assert parts.t3.shape == (3, 2) and parts.t4.shape == (3, 3)
    np.testing.assert_array_equal(parts.assemble(), t)


@pytest.mark.parametrize("split", [0, 4, -1, 1.5])
def test_block_decompose_rejects_bad_split(split):
    with pytest.raises(DimensionError):
        block_decompose(np.eye(4), split)


def test_split_blocks_allows_empty_corner():
    parts = split_blocks(np.eye(3, dtype=complex), 3)
    assert parts.t2.shape == (3, 0) and parts.t4.shape == (0, 0)


def test_block_diagonal():
    s = block_diagonal(np.array([[1]]), np.array([[2, 3], [4, 5]]))
    np.testing.assert_array_equal(s, [[1, 0, 0], [0, 2, 3], [0, 4, 5]])


def test_sorted_eigen_order_real_then_imag_descending():
    values = [1, 2 + 1j, 2 - 1j, 3]
    assert list(sorted_eigen_order(values)) == [3, 1, 2, 0]


def test_validate_selection():
    assert validate_selection([2, 0], 3) == (0, 2)
    for bad in ([], [1, 1], [3], [-1], ["x"]):
        with pytest.raises(ParameterError):
            validate_selection(bad, 3)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7))
def test_schur_form_reconstructs(seed, n):
    m = ginibre(np.random.default_rng(seed), n)
    schur = schur_decompose(m)
    assert np.all(np.tril(schur.t, -1) == 0)
    np.testing.assert_allclose(schur.q @ adjoint(schur.q), np.eye(n), atol=1e-12)
    np.testing.assert_allclose(schur.reconstruct(), m, atol=1e-10 * (1 + np.linalg.norm(m)))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 7), data=st.data())
def test_reordered_schur_leads_with_selection(seed, n, data):
    m = ginibre(np.random.default_rng(seed), n)
    chosen = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
    values = np.linalg.eigvals(m)
    wanted = values[sorted_eigen_order(values)][sorted(chosen)]

    schur = schur_decompose(m, leading=chosen)
    leading = np.diag(schur.t)[:len(chosen)]
    assert np.all(np.tril(schur.t, -1) == 0)
    np.testing.assert_allclose(schur.reconstruct(), m, atol=1e-9 * (1 + np.linalg.norm(m)))
    for w in wanted:
        assert np.min(np.abs(leading - w)) < 1e-8 * (1 + np.linalg.norm(m))


def test_reorder_swaps_triangular_input():
    m = np.array([[1, 5], [0, 2]], dtype=complex)
    schur = schur_decompose(m, leading=[1])
    assert schur.t[0, 0] == pytest.approx(1)
    assert schur.t[1, 1] == pytest.approx(2)
    np.testing.assert_allclose(schur.reconstruct(), m, atol=1e-12)


def test_complete_basis_is_unitary(rng):
    e, _ = np.linalg.qr(ginibre(rng, 6, 2))
    w = complete_basis(e)
    np.testing.assert_allclose(adjoint(w) @ w, np.eye(6), atol=1e-12)
    np.testing.assert_array_equal(w[:, :2], e)


def test_strict_upper_split():
    b1 = np.array([[1 + 2j, 3 - 1j], [0, -1 + 0.5j]])
    split = strict_upper_split(b1)
    np.testing.assert_array_equal(split.r1, np.diag([1.0, -1.0]))
    np.testing.assert_array_equal(split.i1, np.diag([2.0, 0.5]))
    np.testing.assert_array_equal(split.u1, [[0, 3 - 1j], [0, 0]])
    np.testing.assert_array_equal(split.assemble(), b1)


def test_strict_upper_split_rejects_lower_entries():
    with pytest.raises(ShapeError):
        strict_upper_split(np.array([[1, 0], [1e-6, 1]]))
