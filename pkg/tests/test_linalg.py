import json

import numpy as np
import pytest

from softmmse.errors import DimensionMismatchError, NotHPDError, SingularMatrixError
from softmmse.linalg import (
    block2x2,
    det2,
    hermitian,
    inv2,
    is_hermitian,
    load_matrix,
    save_matrix,
    solve_hpd,
    swap_blocks,
)

from conftest import random_hpd


def test_hermitian_is_conjugate_transpose(rng):
    a = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    assert np.array_equal(hermitian(a), a.conj().T)


def test_is_hermitian_scale_aware():
    a = np.array([[2.0, 1 + 1j], [1 - 1j, 3.0]])
    assert is_hermitian(a)
    assert not is_hermitian(a + np.array([[0, 1e-6], [0, 0]]))
    # perturbation far below the matrix scale still counts as Hermitian
    big = 1e12 * a
    assert is_hermitian(big + np.array([[0, 1e-3], [0, 0]]))


@pytest.mark.parametrize("m", [1, 2, 7, 40])
def test_solve_hpd_matches_generic_solver(rng, m):
    a = random_hpd(rng, m)
    b = rng.standard_normal((m, 3)) + 1j * rng.standard_normal((m, 3))
    x = solve_hpd(a, b)
    expected = np.linalg.solve(a, b)
    assert np.allclose(x, expected, atol=1e-11 * np.linalg.norm(b))
    residual = np.linalg.norm(a @ x - b)
    assert residual <= 1e-10 * max(1.0, np.linalg.norm(b))


def test_solve_hpd_conditioned_residual(rng):
    # eigenvalue spread of 1e6, the worst conditioning the contract covers
    m = 12
    q, _ = np.linalg.qr(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))
    a = q @ np.diag(np.logspace(0, 6, m)) @ q.conj().T
    a = 0.5 * (a + a.conj().T)
    b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    x = solve_hpd(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * max(1.0, np.linalg.norm(b))


def test_solve_hpd_rejects_indefinite():
    with pytest.raises(NotHPDError):
        solve_hpd(np.diag([1.0, -1.0]), np.ones(2))


def test_solve_hpd_rejects_non_hermitian():
    with pytest.raises(NotHPDError):
        solve_hpd(np.array([[1.0, 2.0], [0.0, 1.0]]), np.ones(2))


def test_solve_hpd_rejects_bad_shapes():
    with pytest.raises(DimensionMismatchError):
        solve_hpd(np.eye(3), np.ones(2))
    with pytest.raises(DimensionMismatchError):
        solve_hpd(np.ones((2, 3)), np.ones(2))


def test_det2_inv2_frozen_values():
    a = np.array([[2.0, 1j], [-1j, 3.0]])
    # det = 2*3 - (i)(-i) = 6 - 1 = 5
    assert det2(a) == pytest.approx(5.0)
    inv = inv2(a)
    expected = np.array([[3.0, -1j], [1j, 2.0]]) / 5.0
    assert np.allclose(inv, expected, atol=1e-15)
    assert np.allclose(a @ inv, np.eye(2), atol=1e-15)


def test_inv2_singular():
    with pytest.raises(SingularMatrixError):
        inv2(np.array([[1.0, 2.0], [0.5, 1.0]]))


def test_inv2_threshold_is_scale_invariant():
    # the threshold tracks the squared norm, so conditioning alone decides:
    # well-conditioned matrices invert at any magnitude, near-singular
    # ones are rejected at any magnitude
    for scale in (1e8, 1.0, 1e-14):
        a = scale * np.array([[2.0, 1.0], [1.0, 2.0]])
        assert np.allclose(inv2(a) @ a, np.eye(2), atol=1e-10)
        with pytest.raises(SingularMatrixError):
            inv2(scale * np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularMatrixError):
        inv2(np.zeros((2, 2)))


def test_det2_rejects_wrong_shape():
    with pytest.raises(DimensionMismatchError):
        det2(np.eye(3))


def test_block2x2_layout(rng):
    a = rng.standard_normal((2, 3))
    b = rng.standard_normal((2, 4))
    c = rng.standard_normal((5, 3))
    d = rng.standard_normal((5, 4))
    m = block2x2(a, b, c, d)
    assert m.shape == (7, 7)
    assert np.array_equal(m[:2, :3], a)
    assert np.array_equal(m[2:, 3:], d)


def test_block2x2_rejects_nonconforming(rng):
    a = rng.standard_normal((2, 3))
    with pytest.raises(DimensionMismatchError):
        block2x2(a, a, a, np.zeros((3, 3)))


def test_swap_blocks_roundtrip(rng):
    m = rng.standard_normal((6, 8)) + 1j * rng.standard_normal((6, 8))
    assert np.allclose(swap_blocks(swap_blocks(m)), m)
    top = m[:3]
    swapped = swap_blocks(m)
    assert np.array_equal(swapped[3:, 4:], m[:3, :4])


def test_swap_blocks_odd_dims_rejected():
    with pytest.raises(DimensionMismatchError):
        swap_blocks(np.zeros((3, 4)))


def test_matrix_json_roundtrip(tmp_path, rng):
    m = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    p = tmp_path / "m.json"
    save_matrix(p, m)
    with open(p) as fh:
        payload = json.load(fh)
    assert payload["rows"] == 4 and payload["cols"] == 2
    assert len(payload["re"]) == 8 and len(payload["im"]) == 8
    back = load_matrix(p)
    assert np.array_equal(back, m)


def test_load_matrix_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0, 0]}')
    with pytest.raises(DimensionMismatchError):
        load_matrix(p)
    p.write_text('{"cols": 2, "re": [], "im": []}')
    with pytest.raises(DimensionMismatchError):
        load_matrix(p)
    p.write_text("not json")
    with pytest.raises(json.JSONDecodeError):
        load_matrix(p)
