"""Dense complex matrix helpers.

Everything here operates on plain numpy arrays. The library never needs
matrices larger than the augmented observation size (about 100 square), so
all routines favor clarity and strict error reporting over performance
tricks.
"""
from __future__ import annotations

import json

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .errors import DimensionMismatchError, NotHPDError, SingularMatrixError

__all__ = [
    "hermitian",
    "is_hermitian",
    "solve_hpd",
    "det2",
    "inv2",
    "block2x2",
    "swap_blocks",
    "save_matrix",
    "load_matrix",
]

#: scale factor for the 2x2 singularity test
EPS_SING = 1e-12


def hermitian(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(a)).T


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(a)))
    return bool(np.max(np.abs(a - hermitian(a))) <= tol * scale)


def solve_hpd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b for Hermitian positive definite a.

    Uses a Cholesky factorization plus one step of iterative refinement,
    which keeps the residual near machine precision for the well
    conditioned covariance systems this library produces.

    Raises NotHPDError when the matrix is not Hermitian or the
    factorization hits a non-positive pivot.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected square matrix, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatchError(
            f"rhs rows {b.shape[0]} do not match matrix size {a.shape[0]}"
        )
    # cho_factor reads one triangle only, so it would silently accept a
    # non-Hermitian matrix
    if not is_hermitian(a):
        raise NotHPDError("matrix is not Hermitian")
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise NotHPDError(f"matrix is not Hermitian positive definite: {exc}") from exc
    x = cho_solve(factor, b, check_finite=False)
    # one refinement step; costs one extra solve and removes most of the
    # factorization's forward error
    r = b - a @ x
    x = x + cho_solve(factor, r, check_finite=False)
    if not np.all(np.isfinite(x)):
        raise NotHPDError("solve produced non-finite entries")
    return x


def _require_2x2(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise DimensionMismatchError(f"expected 2x2 matrix, got {a.shape}")
    return a


def det2(a: np.ndarray) -> complex:
    """Determinant of a 2x2 matrix."""
    a = _require_2x2(a)
    return complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def inv2(a: np.ndarray) -> np.ndarray:
    """Inverse of a 2x2 matrix via the adjugate formula.

    Raises SingularMatrixError when |det| falls below EPS_SING times the
    squared Frobenius norm. The determinant scales with the squared norm,
    so this is a pure conditioning test: well conditioned matrices invert
    at any magnitude, near-singular ones are rejected at any magnitude.
    """
    a = _require_2x2(a)
    d = det2(a)
    eps = EPS_SING * float(np.linalg.norm(a)) ** 2
    if abs(d) <= eps:
        raise SingularMatrixError(f"2x2 determinant {abs(d):.3e} below {eps:.3e}")
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex) / d


def block2x2(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Assemble [[a, b], [c, d]] from conformable blocks."""
    a, b, c, d = (np.atleast_2d(np.asarray(x, dtype=complex)) for x in (a, b, c, d))
    if a.shape[0] != b.shape[0] or c.shape[0] != d.shape[0]:
        raise DimensionMismatchError("row blocks have mismatched heights")
    if a.shape[1] != c.shape[1] or b.shape[1] != d.shape[1]:
        raise DimensionMismatchError("column blocks have mismatched widths")
    return np.block([[a, b], [c, d]])


def swap_blocks(m: np.ndarray) -> np.ndarray:
    """Apply the block-swap permutation on both sides: P @ m @ P.

    For a 2nx2m matrix built of four nxm blocks, exchanges the block rows
    and the block columns. An augmented-form matrix M satisfies
    conj(M) = swap_blocks(M).
    """
    m = np.asarray(m)
    r, c = m.shape
    if r % 2 or c % 2:
        raise DimensionMismatchError(f"block swap needs even dimensions, got {m.shape}")
    hr, hc = r // 2, c // 2
    return np.block(
        [[m[hr:, hc:], m[hr:, :hc]], [m[:hr, hc:], m[:hr, :hc]]]
    )


def save_matrix(path, a: np.ndarray) -> None:
    """Write a matrix as JSON: {"rows", "cols", "re", "im"} in row-major order."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    payload = {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": [float(v) for v in a.real.ravel()],
        "im": [float(v) for v in a.imag.ravel()],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    with open(path) as fh:
        payload = json.load(fh)
    try:
        rows, cols = int(payload["rows"]), int(payload["cols"])
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatchError(f"malformed matrix file {path}: {exc}") from exc
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionMismatchError(
            f"matrix file {path}: {rows}x{cols} header does not match payload length"
        )
    return (re + 1j * im).reshape(rows, cols)
