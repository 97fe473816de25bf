"""Widely linear MMSE estimation in augmented form, plus the CWCU variant.

A widely linear estimator filters both the observation and its conjugate,
x_hat = E y + F conj(y), which in augmented coordinates is one matrix acting
on (y, conj(y)). For improper symbols this strictly beats the linear bank.
Conditioned on the transmitted symbol x_i, the augmented estimate of
component i has mean alpha_i (x_i, conj(x_i)) with a 2x2 matrix alpha_i that
is in general not the identity; multiplying the component's row pair by
alpha_i^-1 yields the CWCU widely linear estimator. The conditional
dispersion is then a 2x2 augmented covariance whose off-diagonal is the
conditional pseudo-variance of the estimate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateComponentError,
    DimensionMismatchError,
    SingularMatrixError,
)
from .linalg import hermitian, inv2, solve_hpd
from .model import AugmentedModel, component_view

__all__ = [
    "WidelyEstimatorBank",
    "wlmmse",
    "cwcu_wlmmse",
    "widely_conditional_stats",
    "estimate",
    "bmse_widely",
]


@dataclass(frozen=True, eq=False)
class WidelyEstimatorBank:
    """Augmented estimator matrix with per-component 2x2 statistics.

    E_aug is 2n x 2m with the block structure [[E, F], [conj(F), conj(E)]];
    rows i and i+n form the component-i filter pair. alpha[i] and
    cond_cov[i] are the 2x2 conditional mean factor and the 2x2 conditional
    augmented covariance of component i.
    """

    kind: str
    E_aug: np.ndarray
    alpha: np.ndarray
    cond_cov: np.ndarray

    @property
    def n(self) -> int:
        return self.E_aug.shape[0] // 2

    @property
    def m(self) -> int:
        return self.E_aug.shape[1] // 2

    def component_rows(self, i: int) -> np.ndarray:
        """The 2 x 2m filter pair of component i (rows i and i+n)."""
        return self.E_aug[[i, i + self.n], :]


def widely_conditional_stats(rows: np.ndarray, am: AugmentedModel, i: int):
    """Per-component conditional statistics of a 2 x 2m augmented filter.

    Returns (alpha, cond_cov): alpha = rows @ h_aug_i, and cond_cov the
    quadratic form rows (Hbar_aug Cxbar_aug Hbar_aug^H + Cnn_aug) rows^H,
    Hermitian-symmetrized. Neither depends on the conditioning value x_i.
    """
    view = component_view(am, i)
    alpha = rows @ view.h_aug
    B = view.Hbar_aug @ view.Cxbar_aug @ hermitian(view.Hbar_aug) + am.Cnn_aug
    cov = rows @ B @ hermitian(rows)
    cov = (cov + hermitian(cov)) / 2.0
    return alpha, cov


def wlmmse(am: AugmentedModel) -> WidelyEstimatorBank:
    """Widely linear MMSE bank: E_aug = Cxy_aug Cyy_aug^-1."""
    E_aug = hermitian(solve_hpd(am.Cyy_aug, hermitian(am.Cxy_aug)))
    n = am.n
    alpha = np.empty((n, 2, 2), dtype=complex)
    cond_cov = np.empty((n, 2, 2), dtype=complex)
    for i in range(n):
        rows = E_aug[[i, i + n], :]
        alpha[i], cond_cov[i] = widely_conditional_stats(rows, am, i)
    return WidelyEstimatorBank(kind="wlmmse", E_aug=E_aug, alpha=alpha, cond_cov=cond_cov)


def cwcu_wlmmse(am: AugmentedModel) -> WidelyEstimatorBank:
    """CWCU widely linear bank.

    Component i's rows are alpha_i^-1 times the WLMMSE rows, so the
    conditional mean factor becomes the identity and the conditional
    covariance transforms congruently: alpha^-1 C alpha^-H. Raises
    DegenerateComponentError when some alpha_i is singular.
    """
    base = wlmmse(am)
    n = am.n
    E_aug = np.empty_like(base.E_aug)
    alpha = np.empty((n, 2, 2), dtype=complex)
    cond_cov = np.empty((n, 2, 2), dtype=complex)
    for i in range(n):
        try:
            ainv = inv2(base.alpha[i])
        except SingularMatrixError as exc:
            raise DegenerateComponentError(i, f"alpha[{i}] is singular: {exc}") from exc
        rows = ainv @ base.component_rows(i)
        E_aug[i, :] = rows[0]
        E_aug[i + n, :] = rows[1]
        # verify the defining constraint rather than assuming it
        a_check = rows @ component_view(am, i).h_aug
        assert np.max(np.abs(a_check - np.eye(2))) < 1e-9
        alpha[i] = a_check
        cov = ainv @ base.cond_cov[i] @ hermitian(ainv)
        cond_cov[i] = (cov + hermitian(cov)) / 2.0
    return WidelyEstimatorBank(
        kind="cwcu-wlmmse", E_aug=E_aug, alpha=alpha, cond_cov=cond_cov
    )


def estimate(bank: WidelyEstimatorBank, y: np.ndarray) -> np.ndarray:
    """Apply the bank to y (shape (m,) or batch (..., m)).

    Builds the augmented observation internally and returns only the first
    n components; the remaining ones are their conjugates by construction,
    which is checked before they are dropped.
    """
    y = np.asarray(y, dtype=complex)
    if y.shape[-1] != bank.m:
        raise DimensionMismatchError(
            f"observation length {y.shape[-1]} does not match m={bank.m}"
        )
    ya = np.concatenate([y, np.conj(y)], axis=-1)
    xa = ya @ bank.E_aug.T
    n = bank.n
    top, bottom = xa[..., :n], xa[..., n:]
    scale = max(1.0, float(np.max(np.abs(top))) if top.size else 1.0)
    if np.max(np.abs(bottom - np.conj(top))) > 1e-8 * scale:
        raise DimensionMismatchError("augmented estimate lost its conjugate symmetry")
    return top


def bmse_widely(E_aug: np.ndarray, am: AugmentedModel) -> np.ndarray:
    """Per-component Bayesian MSE of an augmented estimator bank.

    Same closed form as the strictly linear case, evaluated on augmented
    matrices; the first n diagonal entries are E|x_hat_i - x_i|^2.
    """
    n2 = E_aug.shape[0]
    T = E_aug @ am.H_aug - np.eye(n2, dtype=complex)
    M = T @ am.Cxx_aug @ hermitian(T) + E_aug @ am.Cnn_aug @ hermitian(E_aug)
    return np.real(np.diag(M))[: n2 // 2].copy()
