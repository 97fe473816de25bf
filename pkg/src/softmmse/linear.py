"""Strictly linear MMSE estimation and its conditionally unbiased variant.

The MMSE estimator x_hat = E y with E = Cxx H^H (H Cxx H^H + Cnn)^-1 is
conditionally biased: given the transmitted symbol x_i, the estimate of
component i has mean alpha_i x_i with a real shrink factor alpha_i that is
at most 1. Dividing row i by alpha_i removes that bias for every component
at once; the result is the component-wise conditionally unbiased (CWCU)
estimator. Both banks expose alpha and the conditional variance, which is
all the soft demapper needs to build per-component likelihoods.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateComponentError
from .linalg import hermitian, solve_hpd
from .model import LinearModel, component_view

__all__ = [
    "LinearEstimatorBank",
    "lmmse",
    "cwcu_lmmse",
    "conditional_stats",
    "bmse",
]

#: components with |alpha| at or below this cannot be de-biased
EPS_ALPHA = 1e-10


@dataclass(frozen=True, eq=False)
class LinearEstimatorBank:
    """Estimator matrix rows plus per-component conditional statistics.

    E is n x m; row i applied to y yields the estimate of component i.
    alpha[i] is the conditional-mean factor e_i^H h_i (stored real after
    validation) and cond_var[i] the conditional variance, which does not
    depend on the conditioning value.
    """

    kind: str
    E: np.ndarray
    alpha: np.ndarray
    cond_var: np.ndarray

    @property
    def n(self) -> int:
        return self.E.shape[0]

    def estimate(self, y: np.ndarray) -> np.ndarray:
        """Apply the bank; y may be a vector (m,) or a batch (..., m)."""
        return np.asarray(y, dtype=complex) @ self.E.T


def conditional_stats(E: np.ndarray, model: LinearModel, i: int):
    """Conditional mean factor and variance of component i under E.

    Returns (alpha_i, cond_var_i) with alpha_i = e_i^H h_i (complex as
    computed) and cond_var_i the quadratic form
    e_i^H (Hbar_i Cxbar Hbar_i^H + Cnn) e_i, the part of the estimate's
    spread that comes from interference plus noise only.
    """
    view = component_view(model, i)
    row = E[i]
    alpha = complex(row @ view.h)
    B = view.H_bar @ view.Cxbar @ hermitian(view.H_bar) + model.Cnn
    q = complex(row @ B @ np.conj(row))
    assert q.real >= -1e-12 and abs(q.imag) <= 1e-10 * max(1.0, q.real)
    return alpha, max(q.real, 0.0)


def _fill_bank(kind: str, E: np.ndarray, model: LinearModel) -> LinearEstimatorBank:
    n = E.shape[0]
    alpha = np.empty(n)
    cond_var = np.empty(n)
    for i in range(n):
        a, v = conditional_stats(E, model, i)
        # the MMSE shrink factor is real for HPD noise; tolerate rounding only
        assert abs(a.imag) <= 1e-10 * max(1.0, abs(a.real))
        alpha[i] = a.real
        cond_var[i] = v
    return LinearEstimatorBank(kind=kind, E=E, alpha=alpha, cond_var=cond_var)


def lmmse(model: LinearModel) -> LinearEstimatorBank:
    """Bayesian linear MMSE bank: E = Cxx H^H (H Cxx H^H + Cnn)^-1."""
    H, Cxx, Cnn = model.H, model.Cxx, model.Cnn
    Cyy = H @ Cxx @ hermitian(H) + Cnn
    E = hermitian(solve_hpd(Cyy, H @ hermitian(Cxx)))
    return _fill_bank("lmmse", E, model)


def cwcu_lmmse(model: LinearModel) -> LinearEstimatorBank:
    """CWCU bank: each LMMSE row divided by its shrink factor.

    Raises DegenerateComponentError when some alpha_i is numerically zero;
    de-biasing such a component would amplify noise without bound.
    """
    base = lmmse(model)
    for i, a in enumerate(base.alpha):
        if a <= EPS_ALPHA:
            raise DegenerateComponentError(i, f"alpha[{i}] = {a:.3e} too small to invert")
    E = base.E / base.alpha[:, None]
    return _fill_bank("cwcu-lmmse", E, model)


def bmse(E: np.ndarray, model: LinearModel) -> np.ndarray:
    """Per-component Bayesian MSE of the estimator x_hat = E y.

    Closed form: diag((E H - I) Cxx (E H - I)^H + E Cnn E^H).
    """
    T = E @ model.H - np.eye(model.n, dtype=complex)
    M = T @ model.Cxx @ hermitian(T) + E @ model.Cnn @ hermitian(E)
    return np.real(np.diag(M)).copy()
