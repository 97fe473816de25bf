"""Observation models and their augmented forms.

The linear model is y = H x + n with zero-mean symbols x of known variance
and pseudo-variance and zero-mean proper noise n. The augmented form stacks
each vector with its conjugate, which turns pseudo-covariances into ordinary
covariance blocks and lets the widely linear estimators reuse plain MMSE
algebra. Component views split the model into the contribution of one symbol
and the interference from the rest, which is what the per-component
conditional statistics are built from.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, LinAlgError

from .constellations import Constellation
from .errors import BadSpecError, DimensionMismatchError, NotHPDError
from .linalg import block2x2, hermitian, is_hermitian

__all__ = [
    "LinearModel",
    "AugmentedModel",
    "ComponentView",
    "build_model",
    "augment",
    "component_view",
]


@dataclass(frozen=True, eq=False)
class LinearModel:
    """y = H x + n with second-order symbol and noise statistics.

    Noise is required to be proper (zero pseudo-covariance); an improper
    noise model is rejected rather than silently mishandled.
    """

    H: np.ndarray
    Cxx: np.ndarray
    Cnn: np.ndarray
    Cxx_pseudo: np.ndarray

    def __post_init__(self):
        m, n = self.H.shape
        if self.Cxx.shape != (n, n) or self.Cxx_pseudo.shape != (n, n):
            raise DimensionMismatchError("symbol covariance shape does not match H")
        if self.Cnn.shape != (m, m):
            raise DimensionMismatchError("noise covariance shape does not match H")
        if not is_hermitian(self.Cxx):
            raise NotHPDError("Cxx is not Hermitian")
        if not is_hermitian(self.Cnn):
            raise NotHPDError("Cnn is not Hermitian")
        if np.max(np.abs(self.Cxx_pseudo - self.Cxx_pseudo.T)) > 1e-12 * max(
            1.0, float(np.linalg.norm(self.Cxx_pseudo))
        ):
            raise BadSpecError("pseudo-covariance must be complex symmetric")

    @property
    def m(self) -> int:
        return self.H.shape[0]

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def is_proper(self) -> bool:
        return bool(np.max(np.abs(self.Cxx_pseudo)) < 1e-12)


@dataclass(frozen=True, eq=False)
class AugmentedModel:
    """Block-augmented statistics of a LinearModel.

    Every matrix here satisfies the swap symmetry conj(M) = P M P with P the
    block-swap permutation, which is what makes the top and bottom halves of
    augmented estimates conjugates of each other.
    """

    base: LinearModel
    H_aug: np.ndarray
    Cxx_aug: np.ndarray
    Cnn_aug: np.ndarray
    Cyy_aug: np.ndarray
    Cxy_aug: np.ndarray

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n


@dataclass(frozen=True, eq=False)
class ComponentView:
    """Model split for component i: own column versus interference.

    h_aug is the 2m x 2 augmented column [[h_i, 0], [0, conj(h_i)]]; the
    Hbar/Cxbar fields describe the remaining n-1 symbols.
    """

    i: int
    h: np.ndarray
    H_bar: np.ndarray
    Cxbar: np.ndarray
    Cxbar_pseudo: np.ndarray
    h_aug: np.ndarray
    Hbar_aug: np.ndarray
    Cxbar_aug: np.ndarray
    Cxixi_aug: np.ndarray


def build_model(H: np.ndarray, c: Constellation, Cnn: np.ndarray) -> LinearModel:
    """Model for i.i.d. symbols drawn from constellation c.

    Cxx and its pseudo counterpart become scaled identities, which is the
    independence assumption the per-component conditional statistics rely on.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise DimensionMismatchError(f"H must be 2-D, got shape {H.shape}")
    m, n = H.shape
    if m < n:
        raise DimensionMismatchError(f"need m >= n, got {m}x{n}")
    Cnn = np.asarray(Cnn, dtype=complex)
    _require_hpd(Cnn, "Cnn")
    return LinearModel(
        H=H,
        Cxx=c.variance * np.eye(n, dtype=complex),
        Cnn=Cnn,
        Cxx_pseudo=c.pseudo_variance * np.eye(n, dtype=complex),
    )


def _require_hpd(a: np.ndarray, name: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got {a.shape}")
    if not is_hermitian(a):
        raise NotHPDError(f"{name} is not Hermitian")
    try:
        cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as exc:
        raise NotHPDError(f"{name} is not positive definite") from exc


def augment(model: LinearModel) -> AugmentedModel:
    """Assemble the augmented matrices and the observation covariance."""
    H, Cxx, Cnn, P = model.H, model.Cxx, model.Cnn, model.Cxx_pseudo
    m, n = model.m, model.n
    zm = np.zeros((m, m), dtype=complex)
    zmn = np.zeros((m, n), dtype=complex)
    H_aug = block2x2(H, zmn, zmn, np.conj(H))
    Cxx_aug = block2x2(Cxx, P, np.conj(P), np.conj(Cxx))
    Cnn_aug = block2x2(Cnn, zm, zm, np.conj(Cnn))
    Cyy_aug = H_aug @ Cxx_aug @ hermitian(H_aug) + Cnn_aug
    Cxy_aug = Cxx_aug @ hermitian(H_aug)
    _require_hpd(Cyy_aug, "Cyy_aug")
    return AugmentedModel(
        base=model,
        H_aug=H_aug,
        Cxx_aug=Cxx_aug,
        Cnn_aug=Cnn_aug,
        Cyy_aug=Cyy_aug,
        Cxy_aug=Cxy_aug,
    )


def component_view(model, i: int) -> ComponentView:
    """Split the model around component i.

    Accepts a LinearModel or an AugmentedModel. Valid for models with
    independent symbols (diagonal Cxx), where deleting row and column i
    leaves the prior of the remaining symbols unchanged.
    """
    base = model.base if isinstance(model, AugmentedModel) else model
    n, m = base.n, base.m
    if not 0 <= i < n:
        raise IndexError(f"component {i} out of range for n={n}")
    keep = [j for j in range(n) if j != i]
    h = base.H[:, i]
    H_bar = base.H[:, keep]
    Cxbar = base.Cxx[np.ix_(keep, keep)]
    Cxbar_pseudo = base.Cxx_pseudo[np.ix_(keep, keep)]
    zc = np.zeros((m, 1), dtype=complex)
    h_aug = block2x2(h[:, None], zc, zc, np.conj(h)[:, None])
    zbar = np.zeros((m, n - 1), dtype=complex)
    Hbar_aug = block2x2(H_bar, zbar, zbar, np.conj(H_bar))
    Cxbar_aug = block2x2(Cxbar, Cxbar_pseudo, np.conj(Cxbar_pseudo), np.conj(Cxbar))
    var_i = base.Cxx[i, i]
    pv_i = base.Cxx_pseudo[i, i]
    Cxixi_aug = np.array([[var_i, pv_i], [np.conj(pv_i), var_i]], dtype=complex)
    return ComponentView(
        i=i,
        h=h,
        H_bar=H_bar,
        Cxbar=Cxbar,
        Cxbar_pseudo=Cxbar_pseudo,
        h_aug=h_aug,
        Hbar_aug=Hbar_aug,
        Cxbar_aug=Cxbar_aug,
        Cxixi_aug=Cxixi_aug,
    )
