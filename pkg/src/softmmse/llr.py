"""Per-bit log-likelihood ratios from estimated symbols.

Two Gaussian density engines feed the same LLR sum. The proper engine
models the conditioned estimate as a proper complex Gaussian with a scalar
variance; the general engine uses the augmented parameterization with a 2x2
covariance, which also covers improper conditioned estimates. Both work in
the log domain with max-shifted sums so high-SNR runs do not underflow, and
both clamp the finished LLRs to +-LLR_CLAMP (pass clamp=None for the raw
values).

The central equality this library exists to check: the CWCU variant of an
MMSE bank rescales each component's conditional law by a constant that is
the same for every candidate symbol, so the LLRs computed from a CWCU bank
and from its plain counterpart agree to rounding error. The diagnostics at
the bottom of this module measure exactly that.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .constellations import BitSets, Constellation
from .errors import DimensionMismatchError, NotHPDError
from .linalg import det2, hermitian, inv2
from .linear import LinearEstimatorBank
from .widely import WidelyEstimatorBank

__all__ = [
    "LLR_CLAMP",
    "ProperLaw",
    "GeneralLaw",
    "augmented",
    "llr_proper",
    "llr_general",
    "build_law_linear",
    "build_law_widely",
    "llr_equality_report",
]

#: symmetric clamp applied to finished LLR values
LLR_CLAMP = 50.0


@dataclass(frozen=True, eq=False)
class ProperLaw:
    """Conditional law of one component under a proper-Gaussian model.

    means[q] is the conditional mean of the estimate given symbol q was
    sent; variance is the common conditional variance.
    """

    means: np.ndarray
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise NotHPDError(f"conditional variance must be positive, got {self.variance}")

    def log_densities(self, z: np.ndarray) -> np.ndarray:
        """log p(z | s_q) for each q; z shape (...,) -> result (..., Q)."""
        z = np.asarray(z, dtype=complex)
        d2 = np.abs(z[..., None] - self.means) ** 2
        return -np.log(np.pi * self.variance) - d2 / self.variance


@dataclass(frozen=True, eq=False)
class GeneralLaw:
    """Conditional law in augmented form with a 2x2 covariance.

    means[q] is the augmented conditional mean (a 2-vector whose second
    entry is the conjugate of the first when the parameterization is
    consistent); cov is the 2x2 augmented covariance, Hermitian positive
    definite.
    """

    means: np.ndarray
    cov: np.ndarray
    _inv_cov: np.ndarray = field(init=False, repr=False)
    _log_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        cov = (self.cov + hermitian(self.cov)) / 2.0
        object.__setattr__(self, "cov", cov)
        d = det2(cov)
        if not (cov[0, 0].real > 0 and d.real > 0):
            raise NotHPDError("2x2 augmented covariance is not positive definite")
        object.__setattr__(self, "_inv_cov", inv2(cov))
        object.__setattr__(self, "_log_norm", -np.log(np.pi) - 0.5 * np.log(d.real))

    def log_densities(self, z_aug: np.ndarray) -> np.ndarray:
        """log p(z | s_q) for each q; z_aug shape (..., 2) -> (..., Q)."""
        z_aug = np.asarray(z_aug, dtype=complex)
        d = z_aug[..., None, :] - self.means  # (..., Q, 2)
        quad = np.einsum("...qa,ab,...qb->...q", np.conj(d), self._inv_cov, d).real
        return self._log_norm - 0.5 * quad


def augmented(z: np.ndarray) -> np.ndarray:
    """Stack z with its conjugate along a trailing axis of size 2."""
    z = np.asarray(z, dtype=complex)
    return np.stack([z, np.conj(z)], axis=-1)


def _llr_from_log_densities(logp: np.ndarray, bits: BitSets, clamp) -> np.ndarray:
    cols = []
    for ones, zeros in zip(bits.ones, bits.zeros):
        lam = logsumexp(logp[..., ones], axis=-1) - logsumexp(logp[..., zeros], axis=-1)
        cols.append(lam)
    out = np.stack(cols, axis=-1)
    if clamp is not None:
        out = np.clip(out, -clamp, clamp)
    return out


def llr_proper(z: np.ndarray, law: ProperLaw, bits: BitSets, clamp=LLR_CLAMP) -> np.ndarray:
    """LLRs of one component from the proper engine.

    z may be a scalar or any-shaped array of estimates; the result gains a
    trailing axis of length bits-per-symbol.
    """
    return _llr_from_log_densities(law.log_densities(z), bits, clamp)


def llr_general(z_aug: np.ndarray, law: GeneralLaw, bits: BitSets, clamp=LLR_CLAMP) -> np.ndarray:
    """LLRs of one component from the general augmented engine.

    z_aug carries the estimate and its conjugate in a trailing axis of
    size 2 (see augmented()); the pairing is validated.
    """
    z_aug = np.asarray(z_aug, dtype=complex)
    if z_aug.shape[-1] != 2:
        raise DimensionMismatchError("augmented input needs a trailing axis of size 2")
    scale = max(1.0, float(np.max(np.abs(z_aug))) if z_aug.size else 1.0)
    if np.max(np.abs(z_aug[..., 1] - np.conj(z_aug[..., 0]))) > 1e-8 * scale:
        raise DimensionMismatchError("second augmented entry must be conj of the first")
    return _llr_from_log_densities(law.log_densities(z_aug), bits, clamp)


def build_law_linear(bank: LinearEstimatorBank, c: Constellation, i: int) -> ProperLaw:
    """Conditional law of component i under a strictly linear bank."""
    if not 0 <= i < bank.n:
        raise IndexError(f"component {i} out of range for n={bank.n}")
    return ProperLaw(means=bank.alpha[i] * c.symbols, variance=float(bank.cond_var[i]))


def build_law_widely(bank: WidelyEstimatorBank, c: Constellation, i: int) -> GeneralLaw:
    """Conditional law of component i under a widely linear bank."""
    if not 0 <= i < bank.n:
        raise IndexError(f"component {i} out of range for n={bank.n}")
    means = augmented(c.symbols) @ bank.alpha[i].T
    return GeneralLaw(means=means, cov=bank.cond_cov[i])


def _component_llrs(estimates, law, bits):
    if isinstance(law, GeneralLaw):
        return llr_general(augmented(estimates), law, bits, clamp=None)
    return llr_proper(estimates, law, bits, clamp=None)


def llr_equality_report(pair_a, pair_b, bits: BitSets) -> np.ndarray:
    """Max absolute LLR difference per component between two banks.

    Each pair is (estimates, laws): an (..., n) array of component
    estimates from one observation batch and the matching per-component
    law sequence. Differences are taken pre-clamp so saturation cannot
    mask a discrepancy. Engines may differ between the pairs (a proper law
    on one side and a general law on the other is allowed).
    """
    est_a, laws_a = pair_a
    est_b, laws_b = pair_b
    est_a = np.asarray(est_a, dtype=complex)
    est_b = np.asarray(est_b, dtype=complex)
    if est_a.shape != est_b.shape:
        raise DimensionMismatchError("estimate batches differ in shape")
    n = est_a.shape[-1]
    if len(laws_a) != n or len(laws_b) != n:
        raise DimensionMismatchError("laws do not match the number of components")
    out = np.empty(n)
    for i in range(n):
        lam_a = _component_llrs(est_a[..., i], laws_a[i], bits)
        lam_b = _component_llrs(est_b[..., i], laws_b[i], bits)
        diff = np.abs(lam_a - lam_b)
        out[i] = float(np.max(diff)) if diff.size else 0.0
    return out
