"""Symbol alphabets with bit labelings and their second-order statistics.

A constellation couples three things the estimators and the soft demapper
need: the complex symbol points, a per-symbol bit label, and the variance /
pseudo-variance pair that determines whether the alphabet is proper. All
built-in alphabets are zero mean, unit variance, and equiprobable, with a
per-axis reflected Gray labeling (in-phase bits first). The all-zeros label
always sits on the most positive point of each axis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import BadSpecError
from .linalg import load_matrix

__all__ = [
    "Constellation",
    "BitSets",
    "make_qpsk",
    "make_16qam",
    "make_8qam_rect",
    "by_name",
    "bit_sets",
    "hard_decide",
    "load_constellation",
]


@dataclass(frozen=True, eq=False)
class Constellation:
    """Symbol alphabet.

    symbols[q] carries the label labels[q], a (bits_per_symbol,) 0/1 row;
    symbols are indexed so that label read as a binary number equals q.
    """

    name: str
    symbols: np.ndarray
    labels: np.ndarray
    bits_per_symbol: int
    variance: float = field(init=False)
    pseudo_variance: complex = field(init=False)

    def __post_init__(self):
        q = self.symbols.size
        if q != 2 ** self.bits_per_symbol or self.labels.shape != (q, self.bits_per_symbol):
            raise BadSpecError(
                f"constellation {self.name}: {q} symbols do not match "
                f"{self.bits_per_symbol} bits per symbol"
            )
        object.__setattr__(self, "variance", float(np.mean(np.abs(self.symbols) ** 2)))
        object.__setattr__(self, "pseudo_variance", complex(np.mean(self.symbols**2)))

    @property
    def is_proper(self) -> bool:
        return abs(self.pseudo_variance) < 1e-12

    def label_strings(self) -> list[str]:
        return ["".join(str(b) for b in row) for row in self.labels]


@dataclass(frozen=True)
class BitSets:
    """Per bit position, the symbol index sets with that bit 1 and 0."""

    ones: tuple
    zeros: tuple


def _gray_sequence(nbits: int) -> list[int]:
    return [i ^ (i >> 1) for i in range(2**nbits)]


def _axis_decoder(levels_desc):
    """Map a per-axis Gray code value to its level.

    Levels are listed most positive first; the reflected Gray sequence walks
    them in that order, so adjacent levels differ in one bit and code 0 lands
    on the most positive level.
    """
    seq = _gray_sequence(int(np.log2(len(levels_desc))))
    return {code: levels_desc[pos] for pos, code in enumerate(seq)}


def _grid_constellation(name, i_levels, q_levels, scale):
    ki = int(np.log2(len(i_levels)))
    kq = int(np.log2(len(q_levels)))
    k = ki + kq
    i_map = _axis_decoder(i_levels)
    q_map = _axis_decoder(q_levels)
    symbols = np.empty(2**k, dtype=complex)
    labels = np.empty((2**k, k), dtype=np.uint8)
    for q in range(2**k):
        i_code = q >> kq
        q_code = q & ((1 << kq) - 1)
        symbols[q] = (i_map[i_code] + 1j * q_map[q_code]) / scale
        labels[q] = [(q >> (k - 1 - b)) & 1 for b in range(k)]
    return Constellation(name=name, symbols=symbols, labels=labels, bits_per_symbol=k)


def make_qpsk() -> Constellation:
    """Four points (+-1 +-1j)/sqrt(2); proper, pseudo-variance 0."""
    return _grid_constellation("qpsk", [1, -1], [1, -1], np.sqrt(2.0))


def make_16qam() -> Constellation:
    """Sixteen points on {+-1, +-3}^2 / sqrt(10); proper."""
    return _grid_constellation("16qam", [3, 1, -1, -3], [3, 1, -1, -3], np.sqrt(10.0))


def make_8qam_rect() -> Constellation:
    """Eight points on {+-1, +-3} x {+-1} / sqrt(6).

    The wide-short grid is improper: pseudo-variance 2/3 instead of 0. This
    is the alphabet that makes the widely linear estimators strictly better
    than the strictly linear ones.
    """
    return _grid_constellation("8qam-rect", [3, 1, -1, -3], [1, -1], np.sqrt(6.0))


_BUILTINS = {
    "qpsk": make_qpsk,
    "16qam": make_16qam,
    "8qam-rect": make_8qam_rect,
}


def by_name(name: str) -> Constellation:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise BadSpecError(
            f"unknown constellation {name!r}; choose from {sorted(_BUILTINS)}"
        ) from None


def bit_sets(c: Constellation) -> BitSets:
    """Index sets S(b_k = 1) and S(b_k = 0) for each bit position."""
    ones = []
    zeros = []
    for b in range(c.bits_per_symbol):
        mask = c.labels[:, b] == 1
        ones.append(np.flatnonzero(mask))
        zeros.append(np.flatnonzero(~mask))
    return BitSets(ones=tuple(ones), zeros=tuple(zeros))


def hard_decide(c: Constellation, z: complex) -> int:
    """Nearest-neighbor symbol index; ties go to the lowest index."""
    return int(np.argmin(np.abs(z - c.symbols)))


def load_constellation(path) -> Constellation:
    """Load a custom constellation from the JSON matrix format.

    The file is a 1 x 2^k matrix ({"rows", "cols", "re", "im"}) holding the
    symbol points, plus a "labels" array of k-bit strings, one per symbol,
    and an optional "name". Labels must enumerate every k-bit pattern once,
    and the points must be zero mean.
    """
    symbols = load_matrix(path).ravel()
    with open(path) as fh:
        payload = json.load(fh)
    labels = payload.get("labels")
    if labels is None:
        raise BadSpecError(f"constellation file {path} is missing 'labels'")
    qn = symbols.size
    k = max(1, int(round(np.log2(qn))))
    if 2**k != qn:
        raise BadSpecError(f"constellation file {path}: {qn} symbols is not a power of 2")
    if len(labels) != qn or sorted(labels) != sorted(
        format(i, f"0{k}b") for i in range(qn)
    ):
        raise BadSpecError(
            f"constellation file {path}: labels must be a permutation of all {k}-bit strings"
        )
    if abs(np.mean(symbols)) > 1e-9 * max(1.0, float(np.max(np.abs(symbols)))):
        raise BadSpecError(f"constellation file {path}: symbols are not zero mean")
    # reorder so that label-as-integer equals the symbol index
    order = np.argsort([int(s, 2) for s in labels])
    symbols = symbols[order]
    label_rows = np.array(
        [[int(ch) for ch in labels[j]] for j in order], dtype=np.uint8
    )
    return Constellation(
        name=str(payload.get("name", "custom")),
        symbols=symbols,
        labels=label_rows,
        bits_per_symbol=k,
    )
