"""Plug-in (empirical frequency) information estimators for discrete columns.

All estimators count joint outcomes into a contingency table and evaluate
the Shannon sums directly. Results are in bits by default; pass ``base`` to
rescale. Cell terms are accumulated with ``math.fsum`` so that results do
not depend on enumeration order (tables whose cells are permutations of
each other produce bit-identical values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ContingencyTable",
    "entropy",
    "mutual_information",
    "conditional_mutual_information",
    "joint_pair_mi",
]


def _as_codes(col, name: str = "column") -> np.ndarray:
    x = np.asarray(col)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.issubdtype(x.dtype, np.integer):
        if np.issubdtype(x.dtype, np.floating) and not np.all(x == np.floor(x)):
            raise ValueError(f"{name} holds non-integer codes")
        x = x.astype(np.int64)
    else:
        x = x.astype(np.int64, copy=False)
    if x.min() < 0:
        raise ValueError(f"{name} holds negative codes")
    return x


@dataclass(frozen=True)
class ContingencyTable:
    """Joint outcome counts for one to three discrete variables.

    ``counts`` has one axis per variable; ``counts.sum()`` equals ``total``.
    """

    counts: np.ndarray
    arities: tuple[int, ...]
    total: int

    def __post_init__(self):
        if self.counts.shape != self.arities:
            raise ValueError("counts shape does not match arities")
        if int(self.counts.sum()) != self.total or self.total <= 0:
            raise ValueError("counts do not sum to a positive total")

    @classmethod
    def from_columns(cls, *cols, arities=None) -> "ContingencyTable":
        """Tabulate 1-3 equal-length code columns into joint counts."""
        if not 1 <= len(cols) <= 3:
            raise ValueError("expected between one and three columns")
        codes = [_as_codes(c, f"column {i}") for i, c in enumerate(cols)]
        n = codes[0].size
        for c in codes[1:]:
            if c.size != n:
                raise ValueError(f"column length mismatch: {c.size} != {n}")
        if arities is None:
            arities = tuple(int(c.max()) + 1 for c in codes)
        else:
            arities = tuple(int(a) for a in arities)
            for c, a in zip(codes, arities):
                if int(c.max()) >= a:
                    raise ValueError("code exceeds declared arity")
        flat = codes[0]
        for c, a in zip(codes[1:], arities[1:]):
            flat = flat * a + c
        counts = np.bincount(flat, minlength=int(np.prod(arities))).reshape(arities)
        return cls(counts=counts, arities=arities, total=n)

    def marginal(self, axis: int) -> np.ndarray:
        """Univariate counts of one variable (sum over the other axes)."""
        other = tuple(i for i in range(self.counts.ndim) if i != axis)
        return self.counts.sum(axis=other)


def _rescale(bits: float, base: float) -> float:
    if base == 2.0:
        return bits
    if base <= 0 or base == 1.0:
        raise ValueError("log base must be positive and != 1")
    return bits / math.log2(base)


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    # positive-term form (n/N) * log2(N/n): each term >= 0, so H >= 0 holds
    # without clamping
    return math.fsum(
        (n / total) * math.log2(total / n) for n in counts.flat if n > 0
    )


def _mi_from_table(counts: np.ndarray, total: int) -> float:
    nx = counts.sum(axis=1)
    ny = counts.sum(axis=0)
    mi = math.fsum(
        (nij / total) * math.log2((nij * total) / (nx[i] * ny[j]))
        for (i, j), nij in np.ndenumerate(counts)
        if nij > 0
    )
    return mi if mi > 0.0 else 0.0


def entropy(x, base: float = 2.0) -> float:
    """Empirical Shannon entropy of one discrete column."""
    table = ContingencyTable.from_columns(x)
    return _rescale(_entropy_from_counts(table.counts, table.total), base)


def mutual_information(x, y, base: float = 2.0) -> float:
    """Empirical mutual information between two discrete columns.

    Zero-count cells contribute nothing; the result is clamped at 0 to
    absorb float round-off on (near-)independent inputs.
    """
    table = ContingencyTable.from_columns(x, y)
    return _rescale(_mi_from_table(table.counts, table.total), base)


def conditional_mutual_information(x, y, z, base: float = 2.0) -> float:
    """Empirical I(X;Y|Z): conditioning-value-weighted MI within each Z slice."""
    table = ContingencyTable.from_columns(x, y, z)
    n = table.total
    nz = table.counts.sum(axis=(0, 1))
    cmi = math.fsum(
        (nz[k] / n) * _mi_from_table(table.counts[:, :, k], int(nz[k]))
        for k in range(table.arities[2])
        if nz[k] > 0
    )
    return _rescale(cmi, base)


def joint_pair_mi(x, s, y, base: float = 2.0) -> float:
    """Empirical I((X,S);Y) with (X,S) composed into one product variable."""
    xc = _as_codes(x, "x")
    sc = _as_codes(s, "s")
    if xc.size != sc.size:
        raise ValueError(f"column length mismatch: {sc.size} != {xc.size}")
    arity_s = int(sc.max()) + 1
    return mutual_information(xc * arity_s + sc, y, base=base)
