"""Hadamard matrices and the time-indexed column rotations used for modulation.

All matrices are kept in integer arithmetic so the defining identity
H @ H.T == M * I can be asserted exactly.  The column indexed by time step n
is column ((n-1) mod M) + 1 in 1-based terms, so the modulation pattern is
periodic with period M and starts with the all-ones column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrder

SUPPORTED_ORDERS = (1, 2, 4, 8, 12, 16, 20, 32)


@dataclass(frozen=True)
class HadamardMatrix:
    """Order-M sign matrix with orthogonal rows and columns."""

    order: int
    entries: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.entries, dtype=np.int64)
        object.__setattr__(self, "entries", h)
        if h.shape != (self.order, self.order):
            raise ValueError(f"entries must be {self.order}x{self.order}")
        if not np.all(np.abs(h) == 1):
            raise ValueError("entries must be +1 or -1")
        if not np.array_equal(h @ h.T, self.order * np.eye(self.order, dtype=np.int64)):
            raise ValueError("H @ H.T != M * I")

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j].copy()


@dataclass(frozen=True)
class ModulationColumn:
    """Sign column applied to the encoder states at one time step."""

    index: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        object.__setattr__(self, "values", v)
        if self.index < 1:
            raise ValueError("step index must be >= 1")
        if not np.all(np.abs(v) == 1):
            raise ValueError("values must be +1 or -1")


def _sylvester(order: int) -> np.ndarray:
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


def _paley(order: int) -> np.ndarray:
    # Paley construction I for order p+1 with p prime, p = 3 (mod 4).
    p = order - 1
    chi = np.zeros(p, dtype=np.int64)
    chi[[(i * i) % p for i in range(1, p)]] = 1
    chi = 2 * chi - 1
    chi[0] = 0
    q = np.empty((p, p), dtype=np.int64)
    for i in range(p):
        for j in range(p):
            q[i, j] = chi[(j - i) % p]
    h = np.empty((order, order), dtype=np.int64)
    h[0, 0] = 1
    h[0, 1:] = 1
    h[1:, 0] = -1
    h[1:, 1:] = q + np.eye(p, dtype=np.int64)
    # normalize rows so that the first column is all ones
    for i in range(order):
        if h[i, 0] == -1:
            h[i, :] *= -1
    return h


def build_hadamard(order: int) -> HadamardMatrix:
    """Construct a Hadamard matrix of the given order.

    Sylvester doubling covers powers of two; the quadratic-residue (Paley)
    construction covers 12 and 20.  Other orders raise UnsupportedOrder even
    when a Hadamard matrix is known to exist.
    """
    if order not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(
            f"order {order} not supported (choose from {SUPPORTED_ORDERS})"
        )
    if order & (order - 1) == 0:
        h = _sylvester(order)
    else:
        h = _paley(order)
    return HadamardMatrix(order=order, entries=h)


def modulation_vector(h: HadamardMatrix, n: int) -> ModulationColumn:
    """Sign column used at encoding step n: column ((n-1) mod M) + 1 of H."""
    if n < 1:
        raise ValueError("step index must be >= 1")
    j = (n - 1) % h.order
    return ModulationColumn(index=n, values=h.column(j))


def column_rotation(h: HadamardMatrix, n: int) -> np.ndarray:
    """Matrix H_n whose columns are the modulation columns for steps n..n+M-1."""
    if n < 1:
        raise ValueError("step index must be >= 1")
    cols = [(n - 1 + k) % h.order for k in range(h.order)]
    return h.entries[:, cols].copy()
