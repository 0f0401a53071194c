from __future__ import annotations

import numpy as np

from svplab.lattice import LatticeVector


class VectorPool:
    """Ordered list of lattice vectors mirrored into contiguous kernel arrays.

    ``carts`` is int64 (or float64 with ``real=True``) with one row per
    vector; ``norms`` holds the exact squared norms. Removal preserves order,
    so storage order is the scan order seen by first-match searches.
    """

    def __init__(self, dim: int, capacity: int = 64, real: bool = False):
        self.dim = dim
        self.real = real
        self._carts = np.zeros((capacity, dim), dtype=np.float64 if real else np.int64)
        self._norms = np.zeros(capacity, dtype=np.int64)
        self.items: list[LatticeVector] = []

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> LatticeVector:
        return self.items[i]

    @property
    def carts(self) -> np.ndarray:
        return self._carts

    @property
    def norms(self) -> np.ndarray:
        return self._norms

    def append(self, v: LatticeVector) -> None:
        n = len(self.items)
        if n == self._carts.shape[0]:
            grow = max(2 * n, 16)
            carts = np.zeros((grow, self.dim), dtype=self._carts.dtype)
            carts[:n] = self._carts[:n]
            norms = np.zeros(grow, dtype=np.int64)
            norms[:n] = self._norms[:n]
            self._carts, self._norms = carts, norms
        self._carts[n] = v.cart
        self._norms[n] = v.norm_sq
        self.items.append(v)

    def pop(self, i: int) -> LatticeVector:
        n = len(self.items)
        self._carts[i:n - 1] = self._carts[i + 1:n]
        self._norms[i:n - 1] = self._norms[i + 1:n]
        return self.items.pop(i)
