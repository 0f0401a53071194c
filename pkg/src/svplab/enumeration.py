"""Exact SVP at small dimension: Schnorr-Euchner enumeration and a coefficient-box scan."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from svplab import kernels as K
from svplab.errors import OracleLimitError, ParameterError
from svplab.lattice import LatticeBasis, LatticeVector, lll_reduce

MAX_ENUM_DIM = 45
MAX_BOX_POINTS = 10**8


@dataclass
class EnumResult:
    """``shortest`` has coefficients relative to ``basis``."""

    shortest: LatticeVector
    lambda1: float
    nodes_visited: int
    basis: LatticeBasis

    @property
    def lambda1_sq(self) -> int:
        return self.shortest.norm_sq


def enumerate_shortest(basis: LatticeBasis) -> EnumResult:
    """Shortest non-zero vector by depth-first enumeration, no pruning.

    The basis is LLL-reduced first (a no-op on reduced input) and the
    returned coefficients refer to that reduced basis. The search starts from
    the shortest basis row and shrinks its radius on every improvement.
    """
    if basis.dim > MAX_ENUM_DIM:
        raise OracleLimitError(f"oracle limit: dimension {basis.dim} exceeds {MAX_ENUM_DIM}")
    red = lll_reduce(basis)
    gso = red.gso
    norms = red.row_norms_sq
    i0 = int(np.argmin(norms))
    start = np.zeros(red.dim, dtype=np.int64)
    start[i0] = 1
    coeffs, norm_sq, nodes = K.enum_svp(
        np.ascontiguousarray(red.rows, dtype=np.int64),
        np.ascontiguousarray(gso.mu, dtype=np.float64),
        np.ascontiguousarray(gso.bstar_sq, dtype=np.float64),
        start,
        norms[i0],
    )
    v = red.vector(coeffs)
    if v.norm_sq != norm_sq or v.is_zero:
        raise ArithmeticError("enumeration returned an inconsistent vector")
    return EnumResult(v, math.sqrt(v.norm_sq), int(nodes), red)


def brute_force_box(basis: LatticeBasis, box_radius: int) -> EnumResult:
    """Scan every non-zero coefficient vector in ``[-r, r]^n``; exact within the box.

    Coefficients split into a head block, precomputed as one array, and a
    tail enumerated in Python, so memory stays at one head block.
    """
    n = basis.dim
    r = int(box_radius)
    if r < 1:
        raise ParameterError("box radius must be at least 1")
    side = 2 * r + 1
    if side**n > MAX_BOX_POINTS:
        raise ParameterError(f"box too large: {side}^{n} points exceeds {MAX_BOX_POINTS}")
    rows = basis.rows
    bound = n * r * int(np.abs(rows).max())
    if n * bound * bound >= 1 << 62:
        raise ParameterError("box too large: partial sums would overflow 64-bit arithmetic")

    head = min(n, max(1, int(math.log(2e5) / math.log(side))))
    vals = np.arange(-r, r + 1, dtype=np.int64)
    grids = np.meshgrid(*([vals] * head), indexing="ij")
    head_coeffs = np.stack([g.ravel() for g in grids], axis=1)
    head_carts = head_coeffs @ rows[:head]

    best_norm, best_coeffs = None, None
    scanned = 0
    for tail in itertools.product(range(-r, r + 1), repeat=n - head):
        tail_cart = np.asarray(tail, dtype=np.int64) @ rows[head:] if tail else np.zeros(n, np.int64)
        carts = head_carts + tail_cart
        sq = np.einsum("ij,ij->i", carts, carts)
        if not any(tail):
            sq[len(sq) // 2] = np.iinfo(np.int64).max  # the zero vector sits at the centre
        scanned += len(sq)
        k = int(np.argmin(sq))
        if best_norm is None or sq[k] < best_norm:
            best_norm = int(sq[k])
            best_coeffs = np.concatenate([head_coeffs[k], np.asarray(tail, dtype=np.int64)])
    v = basis.vector(best_coeffs)
    return EnumResult(v, math.sqrt(v.norm_sq), scanned - 1, basis)
