"""GaussSieve: heuristic saturation with a pairwise Gauss-reduced list.

The list implicitly holds +/- pairs, so a list vector ``s`` reduces ``v``
through whichever of ``v - s`` and ``v + s`` is shorter. Reductions fire
only on a strict decrease of the exact integer squared norm, which rules
out endless loops on ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from svplab import kernels as K
from svplab._pool import VectorPool
from svplab.errors import ListBlowUpError, ParameterError, ReductionStuckError
from svplab.lattice import LatticeBasis, LatticeVector, sample_lattice_point
from svplab.search import QueryLedger, SearchEngine

REDUCTION_CAP = 10_000
DEFAULT_COLLISIONS = 500


@dataclass
class GsState:
    list_s: VectorPool
    stack_q: list = field(default_factory=list)
    collisions: int = 0
    collision_target: int = DEFAULT_COLLISIONS


@dataclass
class GsOutcome:
    vector: LatticeVector
    state: GsState
    iterations: int
    samples: int


def _as_pool(S, dim: int) -> VectorPool:
    if isinstance(S, VectorPool):
        return S
    pool = VectorPool(dim)
    for s in S:
        pool.append(s)
    return pool


def gs_reduce_vector(
    v: LatticeVector, S, engine: SearchEngine, ledger: QueryLedger
) -> LatticeVector:
    """Reduce ``v`` against the list until no member shortens it."""
    pool = _as_pool(S, len(v.cart))
    for _ in range(REDUCTION_CAP):
        cart, vn = v.cart, v.norm_sq
        idx = engine.locate(
            len(pool),
            lambda: K.first_shortener(pool.carts, pool.norms, len(pool), cart, vn),
            lambda: K.all_shorteners(pool.carts, pool.norms, len(pool), cart, vn),
            ledger,
        )
        if idx < 0:
            return v
        s = pool[idx]
        v = v - s if int(cart @ s.cart) > 0 else v + s
    raise ReductionStuckError("reduction stuck: GaussSieve reduction exceeded its iteration cap")


def gs_back_reduce(
    v: LatticeVector, state: GsState, engine: SearchEngine, ledger: QueryLedger
) -> None:
    """Move every list vector that ``v`` shortens onto the stack, reduced by ``v``."""
    pool = state.list_s
    cart, vn = v.cart, v.norm_sq
    while True:
        idx = engine.locate(
            len(pool),
            lambda: K.first_shortened(pool.carts, pool.norms, len(pool), cart, vn),
            lambda: K.all_shortened(pool.carts, pool.norms, len(pool), cart, vn),
            ledger,
        )
        if idx < 0:
            return
        s = pool.pop(idx)
        state.stack_q.append(v - s if int(cart @ s.cart) > 0 else v + s)


def list_cap(n: int) -> int:
    return int(2 ** (0.25 * n + 16))


def gs_solve(
    basis: LatticeBasis,
    collision_target: int = DEFAULT_COLLISIONS,
    engine: Optional[SearchEngine] = None,
    ledger: Optional[QueryLedger] = None,
    rng: Optional[np.random.Generator] = None,
    random_pop: bool = False,
) -> GsOutcome:
    """Run GaussSieve until ``collision_target`` samples reduce to zero.

    ``basis`` should be LLL-reduced. Fresh samples are drawn from the ball of
    radius ``||B||``; zero samples are redrawn rather than counted. With
    ``random_pop`` the stack is popped at a uniformly random position
    instead of LIFO.
    """
    if collision_target < 1:
        raise ParameterError("collision target must be >= 1")
    engine = engine or SearchEngine.classical()
    ledger = ledger if ledger is not None else QueryLedger()
    rng = rng if rng is not None else np.random.default_rng()
    n = basis.dim
    bound = basis.max_row_norm
    cap = list_cap(n)

    pool = VectorPool(n)
    pool.append(basis.zero())
    state = GsState(pool, [], 0, collision_target)
    iterations = samples = 0
    while state.collisions < collision_target:
        iterations += 1
        if state.stack_q:
            i = int(rng.integers(len(state.stack_q))) if random_pop else -1
            v = state.stack_q.pop(i)
        else:
            v = sample_lattice_point(basis, bound, rng)
            while v.is_zero:
                v = sample_lattice_point(basis, bound, rng)
            samples += 1
        v = gs_reduce_vector(v, pool, engine, ledger)
        if v.is_zero:
            state.collisions += 1
            continue
        gs_back_reduce(v, state, engine, ledger)
        pool.append(v)
        if len(pool) > cap:
            raise ListBlowUpError(f"list blow-up: {len(pool)} vectors exceeds cap {cap}")

    nonzero = pool.norms[1 : len(pool)]
    # pool[0] is the zero vector and is never removed
    best = pool[1 + int(np.argmin(nonzero))]
    return GsOutcome(best, state, iterations, samples)


def pairwise_gauss_reduced(vectors, tol: float = 1e-9) -> bool:
    """Check min(||a - b||, ||a + b||) >= max(||a||, ||b||) for all distinct non-zero pairs."""
    vs = [v for v in vectors if not v.is_zero]
    if len(vs) < 2:
        return True
    M = np.array([v.cart for v in vs], dtype=np.float64)
    norms = np.einsum("ij,ij->i", M, M)
    G = M @ M.T
    shorter = norms[:, None] + norms[None, :] - 2 * np.abs(G)
    longer = np.maximum(norms[:, None], norms[None, :])
    np.fill_diagonal(shorter, np.inf)
    return bool(np.all(np.sqrt(np.maximum(shorter, 0)) >= np.sqrt(longer) - tol))

