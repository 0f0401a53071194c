"""Nguyen-Vidick heuristic sieve with a pluggable center search."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from svplab import kernels as K
from svplab._pool import VectorPool
from svplab.errors import InsufficientSampleError, ParameterError, SamplingFailure
from svplab.lattice import LatticeBasis, LatticeVector, sample_lattice_point
from svplab.search import QueryLedger, SearchEngine

LIST_EXPONENT = 0.21


@dataclass(frozen=True)
class NvParams:
    gamma: float
    sample_count: int
    max_rounds: int

    def __post_init__(self):
        if not 2 / 3 < self.gamma < 1:
            raise ParameterError("gamma must lie strictly inside (2/3, 1)")
        if self.sample_count < 1 or self.max_rounds < 1:
            raise ParameterError("sample_count and max_rounds must be positive")

    @classmethod
    def for_dimension(cls, n: int, gamma: float = 0.97, mult: float = 16.0) -> "NvParams":
        """Defaults: N = ceil(mult * 2^(0.21 n)), at most 10 n rounds."""
        count = max(math.ceil(mult * 2 ** (LIST_EXPONENT * n)), n)
        return cls(gamma, count, 10 * n)


@dataclass
class SieveRound:
    radius: float
    centers: list
    survivors: list
    shortest: Optional[LatticeVector] = None


@dataclass
class NvOutcome:
    vector: LatticeVector
    rounds: int
    truncated: bool
    radii: list = field(default_factory=list)


def nv_sieve_step(
    s_prev: Sequence[LatticeVector], gamma: float, engine: SearchEngine, ledger: QueryLedger
) -> SieveRound:
    """One sieve pass: split ``s_prev`` into centers and reduced survivors."""
    if not s_prev:
        raise ParameterError("sieve step needs a non-empty list")
    n = len(s_prev[0].cart)
    max_sq = max(v.norm_sq for v in s_prev)
    radius = math.sqrt(max_sq)
    bound_sq = gamma * gamma * max_sq
    centers = VectorPool(n)
    centers.append(LatticeVector(np.zeros(len(s_prev[0].coeffs), np.int64), np.zeros(n, np.int64), 0))
    survivors: list[LatticeVector] = []
    shortest = None
    for v in s_prev:
        cart, vn = v.cart, v.norm_sq
        idx = engine.locate(
            len(centers),
            lambda: K.first_within(centers.carts, centers.norms, len(centers), cart, vn, bound_sq),
            lambda: K.all_within(centers.carts, centers.norms, len(centers), cart, vn, bound_sq),
            ledger,
        )
        if idx >= 0:
            w = v - centers[idx]
            survivors.append(w)
            if not w.is_zero and (shortest is None or w.norm_sq < shortest.norm_sq):
                shortest = w
        else:
            centers.append(v)
    return SieveRound(radius, centers.items, survivors, shortest)


def nv_solve(
    basis: LatticeBasis,
    params: NvParams,
    engine: Optional[SearchEngine] = None,
    ledger: Optional[QueryLedger] = None,
    rng: Optional[np.random.Generator] = None,
) -> NvOutcome:
    """Sieve a list of ``params.sample_count`` samples until it empties.

    Returns the shortest vector of the last non-empty list. Hitting
    ``max_rounds`` first returns that list's shortest vector with
    ``truncated=True`` and emits a RuntimeWarning.
    """
    engine = engine or SearchEngine.classical()
    ledger = ledger if ledger is not None else QueryLedger()
    rng = rng if rng is not None else np.random.default_rng()
    bound = basis.max_row_norm

    current = []
    best = None
    for _ in range(params.sample_count):
        v = sample_lattice_point(basis, bound, rng)
        if not v.is_zero:
            current.append(v)
            if best is None or v.norm_sq < best.norm_sq:
                best = v
    if not current:
        raise SamplingFailure("sampling failure: every sample was the zero vector")

    rounds = 0
    radii = []
    truncated = False
    while True:
        if rounds >= params.max_rounds:
            truncated = True
            warnings.warn("nv_solve hit max_rounds; returning best of the current list", RuntimeWarning)
            break
        step = nv_sieve_step(current, params.gamma, engine, ledger)
        rounds += 1
        radii.append(step.radius)
        nxt = [w for w in step.survivors if not w.is_zero]
        if not nxt:
            break
        current, best = nxt, step.shortest
    return NvOutcome(best, rounds, truncated, radii)


def _abs_cos_expectation(n: int) -> float:
    """E|cos angle| between two independent uniform directions in R^n."""
    return math.exp(math.lgamma(n / 2) - math.lgamma((n + 1) / 2)) / math.sqrt(math.pi)


def shell_uniformity_stat(vectors, inner: float, outer: float) -> float:
    """Discrepancy of the vectors in the shell ``inner <= ||x|| <= outer`` from uniform.

    Maximum of (a) the Kolmogorov-Smirnov distance between the observed
    norms and the radial law ``(r^n - inner^n) / (outer^n - inner^n)`` and
    (b) the gap between the mean pairwise ``|cos|`` and its isotropic value,
    rescaled so that identical directions score 1.
    """
    if not 0 < inner < outer:
        raise ParameterError("need 0 < inner < outer")
    pts = np.array([getattr(v, "cart", v) for v in vectors], dtype=np.float64)
    if pts.ndim != 2:
        raise InsufficientSampleError("insufficient sample: no vectors")
    norms = np.linalg.norm(pts, axis=1)
    keep = (norms >= inner) & (norms <= outer)
    pts, norms = pts[keep], norms[keep]
    m = len(norms)
    if m < 10:
        raise InsufficientSampleError(f"insufficient sample: {m} vectors in shell, need 10")
    n = pts.shape[1]

    # radial law in log space: (r/outer)^n underflows gracefully
    ratio = (inner / outer) ** n
    cdf = np.clip(((np.sort(norms) / outer) ** n - ratio) / (1 - ratio), 0.0, 1.0)
    idx = np.arange(1, m + 1)
    ks = float(max(np.max(idx / m - cdf), np.max(cdf - (idx - 1) / m)))

    units = pts / norms[:, None]
    if m <= 3000:
        G = np.abs(units @ units.T)
        mean_cos = float(G[np.triu_indices(m, 1)].mean())
    else:
        mean_cos = float(np.abs(np.einsum("ij,ij->i", units[:-1], units[1:])).mean())
    expected = _abs_cos_expectation(n)
    angular = abs(mean_cos - expected) / (1 - expected)
    return max(ks, angular)
