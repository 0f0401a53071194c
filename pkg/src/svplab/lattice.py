"""Integer lattices: bases, Gram-Schmidt data, LLL, and the two samplers.

Bases are row bases of integer vectors. Coefficient and Cartesian
coordinates of lattice vectors are kept as int64 with explicit overflow
guards; Gram-Schmidt data is double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from svplab import kernels as K
from svplab.errors import DegenerateBasisError, ParameterError, SamplerStuckError

# Entries above this bound are rejected so that sums of two entries never wrap.
_INT_LIMIT = 1 << 61
# Below this bound an int64 dot product of two length-45 vectors cannot overflow.
_DOT_SAFE = 1 << 28

SAMPLER_RETRIES = 1000
# uniforms drawn per coordinate up front; topped up if a walk runs out
_UNIFORM_BLOCK = 64


def _as_int_matrix(rows) -> np.ndarray:
    obj = [[int(x) for x in r] for r in rows]
    if not obj or any(len(r) != len(obj) for r in obj):
        raise ParameterError("basis must be a non-empty square integer matrix")
    if any(abs(x) >= _INT_LIMIT for r in obj for x in r):
        raise OverflowError("basis entry exceeds the 64-bit working range")
    return np.array(obj, dtype=np.int64)


def _exact_norm_sq(cart: np.ndarray) -> int:
    if cart.size == 0:
        return 0
    if int(np.abs(cart).max()) < _DOT_SAFE:
        return int(cart @ cart)
    return sum(int(x) * int(x) for x in cart)


def bareiss_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [[int(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class GramSchmidt:
    """Orthogonalization ``b_i = b*_i + sum_{j<i} mu[i, j] b*_j``."""

    bstar: np.ndarray
    mu: np.ndarray
    bstar_sq: np.ndarray


def _gso_rows(rows: np.ndarray) -> GramSchmidt:
    b = rows.astype(np.float64)
    n = b.shape[0]
    bstar = np.zeros_like(b)
    mu = np.eye(n)
    bsq = np.zeros(n)
    for i in range(n):
        v = b[i].copy()
        if i:
            # classical Gram-Schmidt applied twice keeps orthogonality at 1e-15
            c1 = (bstar[:i] @ v) / bsq[:i]
            v -= c1 @ bstar[:i]
            c2 = (bstar[:i] @ v) / bsq[:i]
            v -= c2 @ bstar[:i]
            mu[i, :i] = c1 + c2
        bstar[i] = v
        bsq[i] = v @ v
        if not bsq[i] > 0:
            raise DegenerateBasisError(f"degenerate basis: row {i} is dependent on earlier rows")
    return GramSchmidt(bstar, mu, bsq)


def gram_schmidt(basis: "LatticeBasis | np.ndarray") -> GramSchmidt:
    """Gram-Schmidt vectors and coefficients of a row basis."""
    if isinstance(basis, LatticeBasis):
        return basis.gso
    rows = _as_int_matrix(basis)
    if bareiss_det(rows.tolist()) == 0:
        raise DegenerateBasisError("degenerate basis: determinant is zero")
    return _gso_rows(rows)


@dataclass(frozen=True, eq=False)
class LatticeVector:
    """A lattice vector with its basis coefficients, embedding and squared norm."""

    coeffs: np.ndarray
    cart: np.ndarray
    norm_sq: int

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    @property
    def is_zero(self) -> bool:
        return self.norm_sq == 0

    def _combine(self, other: "LatticeVector", sign: int) -> "LatticeVector":
        coeffs = self.coeffs + sign * other.coeffs
        cart = self.cart + sign * other.cart
        if np.abs(cart).max(initial=0) >= _INT_LIMIT or np.abs(coeffs).max(initial=0) >= _INT_LIMIT:
            raise OverflowError("lattice vector left the 64-bit working range")
        return LatticeVector(coeffs, cart, _exact_norm_sq(cart))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return self._combine(other, 1)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self._combine(other, -1)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.coeffs, -self.cart, self.norm_sq)

    def same(self, other: "LatticeVector") -> bool:
        return np.array_equal(self.coeffs, other.coeffs) and np.array_equal(self.cart, other.cart)

    def __repr__(self) -> str:
        return f"LatticeVector(cart={self.cart.tolist()}, norm_sq={self.norm_sq})"


class LatticeBasis:
    """Full-rank integer row basis; immutable, derived data cached."""

    def __init__(self, rows):
        self._rows = _as_int_matrix(rows)
        self._rows.setflags(write=False)
        if bareiss_det(self._rows.tolist()) == 0:
            raise DegenerateBasisError("degenerate basis: determinant is zero")

    @classmethod
    def identity(cls, n: int) -> "LatticeBasis":
        return cls(np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def dim(self) -> int:
        return self._rows.shape[0]

    @cached_property
    def gso(self) -> GramSchmidt:
        return _gso_rows(self._rows)

    @cached_property
    def row_norms_sq(self) -> list[int]:
        return [_exact_norm_sq(r) for r in self._rows]

    @cached_property
    def max_row_norm(self) -> float:
        return math.sqrt(max(self.row_norms_sq))

    @cached_property
    def det(self) -> int:
        """Absolute determinant (lattice volume), exact."""
        return abs(bareiss_det(self._rows.tolist()))

    @cached_property
    def _rows_float(self) -> np.ndarray:
        return self._rows.astype(np.float64)

    def vector(self, coeffs: Sequence[int]) -> LatticeVector:
        c = np.asarray([int(x) for x in coeffs], dtype=object)
        if c.shape != (self.dim,):
            raise ParameterError(f"expected {self.dim} coefficients, got {c.shape}")
        if max(abs(int(x)) for x in c) * int(np.abs(self._rows).max()) * self.dim < _INT_LIMIT:
            ci = c.astype(np.int64)
            cart = ci @ self._rows
        else:
            exact = c @ self._rows.astype(object)
            if any(abs(int(x)) >= _INT_LIMIT for x in exact):
                raise OverflowError("lattice vector exceeds the 64-bit working range")
            ci = c.astype(np.int64)
            cart = np.array([int(x) for x in exact], dtype=np.int64)
        return LatticeVector(ci, cart, _exact_norm_sq(cart))

    def row_vector(self, i: int) -> LatticeVector:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return self.vector(e)

    def zero(self) -> LatticeVector:
        z = np.zeros(self.dim, dtype=np.int64)
        return LatticeVector(z, z.copy(), 0)

    def coordinates(self, x) -> np.ndarray:
        """Real coordinates ``c`` with ``x = c @ rows``."""
        return np.linalg.solve(self._rows_float.T, np.asarray(x, dtype=np.float64))

    def round_to_lattice(self, x, tol: float = 1e-6) -> LatticeVector:
        """The lattice vector at real point ``x``; raises if ``x`` is off-lattice by > tol."""
        c = self.coordinates(x)
        k = np.rint(c)
        if np.abs(c - k).max(initial=0.0) > tol:
            raise ValueError("point is not a lattice vector")
        return self.vector(k.astype(np.int64))

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeBasis) and np.array_equal(self._rows, other._rows)

    def __hash__(self) -> int:
        return hash(self._rows.tobytes())

    def __repr__(self) -> str:
        return f"LatticeBasis(dim={self.dim}, max_row_norm={self.max_row_norm:.4g})"


def lll_reduce(basis: LatticeBasis, delta: float = 0.99) -> LatticeBasis:
    """LLL-reduce ``basis`` (size reduction |mu| <= 1/2 and the Lovasz condition).

    Row operations are carried out on exact Python integers; the
    Gram-Schmidt data is double precision and recomputed for the working row
    after every size-reduction pass, which is what lets scrambled inputs with
    ~50-bit entries reduce correctly.
    """
    if not 0.25 < delta < 1:
        raise ParameterError("delta must lie in (1/4, 1)")
    n = basis.dim
    B = [[int(x) for x in r] for r in basis.rows]
    Bf = np.array(B, dtype=np.float64)
    bstar = np.zeros((n, n))
    bsq = np.zeros(n)
    mu = np.zeros((n, n))

    def orthogonalize(k: int) -> None:
        v = Bf[k].copy()
        c = np.zeros(k)
        for _ in range(2):
            if k:
                step = (bstar[:k] @ v) / bsq[:k]
                v -= step @ bstar[:k]
                c += step
        mu[k, :k] = c
        bstar[k] = v
        bsq[k] = v @ v

    orthogonalize(0)
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10_000_000:
            raise RuntimeError("LLL failed to converge")
        for _ in range(200):
            orthogonalize(k)
            changed = False
            for j in range(k - 1, -1, -1):
                if abs(mu[k, j]) > 0.5 + 1e-9:
                    q = int(np.rint(mu[k, j]))
                    bj = B[j]
                    B[k] = [a - q * b for a, b in zip(B[k], bj)]
                    mu[k, :j] -= q * mu[j, :j]
                    mu[k, j] -= q
                    changed = True
            if not changed:
                break
            Bf[k] = np.array([float(a) for a in B[k]])
        if bsq[k] >= (delta - mu[k, k - 1] ** 2) * bsq[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            Bf[[k, k - 1]] = Bf[[k - 1, k]]
            orthogonalize(k - 1)
            k = max(k - 1, 1)
    return LatticeBasis(B)


def reduce_mod_fundamental(x, basis: LatticeBasis, tol: float = 1e-9) -> np.ndarray:
    """Map ``x`` into the half-open parallelepiped spanned by the basis rows.

    Returns ``x - floor(c) @ rows`` for the basis coordinates ``c`` of ``x``.
    The floor is taken at ``c + tol`` so that points already reduced stay put
    under re-application despite rounding in the coordinate solve.
    """
    x = np.asarray(x, dtype=np.float64)
    k = np.floor(basis.coordinates(x) + tol)
    return x - k @ basis._rows_float


def fundamental_shift(x, basis: LatticeBasis, tol: float = 1e-9) -> np.ndarray:
    """Integer coefficients ``k`` used by :func:`reduce_mod_fundamental` for ``x``."""
    return np.floor(basis.coordinates(np.asarray(x, dtype=np.float64)) + tol).astype(np.int64)


def sample_ball(dim: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the solid ``dim``-ball of the given radius."""
    if radius < 0:
        raise ParameterError("radius must be non-negative")
    if radius == 0:
        return np.zeros(dim)
    g = rng.standard_normal(dim)
    while not np.any(g):
        g = rng.standard_normal(dim)
    return g / np.linalg.norm(g) * (radius * rng.random() ** (1.0 / dim))


def sample_lattice_point(
    basis: LatticeBasis,
    bound: float,
    rng: np.random.Generator,
    spread: float = 0.8,
    max_tries: int = SAMPLER_RETRIES,
) -> LatticeVector:
    """Random lattice vector of norm at most ``bound`` by randomized rounding.

    Klein's nearest-plane walk from the origin, drawing each coefficient from
    a discrete Gaussian of width ``spread * bound / sqrt(n)`` measured along
    the corresponding Gram-Schmidt direction; retried until the norm bound
    holds.
    """
    n = basis.dim
    gso = basis.gso
    sigma = spread * bound / math.sqrt(n)
    bound_sq = bound * bound * (1 + 1e-12)
    widths = np.ascontiguousarray(sigma / np.sqrt(gso.bstar_sq))
    mu = np.ascontiguousarray(gso.mu)
    block = _UNIFORM_BLOCK * n
    for _ in range(max_tries):
        u = rng.random(block)
        z, used = K.klein_coeffs(mu, widths, u)
        while used < 0:
            u = np.concatenate([u, rng.random(block)])
            z, used = K.klein_coeffs(mu, widths, u)
        v = basis.vector(z)
        if v.norm_sq <= bound_sq:
            return v
    raise SamplerStuckError(f"sampler stuck: no vector of norm <= {bound:.4g} in {max_tries} draws")


def gaussian_heuristic_length(basis: LatticeBasis) -> float:
    """Radius of the ball whose volume equals the lattice determinant."""
    n = basis.dim
    log_det = math.log(basis.det)
    return math.exp((log_det + math.lgamma(n / 2 + 1)) / n) / math.sqrt(math.pi)


def read_basis(path: str | Path) -> LatticeBasis:
    """Read the plain-text basis format: ``n`` then ``n`` rows of ``n`` integers."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise ParameterError("basis file must start with the dimension on its own line")
    n = int(lines[0][0])
    rows = lines[1:]
    if len(rows) != n:
        raise ParameterError(f"expected {n} rows, found {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ParameterError(f"ragged row {i + 1}: {len(r)} entries, expected {n}")
    return LatticeBasis([[int(x) for x in r] for r in rows])


def format_basis(basis: LatticeBasis) -> str:
    lines = [str(basis.dim)] + [" ".join(str(int(x)) for x in r) for r in basis.rows]
    return "\n".join(lines) + "\n"


def write_basis(basis: LatticeBasis, path: str | Path) -> None:
    Path(path).write_text(format_basis(basis))


def shortest_row(basis: LatticeBasis) -> LatticeVector:
    i = int(np.argmin(basis.row_norms_sq))
    return basis.row_vector(i)


def as_vectors(basis: LatticeBasis, coeff_rows: Iterable[Sequence[int]]) -> list[LatticeVector]:
    return [basis.vector(c) for c in coeff_rows]
