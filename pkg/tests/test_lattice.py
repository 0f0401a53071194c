import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import special, stats

from svplab.errors import DegenerateBasisError, ParameterError, SamplerStuckError
from svplab.lattice import (
    LatticeBasis,
    bareiss_det,
    fundamental_shift,
    gaussian_heuristic_length,
    gram_schmidt,
    lll_reduce,
    read_basis,
    reduce_mod_fundamental,
    sample_ball,
    sample_lattice_point,
    write_basis,
)
from svplab.bench import gen_lattice


def square_matrices(min_n=1, max_n=6, lo=-20, hi=20):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )


def full_rank(rows):
    return sympy.Matrix(rows).det() != 0


def check_lll(B: LatticeBasis, delta=0.99):
    g = B.gso
    n = B.dim
    assert np.all(np.abs(np.tril(g.mu, -1)) <= 0.5 + 1e-9)
    for i in range(n - 1):
        lhs = delta * g.bstar_sq[i]
        rhs = g.bstar_sq[i + 1] + g.mu[i + 1, i] ** 2 * g.bstar_sq[i]
        assert lhs <= rhs * (1 + 1e-9)


def integral_coords(basis: LatticeBasis, rows) -> bool:
    c = np.linalg.solve(basis.rows.astype(float).T, np.asarray(rows, dtype=float).T)
    return bool(np.all(np.abs(c - np.rint(c)) < 1e-6))


# -- determinant and Gram-Schmidt -------------------------------------------

@given(square_matrices())
@settings(max_examples=150, deadline=None)
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(rows) == sympy.Matrix(rows).det()


def test_gso_small_example():
    g = gram_schmidt(np.array([[1, 0], [1, 1]]))
    assert np.allclose(g.bstar, [[1, 0], [0, 1]])
    assert g.mu[1, 0] == pytest.approx(1.0)


def test_gso_identity():
    g = LatticeBasis.identity(4).gso
    assert np.allclose(g.bstar, np.eye(4))
    assert np.allclose(np.tril(g.mu, -1), 0)


@given(square_matrices(2, 7, -50, 50))
@settings(max_examples=100, deadline=None)
def test_gso_reconstruction_and_orthogonality(rows):
    assume(full_rank(rows))
    B = LatticeBasis(rows)
    g = B.gso
    recon = g.mu @ g.bstar
    scale = max(1.0, float(np.abs(B.rows).max()))
    assert np.abs(recon - B.rows).max() <= 1e-9 * scale * B.dim
    norms = np.sqrt(g.bstar_sq)
    G = g.bstar @ g.bstar.T
    off = np.abs(G - np.diag(np.diag(G))) / np.outer(norms, norms)
    assert off.max() < 1e-7
    # independent oracle: |R_ii|^2 of the QR factorisation of B^T
    r = np.linalg.qr(B.rows.astype(float).T, mode="r")
    assert np.allclose(np.diag(r) ** 2, g.bstar_sq, rtol=1e-9)


def test_gso_seeded_5x5_residual():
    rows = np.random.default_rng(5).integers(-30, 31, size=(5, 5))
    B = LatticeBasis(rows)
    g = B.gso
    assert np.abs(g.mu @ g.bstar - rows).max() < 1e-9


def test_degenerate_basis_rejected():
    with pytest.raises(DegenerateBasisError):
        LatticeBasis([[1, 2], [2, 4]])
    with pytest.raises(DegenerateBasisError):
        gram_schmidt(np.array([[1, 1, 0], [0, 1, 1], [1, 2, 1]]))


def test_non_square_rejected():
    with pytest.raises(ParameterError):
        LatticeBasis([[1, 2, 3], [4, 5, 6]])


# -- LLL -------------------------------------------------------------------

def test_lll_identity_unchanged():
    I = LatticeBasis.identity(5)
    assert lll_reduce(I) == I


def test_lll_two_dim_example():
    R = lll_reduce(LatticeBasis([[4, 1], [1, 1]]))
    rows = {tuple(sorted((tuple(r), tuple(-r)))) for r in R.rows}
    assert rows == {((-1, -1), (1, 1)), ((-2, 1), (2, -1))}
    check_lll(R)


def test_lll_seeded_10x10():
    B = LatticeBasis(np.random.default_rng(10).integers(-100, 101, size=(10, 10)))
    R = lll_reduce(B)
    check_lll(R)
    assert R.det == B.det
    assert integral_coords(R, B.rows) and integral_coords(B, R.rows)


@pytest.mark.parametrize("n", [10, 20, 30])
def test_lll_scrambled_lattices(n):
    B = gen_lattice(n, 10, n)
    R = lll_reduce(B)
    check_lll(R)
    assert R.det == B.det
    assert max(R.row_norms_sq) < max(B.row_norms_sq)


@given(square_matrices(2, 6, -40, 40), st.sampled_from([0.5, 0.75, 0.99]))
@settings(max_examples=80, deadline=None)
def test_lll_postconditions_property(rows, delta):
    assume(full_rank(rows))
    B = LatticeBasis(rows)
    R = lll_reduce(B, delta)
    check_lll(R, delta)
    assert R.det == B.det
    assert integral_coords(R, B.rows)


def test_lll_rejects_bad_delta():
    with pytest.raises(ParameterError):
        lll_reduce(LatticeBasis.identity(2), 0.2)
    with pytest.raises(ParameterError):
        lll_reduce(LatticeBasis.identity(2), 1.0)


# -- vectors ----------------------------------------------------------------

@given(st.lists(st.integers(-1000, 1000), min_size=4, max_size=4))
def test_vector_consistency(coeffs):
    B = LatticeBasis([[3, 1, 0, 2], [0, 5, 1, 1], [1, 0, 7, 0], [2, 2, 2, 9]])
    v = B.vector(coeffs)
    assert np.array_equal(v.cart, np.array(coeffs) @ B.rows)
    assert v.norm_sq == sum(int(x) ** 2 for x in v.cart)
    assert v.is_zero == (not any(coeffs))
    w = B.vector([1, -1, 0, 2])
    s = v + w
    assert np.array_equal(s.coeffs, v.coeffs + w.coeffs)
    assert np.array_equal((v - w).cart, v.cart - w.cart)
    assert (-v).norm_sq == v.norm_sq


def test_vector_overflow_detected():
    B = LatticeBasis([[1 << 40, 0], [0, 1]])
    with pytest.raises(OverflowError):
        B.vector([1 << 22, 0])


def test_round_to_lattice():
    B = LatticeBasis([[2, 1], [0, 3]])
    v = B.vector([3, -2])
    assert B.round_to_lattice(v.cart.astype(float)).same(v)
    with pytest.raises(ValueError):
        B.round_to_lattice([0.5, 0.5])


# -- fundamental domain -----------------------------------------------------

def test_reduce_mod_examples():
    assert np.allclose(reduce_mod_fundamental([2.5, 0], LatticeBasis.identity(2)), [0.5, 0])
    assert np.allclose(reduce_mod_fundamental([-0.25], LatticeBasis([[1]])), [0.75])
    assert np.allclose(reduce_mod_fundamental([3.2, -1.7], LatticeBasis([[2, 0], [0, 2]])), [1.2, 0.3])


@given(
    st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3),
    st.integers(0, 50),
)
@settings(max_examples=200, deadline=None)
def test_reduce_mod_idempotent_and_in_domain(x, seed):
    rows = np.random.default_rng(seed).integers(-6, 7, size=(3, 3))
    assume(full_rank(rows.tolist()))
    B = LatticeBasis(rows)
    y = reduce_mod_fundamental(x, B)
    c = B.coordinates(y)
    assert np.all(c >= -1e-9) and np.all(c < 1 + 1e-9)
    assert np.allclose(reduce_mod_fundamental(y, B), y, atol=1e-9)
    k = fundamental_shift(x, B)
    assert np.allclose(np.asarray(x) - k @ B.rows, y)
    assert integral_coords(B, [np.asarray(x) - y])


# -- samplers --------------------------------------------------------------

def test_sample_ball_zero_radius(rng):
    assert np.array_equal(sample_ball(4, 0.0, rng), np.zeros(4))
    with pytest.raises(ParameterError):
        sample_ball(3, -1.0, rng)


@given(st.integers(1, 20), st.floats(0.01, 100), st.integers(0, 1000))
def test_sample_ball_within_radius(dim, radius, seed):
    x = sample_ball(dim, radius, np.random.default_rng(seed))
    assert x.shape == (dim,)
    assert np.linalg.norm(x) <= radius * (1 + 1e-12)


def test_sample_ball_radial_law():
    rng = np.random.default_rng(7)
    norms = np.array([np.linalg.norm(sample_ball(5, 1.0, rng)) for _ in range(10_000)])
    ks = stats.kstest(norms, lambda r: np.clip(r, 0, 1) ** 5).statistic
    assert ks < 0.02


def test_sample_ball_directions_isotropic():
    rng = np.random.default_rng(8)
    pts = np.array([sample_ball(3, 2.0, rng) for _ in range(6000)])
    assert np.abs(pts.mean(axis=0)).max() < 0.05


def test_lattice_sampler_identity_short():
    # every point of Z^3 with norm <= 1.5: 0, +/-e_i and the twelve (+/-1, +/-1, 0)
    box = itertools.product(range(-2, 3), repeat=3)
    allowed = {z for z in box if sum(c * c for c in z) <= 2.25}
    assert len(allowed) == 19
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(400):
        v = sample_lattice_point(LatticeBasis.identity(3), 1.5, rng)
        assert tuple(int(c) for c in v.cart) in allowed
        seen.add(tuple(int(c) for c in v.cart))
    assert len(seen) > 12


def test_lattice_sampler_bound_membership_determinism():
    B = lll_reduce(gen_lattice(12, 10, 3))
    bound = B.max_row_norm
    a = [sample_lattice_point(B, bound, np.random.default_rng(4)) for _ in range(3)]
    b = [sample_lattice_point(B, bound, np.random.default_rng(4)) for _ in range(3)]
    assert all(x.same(y) for x, y in zip(a, b))
    rng = np.random.default_rng(9)
    for _ in range(100):
        v = sample_lattice_point(B, bound, rng)
        assert v.norm_sq <= bound**2 * (1 + 1e-12)
        assert np.array_equal(v.coeffs @ B.rows, v.cart)


def test_lattice_sampler_reaches_every_short_vector():
    B = LatticeBasis([[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1], [1, 0, 0, 2]])
    box = (np.array(z) @ B.rows for z in itertools.product(range(-4, 5), repeat=4))
    short = {tuple(int(c) for c in x) for x in box if x @ x <= 9}
    rng = np.random.default_rng(11)
    seen = {tuple(int(c) for c in sample_lattice_point(B, 3.0, rng).cart) for _ in range(2000)}
    assert seen == short


def test_lattice_sampler_stuck():
    B = LatticeBasis([[10, 0], [0, 10]])
    with pytest.raises(SamplerStuckError):
        sample_lattice_point(B, 5.0, np.random.default_rng(0), spread=50.0, max_tries=5)


# -- Gaussian heuristic ------------------------------------------------------

def test_gaussian_heuristic_examples():
    assert gaussian_heuristic_length(LatticeBasis.identity(2)) == pytest.approx(1 / math.sqrt(math.pi))
    assert gaussian_heuristic_length(LatticeBasis([[5]])) == pytest.approx(2.5)


@given(st.integers(2, 12), st.integers(1, 5), st.integers(0, 100))
@settings(max_examples=50, deadline=None)
def test_gaussian_heuristic_formula_and_scaling(n, k, seed):
    rows = np.eye(n, dtype=np.int64)
    rows[0, :] = np.random.default_rng(seed).integers(1, 9, size=n)
    rows[0, 0] = max(rows[0, 0], 1)
    B = LatticeBasis(rows)
    expected = B.det ** (1 / n) * special.gamma(n / 2 + 1) ** (1 / n) / math.sqrt(math.pi)
    assert gaussian_heuristic_length(B) == pytest.approx(expected, rel=1e-9)
    assert gaussian_heuristic_length(LatticeBasis(k * rows)) == pytest.approx(k * expected, rel=1e-9)


# -- file format -------------------------------------------------------------

def test_basis_file_roundtrip(tmp_path):
    B = gen_lattice(6, 8, 1)
    p = tmp_path / "b.txt"
    write_basis(B, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "6" and len(lines) == 7
    assert read_basis(p) == B


def test_basis_file_rejects_ragged(tmp_path):
    p = tmp_path / "b.txt"
    p.write_text("2\n1 0\n0\n")
    with pytest.raises(ParameterError):
        read_basis(p)
    p.write_text("3\n1 0 0\n0 1 0\n")
    with pytest.raises(ParameterError):
        read_basis(p)
