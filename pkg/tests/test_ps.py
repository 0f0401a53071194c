import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svplab._pool import VectorPool
from svplab.bench import gen_lattice
from svplab.enumeration import enumerate_shortest
from svplab.errors import ParameterError
from svplab.lattice import LatticeBasis, lll_reduce
from svplab.ps import (
    SatParams,
    ct_argument,
    derive_sat_constants,
    mu_schedule,
    perturbed_sample,
    ps_reduce_with_list,
    ps_search,
    ps_solve,
)
from svplab.search import QueryLedger, SearchEngine


def test_constants_first_point():
    c = derive_sat_constants(0.9476, 3.0169)
    assert c.cb == pytest.approx(1.9941, abs=1e-4)
    assert c.ct == pytest.approx(0.8427, abs=1e-4)
    assert c.cg == pytest.approx(0.2354, abs=1e-4)
    assert 2 * c.cg + c.cb == pytest.approx(2.465, abs=1e-3)


def test_constants_second_point():
    c = derive_sat_constants(0.9086, 3.1376)
    assert c.cg == pytest.approx(0.2602, abs=1e-4)
    assert c.ct == pytest.approx(0.7787, abs=1e-4)
    assert c.cb == pytest.approx(2.0507, abs=1e-4)


def test_cg_vanishes_for_large_xi():
    vals = [derive_sat_constants(x, 3 * x).cg for x in (10, 100, 1000)]
    assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-6


def test_ct_forms():
    assert ct_argument(1.0, 4.0, "printed") == pytest.approx(1.5)
    assert ct_argument(1.0, 4.0, "corrected") == pytest.approx(2.0)
    with pytest.raises(ParameterError):
        ct_argument(1.0, 4.0, "other")


@given(st.floats(0.5001, 5), st.floats(1e-3, 10))
def test_constants_positive_and_finite(xi, gap):
    for form in ("printed", "corrected"):
        c = derive_sat_constants(xi, 2 * xi + gap, form)
        for v in (c.cb, c.ct, c.cg):
            assert math.isfinite(v) and v > 0
        assert c.nB == pytest.approx(2**c.cb)


def test_domain_errors():
    with pytest.raises(ParameterError):
        derive_sat_constants(0.5, 3.0)
    with pytest.raises(ParameterError):
        derive_sat_constants(1.0, 2.0)
    with pytest.raises(ParameterError):
        SatParams(1.0, 3.0, -1.0, 0.5, 1, 1)
    with pytest.raises(ParameterError):
        SatParams(1.0, 3.0, 1.0, 0.5, 0, 1)


def test_params_for_dimension():
    p = SatParams.for_dimension(8, 2.0)
    c = derive_sat_constants(0.9476, 3.0169)
    assert p.gamma == 1 - 1 / 8
    assert p.n1_max == math.ceil(2 ** ((c.cg + c.ct) * 8))
    assert p.n2 == math.ceil(2 ** ((c.cg + c.cb / 2) * 8))


def test_params_clamp_warns():
    with pytest.warns(RuntimeWarning):
        p = SatParams.for_dimension(40, 2.0, cap_exponent=10)
    assert p.n1_max == 1024 and p.n2 == 1024


# -- reduction by the dummy list -------------------------------------------------

def test_reduce_example():
    T = [LatticeBasis.identity(2).vector([3, 0])]
    led = QueryLedger()
    out = ps_reduce_with_list([5.2, 0.0], T, 0.5, SearchEngine.classical(), led)
    assert np.allclose(out, [-0.8, 0.0])
    assert led.invocations == 3


def test_reduce_empty_list():
    led = QueryLedger()
    out = ps_reduce_with_list([1.0, 2.0], [], 0.5, SearchEngine.qcost(), led)
    assert np.allclose(out, [1.0, 2.0])
    assert led.invocations == 1 and led.charged_queries == 0


@given(st.integers(0, 500))
@settings(max_examples=60, deadline=None)
def test_reduce_exit_condition(seed):
    rng = np.random.default_rng(seed)
    B = LatticeBasis.identity(3)
    T = [B.vector(rng.integers(-4, 5, size=3)) for _ in range(8)]
    T = [t for t in T if not t.is_zero]
    gamma = 0.7
    w = ps_reduce_with_list(rng.normal(size=3) * 6, T, gamma, SearchEngine.classical(), QueryLedger())
    for t in T:
        assert np.linalg.norm(w - t.cart) >= gamma * np.linalg.norm(w) - 1e-9


def test_reduce_rejects_bad_gamma():
    with pytest.raises(ParameterError):
        ps_reduce_with_list([1.0], [], 1.0, SearchEngine.classical(), QueryLedger())


def test_perturbed_sample_membership(rng):
    B = lll_reduce(gen_lattice(6, 10, 1))
    pool = VectorPool(6, real=True)
    for _ in range(50):
        p = perturbed_sample(B, 3.0, pool, 5 / 6, SearchEngine.classical(), QueryLedger(), rng)
        assert np.linalg.norm(p.x) <= 3.0 + 1e-12
        assert np.allclose(p.v_prime - p.x, p.lattice_part.cart, atol=1e-6)
        assert np.array_equal(p.lattice_part.coeffs @ B.rows, p.lattice_part.cart)
        # with an empty dummy list v' is x reduced into the fundamental domain
        c = B.coordinates(p.v_prime)
        assert np.all(c > -1e-9) and np.all(c < 1 + 1e-9)


# -- full runs ---------------------------------------------------------------------

@pytest.fixture(scope="module")
def lattice8():
    B = lll_reduce(gen_lattice(8, 10, 3))
    return B, enumerate_shortest(B).lambda1


def test_solve_contract_and_dummy_floor(lattice8):
    B, lam = lattice8
    params = SatParams.for_dimension(8, 1.01 * lam)
    found = 0
    for seed in range(10):
        out = ps_solve(B, params, rng=np.random.default_rng(seed))
        assert 0 <= out.n1 < params.n1_max
        for t in out.dummy:
            assert t.norm >= params.bigR * params.mu - 1e-9
        assert len(out.samples) == params.n2
        for s in out.samples:
            assert np.array_equal(s.coeffs @ B.rows, s.cart)
        if out.vector is not None:
            found += 1
            assert 0 < out.vector.norm < params.mu
            assert np.array_equal(out.vector.coeffs @ B.rows, out.vector.cart)
    assert found >= 1


def test_solve_phases_charged(lattice8):
    B, lam = lattice8
    led = QueryLedger()
    ps_solve(B, SatParams.for_dimension(8, 1.01 * lam), SearchEngine.qcost(), led, np.random.default_rng(1))
    assert set(led.by_phase) <= {"T", "S", "pairs"}
    assert sum(led.by_phase.values()) == led.charged_queries
    assert "pairs" in led.by_phase


def test_engines_agree_with_first_pick(lattice8):
    B, lam = lattice8
    params = SatParams.for_dimension(8, 1.01 * lam)
    lc, lq = QueryLedger(), QueryLedger()
    a = ps_solve(B, params, SearchEngine.classical(), lc, np.random.default_rng(4))
    b = ps_solve(B, params, SearchEngine.qcost(pick="first"), lq, np.random.default_rng(4))
    assert [t.cart.tolist() for t in a.dummy] == [t.cart.tolist() for t in b.dummy]
    assert [s.cart.tolist() for s in a.samples] == [s.cart.tolist() for s in b.samples]
    assert (a.vector is None) == (b.vector is None)
    if a.vector is not None:
        assert a.vector.same(b.vector)
    assert lc.predicate_evals == lq.predicate_evals


def test_mu_schedule_and_search(lattice8):
    B, lam = lattice8
    mus = mu_schedule(B, 6)
    assert all(b == pytest.approx(0.95 * a) for a, b in zip(mus, mus[1:]))
    # at n = 8 the heuristic undershoots lambda_1, so start the bracket higher
    mus = mu_schedule(B, 10, start=1.6)
    best = ps_search(B, SearchEngine.classical(), QueryLedger(), np.random.default_rng(0), mus, attempts=4)
    assert best is not None and best.norm >= lam - 1e-9
