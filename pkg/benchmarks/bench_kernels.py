"""Compare the compiled and numpy kernel backends.

Times each search kernel on a list the size a sieve reaches at n = 35, the
Klein sampling kernel, the enumeration kernel on LLL-reduced lattices and
one end-to-end GaussSieve run, checking on the way that both backends
return identical results.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--dim 35]
"""

import argparse
import time

import numpy as np

from svplab import kernels
from svplab.bench import gen_lattice, make_engine
from svplab.gauss import gs_solve
from svplab.lattice import lll_reduce
from svplab.search import QueryLedger


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def kernel_cases(dim, rng):
    m = 900
    S = rng.integers(-9, 10, size=(m, dim)).astype(np.int64)
    norms = np.einsum("ij,ij->i", S, S).astype(np.int64)
    v = rng.integers(-9, 10, size=dim).astype(np.int64)
    vn = int(v @ v)
    T = rng.normal(size=(m, dim))
    vp = rng.normal(size=dim) * 3
    P = S[:300].copy()
    Pn = norms[:300].copy()
    mu = np.tril(rng.normal(size=(dim, dim)), -1) + np.eye(dim)
    widths = rng.uniform(0.5, 3.0, size=dim)
    u = rng.random(64 * dim)
    return [
        ("first_shortener", (S, norms, m, v, vn)),
        ("all_shorteners", (S, norms, m, v, vn)),
        ("first_shortened", (S, norms, m, v, vn)),
        ("all_shortened", (S, norms, m, v, vn)),
        ("first_within", (S, norms, m, v, vn, 0.5 * vn)),
        ("all_within", (S, norms, m, v, vn, 0.5 * vn)),
        ("first_closer", (T, m, vp, 0.9)),
        ("all_closer", (T, m, vp, 0.9)),
        ("first_close_pair", (P, Pn, 300, 1.0)),
        ("all_close_pairs", (P, Pn, 300, 1.0)),
        ("klein_coeffs", (mu, widths, u)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dim", type=int, default=35)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the numpy timings are shown")
    names = sorted(backends, reverse=True)  # python first; speedup is python / cython
    rng = np.random.default_rng(2024)

    print(f"{'kernel':<22}" + "".join(f"{n + ' ms':>12}" for n in names) + f"{'speedup':>10}")
    for name, call in kernel_cases(args.dim, rng):
        times, outs = [], []
        for b in names:
            t, out = best_of(lambda: getattr(backends[b], name)(*call), args.repeat)
            times.append(t)
            outs.append(out)
        assert all(same(outs[0], o) for o in outs[1:]), f"{name}: backends disagree"
        speed = times[0] / times[-1]
        print(f"{name:<22}" + "".join(f"{t * 1e3:12.4f}" for t in times) + f"{speed:10.1f}")

    for n in (20, 30, 40):
        B = lll_reduce(gen_lattice(n, 30, 1))
        g = B.gso
        i0 = int(np.argmin(B.row_norms_sq))
        start = np.zeros(n, np.int64)
        start[i0] = 1
        call = (np.ascontiguousarray(B.rows), np.ascontiguousarray(g.mu), np.ascontiguousarray(g.bstar_sq),
                start, B.row_norms_sq[i0])
        times, outs = [], []
        for b in names:
            t, out = best_of(lambda: backends[b].enum_svp(*call), 1 if b == "python" else args.repeat)
            times.append(t)
            outs.append(out)
        assert all(same(outs[0], o) for o in outs[1:]), "enum_svp: backends disagree"
        speed = times[0] / times[-1]
        label = f"enum_svp n={n}"
        print(f"{label:<22}" + "".join(f"{t * 1e3:12.2f}" for t in times) + f"{speed:10.1f}")

    B = lll_reduce(gen_lattice(args.dim, 30, 3))
    times, outs = [], []
    for b in names:
        kernels.set_backend(b)
        ledger = QueryLedger()
        t0 = time.perf_counter()
        out = gs_solve(B, 500, make_engine("classical", 3), ledger, np.random.default_rng(3))
        times.append(time.perf_counter() - t0)
        outs.append((out.vector.norm_sq, ledger.predicate_evals))
    assert all(o == outs[0] for o in outs), "gs_solve: backends disagree"
    speed = times[0] / times[-1]
    label = f"gs_solve n={args.dim}"
    print(f"{label:<22}" + "".join(f"{t * 1e3:12.1f}" for t in times) + f"{speed:10.1f}")


if __name__ == "__main__":
    main()
