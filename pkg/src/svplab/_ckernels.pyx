# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_pykernels``; same signatures and results."""

import numpy as np
from libc.stdint cimport int64_t
from libc.math cimport ceil, exp, floor

BACKEND = "cython"


cdef inline int64_t _dot(const int64_t[:, ::1] S, Py_ssize_t i, const int64_t[::1] v) noexcept nogil:
    cdef int64_t acc = 0
    cdef Py_ssize_t k
    for k in range(v.shape[0]):
        acc += S[i, k] * v[k]
    return acc


cdef inline bint _shortens(int64_t ns, int64_t dot, int64_t vnorm) noexcept nogil:
    if dot < 0:
        dot = -dot
    return ns > 0 and ns <= vnorm and 2 * dot > ns


cdef inline bint _shortened(int64_t ns, int64_t dot, int64_t vnorm) noexcept nogil:
    if dot < 0:
        dot = -dot
    return ns >= vnorm and 2 * dot > vnorm


cdef Py_ssize_t _first_shortener(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                                 const int64_t[::1] v, int64_t vnorm) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(count):
        if norms[i] > 0 and norms[i] <= vnorm and _shortens(norms[i], _dot(S, i, v), vnorm):
            return i
    return -1


def first_shortener(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                    const int64_t[::1] v, int64_t vnorm):
    cdef Py_ssize_t i
    with nogil:
        i = _first_shortener(S, norms, count, v, vnorm)
    return i


def all_shorteners(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                   const int64_t[::1] v, int64_t vnorm):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, m = 0
    with nogil:
        for i in range(count):
            if norms[i] > 0 and norms[i] <= vnorm and _shortens(norms[i], _dot(S, i, v), vnorm):
                o[m] = i
                m += 1
    return out[:m]


cdef Py_ssize_t _first_shortened(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                                 const int64_t[::1] v, int64_t vnorm) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(count):
        if norms[i] >= vnorm and _shortened(norms[i], _dot(S, i, v), vnorm):
            return i
    return -1


def first_shortened(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                    const int64_t[::1] v, int64_t vnorm):
    cdef Py_ssize_t i
    with nogil:
        i = _first_shortened(S, norms, count, v, vnorm)
    return i


def all_shortened(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count,
                  const int64_t[::1] v, int64_t vnorm):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, m = 0
    with nogil:
        for i in range(count):
            if norms[i] >= vnorm and _shortened(norms[i], _dot(S, i, v), vnorm):
                o[m] = i
                m += 1
    return out[:m]


cdef Py_ssize_t _first_within(const int64_t[:, ::1] C, const int64_t[::1] norms, Py_ssize_t count,
                              const int64_t[::1] v, int64_t vnorm, double bound_sq) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(count):
        if <double>(vnorm - 2 * _dot(C, i, v) + norms[i]) <= bound_sq:
            return i
    return -1


def first_within(const int64_t[:, ::1] C, const int64_t[::1] norms, Py_ssize_t count,
                 const int64_t[::1] v, int64_t vnorm, double bound_sq):
    cdef Py_ssize_t i
    with nogil:
        i = _first_within(C, norms, count, v, vnorm, bound_sq)
    return i


def all_within(const int64_t[:, ::1] C, const int64_t[::1] norms, Py_ssize_t count,
               const int64_t[::1] v, int64_t vnorm, double bound_sq):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, m = 0
    with nogil:
        for i in range(count):
            if <double>(vnorm - 2 * _dot(C, i, v) + norms[i]) <= bound_sq:
                o[m] = i
                m += 1
    return out[:m]


cdef inline double _dist_sq(const double[:, ::1] T, Py_ssize_t i, const double[::1] vp) noexcept nogil:
    cdef double acc = 0.0, d
    cdef Py_ssize_t k
    for k in range(vp.shape[0]):
        d = T[i, k] - vp[k]
        acc += d * d
    return acc


cdef inline double _norm_sq(const double[::1] vp) noexcept nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t k
    for k in range(vp.shape[0]):
        acc += vp[k] * vp[k]
    return acc


cdef Py_ssize_t _first_closer(const double[:, ::1] T, Py_ssize_t count, const double[::1] vp,
                              double factor_sq) noexcept nogil:
    cdef Py_ssize_t i
    cdef double bound = factor_sq * _norm_sq(vp)
    for i in range(count):
        if _dist_sq(T, i, vp) < bound:
            return i
    return -1


def first_closer(const double[:, ::1] T, Py_ssize_t count, const double[::1] vp, double factor_sq):
    cdef Py_ssize_t i
    with nogil:
        i = _first_closer(T, count, vp, factor_sq)
    return i


def all_closer(const double[:, ::1] T, Py_ssize_t count, const double[::1] vp, double factor_sq):
    out = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, m = 0
    cdef double bound
    with nogil:
        bound = factor_sq * _norm_sq(vp)
        for i in range(count):
            if _dist_sq(T, i, vp) < bound:
                o[m] = i
                m += 1
    return out[:m]


cdef inline int64_t _pair_dist(const int64_t[:, ::1] S, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef int64_t acc = 0, d
    cdef Py_ssize_t k
    for k in range(S.shape[1]):
        d = S[i, k] - S[j, k]
        acc += d * d
    return acc


cdef Py_ssize_t _first_close_pair(const int64_t[:, ::1] S, Py_ssize_t count, double bound_sq) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int64_t d
    for i in range(count):
        for j in range(count):
            d = _pair_dist(S, i, j)
            if d > 0 and <double>d < bound_sq:
                return i * count + j
    return -1


def first_close_pair(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count, double bound_sq):
    """Row-major first (i, j) with 0 < ||s_i - s_j||^2 < bound_sq, or (-1, -1)."""
    cdef Py_ssize_t flat
    with nogil:
        flat = _first_close_pair(S, count, bound_sq)
    if flat < 0:
        return -1, -1
    return flat // count, flat % count


def all_close_pairs(const int64_t[:, ::1] S, const int64_t[::1] norms, Py_ssize_t count, double bound_sq):
    rows = []
    cols = []
    cdef Py_ssize_t i, j
    cdef int64_t d
    for i in range(count):
        for j in range(count):
            d = _pair_dist(S, i, j)
            if d > 0 and <double>d < bound_sq:
                rows.append(i)
                cols.append(j)
    return np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)


cdef Py_ssize_t _klein(const double[:, ::1] mu, const double[::1] widths, const double[::1] u,
                       int64_t[::1] z) noexcept nogil:
    cdef Py_ssize_t n = widths.shape[0], m = u.shape[0], pos = 0, i, j
    cdef double c, w, inv
    cdef int64_t lo, hi, span, cand
    cdef bint accept
    for i in range(n - 1, -1, -1):
        c = 0.0
        for j in range(i + 1, n):
            c -= z[j] * mu[j, i]
        w = widths[i]
        lo = <int64_t>floor(c - 6.0 * w)
        hi = <int64_t>ceil(c + 6.0 * w)
        if hi - lo < 1:
            hi = lo + 1
        span = hi - lo + 1
        inv = 1.0 / (2.0 * w * w)
        while True:
            if pos + 2 > m:
                return -1
            cand = lo + <int64_t>floor(u[pos] * span)
            if cand > hi:
                cand = hi
            accept = u[pos + 1] < exp(-(cand - c) * (cand - c) * inv)
            pos += 2
            if accept:
                z[i] = cand
                break
    return pos


def klein_coeffs(const double[:, ::1] mu, const double[::1] widths, const double[::1] uniforms):
    """Same contract as the Python twin: ``(z, used)``, ``used = -1`` when uniforms run out."""
    n = widths.shape[0]
    out = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] z = out
    cdef Py_ssize_t used
    with nogil:
        used = _klein(mu, widths, uniforms, z)
    if used < 0:
        return np.zeros(n, dtype=np.int64), -1
    return out, int(used)


def enum_svp(const int64_t[:, ::1] rows, const double[:, ::1] mu, const double[::1] bstar_sq,
             best_coeffs, best_norm_in):
    """Exact depth-first Schnorr-Euchner enumeration without pruning.

    Same contract as the Python twin: returns ``(coeffs, norm_sq, nodes)``.
    """
    cdef Py_ssize_t n = bstar_sq.shape[0]
    best = np.array(best_coeffs, dtype=np.int64)
    cdef int64_t[::1] bst = best
    cdef int64_t best_norm = best_norm_in
    cdef double radius = best_norm * (1.0 + 1e-9)

    xa = np.zeros(n, dtype=np.int64)
    x0a = np.zeros(n, dtype=np.int64)
    movesa = np.zeros(n, dtype=np.int64)
    sidea = np.ones(n, dtype=np.int64)
    topa = np.ones(n, dtype=np.int64)
    centera = np.zeros(n, dtype=np.float64)
    partiala = np.zeros(n + 1, dtype=np.float64)
    carta = np.zeros(rows.shape[1], dtype=np.int64)
    cdef int64_t[::1] x = xa, x0 = x0a, moves = movesa, side = sidea, top = topa, cart = carta
    cdef double[::1] center = centera, partial = partiala
    cdef Py_ssize_t k = n - 1, j, i
    cdef double diff, p, c
    cdef int64_t r, m, half, norm, s
    cdef long long nodes = 0
    cdef bint descend

    with nogil:
        while True:
            diff = x[k] - center[k]
            p = partial[k + 1] + diff * diff * bstar_sq[k]
            nodes += 1
            descend = False
            if p <= radius:
                if k == 0:
                    if not (top[0] and x[0] == 0):
                        norm = 0
                        for j in range(rows.shape[1]):
                            s = 0
                            for i in range(n):
                                s += x[i] * rows[i, j]
                            norm += s * s
                        if norm < best_norm:
                            best_norm = norm
                            for i in range(n):
                                bst[i] = x[i]
                            radius = norm * (1.0 + 1e-9)
                else:
                    descend = True
            else:
                k += 1
                if k >= n:
                    break
            if descend:
                partial[k] = p
                k -= 1
                top[k] = top[k + 1] and x[k + 1] == 0
                c = 0.0
                for j in range(k + 1, n):
                    if x[j] != 0:
                        c -= x[j] * mu[j, k]
                center[k] = c
                r = <int64_t>floor(c + 0.5)
                x[k] = r
                x0[k] = r
                moves[k] = 0
                side[k] = 1 if c >= r else -1
            else:
                if top[k]:
                    x[k] += 1
                else:
                    moves[k] += 1
                    m = moves[k]
                    half = (m + 1) // 2
                    if m % 2:
                        x[k] = x0[k] + side[k] * half
                    else:
                        x[k] = x0[k] - side[k] * half
    return best, int(best_norm), int(nodes)
