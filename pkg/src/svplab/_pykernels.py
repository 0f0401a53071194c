"""Pure numpy implementations of the hot search and enumeration kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The ``first_*`` functions return the index of the first item (in storage
order) satisfying the predicate, or -1; the ``all_*`` functions return the
indices of every satisfying item as an int64 array.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def _first(mask: np.ndarray) -> int:
    if mask.size == 0:
        return -1
    i = int(np.argmax(mask))
    return i if mask[i] else -1


# GaussSieve: s shortens v (either v - s or v + s is strictly shorter than v,
# and ||s|| <= ||v||).
def _shortener_mask(S, norms, count, v, vnorm):
    S = S[:count]
    ns = norms[:count]
    dots = S @ v
    return (ns > 0) & (ns <= vnorm) & (2 * np.abs(dots) > ns)


def first_shortener(S, norms, count, v, vnorm):
    return _first(_shortener_mask(S, norms, count, v, vnorm))


def all_shorteners(S, norms, count, v, vnorm):
    return np.flatnonzero(_shortener_mask(S, norms, count, v, vnorm)).astype(np.int64)


# GaussSieve back-reduction: v shortens s.
def _shortened_mask(S, norms, count, v, vnorm):
    S = S[:count]
    ns = norms[:count]
    dots = S @ v
    return (ns >= vnorm) & (2 * np.abs(dots) > vnorm)


def first_shortened(S, norms, count, v, vnorm):
    return _first(_shortened_mask(S, norms, count, v, vnorm))


def all_shortened(S, norms, count, v, vnorm):
    return np.flatnonzero(_shortened_mask(S, norms, count, v, vnorm)).astype(np.int64)


# Nguyen-Vidick center search: ||v - c||^2 <= bound_sq.
def _within_mask(C, norms, count, v, vnorm, bound_sq):
    d = vnorm - 2 * (C[:count] @ v) + norms[:count]
    return d <= bound_sq


def first_within(C, norms, count, v, vnorm, bound_sq):
    return _first(_within_mask(C, norms, count, v, vnorm, bound_sq))


def all_within(C, norms, count, v, vnorm, bound_sq):
    return np.flatnonzero(_within_mask(C, norms, count, v, vnorm, bound_sq)).astype(np.int64)


# Pujol-Stehle reduction on real points: ||v' - t||^2 < factor_sq * ||v'||^2.
def _closer_mask(T, count, vp, factor_sq):
    diff = T[:count] - vp
    d = np.einsum("ij,ij->i", diff, diff)
    return d < factor_sq * float(vp @ vp)


def first_closer(T, count, vp, factor_sq):
    return _first(_closer_mask(T, count, vp, factor_sq))


def all_closer(T, count, vp, factor_sq):
    return np.flatnonzero(_closer_mask(T, count, vp, factor_sq)).astype(np.int64)


_PAIR_BLOCK = 512


def _pair_blocks(S, norms, count, bound_sq):
    S = S[:count]
    ns = norms[:count]
    for lo in range(0, count, _PAIR_BLOCK):
        hi = min(lo + _PAIR_BLOCK, count)
        d = ns[lo:hi, None] + ns[None, :] - 2 * (S[lo:hi] @ S.T)
        yield lo, (d > 0) & (d < bound_sq)


def first_close_pair(S, norms, count, bound_sq):
    """Row-major first (i, j) with 0 < ||s_i - s_j||^2 < bound_sq, or (-1, -1)."""
    for lo, mask in _pair_blocks(S, norms, count, bound_sq):
        flat = _first(mask.ravel())
        if flat >= 0:
            return lo + flat // count, flat % count
    return -1, -1


def all_close_pairs(S, norms, count, bound_sq):
    rows, cols = [], []
    for lo, mask in _pair_blocks(S, norms, count, bound_sq):
        r, c = np.nonzero(mask)
        rows.append(r + lo)
        cols.append(c)
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(rows).astype(np.int64), np.concatenate(cols).astype(np.int64)


def klein_coeffs(mu, widths, uniforms):
    """Coefficients of one Klein walk from the origin, driven by ``uniforms``.

    Coordinate ``i`` (from ``n - 1`` down) is a discrete Gaussian of width
    ``widths[i]`` around ``-sum_{j > i} z_j mu[j, i]``, sampled by rejection
    on the window ``center +/- 6 width``: each trial consumes two uniforms,
    one for the candidate and one for the acceptance test. Returns
    ``(z, used)``, with ``used = -1`` if the uniforms ran out.
    """
    n = len(widths)
    u = uniforms.tolist()
    m = len(u)
    mu_l = mu.tolist()
    z = [0] * n
    pos = 0
    for i in range(n - 1, -1, -1):
        c = 0.0
        for j in range(i + 1, n):
            c -= z[j] * mu_l[j][i]
        w = float(widths[i])
        lo = math.floor(c - 6.0 * w)
        hi = math.ceil(c + 6.0 * w)
        if hi - lo < 1:
            hi = lo + 1
        span = hi - lo + 1
        inv = 1.0 / (2.0 * w * w)
        while True:
            if pos + 2 > m:
                return np.zeros(n, dtype=np.int64), -1
            cand = lo + int(math.floor(u[pos] * span))
            if cand > hi:
                cand = hi
            accept = u[pos + 1] < math.exp(-(cand - c) * (cand - c) * inv)
            pos += 2
            if accept:
                z[i] = cand
                break
    return np.array(z, dtype=np.int64), pos


def enum_svp(rows, mu, bstar_sq, best_coeffs, best_norm):
    """Exact depth-first Schnorr-Euchner enumeration without pruning.

    ``best_coeffs``/``best_norm`` seed the incumbent (a non-zero lattice
    vector); the radius shrinks whenever a strictly shorter vector is met.
    Candidates are accepted on their exact integer norm.
    Returns ``(coeffs, norm_sq, nodes)``.
    """
    n = len(bstar_sq)
    rows_l = [[int(x) for x in r] for r in rows]
    mu_l = [[float(x) for x in r] for r in mu]
    bs = [float(x) for x in bstar_sq]
    best = [int(c) for c in best_coeffs]
    best_norm = int(best_norm)
    radius = best_norm * (1.0 + 1e-9)

    x = [0] * n
    x0 = [0] * n
    center = [0.0] * n
    partial = [0.0] * (n + 1)
    moves = [0] * n
    side = [1] * n
    top = [True] * n
    nodes = 0

    def exact_norm(coeffs):
        total = 0
        for j in range(n):
            s = 0
            for i in range(n):
                if coeffs[i]:
                    s += coeffs[i] * rows_l[i][j]
            total += s * s
        return total

    def next_sibling(k):
        if top[k]:
            # all higher coefficients are zero: +/- symmetry, walk upward only
            x[k] += 1
        else:
            moves[k] += 1
            m = moves[k]
            half = (m + 1) // 2
            x[k] = x0[k] + (side[k] * half if m % 2 else -side[k] * half)

    k = n - 1
    while True:
        diff = x[k] - center[k]
        p = partial[k + 1] + diff * diff * bs[k]
        nodes += 1
        if p <= radius:
            if k == 0:
                if not (top[0] and x[0] == 0):
                    norm = exact_norm(x)
                    if norm < best_norm:
                        best_norm = norm
                        best = list(x)
                        radius = norm * (1.0 + 1e-9)
                next_sibling(0)
            else:
                partial[k] = p
                k -= 1
                top[k] = top[k + 1] and x[k + 1] == 0
                c = 0.0
                for j in range(k + 1, n):
                    if x[j]:
                        c -= x[j] * mu_l[j][k]
                center[k] = c
                r = math.floor(c + 0.5)
                x0[k] = x[k] = r
                moves[k] = 0
                side[k] = 1 if c >= r else -1
        else:
            k += 1
            if k >= n:
                break
            next_sibling(k)
    return np.array(best, dtype=np.int64), best_norm, nodes
