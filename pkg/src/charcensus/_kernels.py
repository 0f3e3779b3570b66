"""Numba-compiled census and sampling kernels.

All kernels work on canonical element indices and a shared table bundle:
log/antilog tables drive extension-field multiplication, an inverse table
serves the gcd descent, and addition uses either direct modular arithmetic
(prime fields), a q x q table (small extension fields) or digit-wise base-p
arithmetic (large extension fields).  Kernels release the GIL, so shards
run concurrently on plain threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NO_SAMPLE = np.int64(2**31)  # sentinel for rejected rows in the batch kernel


@njit(inline="always")
def _fadd(a, b, p, k, add_t):
    if k == 1:
        r = a + b
        return r - p if r >= p else r
    if add_t.shape[0] > 1:
        return add_t[a, b]
    out = np.int64(0)
    pi = np.int64(1)
    x, y = a, b
    for _ in range(k):
        s = x % p + y % p
        if s >= p:
            s -= p
        out += s * pi
        pi *= p
        x //= p
        y //= p
    return out


@njit(inline="always")
def _fsub(a, b, p, k, neg_t, add_t):
    if k == 1:
        r = a - b
        return r + p if r < 0 else r
    return _fadd(a, neg_t[b], p, k, add_t)


@njit(inline="always")
def _fmul(a, b, p, k, log_t, exp_t):
    if k == 1:
        return a * b % p
    if a == 0 or b == 0:
        return np.int64(0)
    return exp_t[log_t[a] + log_t[b]]


@njit(inline="always")
def _horner(coeffs, d, x, p, k, log_t, exp_t, add_t):
    """Evaluate the full coefficient vector (length d+1) at index x."""
    acc = coeffs[d]
    for i in range(d - 1, -1, -1):
        acc = _fadd(_fmul(acc, x, p, k, log_t, exp_t), coeffs[i], p, k, add_t)
    return acc


@njit(inline="always")
def _gcd_degree(u, du, w, dw, p, k, log_t, exp_t, inv_t, neg_t, add_t):
    """Degree of gcd(u, w); u and w are scratch buffers with exact degrees."""
    while True:
        ilw = inv_t[w[dw]]
        for i in range(du, dw - 1, -1):
            c = u[i]
            if c:
                f = _fmul(c, ilw, p, k, log_t, exp_t)
                for j in range(dw + 1):
                    t = _fmul(f, w[j], p, k, log_t, exp_t)
                    u[i - dw + j] = _fsub(u[i - dw + j], t, p, k, neg_t, add_t)
        ndu = -1
        for i in range(dw - 1, -1, -1):
            if u[i]:
                ndu = i
                break
        for i in range(dw + 1):
            t = u[i]
            u[i] = w[i]
            w[i] = t
        du, dw = dw, ndu
        if dw < 0:
            return du


@njit(inline="always")
def _derivative_into(coeffs, d, out, p, k, log_t, exp_t):
    """Fill out[0:d] with the derivative coefficients; return its degree."""
    deg = -1
    for i in range(1, d + 1):
        c = _fmul(np.int64(i % p), coeffs[i], p, k, log_t, exp_t)
        out[i - 1] = c
        if c:
            deg = i - 1
    return deg


@njit(cache=True, nogil=True)
def census_kernel(
    p, k, q, d, start, stop, squarefree_only,
    chi, log_t, exp_t, inv_t, neg_t, add_t,
    mode, points, weights, hist,
):
    """Incremental odometer census over monic degree-d polynomials.

    Visits odometer indices [start, stop); the value vector over all of F_q
    is kept in step with the cursor: advancing the constant coefficient
    adds the difference of consecutive constants to every entry (the +1
    update in a prime field), and any higher-coefficient carry triggers a
    fresh Horner recomputation.

    mode 0 bins S(F) + q, mode 1 bins the sign-pattern code over `points`,
    mode 2 bins the raw value code over `points`.
    """
    coeffs = np.zeros(d + 1, dtype=np.int64)
    coeffs[d] = 1
    n = start
    for i in range(d):
        coeffs[i] = n % q
        n //= q
    vals = np.empty(q, dtype=np.int64)
    for x in range(q):
        vals[x] = _horner(coeffs, d, np.int64(x), p, k, log_t, exp_t, add_t)
    u = np.empty(d + 2, dtype=np.int64)
    w = np.empty(d + 2, dtype=np.int64)
    deriv = np.empty(d + 1, dtype=np.int64)
    dw0 = _derivative_into(coeffs, d, deriv, p, k, log_t, exp_t) if d >= 1 else -1

    for idx in range(start, stop):
        if squarefree_only and d >= 1:
            if dw0 < 0:
                keep = False
            else:
                for i in range(d + 1):
                    u[i] = coeffs[i]
                for i in range(dw0 + 1):
                    w[i] = deriv[i]
                keep = _gcd_degree(u, d, w, dw0, p, k, log_t, exp_t, inv_t, neg_t, add_t) == 0
        else:
            keep = True
        if keep:
            if mode == 0:
                s = np.int64(0)
                for x in range(q):
                    s += chi[vals[x]]
                hist[s + q] += 1
            elif mode == 1:
                code = np.int64(0)
                for t in range(points.shape[0]):
                    code += (chi[vals[points[t]]] + 1) * weights[t]
                hist[code] += 1
            else:
                code = np.int64(0)
                for t in range(points.shape[0]):
                    code += vals[points[t]] * weights[t]
                hist[code] += 1
        if idx + 1 == stop:
            break
        c_old = coeffs[0]
        if c_old + 1 < q:
            coeffs[0] = c_old + 1
            # constant-coefficient step: shift every value by the element
            # difference of consecutive constants (literally +1 when k = 1)
            delta = _fsub(c_old + 1, c_old, p, k, neg_t, add_t)
            for x in range(q):
                vals[x] = _fadd(vals[x], delta, p, k, add_t)
        else:
            coeffs[0] = 0
            i = 1
            while i < d and coeffs[i] == q - 1:
                coeffs[i] = 0
                i += 1
            if i < d:
                coeffs[i] += 1
            for x in range(q):
                vals[x] = _horner(coeffs, d, np.int64(x), p, k, log_t, exp_t, add_t)
            dw0 = _derivative_into(coeffs, d, deriv, p, k, log_t, exp_t)


@njit(cache=True, nogil=True)
def batch_char_sums(
    coeffs2d, p, k, q, squarefree_only,
    chi, log_t, exp_t, inv_t, neg_t, add_t, out,
):
    """Per-row S(F) for full coefficient rows; NO_SAMPLE marks non-square-free rows."""
    n_rows, width = coeffs2d.shape
    d = width - 1
    u = np.empty(width + 1, dtype=np.int64)
    w = np.empty(width + 1, dtype=np.int64)
    for r in range(n_rows):
        if squarefree_only and d >= 1:
            dw = _derivative_into(coeffs2d[r], d, w, p, k, log_t, exp_t)
            if dw < 0:
                out[r] = NO_SAMPLE
                continue
            for i in range(width):
                u[i] = coeffs2d[r, i]
            if _gcd_degree(u, d, w, dw, p, k, log_t, exp_t, inv_t, neg_t, add_t) != 0:
                out[r] = NO_SAMPLE
                continue
        s = np.int64(0)
        for x in range(q):
            s += chi[_horner(coeffs2d[r], d, np.int64(x), p, k, log_t, exp_t, add_t)]
        out[r] = s


@njit(cache=True, nogil=True)
def batch_squarefree(coeffs2d, p, k, log_t, exp_t, inv_t, neg_t, add_t, out):
    """Square-freeness of full coefficient rows (monic, degree = width - 1)."""
    n_rows, width = coeffs2d.shape
    d = width - 1
    u = np.empty(width + 1, dtype=np.int64)
    w = np.empty(width + 1, dtype=np.int64)
    for r in range(n_rows):
        if d == 0:
            out[r] = True
            continue
        dw = _derivative_into(coeffs2d[r], d, w, p, k, log_t, exp_t)
        if dw < 0:
            out[r] = False
            continue
        for i in range(width):
            u[i] = coeffs2d[r, i]
        out[r] = _gcd_degree(u, d, w, dw, p, k, log_t, exp_t, inv_t, neg_t, add_t) == 0
