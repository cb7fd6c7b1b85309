"""Reduction cycles of primitive indefinite binary quadratic forms.

A form (a, b, c) of discriminant D = b^2 - 4ac > 0, D not a square, is
reduced when 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b (the
companion bound on 2|c| then holds automatically). The reduction step

    rho(a, b, c) = (c, b', (b'^2 - D) / (4 c))

with b' the unique integer congruent to -b mod 2|c| inside
(sqrt(D) - 2|c|, sqrt(D)) permutes the reduced forms of discriminant D, and
its cycles are exactly the proper equivalence classes. Counting cycles of
primitive reduced forms therefore gives the form class number h+(D).

All comparisons against sqrt(D) are done on squared integers, so the walk
is exact for any D that fits in 64 bits.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _isqrt(n):
    r = int(np.sqrt(np.float64(n)))
    while (r + 1) * (r + 1) <= n:
        r += 1
    while r * r > n:
        r -= 1
    return r


@njit(cache=True)
def _gcd3(a, b, c):
    x = a if a >= 0 else -a
    y = b if b >= 0 else -b
    while y:
        x, y = y, x % y
    z = c if c >= 0 else -c
    while z:
        x, z = z, x % z
    return x


@njit(cache=True)
def _in_window(two_a, b, d):
    # sqrt(D) - b < 2|a| < sqrt(D) + b, checked on squares
    lo = two_a - b
    if lo > 0 and lo * lo >= d:
        return False
    hi = two_a + b
    return hi * hi > d


@njit(cache=True)
def _reduced_primitive_forms(d):
    """All primitive reduced forms of discriminant d, as (a, b, c) rows."""
    r = _isqrt(d)
    b0 = 2 - (d & 1)
    # counting pass
    count = 0
    for b in range(b0, r + 1, 2):
        m = (d - b * b) // 4
        s = _isqrt(m)
        for e in range(1, s + 1):
            if m % e == 0:
                f = m // e
                if _in_window(2 * e, b, d) and _gcd3(e, b, f) == 1:
                    count += 2
                if f != e and _in_window(2 * f, b, d) and _gcd3(f, b, e) == 1:
                    count += 2
    out = np.empty((count, 3), dtype=np.int64)
    k = 0
    for b in range(b0, r + 1, 2):
        m = (d - b * b) // 4
        s = _isqrt(m)
        for e in range(1, s + 1):
            if m % e == 0:
                f = m // e
                if _in_window(2 * e, b, d) and _gcd3(e, b, f) == 1:
                    out[k, 0] = e
                    out[k, 1] = b
                    out[k, 2] = -f
                    out[k + 1, 0] = -e
                    out[k + 1, 1] = b
                    out[k + 1, 2] = f
                    k += 2
                if f != e and _in_window(2 * f, b, d) and _gcd3(f, b, e) == 1:
                    out[k, 0] = f
                    out[k, 1] = b
                    out[k, 2] = -e
                    out[k + 1, 0] = -f
                    out[k + 1, 1] = b
                    out[k + 1, 2] = e
                    k += 2
    return out[:k]


@njit(cache=True)
def _count_cycles(d, forms):
    """Number of rho-cycles on the given reduced forms of discriminant d."""
    n = forms.shape[0]
    if n == 0:
        return 0
    r = _isqrt(d)
    # lexicographic (b, a) key; c is determined by (a, b, d)
    span = 2 * r + 5
    keys = np.empty(n, dtype=np.int64)
    for i in range(n):
        keys[i] = forms[i, 1] * span + (forms[i, 0] + r + 2)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    visited = np.zeros(n, dtype=np.uint8)
    cycles = 0
    for start in range(n):
        if visited[start]:
            continue
        cycles += 1
        a = forms[start, 0]
        b = forms[start, 1]
        c = forms[start, 2]
        while True:
            key = b * span + (a + r + 2)
            pos = np.searchsorted(sorted_keys, key)
            idx = order[pos]
            if visited[idx]:
                break
            visited[idx] = 1
            cc = c if c >= 0 else -c
            b_next = r - ((r + b) % (2 * cc))
            a, b, c = c, b_next, (b_next * b_next - d) // (4 * c)
    return cycles


def class_number_raw(d: int) -> int:
    """h+(d) for a validated discriminant (positive, 0 or 1 mod 4, non-square)."""
    forms = _reduced_primitive_forms(d)
    return int(_count_cycles(d, forms))
