"""Pure-Python/numpy implementations of the compiled kernels.

Every function here has the same signature and the same return convention as
its counterpart in ``_kernels.pyx``; the selector in :mod:`wreathcount.kernels`
picks one at import time.
"""

import math

import numpy as np

U = 2.0**-53

_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)


def kronecker(d, n):
    a, b = int(d), int(n)
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        v += 1
        b //= 2
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while a % 2 == 0:
            v += 1
            a //= 2
        if v % 2:
            k *= _TAB2[b & 7]
        if a & b & 2:
            k = -k
        r = abs(a)
        a, b = b % r, r


def _primes_below(n):
    if n < 3:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


def kronecker_table(d):
    # completely multiplicative in a: assemble from the values at prime powers
    q = abs(int(d))
    out = np.ones(q, dtype=np.int8)
    if q == 0:
        return out
    out[0] = 0
    for p in _primes_below(q):
        p = int(p)
        c = kronecker(d, p)
        if c == 1:
            continue
        pk = p
        while pk < q:
            if c == 0:
                out[pk::pk] = 0
            else:
                out[pk::pk] *= -1
            pk *= p
    return out


def squarefree_flags(n):
    flags = np.ones(n + 1, dtype=np.uint8)
    flags[0] = 0
    for p in range(2, math.isqrt(n) + 1):
        flags[p * p :: p * p] = 0
    return flags


def fundamental_discriminants(x):
    x = int(x)
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    sf = squarefree_flags(x).astype(bool)
    n = np.arange(x + 1, dtype=np.int64)
    r = n & 3
    m = n >> 2
    msf = sf[m]
    neg = ((r == 3) & sf) | ((r == 0) & (((m & 3) == 1) | ((m & 3) == 2)) & msf)
    pos = ((r == 1) & sf) | ((r == 0) & (((m & 3) == 2) | ((m & 3) == 3)) & msf)
    neg[:2] = False
    pos[:2] = False
    # interleave as (|d|, d) ascending: -n before n
    keys = np.concatenate([np.flatnonzero(neg) * 2, np.flatnonzero(pos) * 2 + 1])
    keys.sort()
    vals = keys >> 1
    sign = np.where(keys & 1, 1, -1)
    return (vals * sign).astype(np.int64)


def odd_char_moment(d):
    tab = kronecker_table(d).astype(np.int64)
    return int(np.dot(tab, np.arange(len(tab), dtype=np.int64)))


def even_logsin_sum(d):
    """Return (sum_{0<a<d} chi(a) log sin(pi a/d), rounding-error bound)."""
    d = int(d)
    half = (d - 1) // 2
    tab = kronecker_table(d)[1 : half + 1].astype(np.float64)
    a = np.arange(1, half + 1, dtype=np.float64)
    mask = tab != 0
    t = tab[mask] * np.log(np.sin(np.pi * a[mask] / d))
    s = math.fsum(t.tolist())
    n = int(mask.sum())
    abs_sum = float(np.abs(t).sum()) * (1 + n * U)
    err = 8.0 * U * (n + abs_sum) + 4.0 * U * abs(s)
    return 2.0 * s, 2.0 * err * (1.0 + 4.0 * U)


def l2_partial(d, N):
    """Return (sum_{n<=N} chi_d(n)/n^2, rounding-error bound)."""
    d, N = int(d), int(N)
    q = abs(d)
    tab = kronecker_table(d).astype(np.float64)
    partial = []
    abs_sum = 0.0
    chunk = 1 << 20
    for start in range(1, N + 1, chunk):
        n = np.arange(start, min(N, start + chunk - 1) + 1, dtype=np.int64)
        t = tab[n % q] / (n.astype(np.float64) ** 2)
        partial.append(math.fsum(t.tolist()))
        abs_sum += float(np.abs(t).sum())
    s = math.fsum(partial)
    abs_sum *= 1 + N * U
    # one rounding per term, one per chunk sum, one for the total
    err = 3.0 * U * abs_sum + 4.0 * U * abs(s)
    return s, err * (1.0 + 4.0 * U)


def count_reduced_forms(d):
    """Number of reduced positive definite forms of discriminant d < 0."""
    d = int(d)
    count = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            count += 1
        a += 1
    return count
