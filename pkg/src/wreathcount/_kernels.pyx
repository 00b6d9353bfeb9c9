# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Semantics are mirrored exactly by ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, log, fabs, M_PI, sqrt

cnp.import_array()

cdef double U = 1.1102230246251565e-16  # 2**-53

cdef int _tab2[8]
_tab2[:] = [0, 1, 0, -1, 0, -1, 0, 1]


cdef int _kron(long long a, long long b) nogil:
    cdef int k, v
    cdef long long r
    if b == 0:
        return 1 if (a == 1 or a == -1) else 0
    if (a & 1) == 0 and (b & 1) == 0:
        return 0
    v = 0
    while (b & 1) == 0:
        v += 1
        b >>= 1
    k = 1 if (v & 1) == 0 else _tab2[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while (a & 1) == 0:
            v += 1
            a >>= 1
        if v & 1:
            k *= _tab2[b & 7]
        if a & b & 2:
            k = -k
        r = a if a >= 0 else -a
        a = b % r
        b = r


def kronecker(long long d, long long n):
    return _kron(d, n)


def kronecker_table(long long d):
    cdef long long q = d if d >= 0 else -d
    cdef cnp.ndarray[cnp.int8_t, ndim=1] out = np.zeros(q, dtype=np.int8)
    cdef long long a
    for a in range(1, q):
        out[a] = _kron(d, a)
    return out


def squarefree_flags(long long n):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flags = np.ones(n + 1, dtype=np.uint8)
    cdef long long p, p2, j
    flags[0] = 0
    p = 2
    while p * p <= n:
        p2 = p * p
        j = p2
        while j <= n:
            flags[j] = 0
            j += p2
        p += 1
    return flags


def fundamental_discriminants(long long x):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] sf = squarefree_flags(x if x > 0 else 0)
    cdef list out = []
    cdef long long n, r, m
    for n in range(2, x + 1):
        # negative d = -n
        r = n & 3
        if r == 3 and sf[n]:
            out.append(-n)
        elif r == 0:
            m = n >> 2
            if (m & 3) in (1, 2) and sf[m]:
                out.append(-n)
        # positive d = n
        if r == 1 and sf[n]:
            out.append(n)
        elif r == 0:
            m = n >> 2
            if (m & 3) in (2, 3) and sf[m]:
                out.append(n)
    return np.array(out, dtype=np.int64)


def odd_char_moment(long long d):
    cdef long long q = d if d >= 0 else -d
    cdef long long a, s = 0
    for a in range(1, q):
        s += _kron(d, a) * a
    return s


def even_logsin_sum(long long d):
    """Return (sum_{0<a<d} chi(a) log sin(pi a/d), rounding-error bound)."""
    cdef long long a, half = (d - 1) // 2
    cdef int c
    cdef double t, s = 0.0, comp = 0.0, tmp, abs_sum = 0.0
    cdef long long n = 0
    for a in range(1, half + 1):
        c = _kron(d, a)
        if c == 0:
            continue
        t = log(sin(M_PI * a / d))
        if c < 0:
            t = -t
        abs_sum += fabs(t)
        n += 1
        tmp = s + t
        if fabs(s) >= fabs(t):
            comp += (s - tmp) + t
        else:
            comp += (t - tmp) + s
        s = tmp
    s = s + comp
    cdef double err = 8.0 * U * (n + abs_sum) + 4.0 * U * fabs(s) + 4.0 * n * U * U * abs_sum
    return 2.0 * s, 2.0 * err * (1.0 + 4.0 * U)


def l2_partial(long long d, long long N):
    """Return (sum_{n<=N} chi_d(n)/n^2, rounding-error bound)."""
    cdef long long q = d if d >= 0 else -d
    cdef cnp.ndarray[cnp.int8_t, ndim=1] tab = kronecker_table(d)
    cdef long long n
    cdef int c
    cdef double t, s = 0.0, comp = 0.0, tmp, abs_sum = 0.0, nn
    for n in range(1, N + 1):
        c = tab[n % q]
        if c == 0:
            continue
        nn = <double>n
        t = 1.0 / (nn * nn)
        if c < 0:
            t = -t
        abs_sum += fabs(t)
        tmp = s + t
        if fabs(s) >= fabs(t):
            comp += (s - tmp) + t
        else:
            comp += (t - tmp) + s
        s = tmp
    s = s + comp
    cdef double err = 2.0 * U * abs_sum + 4.0 * U * fabs(s) + 4.0 * N * U * U * abs_sum
    return s, err * (1.0 + 4.0 * U)


def count_reduced_forms(long long d):
    """Number of reduced positive definite forms of discriminant d < 0."""
    cdef long long a, b, num, c, amax, count = 0
    amax = <long long>sqrt(<double>(-d) / 3.0) + 1
    for a in range(1, amax + 1):
        if 3 * a * a > -d:
            break
        for b in range(-a + 1, a + 1):
            if ((b - d) & 1) != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            count += 1
    return count
