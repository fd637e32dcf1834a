# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled forward elimination over Z/p^M for moduli below 2**62."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline long long ck_mulmod(long long a, long long b, long long m) {
        __int128 r = ((__int128)a * (__int128)b) % m;
        if (r < 0) r += m;
        return (long long)r;
    }
    """
    long long ck_mulmod(long long a, long long b, long long m) nogil


cdef long long _invmod(long long a, long long m) nogil:
    cdef long long t = 0, newt = 1, r = m, newr = a % m, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += m
    return t


def eliminate_mod(list rows, int ncols, long long p, int M):
    """Same contract as the pure-Python ``eliminate_mod``; requires p**M < 2**62."""
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return [], []
    cdef Py_ssize_t w = len(rows[0])
    cdef long long mod = 1
    cdef int e
    for e in range(M):
        mod *= p
    cdef long long* a = <long long*> malloc(n * w * sizeof(long long))
    cdef char* used = <char*> malloc(ncols if ncols > 0 else 1)
    if a == NULL or used == NULL:
        free(a)
        free(used)
        raise MemoryError()
    cdef Py_ssize_t i, j, c, k, i2, best_i, best_j
    cdef long long x, ppow, uinv, f, t
    cdef int v, best_v
    pivot_cols = []
    pivot_vals = []
    try:
        for i in range(n):
            row = rows[i]
            for j in range(w):
                a[i * w + j] = <long long> row[j]
        for j in range(ncols):
            used[j] = 0
        for k in range(min(n, ncols)):
            best_v = M
            best_i = -1
            best_j = -1
            with nogil:
                for i in range(k, n):
                    for j in range(ncols):
                        x = a[i * w + j]
                        if x == 0 or used[j]:
                            continue
                        v = 0
                        while x % p == 0:
                            x = x // p
                            v += 1
                        if v < best_v:
                            best_v = v
                            best_i = i
                            best_j = j
                            if v == 0:
                                break
                    if best_v == 0:
                        break
            if best_i < 0:
                break
            with nogil:
                if best_i != k:
                    for c in range(w):
                        t = a[k * w + c]
                        a[k * w + c] = a[best_i * w + c]
                        a[best_i * w + c] = t
                ppow = 1
                for e in range(best_v):
                    ppow *= p
                uinv = _invmod(a[k * w + best_j] // ppow, mod)
                for i2 in range(k + 1, n):
                    x = a[i2 * w + best_j]
                    if x == 0:
                        continue
                    f = ck_mulmod(x // ppow, uinv, mod)
                    for c in range(w):
                        if a[k * w + c] != 0:
                            t = a[i2 * w + c] - ck_mulmod(f, a[k * w + c], mod)
                            if t < 0:
                                t += mod
                            a[i2 * w + c] = t
                used[best_j] = 1
            pivot_cols.append(best_j)
            pivot_vals.append(best_v)
        for i in range(n):
            rows[i] = [a[i * w + j] for j in range(w)]
    finally:
        free(a)
        free(used)
    return pivot_cols, pivot_vals
