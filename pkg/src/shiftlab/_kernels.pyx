# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pykernels`` exactly."""
import numpy as np
cimport cython
from libc.stdlib cimport malloc, free


def collatz_power(B, double tol, long max_iter):
    cdef double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef Py_ssize_t n = b.shape[0], i, j
    cdef double[::1] x = np.ones(n)
    cdef double[::1] y = np.empty(n)
    cdef double lo = 0.0, hi = np.inf, r, acc, top
    cdef long it = 0
    for it in range(1, max_iter + 1):
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += b[i, j] * x[j]
            y[i] = acc
        lo = y[0] / x[0]
        hi = lo
        top = y[0]
        for i in range(1, n):
            r = y[i] / x[i]
            if r < lo:
                lo = r
            if r > hi:
                hi = r
            if y[i] > top:
                top = y[i]
        if hi - lo <= tol * hi:
            break
        for i in range(n):
            x[i] = y[i] / top
    return lo, hi, it


def first_overlap(words, Py_ssize_t q_lo, Py_ssize_t q_hi):
    cdef int[:, ::1] w = np.ascontiguousarray(words, dtype=np.intc)
    cdef Py_ssize_t count = w.shape[0], length = w.shape[1]
    cdef Py_ssize_t i, j, q, t
    cdef bint same
    for i in range(count):
        for j in range(count):
            for q in range(q_lo, q_hi + 1):
                same = True
                for t in range(length - q):
                    if w[i, q + t] != w[j, t]:
                        same = False
                        break
                if same:
                    return int(i), int(j), int(q)
    return None


cdef bint check_cycle(int* x, Py_ssize_t p, int[:, ::1] gamma, Py_ssize_t eta,
                      Py_ssize_t k, int n_symbols, Py_ssize_t n_common,
                      int* occ, int* y):
    cdef Py_ssize_t n_gamma = gamma.shape[0]
    cdef Py_ssize_t span = eta - k - 1
    cdef int star = n_symbols
    cdef Py_ssize_t i, j, t, g, pos
    cdef int v, z, u
    cdef bint ok
    for i in range(p):
        occ[i] = -1
        ok = True
        for t in range(n_common):
            if x[(i + t) % p] != gamma[0, t]:
                ok = False
                break
        if not ok:
            continue
        for g in range(n_gamma):
            ok = True
            for t in range(n_common, eta):
                if x[(i + t) % p] != gamma[g, t]:
                    ok = False
                    break
            if ok:
                occ[i] = <int>g
                break
    for i in range(p):
        y[i] = x[i] if occ[i] < 0 else n_symbols + 1 + occ[i]
    for i in range(p):
        if occ[i] < 0:
            continue
        for j in range(1, span + 1):
            pos = (i + j) % p
            if occ[pos] >= 0 or y[pos] == star:
                return False
            y[pos] = star
    for i in range(p):
        v = y[i]
        if v < n_symbols:
            z = v
        elif v > n_symbols:
            z = gamma[v - n_symbols - 1, 0]
        else:
            z = -1
            for j in range(1, span + 1):
                u = y[(i - j + p * (j // p + 1)) % p]
                if u > n_symbols:
                    z = gamma[u - n_symbols - 1, j]
                    break
                if u != star:
                    break
        if z != x[i]:
            return False
    return True


def roundtrip_cycles(trans, gamma, Py_ssize_t k, prefix, Py_ssize_t min_len,
                     Py_ssize_t max_len, int n_symbols):
    cdef int[:, ::1] tr = np.ascontiguousarray(trans, dtype=np.intc)
    cdef int[:, ::1] gm = np.ascontiguousarray(gamma, dtype=np.intc)
    cdef int[::1] pre = np.ascontiguousarray(prefix, dtype=np.intc)
    cdef Py_ssize_t n_vertices = tr.shape[0], eta = gm.shape[1]
    cdef Py_ssize_t plen = pre.shape[0]
    cdef Py_ssize_t n_common = 0, t, g, s, depth, length
    cdef int v, a
    cdef long checked = 0
    cdef bint same
    cdef int* word = <int*>malloc((max_len + 1) * sizeof(int))
    cdef int* vstack = <int*>malloc((max_len + 2) * sizeof(int))
    cdef int* astack = <int*>malloc((max_len + 2) * sizeof(int))
    cdef int* occ = <int*>malloc((max_len + 1) * sizeof(int))
    cdef int* y = <int*>malloc((max_len + 1) * sizeof(int))
    try:
        for t in range(eta):
            same = True
            for g in range(gm.shape[0]):
                if gm[g, t] != gm[0, t]:
                    same = False
                    break
            if not same:
                break
            n_common += 1
        for s in range(n_vertices):
            v = <int>s
            for t in range(plen):
                word[t] = pre[t]
                v = tr[v, pre[t]]
                if v < 0:
                    break
            if v < 0:
                continue
            depth = 0
            vstack[0] = v
            astack[0] = 0
            while depth >= 0:
                v = vstack[depth]
                a = astack[depth]
                length = plen + depth
                if a == 0 and length >= min_len and length <= max_len and v == s and length > 0:
                    checked += 1
                    if not check_cycle(word, length, gm, eta, k, n_symbols, n_common, occ, y):
                        return checked, [word[t] for t in range(length)]
                if length >= max_len:
                    depth -= 1
                    continue
                while a < n_symbols and tr[v, a] < 0:
                    a += 1
                if a == n_symbols:
                    depth -= 1
                    continue
                astack[depth] = a + 1
                word[length] = a
                depth += 1
                vstack[depth] = tr[v, a]
                astack[depth] = 0
        return checked, None
    finally:
        free(word)
        free(vstack)
        free(astack)
        free(occ)
        free(y)
