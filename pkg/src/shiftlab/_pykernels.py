"""Pure-Python kernels. Same signatures and results as the compiled ``_kernels``."""
import numpy as np


def collatz_power(B, tol, max_iter):
    """Power iteration on a primitive non-negative matrix.

    Returns (lo, hi, iterations) where lo <= spectral radius <= hi are the
    Collatz-Wielandt bounds of the final iterate.
    """
    B = np.asarray(B, dtype=np.float64)
    x = np.ones(B.shape[0])
    lo, hi = 0.0, np.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = B @ x
        ratios = y / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * hi:
            break
        x = y / y.max()
    return lo, hi, it


def first_overlap(words, q_lo, q_hi):
    """First (i, j, q) in lexicographic order with words[i][q:] == words[j][:L-q].

    Returns None when no pair overlaps for any shift q in [q_lo, q_hi].
    """
    words = np.asarray(words)
    count, length = words.shape
    rows = [tuple(int(s) for s in w) for w in words]
    for i in range(count):
        wi = rows[i]
        for j in range(count):
            wj = rows[j]
            for q in range(q_lo, q_hi + 1):
                if wi[q:] == wj[:length - q]:
                    return i, j, q
    return None


def _check_cycle(x, p, gamma, eta, k, n_symbols, common):
    """Apply the recoder and its inverse to one cyclic word; True if identity."""
    star = n_symbols
    span = eta - k - 1
    occ = [-1] * p
    for i in range(p):
        if any(x[(i + t) % p] != common[t] for t in range(len(common))):
            continue
        for g, w in enumerate(gamma):
            if all(x[(i + t) % p] == w[t] for t in range(eta)):
                occ[i] = g
                break
    y = list(x)
    for i in range(p):
        if occ[i] >= 0:
            y[i] = n_symbols + 1 + occ[i]
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
            z = gamma[v - n_symbols - 1][0]
        else:
            z = -1
            for j in range(1, span + 1):
                u = y[(i - j) % p]
                if u > n_symbols:
                    z = gamma[u - n_symbols - 1][j]
                    break
                if u != star:
                    break
        if z != x[i]:
            return False
    return True


def roundtrip_cycles(trans, gamma, k, prefix, min_len, max_len, n_symbols):
    """Round-trip the recoder on every cycle of a deterministic graph.

    ``trans[v][a]`` is the successor of vertex v on symbol a, or -1. Cycles
    are enumerated per start vertex with labels beginning with ``prefix``
    and length in [min_len, max_len]. Returns (checked, failure) where
    failure is the first failing cyclic word as a list, or None.
    """
    trans = [list(map(int, row)) for row in np.asarray(trans)]
    gamma = [tuple(int(s) for s in w) for w in np.asarray(gamma)]
    prefix = [int(s) for s in prefix]
    eta = len(gamma[0])
    common = []
    for t in range(eta):
        if all(w[t] == gamma[0][t] for w in gamma):
            common.append(gamma[0][t])
        else:
            break
    checked = 0
    n_vertices = len(trans)
    for s in range(n_vertices):
        v = s
        for a in prefix:
            v = trans[v][a]
            if v < 0:
                break
        if v < 0:
            continue
        word = list(prefix)
        stack = [(v, 0)]
        while stack:
            v, a = stack[-1]
            if a == 0 and min_len <= len(word) <= max_len and v == s and word:
                checked += 1
                if not _check_cycle(word, len(word), gamma, eta, k, n_symbols, common):
                    return checked, list(word)
            if len(word) >= max_len:
                stack.pop()
                if len(word) > len(prefix):
                    word.pop()
                continue
            while a < n_symbols and trans[v][a] < 0:
                a += 1
            if a == n_symbols:
                stack.pop()
                if len(word) > len(prefix):
                    word.pop()
                continue
            stack[-1] = (v, a + 1)
            word.append(a)
            stack.append((trans[v][a], 0))
    return checked, None
