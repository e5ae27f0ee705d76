"""Independent reference computations for the test suite.

Nothing here imports the package's algorithms: eigenvalues come from a
plain cyclic Jacobi sweep, counts from Python set comprehensions over every
ordered query tuple, and quantum dynamics from explicit dense matrices.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def jacobi_eigenvalues(a, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi eigenvalue iteration for a real symmetric matrix."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, (a**2).sum() - (np.diag(a) ** 2).sum()))
        if off < tol * max(1.0, np.abs(a).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta**2 + 1))
                c = 1 / math.sqrt(t**2 + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def jacobi_norm(a):
    w = jacobi_eigenvalues(a)
    return max(abs(w[0]), abs(w[-1]))


def pascal(nmax):
    rows = [[1]]
    for i in range(1, nmax + 1):
        prev = rows[-1]
        rows.append([1] + [prev[j - 1] + prev[j] for j in range(1, i)] + [1])
    return rows


_PASCAL = pascal(64)


def binom_ref(a, b):
    if a < 0 or b < 0 or b > a:
        return 0
    return _PASCAL[a][b]


def subsets_of_weight(N, k):
    return [frozenset(c) for c in itertools.combinations(range(N), k)]


def brute_extrema(N, K, high, p):
    """(h, h', l, l') by looping over every ordered tuple in [0, N)^p."""
    X = subsets_of_weight(N, K)
    Y = subsets_of_weight(N, high)
    R = {(x, y) for x in X for y in Y if x <= y}
    h = min(sum((x, y) in R for y in Y) for x in X)
    hp = min(sum((x, y) in R for x in X) for y in Y)
    ell = ellp = 0
    for tup in itertools.product(range(N), repeat=p):
        # x and y differ at i iff i lies in the symmetric difference
        Rt = {(x, y) for (x, y) in R if any(i in (x ^ y) for i in tup)}
        rows = {}
        cols = {}
        for x, y in Rt:
            rows[x] = rows.get(x, 0) + 1
            cols[y] = cols.get(y, 0) + 1
        ell = max(ell, max(rows.values(), default=0))
        ellp = max(ellp, max(cols.values(), default=0))
    return h, hp, ell, ellp


def accepts_ref(eps, m, v):
    beta = Fraction(eps) / (2 + Fraction(eps))
    return v == m or abs(v - m) < beta * m


def disjoint_ref(eps, N, a, b):
    return not any(accepts_ref(eps, a, v) and accepts_ref(eps, b, v) for v in range(N + 1))


def grover_closed_form(N, K, t):
    return math.sin((2 * t + 1) * math.asin(math.sqrt(K / N))) ** 2


def oracle_matrix(n, p, w, x_bits):
    """Dense permutation matrix of the p-parallel oracle, basis by basis."""
    N = 1 << n
    shape = (N,) * p + (2,) * p + (w,)
    dim = math.prod(shape)
    m = np.zeros((dim, dim))
    for src in range(dim):
        idx = list(np.unravel_index(src, shape))
        dst = list(idx)
        for j in range(p):
            dst[p + j] = idx[p + j] ^ x_bits[idx[j]]
        m[np.ravel_multi_index(dst, shape), src] = 1
    return m


def phase_estimation_ref(N, K, t):
    """Outcome distribution from the eigendecomposition of the Grover iterate."""
    x = np.array([1 if i < K else 0 for i in range(N)])
    s = np.full(N, 1 / math.sqrt(N))
    G = (2 * np.outer(s, s) - np.eye(N)) @ np.diag((-1.0) ** x)
    vals, vecs = np.linalg.eig(G)
    coeffs = np.linalg.solve(vecs, s.astype(complex))
    M = 1 << t
    k = np.arange(M)
    dist = np.zeros(M)
    # eigenvectors within a degenerate eigenspace need not be orthogonal
    keys = np.round(np.angle(vals), 9)
    for key in np.unique(keys):
        grp = keys == key
        weight = np.linalg.norm(vecs[:, grp] @ coeffs[grp]) ** 2
        phi = np.angle(vals[grp]).mean() / (2 * math.pi)
        for m in range(M):
            amp = np.exp(2j * math.pi * k * (phi - m / M)).sum() / M
            dist[m] += weight * abs(amp) ** 2
    return dist
