"""Dense symmetric linear algebra: spectral norms, Perron eigenpairs, overlaps.

Matrices here are small (a few thousand rows at most), so everything goes
through a full dense eigendecomposition rather than an iterative solver.
Bipartite adversary matrices have spectra symmetric about zero, which makes
power iteration on them unreliable.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimMismatch, NotSymmetric, ZeroMatrix

#: residual tolerance used by assertions on eigenpairs
ASSERT_TOL = 1e-9
#: eigenvalues within this distance of the top one count as degenerate
EIG_TOL = 1e-12


def sym_matrix(entries) -> np.ndarray:
    """Return ``entries`` as a float64 matrix, checking exact symmetry."""
    m = np.array(entries, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise NotSymmetric(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise NotSymmetric("matrix is not exactly symmetric")
    return m


def spectral_norm(m) -> float:
    """Largest absolute eigenvalue of a real symmetric matrix."""
    m = sym_matrix(m)
    if not m.any():
        return 0.0
    w = np.linalg.eigvalsh(m)
    return float(max(abs(w[0]), abs(w[-1])))


def principal_eigenpair(m) -> tuple[float, np.ndarray]:
    """Perron eigenpair of an entrywise nonnegative symmetric matrix.

    The returned vector is a unit vector with nonnegative entries and
    ``m @ delta == lam * delta``. When the top eigenvalue is degenerate (for
    example a matrix with several isomorphic connected components) the vector
    is supported on the first component, in index order, whose own Perron
    value attains the maximum. That choice is nonnegative by construction and
    depends only on the input.
    """
    m = sym_matrix(m)
    if (m < 0).any():
        raise ValueError("principal_eigenpair needs an entrywise nonnegative matrix")
    if not m.any():
        raise ZeroMatrix("matrix has no nonzero entry")

    ncomp, labels = connected_components(m != 0, directed=False)
    lam = spectral_norm(m)
    best = None
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        sub = m[np.ix_(idx, idx)]
        if not sub.any():
            continue
        w, v = np.linalg.eigh(sub)
        # irreducible block: top eigenvalue is simple with a one-signed vector
        if w[-1] >= lam - EIG_TOL * max(1.0, lam):
            best = (idx, v[:, -1])
            break
    assert best is not None
    idx, vec = best
    vec = vec if vec.sum() >= 0 else -vec
    vec = np.clip(vec, 0.0, None)
    vec /= np.linalg.norm(vec)

    delta = np.zeros(m.shape[0])
    delta[idx] = vec
    return lam, delta


def overlap(u, v) -> complex:
    """Inner product <u|v>, conjugate-linear in ``u``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimMismatch(f"cannot overlap vectors of shape {u.shape} and {v.shape}")
    return complex(np.vdot(u.ravel(), v.ravel()))


def is_normalized(v, tol: float = 1e-12) -> bool:
    return abs(float(np.linalg.norm(np.ravel(v))) - 1.0) <= tol
