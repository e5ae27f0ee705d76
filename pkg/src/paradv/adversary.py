"""Adversary matrices for multi-valued functions and the parallel spectral bound.

A matrix ``gamma`` over a list of inputs is admissible when it is symmetric,
entrywise nonnegative, has a zero diagonal and vanishes on every pair whose
sets of acceptable answers intersect. For a set of query positions, the
filtered matrix keeps only entries whose two inputs differ on one of those
positions. With ``p`` parallel queries the bound is ``lambda(gamma)`` divided
by the largest filtered spectral norm over position sets of size ``<= p``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import numerics
from .combinatorics import RelationTable, bit_matrix, enumerate_relation, index_subsets, separated
from .errors import DimMismatch, ZeroMatrix
from .model import CountingInstance, OracleInput

# filtered norms closer than this count as a tie (first subset wins)
TIE_TOL = 1e-12


@dataclass(frozen=True)
class AdversaryMatrix:
    inputs: tuple[OracleInput, ...]
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        g = numerics.sym_matrix(self.gamma)
        if g.shape[0] != len(self.inputs):
            raise DimMismatch(f"gamma is {g.shape[0]}x{g.shape[0]} but there are {len(self.inputs)} inputs")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    @property
    def N(self) -> int:
        return self.inputs[0].N

    def bits(self) -> np.ndarray:
        return bit_matrix(self.inputs)


def adversary_from_relation(r: RelationTable) -> AdversaryMatrix:
    """Symmetrised 0/1 incidence of ``r``: rows ``X`` first, then ``Y``."""
    inc = r.incidence().astype(np.float64)
    nx, ny = inc.shape
    g = np.zeros((nx + ny, nx + ny))
    g[:nx, nx:] = inc
    g[nx:, :nx] = inc.T
    return AdversaryMatrix(r.X + r.Y, g)


def counting_adversary(inst: CountingInstance) -> AdversaryMatrix:
    return adversary_from_relation(enumerate_relation(inst))


@dataclass(frozen=True)
class Violation:
    rule: str
    x: OracleInput
    y: OracleInput
    value: float

    def __str__(self):
        return f"{self.rule}: gamma[{self.x!r}][{self.y!r}] = {self.value}"


def validate_adversary(
    disjoint: Callable[[OracleInput, OracleInput], bool], a: AdversaryMatrix
) -> Violation | None:
    """Return ``None`` if ``a`` is admissible, else the first offending entry.

    ``disjoint(x, y)`` must say whether the answer sets of ``x`` and ``y``
    are disjoint. Entries are scanned in row-major order.
    """
    if len({x.N for x in a.inputs}) != 1:
        raise DimMismatch("inputs have different lengths")
    g = a.gamma
    for i, x in enumerate(a.inputs):
        for j, y in enumerate(a.inputs):
            v = g[i, j]
            if v < 0:
                return Violation("negative entry", x, y, float(v))
            if i == j and v != 0:
                return Violation("nonzero diagonal", x, y, float(v))
            if v != 0 and not disjoint(x, y):
                return Violation("answer sets intersect", x, y, float(v))
    return None


def filter_matrix(a: AdversaryMatrix, positions: Sequence[int]) -> AdversaryMatrix:
    """Zero every entry whose inputs agree on all of ``positions``."""
    b = a.bits()
    mask = separated(b, b, positions)
    return AdversaryMatrix(a.inputs, np.where(mask, a.gamma, 0.0))


@dataclass(frozen=True)
class SpectralBoundReport:
    p: int
    lambda_gamma: float
    worst_tuple: tuple[int, ...]
    max_filtered_lambda: float
    ratio: float

    def to_record(self) -> dict:
        return {
            "p": self.p,
            "lambda_gamma": float(f"{self.lambda_gamma:.12g}"),
            "worst_tuple": list(self.worst_tuple),
            "max_filtered_lambda": float(f"{self.max_filtered_lambda:.12g}"),
            "ratio": float(f"{self.ratio:.12g}"),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "SpectralBoundReport":
        return cls(int(rec["p"]), float(rec["lambda_gamma"]), tuple(rec["worst_tuple"]),
                   float(rec["max_filtered_lambda"]), float(rec["ratio"]))


def default_workers() -> int:
    env = os.environ.get("PARADV_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def filtered_norms(a: AdversaryMatrix, p: int, workers: int | None = None):
    """``[(positions, lambda(gamma filtered by positions))]`` over sets of size ``<= p``."""
    subsets = index_subsets(a.N, p)
    b = a.bits()

    def norm(s):
        return numerics.spectral_norm(np.where(separated(b, b, s), a.gamma, 0.0))

    workers = workers or 1
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = list(pool.map(norm, subsets))
    else:
        values = [norm(s) for s in subsets]
    return list(zip(subsets, values))


def theorem1_bound(a: AdversaryMatrix, p: int, workers: int | None = None) -> SpectralBoundReport:
    """Spectral bound for ``p`` parallel queries."""
    if p < 1:
        raise ValueError("p must be at least 1")
    lam = numerics.spectral_norm(a.gamma)
    if lam == 0.0:
        raise ZeroMatrix("adversary matrix is zero")
    best_s, best = None, -1.0
    for s, v in filtered_norms(a, p, workers):
        if v > best + TIE_TOL * max(1.0, best):
            best_s, best = s, v
    if best <= 0.0:
        raise ZeroMatrix("every filtered matrix is zero")
    return SpectralBoundReport(p, lam, best_s, best, lam / best)
