"""Relations between weight classes and the combinatorial adversary bound.

The relation for counting links ``x`` of weight ``K`` to every ``y`` of weight
``(1 + eps) K`` that contains it. Filtering the relation by a set of query
positions keeps only pairs that some queried position tells apart. The bound
is ``sqrt(h h' / (l l'))``, where ``h, h'`` are the smallest row and column
counts of the relation and ``l, l'`` the largest row and column counts over
all filtered relations.

All counts are exact Python integers.
"""
from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EmptyRowOrColumn, IndexOutOfRange
from .model import CountingInstance, OracleInput, check_counting_parameters, parse_fraction


class PaperDiscrepancyWarning(UserWarning):
    """An enumerated extremum disagrees with its published closed form."""


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def bit_matrix(inputs) -> np.ndarray:
    """Stack inputs into a ``len(inputs) x N`` uint8 array."""
    inputs = list(inputs)
    if not inputs:
        return np.zeros((0, 0), dtype=np.uint8)
    N = inputs[0].N
    vals = np.array([x.value for x in inputs], dtype=object)
    return np.array([[(v >> i) & 1 for i in range(N)] for v in vals], dtype=np.uint8)


def separated(bits_a: np.ndarray, bits_b: np.ndarray, positions) -> np.ndarray:
    """Boolean ``|A| x |B|`` mask: does some position in ``positions`` differ?"""
    pos = sorted(set(positions))
    N = bits_a.shape[1] if bits_a.size else bits_b.shape[1]
    if any(not 0 <= i < N for i in pos):
        raise IndexOutOfRange(f"positions {pos} not all in [0, {N})")
    a = bits_a[:, pos]
    b = bits_b[:, pos]
    return (a[:, None, :] != b[None, :, :]).any(axis=-1)


def index_subsets(N: int, p: int):
    """Distinct position sets of size ``1..min(p, N)``, in lexicographic order."""
    subsets = [c for k in range(1, min(p, N) + 1) for c in itertools.combinations(range(N), k)]
    return sorted(subsets)


@dataclass(frozen=True)
class RelationTable:
    X: tuple[OracleInput, ...]
    Y: tuple[OracleInput, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def N(self) -> int:
        return (self.X or self.Y)[0].N

    def incidence(self) -> np.ndarray:
        """``|X| x |Y|`` 0/1 matrix of the relation."""
        m = np.zeros((len(self.X), len(self.Y)), dtype=np.int64)
        for i, j in self.pairs:
            m[i, j] = 1
        return m

    def __len__(self):
        return len(self.pairs)


def enumerate_relation(inst: CountingInstance) -> RelationTable:
    """All ``(x, y)`` in ``X x Y`` with ``x <= y`` componentwise."""
    yvals = [y.value for y in inst.Y]
    pairs = tuple(
        (i, j)
        for i, x in enumerate(inst.X)
        for j, yv in enumerate(yvals)
        if x.value & ~yv == 0
    )
    return RelationTable(inst.X, inst.Y, pairs)


def filtered_relation(r: RelationTable, positions) -> RelationTable:
    """Pairs of ``r`` separated by at least one of ``positions``."""
    mask = separated(bit_matrix(r.X), bit_matrix(r.Y), positions)
    return RelationTable(r.X, r.Y, tuple((i, j) for i, j in r.pairs if mask[i, j]))


@dataclass(frozen=True)
class ExtremaReport:
    """Row/column extrema of a relation and its filtered versions.

    Witness rows and columns are indices into ``X`` and ``Y``.
    """

    p: int
    h: int
    h_prime: int
    ell: int
    ell_prime: int
    h_row: int
    h_prime_col: int
    ell_tuple: tuple[int, ...]
    ell_row: int
    ell_prime_tuple: tuple[int, ...]
    ell_prime_col: int


def _filtered_maxima(inc, mask):
    f = inc * mask
    rows = f.sum(axis=1)
    cols = f.sum(axis=0)
    r, c = int(rows.argmax()), int(cols.argmax())
    return int(rows[r]), r, int(cols[c]), c


def extrema(r: RelationTable, p: int, workers: int | None = None) -> ExtremaReport:
    """``h, h'`` on ``r`` itself; ``l, l'`` maximised over position sets of size ``<= p``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if not r.pairs:
        raise EmptyRowOrColumn("relation is empty")
    inc = r.incidence()
    rows, cols = inc.sum(axis=1), inc.sum(axis=0)
    if rows.min() == 0 or cols.min() == 0:
        raise EmptyRowOrColumn(
            f"relation has an empty row or column (min row {rows.min()}, min column {cols.min()})"
        )
    bx, by = bit_matrix(r.X), bit_matrix(r.Y)
    subsets = index_subsets(r.N, p)

    def work(s):
        return _filtered_maxima(inc, separated(bx, by, s))

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, subsets))
    else:
        results = [work(s) for s in subsets]

    # strict comparison keeps the lexicographically first witness
    ell = ell_p = -1
    for s, (rmax, ri, cmax, ci) in zip(subsets, results):
        if rmax > ell:
            ell, ell_tuple, ell_row = rmax, s, ri
        if cmax > ell_p:
            ell_p, ellp_tuple, ellp_col = cmax, s, ci

    return ExtremaReport(
        p=p,
        h=int(rows.min()),
        h_prime=int(cols.min()),
        ell=ell,
        ell_prime=ell_p,
        h_row=int(rows.argmin()),
        h_prime_col=int(cols.argmin()),
        ell_tuple=ell_tuple,
        ell_row=ell_row,
        ell_prime_tuple=ellp_tuple,
        ell_prime_col=ellp_col,
    )


def theorem2_bound(h: int, h_prime: int, ell: int, ell_prime: int) -> float:
    """``sqrt(h h' / (l l'))``; the products are exact before conversion."""
    for v in (h, h_prime, ell, ell_prime):
        if v < 1:
            raise ValueError("all extrema must be positive")
    return math.sqrt(float(Fraction(h * h_prime, ell * ell_prime)))


@dataclass(frozen=True)
class ClosedFormReport:
    N: int
    K: int
    epsilon: Fraction
    p: int
    h: int
    h_prime: int
    ell_paper: int
    ell_prime_upper: int

    @property
    def bound(self) -> float:
        return theorem2_bound(self.h, self.h_prime, self.ell_paper, self.ell_prime_upper)


def counting_closed_forms(N: int, K: int, epsilon, p: int) -> ClosedFormReport:
    """The four binomial expressions for the counting relation."""
    n = N.bit_length() - 1
    if 1 << n != N:
        raise ValueError(f"N={N} is not a power of two")
    eps, high = check_counting_parameters(n, K, epsilon)
    ek = high - K
    return ClosedFormReport(
        N=N,
        K=K,
        epsilon=eps,
        p=p,
        h=binom(N - K, ek),
        h_prime=binom(high, K),
        ell_paper=binom(N - K - 1, ek - 1),
        ell_prime_upper=p * binom(high - 1, K),
    )


def ell_upper_inclusion_exclusion(N: int, K: int, eps_k: int, p: int) -> int:
    """Rows can gain at most the ``y`` that avoid none of ``p`` positions."""
    return binom(N - K, eps_k) - binom(N - K - p, eps_k)


def theorem3_bound(N: int, K: int, epsilon, p: int) -> float:
    """``(1 / eps) sqrt(N / (p K))``."""
    eps = parse_fraction(epsilon)
    return float(1 / eps) * math.sqrt(N / (p * K))


@dataclass(frozen=True)
class Discrepancy:
    quantity: str
    enumerated: int
    closed_form: int
    witness_tuple: tuple[int, ...]
    witness_index: int
    witness_input: str

    def render(self) -> str:
        return (
            f"WARN {self.quantity}: enumerated={self.enumerated} closed_form={self.closed_form} "
            f"witness_tuple={list(self.witness_tuple)} witness={self.witness_input}"
        )


def audit_extrema(r: RelationTable, ext: ExtremaReport, cf: ClosedFormReport) -> list[Discrepancy]:
    """Compare enumerated extrema with the closed forms and warn on any gap.

    ``l`` is compared for equality with the published value. ``l'`` has a
    published upper bound only, so it is flagged only if enumeration exceeds it.
    """
    found = []
    if ext.ell != cf.ell_paper:
        found.append(
            Discrepancy("ell", ext.ell, cf.ell_paper, ext.ell_tuple, ext.ell_row,
                        "".join(map(str, r.X[ext.ell_row].bits)))
        )
    if ext.ell_prime > cf.ell_prime_upper:
        found.append(
            Discrepancy("ell_prime", ext.ell_prime, cf.ell_prime_upper, ext.ell_prime_tuple,
                        ext.ell_prime_col, "".join(map(str, r.Y[ext.ell_prime_col].bits)))
        )
    for d in found:
        warnings.warn(d.render(), PaperDiscrepancyWarning, stacklevel=2)
    return found
