"""Exact statevector simulation of the parallel query model.

A query state lives on ``p`` index registers (dimension ``N`` each), ``p``
result bits and a workspace of dimension ``w``. Amplitudes are kept as a
tensor of shape ``(N,) * p + (2,) * p + (w,)`` whose C-order flattening puts
the first index register most significant and the workspace least.

One oracle round XORs ``x[i_j]`` into result bit ``j`` for every ``j``
simultaneously. An algorithm alternates input-independent unitaries with
oracle rounds, starting from the all-zero basis state.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import hadamard

from . import numerics
from .adversary import AdversaryMatrix, theorem1_bound
from .errors import DimMismatch, IndivisibleParameters, NonUnitary, Overflow
from .model import CountingSpec, OracleInput, canonical_input, counting_accepts

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
STEP_TOL = 1e-9


@dataclass
class QueryState:
    n: int
    p: int
    w: int
    amplitudes: np.ndarray

    def __post_init__(self):
        shape = (1 << self.n,) * self.p + (2,) * self.p + (self.w,)
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.size != math.prod(shape):
            raise DimMismatch(f"expected {math.prod(shape)} amplitudes, got {a.size}")
        self.amplitudes = a.reshape(shape)

    @classmethod
    def zero(cls, n: int, p: int = 1, w: int = 1) -> "QueryState":
        dim = (1 << n) ** p * 2**p * w
        a = np.zeros(dim, dtype=np.complex128)
        a[0] = 1.0
        return cls(n, p, w, a)

    @classmethod
    def basis(cls, n: int, p: int, w: int, indices, bits, work: int = 0) -> "QueryState":
        s = cls.zero(n, p, w)
        s.amplitudes[...] = 0
        s.amplitudes[tuple(indices) + tuple(bits) + (work,)] = 1.0
        return s

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def copy(self) -> "QueryState":
        return QueryState(self.n, self.p, self.w, self.amplitudes.copy())


def state_dim(n: int, p: int, w: int) -> int:
    return (1 << n) ** p * 2**p * w


def apply_parallel_oracle(s: QueryState, x: OracleInput) -> QueryState:
    """One round of ``p`` simultaneous queries to ``x``."""
    if x.n != s.n:
        raise DimMismatch(f"state has n={s.n} but oracle input has n={x.n}")
    xb = np.array(x.bits, dtype=bool)
    a = s.amplitudes
    p = s.p
    for j in range(p):
        shape = [1] * a.ndim
        shape[j] = s.N
        hit = xb.reshape(shape)
        a = np.where(hit, np.flip(a, axis=p + j), a)
    return QueryState(s.n, s.p, s.w, a)


def _apply_on_axis(a: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(m, a, axes=([1], [axis])), 0, axis)


@dataclass(frozen=True)
class Gate:
    """Named structured unitary acting on the amplitude tensor."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __call__(self, a: np.ndarray) -> np.ndarray:
        return self.fn(a)


def index_gate(name: str, m: np.ndarray, p: int) -> Gate:
    """Apply the ``N x N`` matrix ``m`` to every index register."""
    def fn(a):
        for j in range(p):
            a = _apply_on_axis(a, m, j)
        return a
    return Gate(name, fn)


def result_gate(name: str, m: np.ndarray, p: int) -> Gate:
    """Apply the 2x2 matrix ``m`` to every result bit."""
    def fn(a):
        for j in range(p):
            a = _apply_on_axis(a, m, p + j)
        return a
    return Gate(name, fn)


def hadamard_indices(n: int, p: int) -> Gate:
    N = 1 << n
    return index_gate("hadamard_indices", hadamard(N) / math.sqrt(N), p)


def diffusion_indices(n: int, p: int) -> Gate:
    """Reflection ``2|s><s| - I`` about the uniform state on each index register."""
    N = 1 << n
    return index_gate("diffusion", np.full((N, N), 2.0 / N) - np.eye(N), p)


def minus_results(p: int) -> Gate:
    """Map every result bit ``|0>`` to ``|->`` (X then H)."""
    hx = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2) @ np.array([[0.0, 1.0], [1.0, 0.0]])
    return result_gate("minus_results", hx, p)


def sequence(*gates: Gate) -> Gate:
    def fn(a):
        for g in gates:
            a = g(a)
        return a
    return Gate("+".join(g.name for g in gates), fn)


def identity_gate() -> Gate:
    return Gate("identity", lambda a: a)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR-orthonormalised complex Gaussian matrix with phases fixed by ``R``'s diagonal."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass
class Schedule:
    """``U_0, ..., U_T`` interleaved with ``T`` oracle rounds.

    Each unitary is either a dense matrix on the full state space or a
    :class:`Gate`.
    """

    n: int
    p: int
    w: int
    unitaries: list
    description: dict = field(default_factory=dict)

    @property
    def T(self) -> int:
        return len(self.unitaries) - 1

    @property
    def dim(self) -> int:
        return state_dim(self.n, self.p, self.w)

    def check(self) -> None:
        if not self.unitaries:
            raise DimMismatch("schedule needs at least U_0")
        for t, u in enumerate(self.unitaries):
            if isinstance(u, Gate):
                continue
            u = np.asarray(u)
            if u.shape != (self.dim, self.dim):
                raise DimMismatch(f"U_{t} has shape {u.shape}, expected {(self.dim, self.dim)}")
            err = np.linalg.norm(u.conj().T @ u - np.eye(self.dim), ord=2)
            if err > UNITARY_TOL:
                raise NonUnitary(f"U_{t} deviates from unitarity by {err:.3g}")


def random_schedule(n: int, p: int, T: int, seed: int, w: int = 1) -> Schedule:
    rng = np.random.default_rng(seed)
    dim = state_dim(n, p, w)
    us = [random_unitary(dim, rng) for _ in range(T + 1)]
    desc = {"kind": "random", "generator": "numpy.random.default_rng(PCG64)", "seed": seed,
            "n": n, "p": p, "w": w, "T": T}
    return Schedule(n, p, w, us, desc)


def grover_schedule(n: int, iterations: int) -> Schedule:
    """Single-query Grover search with the result bit held in ``|->``."""
    us = [sequence(hadamard_indices(n, 1), minus_results(1))]
    us += [diffusion_indices(n, 1)] * iterations
    return Schedule(n, 1, 1, us, {"kind": "grover", "n": n, "T": iterations})


def _apply(u, a: np.ndarray) -> np.ndarray:
    if isinstance(u, Gate):
        return u(a)
    return (np.asarray(u) @ a.reshape(-1)).reshape(a.shape)


def run_schedule(sch: Schedule, x: OracleInput) -> list[QueryState]:
    """States ``|psi_x^0>, ..., |psi_x^T>``."""
    sch.check()
    if x.n != sch.n:
        raise DimMismatch(f"schedule has n={sch.n} but oracle input has n={x.n}")
    s = QueryState.zero(sch.n, sch.p, sch.w)
    out = []
    for t, u in enumerate(sch.unitaries):
        if t > 0:
            s = apply_parallel_oracle(s, x)
        s = QueryState(s.n, s.p, s.w, _apply(u, s.amplitudes))
        if abs(s.norm() - 1.0) > NORM_TOL:
            raise NonUnitary(f"norm drifted to {s.norm():.15g} after U_{t}")
        out.append(s)
    return out


def _run_all(sch: Schedule, inputs, workers: int | None) -> np.ndarray:
    """``(T+1, len(inputs), dim)`` array of all trajectories."""
    def one(x):
        return np.stack([s.vector for s in run_schedule(sch, x)])

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(one, inputs))
    else:
        runs = [one(x) for x in inputs]
    return np.stack(runs, axis=1)


@dataclass
class ProgressTrace:
    gamma: AdversaryMatrix
    delta: np.ndarray
    lambda_gamma: float
    W: list[float]
    deltas: list[float]
    step_bound: float
    worst_tuple: tuple[int, ...]

    @property
    def step_bound_ok(self) -> bool:
        return all(d <= self.step_bound + STEP_TOL for d in self.deltas)

    @property
    def observed_step_ratio(self) -> float:
        """Largest observed step relative to the filtered norm (bound is 2)."""
        if not self.deltas:
            return 0.0
        return max(self.deltas) / (self.step_bound / 2)

    def to_record(self) -> dict:
        return {
            "lambda_gamma": _f(self.lambda_gamma),
            "W": [_f(v) for v in self.W],
            "deltas": [_f(v) for v in self.deltas],
            "step_bound": _f(self.step_bound),
            "worst_tuple": list(self.worst_tuple),
            "step_bound_ok": self.step_bound_ok,
            "observed_step_ratio": _f(self.observed_step_ratio),
        }


def _f(v: float) -> float:
    return float(f"{v:.12g}")


def _weighted_overlaps(gamma: np.ndarray, delta: np.ndarray, psis: np.ndarray) -> complex:
    gram = psis.conj() @ psis.T
    return complex(np.sum(gamma * np.outer(delta, delta) * gram))


def progress_trace(a: AdversaryMatrix, sch: Schedule, workers: int | None = None) -> ProgressTrace:
    """Track ``W^t = sum_xy gamma_xy d_x d_y <psi_x^t|psi_y^t>`` along a schedule."""
    lam, delta = numerics.principal_eigenpair(a.gamma)
    runs = _run_all(sch, a.inputs, workers)
    W = []
    for t in range(runs.shape[0]):
        v = _weighted_overlaps(a.gamma, delta, runs[t])
        if abs(v.imag) > 1e-10:
            raise ArithmeticError(f"W^{t} has imaginary part {v.imag:.3g}")
        W.append(v.real)
    deltas = [abs(W[t] - W[t + 1]) for t in range(len(W) - 1)]
    rep = theorem1_bound(a, sch.p, workers)
    return ProgressTrace(a, delta, lam, W, deltas, 2 * rep.max_filtered_lambda, rep.worst_tuple)


def distinguish_threshold(delta: float) -> float:
    """Largest final overlap compatible with error ``delta`` on both inputs."""
    return 2 * math.sqrt(delta * (1 - delta))


@dataclass
class OverlapReport:
    error_budget: float
    threshold: float
    pairs: list[tuple[OracleInput, OracleInput, float, bool]]
    W_ratio: float

    @property
    def all_ok(self) -> bool:
        return all(ok for *_, ok in self.pairs)


def final_overlap_check(a: AdversaryMatrix, sch: Schedule, error_budget: float = 1 / 3,
                        workers: int | None = None) -> OverlapReport:
    """Final overlaps of all gamma-connected pairs against ``2 sqrt(d (1 - d))``."""
    lam, delta = numerics.principal_eigenpair(a.gamma)
    runs = _run_all(sch, a.inputs, workers)
    final = runs[-1]
    thr = distinguish_threshold(error_budget)
    pairs = []
    nz_i, nz_j = np.nonzero(np.triu(a.gamma))
    for i, j in zip(nz_i, nz_j):
        ov = abs(numerics.overlap(final[i], final[j]))
        pairs.append((a.inputs[i], a.inputs[j], ov, ov <= thr))
    WT = _weighted_overlaps(a.gamma, delta, final).real
    return OverlapReport(error_budget, thr, pairs, WT / lam)


def read_bit_schedule(n: int, i: int) -> Schedule:
    """Query position ``i`` once and copy the answer into a workspace qubit."""
    N = 1 << n
    if not 0 <= i < N:
        raise Overflow(f"position {i} outside [0, {N})")
    dim = state_dim(n, 1, 2)
    # U_0: |0;0;0> <-> |i;0;0>
    u0 = np.eye(dim)
    src, dst = 0, np.ravel_multi_index((i, 0, 0), (N, 2, 2))
    u0[[src, dst]] = u0[[dst, src]]
    # U_1: CNOT from the result bit onto the workspace qubit
    u1 = np.zeros((dim, dim))
    for idx in range(N):
        for b in range(2):
            for k in range(2):
                s = np.ravel_multi_index((idx, b, k), (N, 2, 2))
                d = np.ravel_multi_index((idx, b, k ^ b), (N, 2, 2))
                u1[d, s] = 1.0
    return Schedule(n, 1, 2, [u0, u1], {"kind": "read_bit", "n": n, "position": i, "T": 1})


def grover_success(n: int, marked: Sequence[int], iterations: int) -> float:
    """Probability of measuring a marked index after ``iterations`` Grover rounds."""
    marked = sorted(set(marked))
    if not marked:
        raise ValueError("marked set must be nonempty")
    x = OracleInput.from_support(marked, n)
    final = run_schedule(grover_schedule(n, iterations), x)[-1]
    probs = (np.abs(final.amplitudes) ** 2).sum(axis=(1, 2))
    return float(probs[marked].sum())


def round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


@dataclass
class CountEstimate:
    N: int
    K: int
    t_bits: int
    distribution: np.ndarray
    queries: int
    success_prob: float

    @property
    def estimates(self) -> np.ndarray:
        """Estimator value ``N sin^2(pi m / 2^t)`` for every outcome ``m``."""
        m = np.arange(1 << self.t_bits)
        return self.N * np.sin(np.pi * m / (1 << self.t_bits)) ** 2

    def khat_distribution(self) -> dict[int, float]:
        """Probability of each rounded estimate."""
        out: dict[int, float] = {}
        for est, pr in zip(self.estimates, self.distribution):
            k = round_half_up(est)
            out[k] = out.get(k, 0.0) + float(pr)
        return dict(sorted(out.items()))

    def mode(self) -> tuple[int, float]:
        dist = self.khat_distribution()
        k = max(dist, key=lambda key: (dist[key], -key))
        return k, dist[k]

    def to_record(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "t_bits": self.t_bits,
            "queries": self.queries,
            "success_prob": _f(self.success_prob),
            "distribution": [[m, _f(pr)] for m, pr in enumerate(self.distribution)],
        }


def phase_estimation_count(spec: CountingSpec, K: int, t_bits: int) -> CountEstimate:
    """Exact output distribution of the phase-estimation counter.

    The precision register is the workspace. Its value ``k`` controls how
    many Grover iterates act on the search register; the result bit sits in
    ``|->`` so every oracle round kicks back the phase ``(-1)^x_i``. Round
    ``r`` is applied to the branches with ``k >= r``, giving ``2^t - 1``
    rounds in total.
    """
    if t_bits < 1:
        raise ValueError("t_bits must be at least 1")
    n, N = spec.n, spec.N
    x = canonical_input(n, K)
    M = 1 << t_bits

    s = QueryState.zero(n, 1, M)
    a = sequence(hadamard_indices(n, 1), minus_results(1))(s.amplitudes)
    a = _apply_on_axis(a, hadamard(M) / math.sqrt(M), 2)
    diffusion = diffusion_indices(n, 1)
    for r in range(1, M):
        branch = QueryState(n, 1, M - r, a[:, :, r:])
        branch = apply_parallel_oracle(branch, x)
        a[:, :, r:] = diffusion(branch.amplitudes)
    a = np.fft.fft(a, axis=2, norm="ortho")
    dist = (np.abs(a) ** 2).sum(axis=(0, 1))

    est = CountEstimate(N, K, t_bits, dist, M - 1, 0.0)
    est.success_prob = float(sum(
        pr for e, pr in zip(est.estimates, dist) if counting_accepts(spec, K, round_half_up(e))
    ))
    return est


@dataclass
class ParallelCountResult:
    N: int
    K: int
    p: int
    t_bits: int
    seed: int
    trials: int
    depth: int
    total_queries: int
    exact_distribution: dict[float, float]
    exact_mean: float
    exact_variance: float
    exact_success_prob: float
    empirical_success_rate: float
    empirical_mean: float
    empirical_variance: float
    empirical_variance_se: float

    def to_record(self) -> dict:
        rec = {k: getattr(self, k) for k in (
            "N", "K", "p", "t_bits", "seed", "trials", "depth", "total_queries")}
        for k in ("exact_mean", "exact_variance", "exact_success_prob", "empirical_success_rate",
                  "empirical_mean", "empirical_variance", "empirical_variance_se"):
            rec[k] = _f(getattr(self, k))
        rec["distribution"] = [[_f(v), _f(pr)] for v, pr in self.exact_distribution.items()]
        return rec


def parallel_disjoint_counters(spec: CountingSpec, K: int, p: int, t_bits: int, seed: int,
                               trials: int = 10_000) -> ParallelCountResult:
    """Count ``p`` equal blocks side by side and add up the block estimates.

    The instance has ``K / p`` marked positions in each block of ``N / p``.
    Block counters run in parallel, so the depth is one block's query count.
    """
    N = spec.N
    if p < 1 or N % p or K % p:
        raise IndivisibleParameters(f"p={p} must divide both N={N} and K={K}")
    block_n = spec.n - (p.bit_length() - 1)
    block = phase_estimation_count(CountingSpec(block_n, spec.epsilon), K // p, t_bits)
    values, probs = block.estimates, block.distribution

    # exact distribution of the sum, keyed on the real-valued combined estimate
    single: dict[float, float] = {}
    for v, pr in zip(values, probs):
        key = round(float(v), 9)
        single[key] = single.get(key, 0.0) + float(pr)
    combined = {0.0: 1.0}
    for _ in range(p):
        nxt: dict[float, float] = {}
        for a, pa in combined.items():
            for b, pb in single.items():
                key = round(a + b, 9)
                nxt[key] = nxt.get(key, 0.0) + pa * pb
        combined = nxt
    combined = dict(sorted(combined.items()))
    mean_b = float(values @ probs)
    var_b = float(((values - mean_b) ** 2) @ probs)
    exact_success = sum(pr for v, pr in combined.items() if counting_accepts(spec, K, round_half_up(v)))

    rng = np.random.default_rng(seed)
    draws = rng.choice(len(values), size=(trials, p), p=probs / probs.sum())
    totals = values[draws].sum(axis=1)
    ok = np.array([counting_accepts(spec, K, round_half_up(v)) for v in totals])
    emp_mean = float(totals.mean())
    sq = (totals - emp_mean) ** 2
    emp_var = float(sq.sum() / (trials - 1)) if trials > 1 else 0.0
    se = float(sq.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0

    return ParallelCountResult(
        N=N, K=K, p=p, t_bits=t_bits, seed=seed, trials=trials,
        depth=block.queries, total_queries=p * block.queries,
        exact_distribution=combined, exact_mean=p * mean_b, exact_variance=p * var_b,
        exact_success_prob=float(exact_success), empirical_success_rate=float(ok.mean()),
        empirical_mean=emp_mean, empirical_variance=emp_var, empirical_variance_se=se,
    )
