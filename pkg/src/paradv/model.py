"""Problem instances for approximate counting.

An oracle input is an ``N = 2**n`` bit string ``x``. The counting target is
multi-valued: on an input of Hamming weight ``m`` any integer in a relative
window around ``m`` is an acceptable answer. Two weight classes ``K`` and
``(1 + eps) K`` are then separated so that no answer is acceptable for both.

Inputs are ordered by the integer ``sum(x_i << i)``, so bit 0 is the least
significant position.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NonIntegerParameters, Overflow, ValueOverlap


def parse_fraction(text) -> Fraction:
    """Parse an exact rational such as ``"1/2"``, ``"3"`` or a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("pass epsilon as an exact rational, not a float")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise NonIntegerParameters(f"cannot parse rational {text!r}") from exc


def format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True, order=True)
class OracleInput:
    """Bit string ``x`` of length ``N = 2**n``, stored as an integer."""

    value: int
    n: int = field(compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not 0 <= self.value < (1 << self.N):
            raise ValueError(f"value {self.value} does not fit in {self.N} bits")

    @classmethod
    def from_bits(cls, bits, n: int | None = None) -> "OracleInput":
        bits = [int(b) for b in bits]
        if n is None:
            n = len(bits).bit_length() - 1
        if len(bits) != 1 << n:
            raise ValueError(f"need exactly {1 << n} bits, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        return cls(sum(b << i for i, b in enumerate(bits)), n)

    @classmethod
    def from_support(cls, support, n: int) -> "OracleInput":
        return cls(sum(1 << i for i in set(support)), n)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.N))

    @property
    def weight(self) -> int:
        return bin(self.value).count("1")

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.N:
            raise IndexError(i)
        return (self.value >> i) & 1

    def to_hex(self) -> str:
        width = max(1, -(-self.N // 4))
        return format(self.value, f"0{width}x")

    @classmethod
    def from_hex(cls, text: str, n: int) -> "OracleInput":
        return cls(int(text, 16), n)

    def __repr__(self):
        return f"OracleInput({''.join(map(str, self.bits))})"


def canonical_input(n: int, K: int) -> OracleInput:
    """The weight-``K`` input with the ``K`` lowest positions set."""
    N = 1 << n
    if not 0 <= K <= N:
        raise Overflow(f"K={K} outside [0, {N}]")
    return OracleInput((1 << K) - 1, n)


def inputs_of_weight(n: int, k: int) -> list[OracleInput]:
    """All inputs of Hamming weight ``k``, in increasing integer order."""
    N = 1 << n
    values = sorted(sum(1 << i for i in c) for c in itertools.combinations(range(N), k))
    return [OracleInput(v, n) for v in values]


@dataclass(frozen=True)
class CountingSpec:
    """Approximate counting on ``N = 2**n`` bits to relative precision ``epsilon``.

    ``F(m)`` is the set of integers ``v`` with ``|v - m| < beta * m``, together
    with ``m`` itself, where ``beta = eps / (2 + eps)``. With this half-width
    the windows around ``K`` and ``(1 + eps) K`` meet at exactly one real
    point; the strict inequality keeps them disjoint even when that point is
    an integer.
    """

    n: int
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "epsilon", parse_fraction(self.epsilon))
        if self.epsilon <= 0:
            raise NonIntegerParameters(f"epsilon must be positive, got {self.epsilon}")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def beta(self) -> Fraction:
        return self.epsilon / (2 + self.epsilon)

    def window(self, m: int) -> range:
        """Acceptable answers for true count ``m``, clipped to ``[0, N]``."""
        if m == 0:
            return range(0, 1)
        half = self.beta * m
        lo = math.floor(m - half) + 1
        hi = math.ceil(m + half) - 1
        return range(max(lo, 0), min(hi, self.N) + 1)


def counting_accepts(spec: CountingSpec, m: int, v: int) -> bool:
    """True iff ``v`` is an acceptable answer when the true count is ``m``."""
    if v == m:
        return True
    return abs(v - m) < spec.beta * m


def _windows_disjoint(spec: CountingSpec, a: int, b: int) -> bool:
    wa, wb = spec.window(a), spec.window(b)
    return wa.stop <= wb.start or wb.stop <= wa.start


def values_disjoint(spec: CountingSpec, x: OracleInput, y: OracleInput) -> bool:
    """True iff no answer in ``[0, N]`` is acceptable for both ``x`` and ``y``."""
    return _windows_disjoint(spec, x.weight, y.weight)


@dataclass(frozen=True)
class CountingInstance:
    spec: CountingSpec
    K: int
    X: tuple[OracleInput, ...]
    Y: tuple[OracleInput, ...]

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def epsilon(self) -> Fraction:
        return self.spec.epsilon

    @property
    def eps_k(self) -> int:
        return int(self.spec.epsilon * self.K)

    @property
    def K_high(self) -> int:
        return self.K + self.eps_k

    def disjoint(self, x: OracleInput, y: OracleInput) -> bool:
        return values_disjoint(self.spec, x, y)


def check_counting_parameters(n: int, K: int, epsilon) -> tuple[Fraction, int]:
    """Validate ``(n, K, eps)``; return ``eps`` and ``(1 + eps) K``."""
    eps = parse_fraction(epsilon)
    if eps <= 0:
        raise NonIntegerParameters(f"epsilon must be positive, got {format_fraction(eps)}")
    if K < 1:
        raise NonIntegerParameters(f"K must be a positive integer, got {K}")
    eps_k = eps * K
    if eps_k.denominator != 1:
        raise NonIntegerParameters(f"eps*K = {format_fraction(eps_k)} is not an integer")
    high = K + int(eps_k)
    N = 1 << n
    if high > N:
        raise Overflow(f"(1+eps)K = {high} exceeds N = {N}")
    return eps, high


def build_counting_instance(n: int, K: int, epsilon) -> CountingInstance:
    """Enumerate ``X`` (weight ``K``) and ``Y`` (weight ``(1 + eps) K``)."""
    eps, high = check_counting_parameters(n, K, epsilon)
    spec = CountingSpec(n, eps)
    # all pairs across X x Y share the same two weights, so one check covers them
    if not _windows_disjoint(spec, K, high):
        raise ValueOverlap(
            f"acceptance windows {list(spec.window(K))} and {list(spec.window(high))} intersect"
        )
    return CountingInstance(spec, K, tuple(inputs_of_weight(n, K)), tuple(inputs_of_weight(n, high)))


def valid_counting_parameters(N_values, max_eps_k: int | None = None):
    """Yield every ``(n, K, eps)`` with ``eps*K`` a positive integer and ``(1+eps)K <= N``."""
    for N in N_values:
        n = N.bit_length() - 1
        for K in range(1, N):
            for j in range(1, N - K + 1):
                if max_eps_k is not None and j > max_eps_k:
                    break
                yield n, K, Fraction(j, K)


def instance_to_record(inst: CountingInstance) -> dict:
    return {
        "n": inst.n,
        "K": inst.K,
        "epsilon": format_fraction(inst.epsilon),
        "X": [x.to_hex() for x in inst.X],
        "Y": [y.to_hex() for y in inst.Y],
    }


def instance_from_record(rec: dict) -> CountingInstance:
    n, K = int(rec["n"]), int(rec["K"])
    inst = build_counting_instance(n, K, rec["epsilon"])
    X = tuple(OracleInput.from_hex(h, n) for h in rec["X"])
    Y = tuple(OracleInput.from_hex(h, n) for h in rec["Y"])
    if X != inst.X or Y != inst.Y:
        raise ValueError("record listing does not match the enumerated instance")
    return inst
