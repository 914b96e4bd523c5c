"""Exact cut enumeration, the failure polynomial, and a Monte Carlo estimator.

Two enumeration engines are provided and must agree:

* ``bitscan`` walks every integer state ``0 .. 2**m - 1`` in numpy chunks
  keyed by leading bits, and buckets cut states by population count.
* ``stratified`` walks states size by size with ``itertools.combinations``;
  it can stop early (MCLC, MCLST) and handles truncated vectors.

Both rely on supersets of cuts being cuts: once ``N_i == C(m, i)`` every
larger size is full and need not be visited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import EnumerationLimitError, ModelError
from .model import LightpathRouting

DEFAULT_CEILING = 24
_CHUNK_BITS = 20
_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class CutVector:
    """Cross-layer cut counts ``N_0 .. N_m``; ``None`` marks an unknown count."""

    counts: tuple[int | None, ...]
    m: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if len(self.counts) != self.m + 1:
            raise ValueError(f"cut vector needs {self.m + 1} entries, got {len(self.counts)}")
        for i, n in enumerate(self.counts):
            if n is not None and not 0 <= n <= math.comb(self.m, i):
                raise ValueError(f"N_{i}={n} outside [0, C({self.m},{i})]")

    @classmethod
    def of(cls, counts: Sequence[int]) -> CutVector:
        return cls(tuple(int(n) for n in counts), len(counts) - 1)

    def __getitem__(self, i: int) -> int | None:
        return self.counts[i]

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self) -> Iterator[int | None]:
        return iter(self.counts)

    @property
    def complete(self) -> bool:
        return all(n is not None for n in self.counts)

    @property
    def mclc_d(self) -> int | None:
        """Smallest size with a cut; None if not determinable or no cut exists."""
        for i, n in enumerate(self.counts):
            if n is None:
                return None
            if n > 0:
                return i
        return None

    @property
    def colex_c(self) -> int | None:
        """Largest size with a non-cut (``N_i < C(m, i)``)."""
        c = None
        for i, n in enumerate(self.counts):
            if n is None:
                return None
            if n < math.comb(self.m, i):
                c = i
        return c

    def require_complete(self) -> tuple[int, ...]:
        if not self.complete:
            raise ValueError("cut vector is truncated; enumerate all sizes first")
        return tuple(self.counts)  # type: ignore[arg-type]

    def reversed(self) -> CutVector:
        return CutVector(self.counts[::-1], self.m)

    def failure_probability(self, p: float | Fraction) -> float | Fraction:
        return failure_probability(self, p)


@dataclass(frozen=True)
class FailurePolynomial:
    """``F(p) = sum_i N_i p^i (1-p)^(m-i)`` built from a complete cut vector."""

    vector: CutVector

    def __post_init__(self) -> None:
        self.vector.require_complete()

    def __call__(self, p: float | Fraction) -> float | Fraction:
        return failure_probability(self.vector, p)

    def coefficients(self) -> list[int]:
        """Exact power-basis coefficients ``a_k`` with ``F(p) = sum a_k p^k``."""
        m = self.vector.m
        out = [0] * (m + 1)
        for i, n in enumerate(self.vector.counts):
            if not n:
                continue
            # p^i (1-p)^(m-i) = sum_r C(m-i, r) (-1)^r p^(i+r)
            for r in range(m - i + 1):
                out[i + r] += n * math.comb(m - i, r) * (-1) ** r
        return out

    def reliability_coefficients(self) -> list[int]:
        coeffs = [-a for a in self.coefficients()]
        coeffs[0] += 1
        return coeffs


@dataclass(frozen=True)
class SpanningTreeStats:
    """Size of the min cross-layer spanning tree and how many minimum ones exist."""

    mclst_size: int
    mclst_count: int


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    trials: int
    seed: int
    stderr: float
    generator: str = "numpy.random.PCG64"


def failure_probability(vector: CutVector, p: float | Fraction) -> float | Fraction:
    """Evaluate the failure polynomial at ``p``.

    Floats are summed with ``math.fsum``; a ``Fraction`` argument gives an
    exact rational result.
    """
    counts = vector.require_complete()
    m = vector.m
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    if isinstance(p, Fraction):
        q = 1 - p
        return sum((n * p**i * q ** (m - i) for i, n in enumerate(counts) if n), Fraction(0))
    p = float(p)
    q = 1.0 - p
    return math.fsum(n * p**i * q ** (m - i) for i, n in enumerate(counts) if n)


def _cut_flags(routing: LightpathRouting, killed: np.ndarray) -> np.ndarray:
    """Boolean cut flag per killed-logical-link pattern."""
    conn = routing.logical.connectivity
    patterns, inverse = np.unique(killed, return_inverse=True)
    full = conn.full
    flags = np.fromiter(
        (conn.count(full & ~int(k)) > 1 for k in patterns), dtype=bool, count=len(patterns)
    )
    return flags[inverse.reshape(-1)]


def _killed_patterns(routing: LightpathRouting, states: np.ndarray) -> np.ndarray:
    if len(routing.routes) > 63:
        raise EnumerationLimitError("vectorized enumeration supports at most 63 logical links")
    killed = np.zeros(states.shape, dtype=np.uint64)
    for i, kill in enumerate(routing.kill_masks):
        if kill:
            hit = ((states >> np.uint64(i)) & np.uint64(1)).astype(bool)
            killed[hit] |= np.uint64(kill)
    return killed


def _bitscan_counts(routing: LightpathRouting) -> list[int]:
    m = routing.m
    total = [0] * (m + 1)
    chunk = 1 << min(m, _CHUNK_BITS)
    for lo in range(0, 1 << m, chunk):
        states = np.arange(lo, lo + chunk, dtype=np.uint64)
        cut = _cut_flags(routing, _killed_patterns(routing, states))
        sizes = np.bitwise_count(states[cut])
        for i, n in enumerate(np.bincount(sizes, minlength=m + 1).tolist()):
            total[i] += n
    return total


def _states_of_size(m: int, size: int) -> Iterator[int]:
    for combo in combinations(range(m), size):
        bits = 0
        for i in combo:
            bits |= 1 << i
        yield bits


def count_cuts_of_size(routing: LightpathRouting, size: int, limit: int | None = None) -> int:
    """Number of cross-layer cuts with exactly ``size`` failed links.

    ``limit`` stops counting once reached (used for early-exit probes).
    """
    conn = routing.logical.connectivity
    kills = routing.kill_masks
    full = conn.full
    n = 0
    for combo in combinations(range(routing.m), size):
        killed = 0
        for i in combo:
            killed |= kills[i]
        if conn.count(full & ~killed) > 1:
            n += 1
            if limit is not None and n >= limit:
                break
    return n


def _stratified_counts(routing: LightpathRouting, max_size: int) -> list[int | None]:
    m = routing.m
    counts: list[int | None] = [None] * (m + 1)
    for i in range(min(max_size, m) + 1):
        counts[i] = count_cuts_of_size(routing, i)
        if counts[i] == math.comb(m, i) and i > 0:
            for j in range(i + 1, m + 1):
                counts[j] = math.comb(m, j)
            break
    return counts


def cut_vector(
    routing: LightpathRouting,
    max_size: int | None = None,
    *,
    ceiling: int = DEFAULT_CEILING,
    method: str = "auto",
) -> CutVector:
    """Count cross-layer cuts of every size.

    Args:
        routing: Routing to analyze.
        max_size: Enumerate only sizes ``<= max_size``; larger counts stay
            unknown unless forced by monotone completion.
        ceiling: Largest ``m`` accepted for full enumeration.
        method: ``"bitscan"``, ``"stratified"`` or ``"auto"``.

    Raises:
        EnumerationLimitError: ``m`` exceeds ``ceiling`` and ``max_size`` is absent.
    """
    m = routing.m
    if max_size is None and m > ceiling:
        raise EnumerationLimitError(
            f"m={m} exceeds the enumeration ceiling {ceiling}; pass max_size or use monte_carlo_failure"
        )
    if method not in ("auto", "bitscan", "stratified"):
        raise ValueError(f"unknown method {method!r}")
    if max_size is not None or method == "stratified":
        counts = _stratified_counts(routing, m if max_size is None else max_size)
    else:
        counts = _bitscan_counts(routing)
    return CutVector(tuple(counts), m)


def mclc(routing: LightpathRouting) -> tuple[int, int] | None:
    """Size ``d`` of the min cross-layer cut and the number ``N_d`` of such cuts.

    Sizes are visited in increasing order, so only states of size ``<= d``
    are generated. Returns None when no cut exists (single logical node).
    """
    for i in range(1, routing.m + 1):
        n = count_cuts_of_size(routing, i)
        if n:
            return i, n
    return None


def mclst(routing: LightpathRouting, vector: CutVector | None = None) -> SpanningTreeStats:
    """Min cross-layer spanning tree via survival sets of increasing size.

    A survival set of minimum size is automatically minimal, so the count is
    the number of minimum-size sets whose survival keeps the logical network
    connected. When a complete ``vector`` is supplied, the identity
    ``size == m - colex_c`` is checked.
    """
    m = routing.m
    conn = routing.logical.connectivity
    kills = routing.kill_masks
    everything = (1 << m) - 1
    stats = None
    for size in range(m + 1):
        found = 0
        for survive in _states_of_size(m, size):
            failed = everything & ~survive
            killed = 0
            for i in range(m):
                if failed >> i & 1:
                    killed |= kills[i]
            if conn.count(conn.full & ~killed) == 1:
                found += 1
        if found:
            stats = SpanningTreeStats(size, found)
            break
    assert stats is not None  # surviving everything keeps G_L connected
    if vector is not None and vector.complete:
        c = vector.colex_c
        if c is None or stats.mclst_size != m - c:
            raise RuntimeError(f"MCLST size {stats.mclst_size} disagrees with m - c = {m} - {c}")
        if stats.mclst_count != math.comb(m, c) - vector[c]:
            raise RuntimeError("MCLST count disagrees with the number of size-c non-cuts")
    return stats


def monte_carlo_failure(
    routing: LightpathRouting, p: float, trials: int, seed: int = 0
) -> MonteCarloEstimate:
    """Estimate ``F(p)`` by sampling independent link failures.

    Each trial draws ``m`` uniform variates; link ``i`` fails when its
    variate is below ``p``. Results are reproducible for a given seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    m = routing.m
    if m > 64:
        raise ModelError("state-range", "Monte Carlo sampling supports at most 64 physical links")
    rng = np.random.default_rng(seed)
    weights = np.left_shift(np.uint64(1), np.arange(m, dtype=np.uint64))
    failures = 0
    remaining = trials
    while remaining:
        n = min(remaining, _MC_CHUNK)
        flips = rng.random((n, m)) < p
        states = (flips.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        failures += int(_cut_flags(routing, _killed_patterns(routing, states)).sum())
        remaining -= n
    est = failures / trials
    return MonteCarloEstimate(est, trials, seed, math.sqrt(est * (1 - est) / trials))
