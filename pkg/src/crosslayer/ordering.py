"""Lexicographic and colexicographic comparison of cut vectors.

Each comparison reports the index where two vectors first differ, the depth
``k`` of partial-sum dominance, and a failure-probability regime on which the
smaller vector is guaranteed to have the smaller failure polynomial. All
bound arithmetic is done with :class:`fractions.Fraction`.

The high-regime results are computed by reversing both vectors
(``N'_i = N_{m-i}``) and substituting ``q = 1 - p``, which turns every
colexicographic statement into a lexicographic one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .reliability import CutVector

VectorLike = Union[CutVector, Sequence[int]]
HALF = Fraction(1, 2)


class Direction(enum.Enum):
    FIRST_SMALLER = "first-smaller"
    SECOND_SMALLER = "second-smaller"
    EQUAL = "equal"


class Dominance(enum.Enum):
    UNIFORM = "uniform-dominant"
    LOW_REGIME = "low-regime"
    HIGH_REGIME = "high-regime"
    BOTH_PARTIAL = "both-partial"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class LexComparison:
    """Outcome of a (co)lexicographic comparison.

    When ``direction`` is strict, the remaining fields describe the smaller
    vector against the larger one. For ``order == "colex"``, ``first_diff``
    is the natural index of the *last* differing entry, while ``deltas``,
    ``residuals`` and ``bounds`` are indexed by ``j`` in reversed coordinates
    and ``bounds`` holds the ``C_j = 1 - B'_j`` terms.

    Attributes:
        order: ``"lex"`` or ``"colex"``.
        direction: Which argument is smaller.
        first_diff: Index where the vectors first (lex) or last (colex) differ.
        degree: Dominance depth ``k``.
        deltas: ``(j, Delta_j)`` pairs for ``j`` in the dominance window.
        residuals: ``(j, delta_j)`` pairs; None at ``j == m``.
        bounds: ``(j, B_j)`` or ``(j, C_j)`` pairs.
        p0: Regime endpoint: dominance holds for ``p <= p0`` (lex) or
            ``p >= p0`` (colex).
        promoted: True when some ``delta_j <= 0`` extended dominance to the
            whole vector.
    """

    order: str
    direction: Direction
    first_diff: int | None = None
    degree: int | None = None
    deltas: tuple[tuple[int, int], ...] = ()
    residuals: tuple[tuple[int, Fraction | None], ...] = ()
    bounds: tuple[tuple[int, Fraction], ...] = ()
    p0: Fraction | None = None
    promoted: bool = False

    @property
    def strict(self) -> bool:
        return self.direction is not Direction.EQUAL


def _counts(v: VectorLike) -> tuple[int, ...]:
    if isinstance(v, CutVector):
        return v.require_complete()
    return tuple(int(n) for n in v)


def _pair(n: VectorLike, m: VectorLike) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    a, b = _counts(n), _counts(m)
    if len(a) != len(b):
        raise ValueError(f"cut vectors have different m ({len(a) - 1} vs {len(b) - 1})")
    return a, b, len(a) - 1


def forward_sums(v: VectorLike) -> tuple[int, ...]:
    """Number of cuts of size at most ``k``, for ``k = 0..m``."""
    return tuple(accumulate(_counts(v)))


def backward_sums(v: VectorLike) -> tuple[int, ...]:
    """Number of cuts of size at least ``m - k``, for ``k = 0..m``."""
    return tuple(accumulate(_counts(v)[::-1]))


def _first_diff(a: Sequence[int], b: Sequence[int]) -> int | None:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return None


def lex_compare(n: VectorLike, m: VectorLike) -> LexComparison:
    """Lexicographic comparison; strict results carry the low-regime bound."""
    a, b, size = _pair(n, m)
    d = _first_diff(a, b)
    if d is None:
        return LexComparison("lex", Direction.EQUAL)
    if a[d] < b[d]:
        return _low_regime(a, b, Direction.FIRST_SMALLER)
    return _low_regime(b, a, Direction.SECOND_SMALLER)


def _degree(a: Sequence[int], b: Sequence[int], d: int) -> int:
    fa, fb = list(accumulate(a)), list(accumulate(b))
    k = 0
    for i in range(d, len(a)):
        if fa[i] > fb[i]:
            break
        k += 1
    return k


def _require_smaller(a: Sequence[int], b: Sequence[int]) -> int:
    d = _first_diff(a, b)
    if d is None or a[d] > b[d]:
        raise ValueError("first cut vector is not lexicographically smaller than the second")
    return d


def k_lex_degree(n: VectorLike, m: VectorLike) -> int:
    """Largest ``k`` with forward partial sums of ``n`` dominated on ``[d, d+k-1]``."""
    a, b, _ = _pair(n, m)
    return _degree(a, b, _require_smaller(a, b))


def k_colex_degree(n: VectorLike, m: VectorLike) -> int:
    a, b, _ = _pair(n, m)
    return k_lex_degree(a[::-1], b[::-1])


def low_regime_bound_simple(n: VectorLike, m: VectorLike) -> Fraction:
    """Regime ``p < (d+1)(M_d - N_d) / (2 m C(m, d))`` from the first difference only."""
    a, b, size = _pair(n, m)
    d = _require_smaller(a, b)
    return Fraction((d + 1) * (b[d] - a[d]), 2 * size * math.comb(size, d))


def _low_regime(a: Sequence[int], b: Sequence[int], direction: Direction) -> LexComparison:
    m = len(a) - 1
    d = _require_smaller(a, b)
    k = _degree(a, b, d)
    fa, fb = list(accumulate(a)), list(accumulate(b))
    deltas, residuals, bounds = [], [], []
    promoted = False
    for j in range(d, d + k):
        delta = fb[j] - fa[j]
        deltas.append((j, delta))
        if j == m:
            residuals.append((j, None))
            bounds.append((j, HALF))
            continue
        resid = max(Fraction(a[i] - b[i], math.comb(m, i)) for i in range(j + 1, m + 1))
        residuals.append((j, resid))
        if resid <= 0:
            # no later coefficient favours the larger vector: dominance runs to j = m
            promoted = True
            bounds.append((j, HALF))
        elif delta == 0:
            bounds.append((j, Fraction(0)))
        else:
            bounds.append((j, 1 / (Fraction(m, j + 1) + resid * math.comb(m, j + 1) / delta)))
    if promoted:
        k = m - d + 1
    p0 = min(HALF, max(bj for _, bj in bounds))
    if not 0 <= p0 <= HALF:
        raise AssertionError(f"low-regime bound {p0} outside [0, 1/2]")
    return LexComparison("lex", direction, d, k, tuple(deltas), tuple(residuals), tuple(bounds), p0, promoted)


def low_regime_bound(n: VectorLike, m: VectorLike) -> LexComparison:
    """Partial-sum regime bound ``p0_l = min(1/2, max_j B_j)`` for a lex-smaller ``n``."""
    a, b, _ = _pair(n, m)
    _require_smaller(a, b)
    return _low_regime(a, b, Direction.FIRST_SMALLER)


def colex_compare(n: VectorLike, m: VectorLike) -> LexComparison:
    """Colexicographic comparison (from the largest cut size down)."""
    a, b, _ = _pair(n, m)
    rev = lex_compare(a[::-1], b[::-1])
    if not rev.strict:
        return LexComparison("colex", Direction.EQUAL)
    return _as_colex(rev, len(a) - 1)


def _as_colex(rev: LexComparison, m: int) -> LexComparison:
    return LexComparison(
        "colex",
        rev.direction,
        m - rev.first_diff,
        rev.degree,
        rev.deltas,
        rev.residuals,
        tuple((j, 1 - bj) for j, bj in rev.bounds),
        1 - rev.p0,
        rev.promoted,
    )


def high_regime_bound(n: VectorLike, m: VectorLike) -> LexComparison:
    """Regime ``p >= p0_h`` on which a colex-smaller ``n`` fails less often.

    ``p0_h = 1 - min(1/2, max_j B'_j) = max(1/2, min_j C_j)`` with ``B'`` the
    low-regime terms of the reversed vectors.
    """
    a, b, size = _pair(n, m)
    ra, rb = a[::-1], b[::-1]
    _require_smaller(ra, rb)
    result = _as_colex(_low_regime(ra, rb, Direction.FIRST_SMALLER), size)
    if not HALF <= result.p0 <= 1:
        raise AssertionError(f"high-regime bound {result.p0} outside [1/2, 1]")
    return result


def elementwise_dominates(n: VectorLike, m: VectorLike) -> bool:
    a, b, _ = _pair(n, m)
    return all(x <= y for x, y in zip(a, b))


def forward_dominates(n: VectorLike, m: VectorLike) -> bool:
    return all(x <= y for x, y in zip(forward_sums(n), forward_sums(m)))


def backward_dominates(n: VectorLike, m: VectorLike) -> bool:
    return all(x <= y for x, y in zip(backward_sums(n), backward_sums(m)))


@dataclass(frozen=True)
class DominanceReport:
    """Classification of a pair of cut vectors.

    ``winner`` is 0 or 1 for the argument guaranteed better in the stated
    class, or None when the vectors are equal or the pair crosses.
    """

    kind: Dominance
    winner: int | None
    lex: LexComparison
    colex: LexComparison


def dominance_check(n: VectorLike, m: VectorLike) -> DominanceReport:
    """Classify a pair by the strongest guarantee that holds.

    In order: elementwise dominance (``uniform-dominant``); forward and
    backward partial-sum dominance (``both-partial``, also uniform); lex and
    colex winners differ (``incomparable``: each routing wins one regime);
    forward partial sums only (``low-regime``, winner better for all
    ``p <= 1/2``); backward only (``high-regime``, ``p >= 1/2``); otherwise
    ``incomparable``.
    """
    a, b, _ = _pair(n, m)
    lex, colex = lex_compare(a, b), colex_compare(a, b)
    if a == b:
        return DominanceReport(Dominance.UNIFORM, None, lex, colex)
    for w, (x, y) in enumerate(((a, b), (b, a))):
        if elementwise_dominates(x, y):
            return DominanceReport(Dominance.UNIFORM, w, lex, colex)
    for w, (x, y) in enumerate(((a, b), (b, a))):
        if forward_dominates(x, y) and backward_dominates(x, y):
            return DominanceReport(Dominance.BOTH_PARTIAL, w, lex, colex)
    if lex.direction != colex.direction:
        return DominanceReport(Dominance.INCOMPARABLE, None, lex, colex)
    w = 0 if lex.direction is Direction.FIRST_SMALLER else 1
    x, y = (a, b) if w == 0 else (b, a)
    if forward_dominates(x, y):
        return DominanceReport(Dominance.LOW_REGIME, w, lex, colex)
    if backward_dominates(x, y):
        return DominanceReport(Dominance.HIGH_REGIME, w, lex, colex)
    return DominanceReport(Dominance.INCOMPARABLE, w, lex, colex)


def difference_sign(n: VectorLike, m: VectorLike, p: Fraction) -> int:
    """Exact sign of ``F_M(p) - F_N(p)`` at a rational ``p``."""
    a, b, size = _pair(n, m)
    p = Fraction(p)
    num, den = p.numerator, p.denominator
    rest = den - num
    total = sum((y - x) * num**i * rest ** (size - i) for i, (x, y) in enumerate(zip(a, b)) if x != y)
    return (total > 0) - (total < 0)


def crossover_points(n: VectorLike, m: VectorLike, grid: int = 4096) -> list[float]:
    """Roots of ``F_N(p) = F_M(p)`` in the open interval (0, 1).

    Sign changes are bracketed on a uniform grid and refined with Brent's
    method; roots of even multiplicity are not reported.
    """
    a, b, size = _pair(n, m)
    diff = [y - x for x, y in zip(a, b)]

    def f(p: float) -> float:
        q = 1.0 - p
        return math.fsum(c * p**i * q ** (size - i) for i, c in enumerate(diff) if c)

    xs = np.linspace(0.0, 1.0, grid + 1)[1:-1]
    vals = [f(x) for x in xs]
    roots = []
    for x0, x1, v0, v1 in zip(xs, xs[1:], vals, vals[1:]):
        if v0 == 0:
            roots.append(float(x0))
        elif v0 * v1 < 0:
            roots.append(brentq(f, x0, x1, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots
