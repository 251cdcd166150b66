"""The Clean Alignment Problem.

Two sequences of lengths ``u_len`` and ``v_len`` are related only through a
comparison function ``f(i, j)`` (1-based).  An alignment is a non-crossing
matching using pairs with ``f = 1``.  Its cost is asymmetric: every unmatched
u-letter costs one, and every index ``i`` such that ``v_i .. v_{i+6}`` are all
unmatched costs one.  An alignment is *clean* when each of its pairs is the
only f-edge at both endpoints.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .errors import GuardRefusal, InvalidInput
from .text import Rng

Edge = tuple[int, int]
WINDOW = 7
BRUTE_FORCE_LIMIT = 64


class MatchOracle:
    """Memoizing wrapper around a 0/1 comparison function on 1-based indices."""

    def __init__(self, fn: Callable[[int, int], bool], u_len: int, v_len: int) -> None:
        self.u_len = u_len
        self.v_len = v_len
        self._fn = fn
        self._memo: dict[Edge, bool] = {}
        self.evaluations = 0  # distinct cells evaluated
        self.queries = 0      # cells asked for, repeats included

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], u_len: int, v_len: int) -> MatchOracle:
        table = frozenset(edges)
        for i, j in table:
            if not (1 <= i <= u_len and 1 <= j <= v_len):
                raise InvalidInput(f"edge {(i, j)} outside {u_len}x{v_len}")
        return cls(lambda i, j: (i, j) in table, u_len, v_len)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> MatchOracle:
        if not rows:
            return cls(lambda i, j: False, 0, 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InvalidInput("ragged 0/1 matrix")
        edges = [(i + 1, j + 1) for i, r in enumerate(rows) for j, b in enumerate(r) if b]
        return cls.from_edges(edges, len(rows), width)

    def query(self, i: int, j: int) -> bool:
        self.queries += 1
        key = (i, j)
        hit = self._memo.get(key)
        if hit is None:
            if not (1 <= i <= self.u_len and 1 <= j <= self.v_len):
                raise IndexError(f"query {key} outside {self.u_len}x{self.v_len}")
            hit = bool(self._fn(i, j))
            self._memo[key] = hit
            self.evaluations += 1
        return hit

    __call__ = query

    def edges(self) -> list[Edge]:
        """Every pair with f = 1 (evaluates the whole table)."""
        return [(i, j) for i in range(1, self.u_len + 1)
                for j in range(1, self.v_len + 1) if self.query(i, j)]


@dataclass(frozen=True)
class BlockAlignment:
    pairs: tuple[Edge, ...] = ()
    depths: tuple[int, ...] = ()  # recursion depth at which each pair was pivoted

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def check(self, f: MatchOracle) -> None:
        """Raise InvalidInput unless non-crossing and f-consistent."""
        prev = (0, 0)
        for i, j in self.pairs:
            if i <= prev[0] or j <= prev[1]:
                raise InvalidInput(f"pair {(i, j)} crosses {prev}")
            if not f.query(i, j):
                raise InvalidInput(f"pair {(i, j)} is not an edit match")
            prev = (i, j)


@dataclass(frozen=True)
class CleanCost:
    x_portion: int
    y_portion: int

    @property
    def total(self) -> int:
        return self.x_portion + self.y_portion

    def as_dict(self) -> dict[str, int]:
        return {"x_portion": self.x_portion, "y_portion": self.y_portion, "total": self.total}


def _windows(run: int) -> int:
    return max(0, run - (WINDOW - 1))


def alignment_cost(alignment: BlockAlignment | Sequence[Edge], u_len: int, v_len: int) -> CleanCost:
    """Asymmetric cost of an alignment between sequences of the given lengths."""
    pairs = list(alignment)
    matched = sorted(j for _, j in pairs)
    y_portion, prev = 0, 0
    for j in matched + [v_len + 1]:
        y_portion += _windows(j - prev - 1)
        prev = j
    return CleanCost(u_len - len(pairs), y_portion)


def solve_clean_alignment(f: MatchOracle, rng: Rng, attempts_coeff: int = 100) -> BlockAlignment:
    """Randomized pivot recursion for the Clean Alignment Problem.

    Each subproblem pairs a u-chunk with a v-chunk.  It is abandoned when the
    chunk sizes are too unbalanced (``|v| >= 8|u| + 12`` or ``|u| >= 2|v|``) or
    ``u`` is empty.  Otherwise up to ``ceil(attempts_coeff * log2 n)`` times a
    pivot is drawn from the middle half of the u-chunk and the whole v-chunk is
    scanned; a pivot matching exactly one v-letter becomes an edge and splits
    the subproblem in two.  ``n`` is the root problem size.
    """
    if attempts_coeff < 1:
        raise InvalidInput("attempts_coeff must be at least 1")
    n = max(f.u_len, f.v_len, 2)
    attempts = math.ceil(attempts_coeff * math.log2(n))
    found: list[tuple[int, int, int]] = []
    stack = [(1, f.u_len, 1, f.v_len, 0)]
    while stack:
        u_lo, u_hi, v_lo, v_hi, depth = stack.pop()
        a, b = u_hi - u_lo + 1, v_hi - v_lo + 1
        if b >= 8 * a + 12 or a >= 2 * b or a == 0:
            continue
        first, last = (a + 3) // 4, (3 * a + 3) // 4
        rows: dict[int, list[int]] = {}
        for _ in range(attempts):
            i = u_lo + rng.integers(first, last + 1) - 1
            hits = rows.get(i)
            if hits is None:
                hits = [j for j in range(v_lo, v_hi + 1) if f.query(i, j)]
                rows[i] = hits
            else:
                f.queries += b  # a repeated scan is charged but answered from memory
            if len(hits) == 1:
                j = hits[0]
                found.append((i, j, depth))
                stack.append((i + 1, u_hi, j + 1, v_hi, depth + 1))
                stack.append((u_lo, i - 1, v_lo, j - 1, depth + 1))
                break
    found.sort()
    return BlockAlignment(tuple((i, j) for i, j, _ in found), tuple(d for _, _, d in found))


def clean_edges(f: MatchOracle) -> list[Edge]:
    """Edges whose endpoints both have degree exactly one in f."""
    edges = f.edges()
    deg_u: dict[int, int] = {}
    deg_v: dict[int, int] = {}
    for i, j in edges:
        deg_u[i] = deg_u.get(i, 0) + 1
        deg_v[j] = deg_v.get(j, 0) + 1
    return [(i, j) for i, j in edges if deg_u[i] == 1 and deg_v[j] == 1]


def brute_force_clean_opt(f: MatchOracle) -> tuple[BlockAlignment, CleanCost]:
    """Minimum-cost clean alignment by dynamic programming over eligible edges.

    Raises:
        GuardRefusal: either side is longer than 64.
    """
    if f.u_len > BRUTE_FORCE_LIMIT or f.v_len > BRUTE_FORCE_LIMIT:
        raise GuardRefusal(f"brute force limited to sides <= {BRUTE_FORCE_LIMIT}, "
                           f"got {f.u_len}x{f.v_len}")
    eligible = sorted(clean_edges(f))
    # best[k]: y-windows before edge k, minus one per matched u-letter, over chains ending at k
    best: list[int] = []
    parent: list[int] = []
    for k, (i, j) in enumerate(eligible):
        value, link = _windows(j - 1), -1
        for q in range(k):
            pi, pj = eligible[q]
            if pi < i and pj < j:
                cand = best[q] + _windows(j - pj - 1)
                if cand < value:
                    value, link = cand, q
        best.append(value - 1)
        parent.append(link)
    total, end = _windows(f.v_len), -1
    for k, (_, j) in enumerate(eligible):
        cand = best[k] + _windows(f.v_len - j)
        if cand < total:
            total, end = cand, k
    chain = []
    while end >= 0:
        chain.append(eligible[end])
        end = parent[end]
    chain.reverse()
    alignment = BlockAlignment(tuple(chain), (0,) * len(chain))
    cost = alignment_cost(alignment, f.u_len, f.v_len)
    assert cost.total == total + f.u_len
    return alignment, cost
