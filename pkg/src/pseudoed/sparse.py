"""Optimal non-crossing matching restricted to a sparse candidate edge set."""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Iterable, Sequence

from .errors import AlignmentError
from .script import EditScript, script_from_pairs
from .text import Text, WorkMeter, symbols_of

Edge = tuple[int, int]


def canonical_edges(edges: Iterable[Edge]) -> list[Edge]:
    """Deduplicate and order by increasing r, then decreasing s."""
    return sorted(set(edges), key=lambda e: (e[0], -e[1]))


def max_restricted_alignment(edges: Iterable[Edge], meter: WorkMeter | None = None,
                             presorted: bool = False) -> list[Edge]:
    """Maximum-cardinality non-crossing subset of ``edges``.

    Sorting by r and then by descending s turns the problem into a longest
    strictly increasing subsequence on s: edges sharing an r can never both be
    picked because their s values arrive in decreasing order.

    Args:
        edges: (r, s) pairs.
        meter: charged one unit per edge.
        presorted: skip canonicalization when the caller already produced
            duplicate-free edges in (r ascending, s descending) order.
    """
    order = list(edges) if presorted else canonical_edges(edges)
    if meter is not None:
        meter.charge(len(order), "sparse_align")
    tails: list[int] = []       # smallest tail s of an increasing run of each length
    tail_edge: list[int] = []   # index into order of that tail
    back = [-1] * len(order)
    for k, (_, s) in enumerate(order):
        pos = bisect_left(tails, s)
        if pos == len(tails):
            tails.append(s)
            tail_edge.append(k)
        else:
            tails[pos] = s
            tail_edge[pos] = k
        back[k] = tail_edge[pos - 1] if pos else -1
    out: list[Edge] = []
    k = tail_edge[-1] if tail_edge else -1
    while k >= 0:
        out.append(order[k])
        k = back[k]
    out.reverse()
    return out


def script_from_alignment(u: Text | Sequence[int], v: Text | Sequence[int],
                          alignment: Sequence[Edge], substitutions: bool = False) -> EditScript:
    """Indel script that keeps exactly the aligned letters.

    The script has ``|u| + |v| - 2|A|`` ops; with ``substitutions`` each gap
    is charged ``max(a, b)`` instead of ``a + b``.

    Raises:
        AlignmentError: a pair is out of range, crossing, or joins unequal symbols.
    """
    a, b = symbols_of(u), symbols_of(v)
    prev_r, prev_s = 0, 0
    for r, s in alignment:
        if not (1 <= r <= len(a) and 1 <= s <= len(b)):
            raise AlignmentError(f"pair {(r, s)} outside {len(a)}x{len(b)}")
        if r <= prev_r or s <= prev_s:
            raise AlignmentError(f"pair {(r, s)} crosses or repeats {(prev_r, prev_s)}")
        if a[r - 1] != b[s - 1]:
            raise AlignmentError(f"pair {(r, s)} joins unequal symbols {a[r - 1]} and {b[s - 1]}")
        prev_r, prev_s = r, s
    return script_from_pairs(a, b, alignment, substitutions)
