"""Exact edit distance: the quadratic table and the low-distance algorithm.

``ed_bounded`` follows the diagonal-transition scheme: for each error count
``e`` it keeps, per diagonal ``d = j - i``, the furthest row reachable with
``e`` edits and then slides along matching symbols.  Work is charged as one
unit per (e, d) cell plus one unit per symbol comparison made while sliding,
which gives ``O(|u| + |v| + k^2)`` units on strings without long spurious
repeats.  The run is resumable, so callers can grant it work in slices.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .errors import GuardRefusal
from .script import Delete, EditScript, Insert, Op, Substitute
from .text import Text, WorkMeter, symbols_of

EXACT_SCRIPT_GUARD = 1 << 26  # cells of stored table when a script is requested


def ed_exact(u: Text | Sequence[int], v: Text | Sequence[int], *, script: bool = False,
             meter: WorkMeter | None = None) -> int | tuple[int, EditScript]:
    """Levenshtein distance by the full dynamic-programming table.

    Returns the distance, or ``(distance, script)`` when ``script`` is set.
    Charges ``|u| * |v|`` units.
    """
    a = np.asarray(symbols_of(u), dtype=np.int16)
    b = np.asarray(symbols_of(v), dtype=np.int16)
    n, m = len(a), len(b)
    if meter is not None:
        meter.charge(n * m, "exact")
    if script and (n + 1) * (m + 1) > EXACT_SCRIPT_GUARD:
        raise GuardRefusal(f"script table of {(n + 1) * (m + 1)} cells exceeds guard {EXACT_SCRIPT_GUARD}")
    cols = np.arange(m + 1, dtype=np.int32)
    prev = cols.copy()
    rows = [prev] if script else None
    for i in range(1, n + 1):
        cur = np.empty(m + 1, dtype=np.int32)
        cur[0] = i
        np.minimum(prev[:-1] + (b != a[i - 1]), prev[1:] + 1, out=cur[1:])
        # left-to-right insertions: cur[j] = min_k cur[k] + (j - k)
        cur -= cols
        np.minimum.accumulate(cur, out=cur)
        cur += cols
        if rows is not None:
            rows.append(cur)
        prev = cur
    dist = int(prev[m])
    if not script:
        return dist
    return dist, _traceback_table(symbols_of(u), symbols_of(v), rows)


def _traceback_table(u: tuple[int, ...], v: tuple[int, ...], rows: list[np.ndarray]) -> EditScript:
    i, j = len(u), len(v)
    ops: list[Op] = []
    while i > 0 or j > 0:
        here = rows[i][j]
        if i > 0 and j > 0 and u[i - 1] == v[j - 1] and rows[i - 1][j - 1] == here:
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and rows[i - 1][j - 1] + 1 == here:
            ops.append(Substitute(i, v[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and rows[i - 1][j] + 1 == here:
            ops.append(Delete(i))
            i -= 1
        else:
            ops.append(Insert(i + 1, v[j - 1]))
            j -= 1
    ops.reverse()
    return EditScript(tuple(ops))


def _common_extension(u: tuple[int, ...], v: tuple[int, ...], i: int, j: int, cap: int) -> int:
    """Length of the longest common extension at (i, j), at most ``cap``."""
    if cap <= 0 or u[i] != v[j]:
        return 0
    k, step = 1, 8
    while k < cap:
        s = min(step, cap - k)
        if u[i + k:i + k + s] == v[j + k:j + k + s]:
            k += s
            step *= 2
            continue
        lo, hi = 0, s  # u/v agree on [k, k+lo), differ somewhere in [k, k+hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if u[i + k:i + k + mid] == v[j + k:j + k + mid]:
                lo = mid
            else:
                hi = mid
        return k + lo
    return k


class LowDistanceRun:
    """Resumable exact edit distance in ``O(|u| + |v| + d^2)`` for distance ``d``.

    ``advance(budget)`` performs at most ``budget`` further work units and
    returns True once finished; ``distance`` is then the exact distance, or
    None if it exceeds ``limit``.
    """

    def __init__(self, u: Text | Sequence[int], v: Text | Sequence[int],
                 limit: int | None = None, meter: WorkMeter | None = None) -> None:
        self.u = symbols_of(u)
        self.v = symbols_of(v)
        self.limit = len(self.u) + len(self.v) if limit is None else limit
        self.meter = meter if meter is not None else WorkMeter()
        self.units = 0
        self.finished = False
        self.distance: int | None = None
        self._levels: list[list[int]] = []
        self._stop_at = 0
        self._steps = self._run()

    def advance(self, budget: int | float = math.inf) -> bool:
        if self.finished:
            return True
        self._stop_at = self.units + budget
        for _ in self._steps:
            return False  # the run only yields when out of budget
        self.finished = True
        return True

    def _charge(self, k: int) -> None:
        self.units += k
        self.meter.charge(k, "low_distance")

    def _run(self):
        u, v = self.u, self.v
        n, m = len(u), len(v)
        target = m - n
        if abs(target) > self.limit:
            return
        prev: list[int] = []
        for e in range(self.limit + 1):
            lo, hi = max(-e, -n), min(e, m)
            cur = [0] * (2 * e + 1)  # cur[d + e]
            for d in range(lo, hi + 1):
                while self.units + 1 > self._stop_at:
                    yield
                self._charge(1)
                if e == 0:
                    i = 0
                else:
                    top = min(n, m - d)
                    i = -1
                    if -e < d < e:
                        i = min(prev[d + e - 1] + 1, top)  # substitution
                    if d - 1 >= -(e - 1):
                        i = max(i, min(prev[d - 1 + e - 1], top))  # insertion
                    if d + 1 <= e - 1:
                        i = max(i, min(prev[d + 1 + e - 1] + 1, top))  # deletion
                    i = max(i, -d, 0)
                # slide along matches, pausing whenever the budget runs out
                while i < n and i + d < m:
                    room = self._stop_at - self.units
                    if room < 1:
                        yield
                        continue
                    span = min(n - i, m - i - d)
                    k = _common_extension(u, v, i, i + d, min(span, room))
                    i += k
                    if k < span and k < room:
                        self._charge(k + 1)  # k matches and one mismatch
                        break
                    self._charge(k)
                cur[d + e] = i
            self._levels.append(cur)
            if -e <= target <= e and cur[target + e] == n:
                self.distance = e
                return
            prev = cur

    def script(self) -> EditScript:
        """Optimal script for a finished run that found the distance."""
        if not self.finished or self.distance is None:
            raise ValueError("no distance has been established")
        u, v, levels = self.u, self.v, self._levels

        def reach(e: int, i: int, d: int) -> bool:
            # is (i, i + d) reachable with at most e edits
            return e >= 0 and -e <= d <= e and levels[e][d + e] >= i

        i, j, e = len(u), len(v), self.distance
        ops: list[Op] = []
        while i > 0 or j > 0:
            if i > 0 and j > 0 and u[i - 1] == v[j - 1]:
                i, j = i - 1, j - 1
            elif i > 0 and j > 0 and reach(e - 1, i - 1, j - i):
                ops.append(Substitute(i, v[j - 1]))
                i, j, e = i - 1, j - 1, e - 1
            elif i > 0 and reach(e - 1, i - 1, j - i + 1):
                ops.append(Delete(i))
                i, e = i - 1, e - 1
            else:
                ops.append(Insert(i + 1, v[j - 1]))
                j, e = j - 1, e - 1
        ops.reverse()
        return EditScript(tuple(ops))


def ed_bounded(u: Text | Sequence[int], v: Text | Sequence[int], k: int,
               meter: WorkMeter | None = None) -> int | None:
    """Exact distance if it is at most ``k``, otherwise None."""
    if k < 0:
        raise ValueError("threshold must be non-negative")
    run = LowDistanceRun(u, v, k, meter)
    run.advance()
    return run.distance


def ed_bounded_budgeted(u: Text | Sequence[int], v: Text | Sequence[int], budget: int,
                        meter: WorkMeter | None = None) -> tuple[int, EditScript] | None:
    """Run the low-distance algorithm for at most ``budget`` units.

    Returns ``(distance, script)`` if it finishes in time, else None.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    run = LowDistanceRun(u, v, None, meter)
    if not run.advance(budget) or run.distance is None:
        return None
    return run.distance, run.script()
