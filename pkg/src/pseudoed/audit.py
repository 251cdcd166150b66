"""Auditing the pseudorandomness of a source string.

A ``6B``-letter block of the padded string is *p-unique* when every
``B``-letter substring inside it is at edit distance at least ``pB`` from
every ``B``-letter substring that does not intersect the block.  ``M(x)``
counts the letters, padding included, of blocks that are not p-unique.

Both the exhaustive audit and the sampled test answer questions of the form
"is some pattern from this block within ``k`` edits of a disjoint window".
A vectorized semi-global DP (every pattern against the whole string at once,
values capped at ``k + 1``) gives, for each pattern and each end position,
the least distance to *any* substring ending there.  Windows of length
exactly ``B`` can only be close where that value is at most ``k``, so the DP
is a complete filter; survivors are confirmed with :func:`ed_bounded`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .distance import ed_bounded
from .errors import GuardRefusal, InvalidInput
from .reduction import PseudoParams
from .text import PAD, Rng, Text, WorkMeter

EXACT_AUDIT_GUARD = 1 << 16
FILTER_CELLS = 1 << 22  # pattern x text cells per DP chunk


@dataclass
class AuditReport:
    mode: str
    p: str
    B: int
    n: int
    n_padded: int
    distance_cutoff: int  # a pair is "close" when ed <= distance_cutoff
    grid: int
    m_value: int | None = None
    verdict: bool | None = None
    block_flags: dict[int, bool] = field(default_factory=dict)  # block -> passes
    sample_size: int = 0
    failures: int = 0
    failure_cutoff: float | None = None
    threshold: float | None = None
    work_units: int = 0

    def as_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["block_flags"] = {str(k): v for k, v in sorted(self.block_flags.items())}
        return out


def _padded(x: Text, B: int) -> np.ndarray:
    size = 6 * B
    n_padded = size * max(1, -(-len(x) // size))
    arr = np.full(n_padded, PAD, dtype=np.int16)
    arr[:len(x)] = x.array()
    return arr


def _last_row(text: np.ndarray, starts: np.ndarray, B: int, k: int) -> np.ndarray:
    """``min(k + 1, min_s ed(text[u:u+B], text[s:e+1]))`` for each start u and end e."""
    cap = k + 1
    dtype = np.int8 if 2 * cap < 127 else np.int16
    P, T = len(starts), len(text)
    prev = np.zeros((P, T + 1), dtype)
    tmp = np.empty((P, T), dtype)
    for r in range(B):
        cur = np.empty((P, T + 1), dtype)
        cur[:, 0] = min(r + 1, cap)
        body = cur[:, 1:]
        np.not_equal(text[starts + r][:, None], text[None, :], out=tmp, casting="unsafe")
        np.add(prev[:, :-1], tmp, out=body)
        np.add(prev[:, 1:], 1, out=tmp)
        np.minimum(body, tmp, out=body)
        np.minimum(body, cap, out=body)
        step = 1
        while step <= cap:  # insertions: cur[e] = min(cur[e], cur[e - step] + step)
            shifted = cur[:, :-step] + dtype(step)
            np.minimum(cur[:, step:], shifted, out=cur[:, step:])
            step *= 2
        np.minimum(cur, cap, out=cur)
        prev = cur
    return prev[:, 1:]


def _close_blocks(arr: np.ndarray, blocks: list[int], B: int, k: int, grid: int,
                  meter: WorkMeter) -> set[int]:
    """Blocks (1-based) owning a grid pattern within ``k`` of a disjoint grid window.

    Patterns and windows are both restricted to 0-indexed end positions that
    are multiples of ``grid``.
    """
    size, T = 6 * B, len(arr)
    symbols = arr.tolist()
    pat, owner = [], []
    for i in blocks:
        lo = (i - 1) * size
        pat.extend(u for u in range(lo, lo + size - B + 1) if (u + B - 1) % grid == 0)
        owner.extend(i for u in range(lo, lo + size - B + 1) if (u + B - 1) % grid == 0)
    if not pat:
        return set()
    pat_arr, owner_arr = np.asarray(pat), np.asarray(owner)
    ends = np.arange(T)
    end_ok = (ends >= B - 1) & (ends % grid == 0)
    chunk = max(1, FILTER_CELLS // T)
    bad: set[int] = set()
    for c0 in range(0, len(pat_arr), chunk):
        starts = pat_arr[c0:c0 + chunk]
        own = owner_arr[c0:c0 + chunk]
        alive = np.array([i not in bad for i in own])
        if not alive.any():
            continue
        starts, own = starts[alive], own[alive]
        meter.charge(len(starts) * T * B, "audit_filter")
        close = _last_row(arr, starts, B, k) <= k
        blk_lo = ((own - 1) * size)[:, None]
        disjoint = (ends[None, :] < blk_lo) | (ends[None, :] - B + 1 >= blk_lo + size)
        close &= disjoint & end_ok[None, :]
        hits = np.argwhere(close)
        hit_owner = own[hits[:, 0]]
        for i in np.unique(hit_owner).tolist():
            for row, e in hits[hit_owner == i].tolist():
                u = int(starts[row])
                if ed_bounded(symbols[u:u + B], symbols[e - B + 1:e + 1], k, meter) is not None:
                    bad.add(i)
                    break
    return bad


def _block_count(x: Text, B: int) -> int:
    return max(1, -(-len(x) // (6 * B)))


def _check_block(x: Text, B: int, i: int) -> None:
    if not 1 <= i <= _block_count(x, B):
        raise InvalidInput(f"block index {i} outside 1..{_block_count(x, B)}")


def exact_cutoff(params: PseudoParams) -> int:
    """Largest integer distance below ``pB``."""
    return math.ceil(params.pB) - 1


def sampled_cutoff(params: PseudoParams) -> int:
    """Largest integer distance below ``pB/2``."""
    return math.ceil(params.pB / 2) - 1


def sampled_grid(params: PseudoParams) -> int:
    return max(1, math.floor(params.pB / 8))


def is_p_unique_exact(x: Text, params: PseudoParams, i: int, meter: WorkMeter | None = None) -> bool:
    """Exhaustive p-uniqueness of block ``x^i`` (1-based)."""
    _check_block(x, params.B, i)
    meter = meter if meter is not None else WorkMeter()
    return not _close_blocks(_padded(x, params.B), [i], params.B, exact_cutoff(params), 1, meter)


def exact_audit(x: Text, params: PseudoParams, force: bool = False,
                meter: WorkMeter | None = None) -> AuditReport:
    """Per-block p-uniqueness of every block and the resulting ``M(x)``.

    Raises:
        GuardRefusal: ``|x| > 2**16`` and ``force`` is not set.
    """
    if len(x) > EXACT_AUDIT_GUARD and not force:
        raise GuardRefusal(f"exact audit limited to n <= {EXACT_AUDIT_GUARD} without force, got {len(x)}")
    meter = meter if meter is not None else WorkMeter()
    B = params.B
    arr = _padded(x, B)
    count = len(arr) // (6 * B)
    before = meter.units
    bad = _close_blocks(arr, list(range(1, count + 1)), B, exact_cutoff(params), 1, meter)
    return AuditReport("exact", str(params.p), B, len(x), len(arr), exact_cutoff(params), 1,
                       m_value=6 * B * len(bad),
                       block_flags={i: i not in bad for i in range(1, count + 1)},
                       work_units=meter.units - before)


def m_exact(x: Text, params: PseudoParams, force: bool = False, meter: WorkMeter | None = None) -> int:
    """Letters of padded ``x`` lying in blocks that are not p-unique."""
    return exact_audit(x, params, force, meter).m_value


def uniqueness_test_sampled(x: Text, params: PseudoParams, i: int,
                            meter: WorkMeter | None = None) -> bool:
    """Grid uniqueness test for block ``x^i``: true iff every grid pair is far.

    Patterns inside the block and disjoint windows anywhere in ``x`` are both
    restricted to end positions on the ``max(1, floor(pB/8))`` grid, and a pair
    is close when its distance is below ``pB/2``.  A (p/2)-unique block
    always passes and a passing block has no grid pair closer than ``pB/2``.
    """
    _check_block(x, params.B, i)
    meter = meter if meter is not None else WorkMeter()
    return not _close_blocks(_padded(x, params.B), [i], params.B, sampled_cutoff(params),
                             sampled_grid(params), meter)


class _BlockCache:
    def __init__(self, x: Text, params: PseudoParams, meter: WorkMeter) -> None:
        self.arr = _padded(x, params.B)
        self.params = params
        self.meter = meter
        self.flags: dict[int, bool] = {}

    def test(self, i: int) -> bool:
        hit = self.flags.get(i)
        if hit is None:
            p = self.params
            hit = not _close_blocks(self.arr, [i], p.B, sampled_cutoff(p), sampled_grid(p), self.meter)
            self.flags[i] = hit
        return hit


def sample_size(n: int, threshold: float, c: float) -> int:
    return math.ceil(c * (n / threshold) * math.log2(max(n, 2)))


def sampled_audit_steps(x: Text, params: PseudoParams, threshold: float, rng: Rng, c: float = 8,
                        meter: WorkMeter | None = None):
    """Generator form of :func:`sampled_audit`; yields after every fresh block test.

    The report is the generator's return value.
    """
    n = len(x)
    if not 0 < threshold <= max(n, 1):
        raise InvalidInput(f"threshold must lie in (0, n={n}], got {threshold}")
    if c < 1:
        raise InvalidInput("sample coefficient c must be at least 1")
    meter = meter if meter is not None else WorkMeter()
    before = meter.units
    cache = _BlockCache(x, params, meter)
    count = len(cache.arr) // (6 * params.B)
    samples = sample_size(n, threshold, c)
    cutoff = c * math.log2(max(n, 2))
    failures = 0
    for _ in range(samples):
        i = rng.integers(1, count + 1)
        fresh = i not in cache.flags
        if not cache.test(i):
            failures += 1
        if fresh:
            yield
    return AuditReport("sampled", str(params.p), params.B, n, len(cache.arr), sampled_cutoff(params),
                       sampled_grid(params), verdict=failures <= cutoff, block_flags=dict(cache.flags),
                       sample_size=samples, failures=failures, failure_cutoff=cutoff,
                       threshold=threshold, work_units=meter.units - before)


def sampled_audit(x: Text, params: PseudoParams, threshold: float, rng: Rng, c: float = 8,
                  meter: WorkMeter | None = None) -> AuditReport:
    """Sample blocks with replacement and count grid-uniqueness failures.

    ``ceil(c * (n / threshold) * log2 n)`` blocks are drawn; the verdict is
    true when at most ``c * log2 n`` of them fail.  Each distinct block is
    tested once and its result reused for repeat draws.
    """
    steps = sampled_audit_steps(x, params, threshold, rng, c, meter)
    while True:
        try:
            next(steps)
        except StopIteration as done:
            return done.value


def sampled_m_test(x: Text, params: PseudoParams, threshold: float, rng: Rng, c: float = 8,
                   meter: WorkMeter | None = None) -> bool:
    return sampled_audit(x, params, threshold, rng, c, meter).verdict
