"""Approximate edit distance for a pseudorandom source string.

``x`` is cut into blocks of ``6B`` letters and ``y`` into blocks of ``3B``
letters (both padded with PAD to a common multiple of ``6B``).  Block ``x^i``
*partially matches* ``y^j`` when some ``6B``-window of ``y`` starting inside
``y^{j-1}`` on the grid is within ``match_radius`` edits of ``x^i``; it
*fully matches* ``y^j`` when it partially matches ``y^j`` but not
``y^{j-1}``.  Full matching is the comparison function handed to the clean
alignment solver, and the block pairs it returns restrict the letter-level
edges fed to the sparse aligner.
"""

from __future__ import annotations

import math
import warnings
from bisect import bisect_left, bisect_right
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .clean import BlockAlignment, MatchOracle, solve_clean_alignment
from .distance import ed_bounded
from .errors import AlignmentError, InvalidInput
from .script import EditScript, script_from_pairs
from .sparse import max_restricted_alignment, script_from_alignment
from .text import PAD, Rng, Text, WorkMeter

Edge = tuple[int, int]


def parse_fraction(value: str | int | float | Fraction) -> Fraction:
    try:
        return Fraction(value) if not isinstance(value, float) else Fraction(value).limit_denominator(1 << 20)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not a rational number: {value!r}") from None


@dataclass(frozen=True)
class PseudoParams:
    """Pseudorandomness parameters ``(p, B)`` and the thresholds derived from them.

    ``1/p`` must be a positive integer.  A ``p`` below ``1/B`` is raised to
    ``1/B`` with a warning; uniqueness is unchanged by that substitution.
    """

    p: Fraction
    B: int

    def __post_init__(self) -> None:
        p = parse_fraction(self.p)
        if isinstance(self.B, bool) or not isinstance(self.B, int) or self.B < 1:
            raise InvalidInput(f"block size B must be a positive integer, got {self.B!r}")
        if not 0 < p <= 1 or p.numerator != 1:
            raise InvalidInput(f"p must be 1/k for a positive integer k, got {p}")
        if p < Fraction(1, self.B):
            warnings.warn(f"p={p} < 1/B; using p=1/{self.B}", stacklevel=3)
            p = Fraction(1, self.B)
        object.__setattr__(self, "p", p)

    @property
    def pB(self) -> Fraction:
        return self.p * self.B

    @property
    def match_radius(self) -> int:
        return math.floor(self.pB / 8)

    @property
    def grid_step(self) -> int:
        return max(1, math.floor(self.pB / 100))

    @property
    def uniq_threshold(self) -> Fraction:
        return self.pB

    def as_dict(self) -> dict[str, Any]:
        return {"p": str(self.p), "B": self.B, "match_radius": self.match_radius,
                "grid_step": self.grid_step, "uniq_threshold": str(self.uniq_threshold)}


@dataclass(frozen=True)
class BlockDecomposition:
    """Joint padding of ``x`` and ``y`` to ``n'``, a multiple of ``6B``."""

    x: Text
    y: Text
    B: int
    n_padded: int
    xp: tuple[int, ...] = field(repr=False)
    yp: tuple[int, ...] = field(repr=False)

    @classmethod
    def build(cls, x: Text, y: Text, B: int) -> BlockDecomposition:
        size = 6 * B
        n_padded = size * max(1, -(-max(len(x), len(y)) // size))
        xp = x.symbols + (PAD,) * (n_padded - len(x))
        yp = y.symbols + (PAD,) * (n_padded - len(y))
        return cls(x, y, B, n_padded, xp, yp)

    @property
    def x_count(self) -> int:
        return self.n_padded // (6 * self.B)

    @property
    def y_count(self) -> int:
        return self.n_padded // (3 * self.B)

    def x_start(self, i: int) -> int:
        return (i - 1) * 6 * self.B + 1

    def y_start(self, j: int) -> int:
        return (j - 1) * 3 * self.B + 1

    def x_block(self, i: int) -> tuple[int, ...]:
        s = self.x_start(i) - 1
        return self.xp[s:s + 6 * self.B]

    def y_block(self, j: int) -> tuple[int, ...]:
        s = self.y_start(j) - 1
        return self.yp[s:s + 3 * self.B]


def window_starts(dec: BlockDecomposition, params: PseudoParams, j: int) -> range:
    """Grid start positions (1-based) of candidate windows inside ``y^{j-1}``."""
    if j < 2 or j > dec.y_count:
        return range(0)
    r = dec.y_start(j - 1)
    step = params.grid_step
    count = -(-3 * dec.B // step)
    last = min(r + (count - 1) * step, dec.n_padded - 6 * dec.B + 1)
    return range(r, last + 1, step)


def partial_edit_match(dec: BlockDecomposition, params: PseudoParams, i: int, j: int,
                       meter: WorkMeter | None = None) -> bool:
    """Is ``x^i`` within ``match_radius`` of a grid window starting in ``y^{j-1}``."""
    block = dec.x_block(i)
    width = 6 * dec.B
    radius = params.match_radius
    yp = dec.yp
    for s in window_starts(dec, params, j):
        if ed_bounded(block, yp[s - 1:s - 1 + width], radius, meter) is not None:
            return True
    return False


def full_edit_match(dec: BlockDecomposition, params: PseudoParams, i: int, j: int,
                    meter: WorkMeter | None = None) -> bool:
    return (partial_edit_match(dec, params, i, j, meter)
            and not partial_edit_match(dec, params, i, j - 1, meter))


class BlockMatcher:
    """Memoized partial and full edit matching for one decomposition."""

    def __init__(self, dec: BlockDecomposition, params: PseudoParams,
                 meter: WorkMeter | None = None) -> None:
        self.dec = dec
        self.params = params
        self.meter = meter if meter is not None else WorkMeter()
        self._partial: dict[Edge, bool] = {}
        self._full: dict[Edge, bool] = {}

    def partial(self, i: int, j: int) -> bool:
        key = (i, j)
        hit = self._partial.get(key)
        if hit is None:
            hit = partial_edit_match(self.dec, self.params, i, j, self.meter)
            self._partial[key] = hit
        return hit

    def full(self, i: int, j: int) -> bool:
        key = (i, j)
        hit = self._full.get(key)
        if hit is None:
            hit = self.partial(i, j) and not self.partial(i, j - 1)
            self._full[key] = hit
        return hit

    @property
    def partial_evaluations(self) -> int:
        return len(self._partial)

    def oracle(self) -> MatchOracle:
        return MatchOracle(self.full, self.dec.x_count, self.dec.y_count)


def restricted_edges(dec: BlockDecomposition, E: Iterable[Edge]) -> list[Edge]:
    """Letter edges allowed by the block pairs ``E``.

    For each pair ``(i, j)`` every real letter of ``x^i`` is joined to every
    equal letter of ``y`` lying within ``9B`` positions of ``y^j``.  The list is
    duplicate-free and ordered by r ascending, s descending.
    """
    x, y, B = dec.x.symbols, dec.y.symbols, dec.B
    where: dict[int, list[int]] = {}
    for s, c in enumerate(y, 1):
        where.setdefault(c, []).append(s)
    edges: list[Edge] = []
    for i, j in sorted(E):
        lo = max(1, dec.y_start(j) - 9 * B)
        hi = min(len(y), dec.y_start(j) + 3 * B - 1 + 9 * B)
        first = dec.x_start(i)
        for r in range(first, min(first + 6 * B, len(x) + 1)):
            spots = where.get(x[r - 1])
            if not spots:
                continue
            a, b = bisect_left(spots, lo), bisect_right(spots, hi)
            edges.extend((r, spots[k]) for k in range(b - 1, a - 1, -1))
    return edges


def recover_edits(dec: BlockDecomposition, params: PseudoParams, E: BlockAlignment | Iterable[Edge],
                  matcher: BlockMatcher | None = None, meter: WorkMeter | None = None,
                  substitutions: bool = False) -> EditScript:
    """Edit script from ``x`` to ``y`` guided by fully matching block pairs.

    Raises:
        AlignmentError: a pair is not a full edit match or reuses a block.
    """
    matcher = matcher if matcher is not None else BlockMatcher(dec, params, meter)
    pairs = list(E)
    if len({i for i, _ in pairs}) != len(pairs) or len({j for _, j in pairs}) != len(pairs):
        raise AlignmentError("block pairs must be disjoint")
    for i, j in pairs:
        if not (1 <= i <= dec.x_count and 1 <= j <= dec.y_count) or not matcher.full(i, j):
            raise AlignmentError(f"x-block {i} does not fully edit match y-block {j}")
    edges = restricted_edges(dec, pairs)
    alignment = max_restricted_alignment(edges, meter if meter is not None else matcher.meter,
                                         presorted=True)
    return script_from_alignment(dec.x, dec.y, alignment, substitutions)


@dataclass(frozen=True)
class Estimate:
    """An upper bound on ``ed(x, y)`` witnessed by ``script``."""

    estimate: int
    script: EditScript = field(repr=False)
    method: str = "approx"
    info: dict[str, Any] = field(default_factory=dict, compare=False)

    def __iter__(self):
        # allows ``estimate, script = approx_ed(...)``
        return iter((self.estimate, self.script))


def default_repetitions(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def approx_ed(x: Text, y: Text, params: PseudoParams, rng: Rng, repetitions: int | None = None,
              meter: WorkMeter | None = None, attempts_coeff: int = 100,
              substitutions: bool = True) -> Estimate:
    """Shortest script found by ``repetitions`` independent block-reduction runs.

    Each run solves the clean alignment problem over full edit matching with
    its own split of ``rng`` and recovers a letter-level script.  The trivial
    delete-everything/insert-everything script is always a candidate, so the
    estimate never exceeds ``|x| + |y|``.  Edit matching is a deterministic
    function of the inputs, so its memo is shared by all runs.
    """
    meter = meter if meter is not None else WorkMeter()
    reps = default_repetitions(max(len(x), len(y))) if repetitions is None else repetitions
    if reps < 0:
        raise InvalidInput("repetitions must be non-negative")
    if x.letters != y.letters:
        raise InvalidInput("x and y use different alphabets")
    dec = BlockDecomposition.build(x, y, params.B)
    matcher = BlockMatcher(dec, params, meter)
    oracle = matcher.oracle()
    best = script_from_pairs(x.symbols, y.symbols, [], substitutions)
    best_rep, runs = -1, []
    seen: dict[tuple[Edge, ...], int] = {}
    for rep in range(reps):
        asked = oracle.queries
        E = solve_clean_alignment(oracle, rng.split(rep), attempts_coeff)
        meter.charge(oracle.queries - asked, "clean_query")
        if E.pairs in seen:
            runs.append(seen[E.pairs])
            continue
        script = recover_edits(dec, params, E, matcher, meter, substitutions)
        seen[E.pairs] = len(script)
        runs.append(len(script))
        if len(script) < len(best):
            best, best_rep = script, rep
    info = {"runs": runs, "best_rep": best_rep, "blocks": [dec.x_count, dec.y_count],
            "partial_evaluations": matcher.partial_evaluations, "work_units": meter.units}
    return Estimate(len(best), best, "approx" if best_rep >= 0 else "trivial", info)
