"""Approximation without knowing the block size B.

Block sizes ``B_i = alpha * 2**i`` are tried in increasing order with the
sampled audit at ``p = 2/alpha``; the first accepted size drives the block
reduction.  Two entry points exist:

* :func:`detect_single_shot` races that search against the low-distance
  exact algorithm, interleaving the two by work units;
* :func:`preprocess_source` runs the search once for a source string and
  stores the result in a :class:`SourceProfile`, after which
  :func:`query_source` answers distance queries against that source.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .audit import sampled_audit_steps
from .distance import LowDistanceRun, ed_bounded_budgeted, ed_exact
from .errors import GuardRefusal, InvalidInput, ProfileMismatch
from .reduction import Estimate, PseudoParams, approx_ed
from .text import Rng, Text, WorkMeter

PROFILE_VERSION = 1


def _check_alpha(alpha: int) -> None:
    if isinstance(alpha, bool) or not isinstance(alpha, int) or alpha < 2 or alpha & (alpha - 1):
        raise InvalidInput(f"alpha must be a power of two >= 2, got {alpha!r}")


def block_sizes(n: int, alpha: int) -> list[int]:
    """``alpha * 2**i`` for every i with ``6 * B_i <= n``."""
    sizes, B = [], alpha
    while 6 * B <= n:
        sizes.append(B)
        B *= 2
    return sizes


def single_shot_threshold(n: int, alpha: int, B: int) -> float:
    return 2 * n ** (2 / 3) * alpha ** (2 / 3) * (B + alpha ** 2) ** (1 / 3)


def preprocess_threshold(n: int, alpha: int, B: int) -> float:
    return 2 * math.sqrt(n) * math.sqrt(B + alpha ** 2)


def final_race_budget(n: int, alpha: int, B: int, budget_coeff: float) -> float:
    return budget_coeff * n ** (4 / 3) * (B + alpha ** 2) ** (2 / 3) / alpha ** (2 / 3)


def _search_steps(x: Text, alpha: int, rng: Rng, threshold_fn, c: float, meter: WorkMeter,
                  levels: list[dict[str, Any]]):
    """Doubling search as a generator of atomic steps; returns the accepted B or None."""
    n = len(x)
    p = Fraction(2, alpha)
    for level, B in enumerate(block_sizes(n, alpha)):
        params = PseudoParams(max(p, Fraction(1, B)), B)
        threshold = min(threshold_fn(n, alpha, B), n)
        report = yield from sampled_audit_steps(x, params, threshold, rng.split(level), c, meter)
        levels.append({"B": B, "threshold": threshold, "failures": report.failures,
                       "samples": report.sample_size, "accepted": report.verdict})
        if report.verdict:
            return B
    return None


def _exact_fallback(x: Text, y: Text, meter: WorkMeter, info: dict[str, Any]) -> Estimate:
    warnings.warn("no block size was accepted; x is not usably pseudorandom, computing exact distance",
                  stacklevel=3)
    try:
        dist, script = ed_exact(x, y, script=True, meter=meter)
    except GuardRefusal:
        run = LowDistanceRun(x, y, None, meter)
        run.advance()
        dist, script = run.distance, run.script()
    return Estimate(dist, script, "exact-fallback", info)


def detect_single_shot(x: Text, y: Text, alpha: int, rng: Rng, budget_coeff: float = 4,
                       slice_units: int = 1 << 16, c: float = 8, repetitions: int | None = None,
                       meter: WorkMeter | None = None) -> Estimate:
    """Estimate ``ed(x, y)`` within ``O(alpha)`` without being told B.

    The low-distance exact algorithm and the block-size search share work
    fairly: whichever has used fewer units runs next, the exact algorithm in
    slices of ``slice_units`` and the search one sampled block test at a
    time.  If the exact algorithm finishes first its answer is returned.
    Once the search accepts ``B_j``, the block reduction runs with
    ``(2/alpha, B_j)`` and the exact algorithm receives a final allowance
    bringing its total to ``budget_coeff * n^{4/3} (B_j + alpha^2)^{2/3} / alpha^{2/3}``.
    """
    _check_alpha(alpha)
    if slice_units < 1:
        raise InvalidInput("slice_units must be positive")
    meter = meter if meter is not None else WorkMeter()
    n = max(len(x), 1)
    race_meter, search_meter = WorkMeter(), WorkMeter()
    race = LowDistanceRun(x, y, None, race_meter)
    levels: list[dict[str, Any]] = []
    search = _search_steps(x, alpha, rng.split(0), single_shot_threshold, c, search_meter, levels)
    info: dict[str, Any] = {"alpha": alpha, "levels": levels, "detected_B": None}

    def finish(result: Estimate) -> Estimate:
        meter.charge(race_meter.units, "race")
        meter.charge(search_meter.units, "search")
        info.update(race_units=race_meter.units, search_units=search_meter.units)
        return result

    accepted = None
    while True:
        if race_meter.units <= search_meter.units:
            if race.advance(slice_units):
                return finish(Estimate(race.distance, race.script(), "exact", info))
            continue
        try:
            next(search)
        except StopIteration as done:
            accepted = done.value
            break
    if accepted is None:
        return finish(_exact_fallback(x, y, search_meter, info))
    info["detected_B"] = accepted
    params = PseudoParams(max(Fraction(2, alpha), Fraction(1, accepted)), accepted)
    approx = approx_ed(x, y, params, rng.split(1), repetitions, search_meter)
    allowance = final_race_budget(n, alpha, accepted, budget_coeff) - race_meter.units
    info["final_budget"] = final_race_budget(n, alpha, accepted, budget_coeff)
    if race.advance(max(0, math.floor(allowance))) and race.distance is not None:
        return finish(Estimate(race.distance, race.script(), "exact", info))
    info["approx"] = approx.info
    return finish(Estimate(approx.estimate, approx.script, approx.method, info))


def text_checksum(x: Text) -> str:
    return hashlib.sha256(str(x).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class SourceProfile:
    """Block size detected for one source string, reusable across queries."""

    alpha: int
    detected_B: int | None
    p_used: str
    detection_threshold: float | None
    seed: int
    length: int
    checksum: str
    levels: tuple[dict[str, Any], ...] = field(default=(), compare=False)
    version: int = PROFILE_VERSION

    @property
    def fallback(self) -> bool:
        return self.detected_B is None

    def as_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["levels"] = list(self.levels)
        out["fallback"] = self.fallback
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, body: str) -> SourceProfile:
        try:
            raw = json.loads(body)
            raw.pop("fallback", None)
            if raw.get("version") != PROFILE_VERSION:
                raise InvalidInput(f"unsupported profile version {raw.get('version')!r}")
            raw["levels"] = tuple(raw.get("levels", ()))
            return cls(**raw)
        except (json.JSONDecodeError, TypeError) as exc:
            raise InvalidInput(f"malformed profile: {exc}") from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> SourceProfile:
        try:
            return cls.from_json(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InvalidInput(f"cannot read profile {path}: {exc}") from None


def preprocess_source(x: Text, alpha: int, rng: Rng, c: float = 8,
                      meter: WorkMeter | None = None) -> SourceProfile:
    """Find the first block size accepted by the sampled audit at ``p = 2/alpha``.

    The threshold at each size is ``2 sqrt(n (B + alpha^2))``.  A profile
    with ``detected_B = None`` means no size up to ``n/6`` was accepted.
    """
    _check_alpha(alpha)
    meter = meter if meter is not None else WorkMeter()
    levels: list[dict[str, Any]] = []
    search = _search_steps(x, alpha, rng, preprocess_threshold, c, meter, levels)
    while True:
        try:
            next(search)
        except StopIteration as done:
            accepted = done.value
            break
    if accepted is None:
        warnings.warn("no block size was accepted; queries will compute exact distances", stacklevel=2)
    threshold = levels[-1]["threshold"] if accepted is not None else None
    return SourceProfile(alpha, accepted, str(Fraction(2, alpha)), threshold, rng.seed, len(x),
                         text_checksum(x), tuple(levels))


def query_source(profile: SourceProfile, x: Text, y: Text, rng: Rng, budget_coeff: float = 4,
                 repetitions: int | None = None, meter: WorkMeter | None = None) -> Estimate:
    """Estimate ``ed(x, y)`` for a preprocessed source ``x``.

    The low-distance algorithm gets ``budget_coeff * n * B`` units first; if
    it does not finish the block reduction answers instead.

    Raises:
        ProfileMismatch: ``x`` is not the string the profile was built from.
    """
    if profile.length != len(x) or profile.checksum != text_checksum(x):
        raise ProfileMismatch("profile was built from a different source string")
    meter = meter if meter is not None else WorkMeter()
    info: dict[str, Any] = {"alpha": profile.alpha, "detected_B": profile.detected_B}
    if profile.fallback:
        return _exact_fallback(x, y, meter, info)
    budget = math.floor(budget_coeff * max(len(x), 1) * profile.detected_B)
    info["budget"] = budget
    exact = ed_bounded_budgeted(x, y, budget, meter)
    if exact is not None:
        return Estimate(exact[0], exact[1], "exact", info)
    B = profile.detected_B
    params = PseudoParams(max(Fraction(2, profile.alpha), Fraction(1, B)), B)
    approx = approx_ed(x, y, params, rng, repetitions, meter)
    info["approx"] = approx.info
    return Estimate(approx.estimate, approx.script, approx.method, info)
