"""Seeded instance generators."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from .errors import InvalidInput
from .text import Rng, Text, default_letters

KINDS = ("uniform-random", "edits-from-x", "smoothed", "planted-duplicates")


@dataclass(frozen=True)
class GenSpec:
    """Recipe for an instance; generation is a pure function of these fields.

    Attributes:
        kind: one of ``KINDS``.
        n: length of x.
        alphabet: alphabet size.
        seed: root seed.
        edits: number of random edits applied to x to produce y (0 means no y,
            except for ``edits-from-x`` which always produces y).
        perturb: per-letter replacement probability for ``smoothed``.
        period: period of the base string for ``smoothed``.
        scale: block scale B for ``planted-duplicates``; blocks are 6*scale letters.
        fraction: share of blocks overwritten by copies for ``planted-duplicates``.
    """

    kind: str = "uniform-random"
    n: int = 1024
    alphabet: int = 4
    seed: int = 0
    edits: int = 0
    perturb: float = 0.1
    period: int = 16
    scale: int = 16
    fraction: float = 0.05

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown generator kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n < 1:
            raise InvalidInput("n must be at least 1")
        if self.alphabet < 2:
            raise InvalidInput("alphabet must have at least 2 letters")
        if self.edits < 0:
            raise InvalidInput("edits must be non-negative")
        if not 0 <= self.perturb <= 1:
            raise InvalidInput("perturb must lie in [0, 1]")
        if self.period < 1 or self.scale < 1:
            raise InvalidInput("period and scale must be positive")
        if not 0 <= self.fraction <= 1:
            raise InvalidInput("fraction must lie in [0, 1]")

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


def uniform_symbols(n: int, alphabet: int, rng: Rng) -> list[int]:
    return [int(v) for v in rng.generator.integers(0, alphabet, n)]


def random_edits(x: Text, k: int, rng: Rng) -> Text:
    """Apply exactly ``k`` random edits, each uniformly a delete, insert or substitution.

    A delete drawn on an empty string becomes an insert; substitutions always
    change the letter.
    """
    sigma = x.alphabet_size
    out = list(x.symbols)
    for _ in range(k):
        kind = rng.integers(0, 3)
        if kind == 0 and not out:
            kind = 1
        if kind == 2 and not out:
            kind = 1
        if kind == 0:
            del out[rng.integers(0, len(out))]
        elif kind == 1:
            out.insert(rng.integers(0, len(out) + 1), rng.integers(0, sigma))
        else:
            pos = rng.integers(0, len(out))
            out[pos] = (out[pos] + rng.integers(1, sigma)) % sigma
    return x.with_symbols(out)


def _smoothed(spec: GenSpec, rng: Rng) -> list[int]:
    base = uniform_symbols(spec.period, spec.alphabet, rng.split(0))
    draws = rng.split(1).generator
    out = []
    for i in range(spec.n):
        c = base[i % spec.period]
        if draws.random() < spec.perturb:
            c = int(draws.integers(0, spec.alphabet))
        out.append(c)
    return out


def _planted(spec: GenSpec, rng: Rng) -> list[int]:
    out = uniform_symbols(spec.n, spec.alphabet, rng.split(0))
    size = 6 * spec.scale
    count = spec.n // size
    if count < 2:
        return out
    planted = min(count - 1, max(1, round(spec.fraction * count)))
    order = [int(v) for v in rng.split(1).generator.permutation(count)]
    sources, targets = order[:1], order[1:1 + planted]
    for t in targets:
        s = sources[0]
        out[t * size:(t + 1) * size] = out[s * size:(s + 1) * size]
    return out


def generate(spec: GenSpec, rng: Rng | None = None) -> tuple[Text, Text | None]:
    """Build ``(x, y)``; y is None when the spec asks for no edits.

    ``rng`` defaults to ``Rng(spec.seed)``.
    """
    rng = rng if rng is not None else Rng(spec.seed)
    letters = default_letters(spec.alphabet)
    if spec.kind == "smoothed":
        symbols = _smoothed(spec, rng.split(0))
    elif spec.kind == "planted-duplicates":
        symbols = _planted(spec, rng.split(0))
    else:
        symbols = uniform_symbols(spec.n, spec.alphabet, rng.split(0))
    x = Text(tuple(symbols), letters)
    if spec.kind != "edits-from-x" and spec.edits == 0:
        return x, None
    return x, random_edits(x, spec.edits, rng.split(1))
