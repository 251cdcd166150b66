"""Symbol strings, deterministic randomness and work accounting.

Strings are stored as tuples of small integer codes.  Code ``k`` stands for
``letters[k]``; :data:`PAD` is the null character used to pad strings to a
whole number of blocks and never equals an alphabet code.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInput

PAD = -1
PAD_CHAR = "#"
DNA = "ACGT"
_MASK64 = (1 << 64) - 1


def default_letters(size: int) -> str:
    """Printable letters for an alphabet of ``size`` symbols."""
    if size == 4:
        return DNA
    if 2 <= size <= 26:
        return "abcdefghijklmnopqrstuvwxyz"[:size]
    if 2 <= size <= 62:
        return ("abcdefghijklmnopqrstuvwxyz"
                "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")[:size]
    raise InvalidInput(f"alphabet size must be in [2, 62], got {size}")


@dataclass(frozen=True)
class Text(Sequence[int]):
    """Immutable string over ``letters`` (plus PAD), indexed like a tuple."""

    symbols: tuple[int, ...]
    letters: str = DNA

    def __post_init__(self) -> None:
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if len(set(self.letters)) != len(self.letters) or PAD_CHAR in self.letters:
            raise InvalidInput(f"bad alphabet {self.letters!r}")
        size = len(self.letters)
        for pos, s in enumerate(self.symbols, 1):
            if s != PAD and not 0 <= s < size:
                raise InvalidInput(f"symbol {s} at position {pos} outside alphabet of size {size}")

    @classmethod
    def from_string(cls, s: str, letters: str | None = None) -> Text:
        if letters is None:
            letters = "".join(sorted(set(s) - {PAD_CHAR})) or DNA
        index = {c: k for k, c in enumerate(letters)}
        index[PAD_CHAR] = PAD
        try:
            return cls(tuple(index[c] for c in s), letters)
        except KeyError as exc:
            raise InvalidInput(f"character {exc.args[0]!r} not in alphabet {letters!r}") from None

    @property
    def alphabet_size(self) -> int:
        return len(self.letters)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, key):  # type: ignore[override]
        if isinstance(key, slice):
            return Text(self.symbols[key], self.letters)
        return self.symbols[key]

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __str__(self) -> str:
        return "".join(PAD_CHAR if s == PAD else self.letters[s] for s in self.symbols)

    def __repr__(self) -> str:
        body = str(self)
        if len(body) > 40:
            body = body[:37] + "..."
        return f"Text({body!r}, n={len(self)})"

    def padded(self, length: int) -> Text:
        """Append PAD symbols up to ``length``."""
        if length < len(self):
            raise InvalidInput(f"cannot pad length {len(self)} down to {length}")
        return Text(self.symbols + (PAD,) * (length - len(self)), self.letters)

    def with_symbols(self, symbols: Iterable[int]) -> Text:
        return Text(tuple(symbols), self.letters)

    def array(self) -> np.ndarray:
        return np.fromiter(self.symbols, dtype=np.int8, count=len(self.symbols))


def symbols_of(s: Text | Sequence[int] | str) -> tuple[int, ...]:
    """Plain tuple view used by the inner loops; a ``str`` maps to code points."""
    if isinstance(s, Text):
        return s.symbols
    if isinstance(s, tuple):
        return s
    if isinstance(s, str):
        return tuple(map(ord, s))
    return tuple(s)


class Rng:
    """Counter-based splittable generator.

    The stream is Philox keyed by ``(seed, path)``; ``split(k)`` appends ``k``
    to the path, so identical seeds and split paths give identical draws.
    """

    def __init__(self, seed: int = 0, path: tuple[int, ...] = ()) -> None:
        self.seed = int(seed) & _MASK64
        self.path = tuple(int(k) for k in path)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self.generator = np.random.Generator(np.random.Philox(seq))

    def split(self, *keys: int) -> Rng:
        return Rng(self.seed, self.path + keys)

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in ``[low, high)``."""
        return int(self.generator.integers(low, high))

    def random(self) -> float:
        return float(self.generator.random())

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, path={self.path})"


@dataclass
class WorkMeter:
    """Deterministic count of elementary DP-cell and comparison steps."""

    units: int = 0
    by_kind: dict[str, int] = field(default_factory=dict, repr=False)

    def charge(self, units: int = 1, kind: str | None = None) -> None:
        if units < 0:
            raise ValueError("work units must be non-negative")
        self.units += units
        if kind is not None:
            self.by_kind[kind] = self.by_kind.get(kind, 0) + units


# -- file formats -----------------------------------------------------------

def _read_ascii(path: str | Path) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise InvalidInput(f"{path}: not ASCII ({exc.reason} at byte {exc.start})") from None


def load_texts(paths: Sequence[str | Path], letters: str | None = None) -> list[Text]:
    """Load one string per file, sharing one alphabet across all files.

    A single trailing newline is ignored.  Without ``letters`` the alphabet is
    the sorted set of characters seen across every file.
    """
    raw = [_read_ascii(p).rstrip("\r\n") for p in paths]
    return _encode_all(raw, letters, [str(p) for p in paths])


def load_lines(path: str | Path, letters: str | None = None) -> list[Text]:
    """Load the line-oriented format: one string per non-empty line."""
    raw = [line.rstrip("\r") for line in _read_ascii(path).split("\n")]
    raw = [line for line in raw if line]
    return _encode_all(raw, letters, [f"{path}:{k + 1}" for k in range(len(raw))])


def _encode_all(raw: list[str], letters: str | None, where: list[str]) -> list[Text]:
    if letters is None:
        letters = "".join(sorted(set().union(*map(set, raw)))) or DNA
    out = []
    for s, loc in zip(raw, where):
        bad = set(s) - set(letters)
        if bad:
            raise InvalidInput(f"{loc}: symbols {sorted(bad)} outside alphabet {letters!r}")
        out.append(Text.from_string(s, letters))
    return out


def dump_text(text: Text, path: str | Path) -> None:
    Path(path).write_text(str(text) + "\n", encoding="ascii")
