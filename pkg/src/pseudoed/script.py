"""Edit scripts: construction, replay and serialization.

Positions are 1-based coordinates in the *source* string.  Ops are applied
left to right: ``Insert(p, s)`` places ``s`` immediately before source letter
``p`` (``p = n + 1`` appends), ``Delete(p)`` drops source letter ``p`` and
``Substitute(p, s)`` rewrites it.  A script therefore lists ops in
non-decreasing position order, with inserts at ``p`` preceding any delete or
substitution of ``p``.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import InvalidInput, ScriptError
from .text import PAD, PAD_CHAR, Text, symbols_of


@dataclass(frozen=True, slots=True)
class Delete:
    pos: int


@dataclass(frozen=True, slots=True)
class Insert:
    pos: int
    symbol: int


@dataclass(frozen=True, slots=True)
class Substitute:
    pos: int
    symbol: int


Op = Union[Delete, Insert, Substitute]


@dataclass(frozen=True)
class EditScript:
    ops: tuple[Op, ...] = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[Op]:
        return iter(self.ops)

    def counts(self) -> dict[str, int]:
        out = {"delete": 0, "insert": 0, "substitute": 0}
        for op in self.ops:
            out[type(op).__name__.lower()] += 1
        return out


def apply_script(u: Text | Sequence[int], script: EditScript | Sequence[Op]) -> Text | tuple[int, ...]:
    """Replay ``script`` on ``u``; returns a :class:`Text` when given one.

    Raises:
        ScriptError: an op is out of range or out of left-to-right order.
    """
    src = symbols_of(u)
    n = len(src)
    out: list[int] = []
    cursor = 1  # next source position not yet copied
    for index, op in enumerate(script):
        pos = op.pos
        limit = n + 1 if isinstance(op, Insert) else n
        if not 1 <= pos <= limit:
            raise ScriptError(index, op, f"position outside 1..{limit}")
        if pos < cursor:
            raise ScriptError(index, op, f"position precedes cursor {cursor}")
        out.extend(src[cursor - 1:pos - 1])
        if isinstance(op, Insert):
            out.append(op.symbol)
            cursor = pos
        elif isinstance(op, Delete):
            cursor = pos + 1
        elif isinstance(op, Substitute):
            out.append(op.symbol)
            cursor = pos + 1
        else:
            raise ScriptError(index, op, "unknown op type")
    out.extend(src[cursor - 1:])
    if isinstance(u, Text):
        return Text(tuple(out), u.letters)
    return tuple(out)


def kept_pairs(u: Text | Sequence[int], script: EditScript) -> list[tuple[int, int]]:
    """Pairs (source pos, target pos) of letters the script leaves untouched."""
    n = len(u)
    pairs = []
    cursor, t = 1, 0
    for op in script:
        for r in range(cursor, op.pos):
            t += 1
            pairs.append((r, t))
        if isinstance(op, Insert):
            t += 1
            cursor = op.pos
        elif isinstance(op, Substitute):
            t += 1
            cursor = op.pos + 1
        else:
            cursor = op.pos + 1
    for r in range(cursor, n + 1):
        t += 1
        pairs.append((r, t))
    return pairs


def script_from_pairs(u: Sequence[int], v: Sequence[int], pairs: Sequence[tuple[int, int]],
                      substitutions: bool = False) -> EditScript:
    """Edit script keeping exactly ``pairs`` (1-based, strictly increasing).

    Unkept letters between consecutive pairs form a gap with ``a`` source and
    ``b`` target letters; it costs ``a + b`` indels, or ``max(a, b)`` ops when
    ``substitutions`` is set.  No symbol check is done here.
    """
    ops: list[Op] = []
    prev_r, prev_s = 0, 0
    for r, s in list(pairs) + [(len(u) + 1, len(v) + 1)]:
        src = range(prev_r + 1, r)
        dst = range(prev_s + 1, s)
        shared = min(len(src), len(dst)) if substitutions else 0
        for k in range(shared):
            ops.append(Substitute(src[k], v[dst[k] - 1]))
        for t in dst[shared:]:
            ops.append(Insert(prev_r + 1 + shared, v[t - 1]))
        for q in src[shared:]:
            ops.append(Delete(q))
        prev_r, prev_s = r, s
    return EditScript(tuple(ops))


def merge_substitutions(u: Text | Sequence[int], script: EditScript) -> EditScript:
    """Rewrite ``script`` so each gap uses substitutions; never longer."""
    src = symbols_of(u)
    dst = symbols_of(apply_script(src, script))
    merged = script_from_pairs(src, dst, kept_pairs(src, script), substitutions=True)
    return merged if len(merged) <= len(script) else script


def trivial_script(u: Text | Sequence[int], v: Text | Sequence[int]) -> EditScript:
    """Delete every letter of ``u`` and insert every letter of ``v``."""
    return script_from_pairs(symbols_of(u), symbols_of(v), [])


# -- serialization ----------------------------------------------------------

def format_script(script: EditScript, letters: str) -> str:
    def sym(s: int) -> str:
        return PAD_CHAR if s == PAD else letters[s]

    lines = []
    for op in script:
        if isinstance(op, Delete):
            lines.append(f"D {op.pos}")
        elif isinstance(op, Insert):
            lines.append(f"I {op.pos} {sym(op.symbol)}")
        else:
            lines.append(f"S {op.pos} {sym(op.symbol)}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_script(body: str, letters: str) -> EditScript:
    index = {c: k for k, c in enumerate(letters)}
    index[PAD_CHAR] = PAD
    ops: list[Op] = []
    for lineno, line in enumerate(body.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        try:
            kind, pos = parts[0], int(parts[1])
            if kind == "D" and len(parts) == 2:
                ops.append(Delete(pos))
            elif kind in ("I", "S") and len(parts) == 3:
                cls = Insert if kind == "I" else Substitute
                ops.append(cls(pos, index[parts[2]]))
            else:
                raise ValueError(line)
        except (ValueError, IndexError, KeyError):
            raise InvalidInput(f"script line {lineno}: cannot parse {line!r}") from None
    return EditScript(tuple(ops))


def write_script(script: EditScript, letters: str, path: str | Path) -> None:
    Path(path).write_text(format_script(script, letters), encoding="ascii")
