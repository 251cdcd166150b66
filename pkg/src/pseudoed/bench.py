"""Seeded benchmark matrix with CSV and JSON-lines output."""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .detect import detect_single_shot, preprocess_source, query_source
from .distance import ed_bounded_budgeted, ed_exact
from .errors import GuardRefusal, InvalidInput
from .generate import GenSpec, generate
from .reduction import PseudoParams, approx_ed
from .script import apply_script
from .text import Rng, WorkMeter

SCHEMA_VERSION = 1
BENCH_EXACT_GUARD = 1 << 14  # largest n for which the quadratic oracle runs without force
ALGORITHMS = ("approx", "exact", "low-distance", "detect", "query")
FIELDS = ("schema_version", "cell", "seed", "kind", "n", "alphabet", "edits", "algorithm", "p", "B",
          "alpha", "reps", "true_distance", "estimate", "ratio", "method", "work_units", "wall_time")


@dataclass(frozen=True)
class BenchCell:
    """One row of the matrix: an instance recipe, an algorithm and its parameters.

    The GenSpec seed is replaced by each entry of ``seeds``.
    """

    cell: str
    gen: GenSpec
    algorithm: str = "approx"
    p: str = "1/4"
    B: int = 16
    alpha: int = 4
    reps: int | None = None
    seeds: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise InvalidInput(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> BenchCell:
        try:
            raw = dict(raw)
            raw["gen"] = GenSpec(**raw.get("gen", {}))
            raw["seeds"] = tuple(raw.get("seeds", (0,)))
            return cls(**raw)
        except TypeError as exc:
            raise InvalidInput(f"bad bench cell: {exc}") from None


def load_matrix(path: str | Path) -> list[BenchCell]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInput(f"cannot read matrix {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from None
    cells = raw.get("cells", raw) if isinstance(raw, dict) else raw
    if not isinstance(cells, list):
        raise InvalidInput(f"{path}: expected a list of cells")
    return [BenchCell.from_dict(c) for c in cells]


def run_cell(cell: BenchCell, seed: int, force: bool = False) -> dict[str, Any]:
    """Run one (cell, seed) pair; the record depends only on these arguments."""
    gen = GenSpec(**{**asdict(cell.gen), "seed": seed})
    x, y = generate(gen)
    y = x if y is None else y
    exact_ok = force or max(len(x), len(y)) <= BENCH_EXACT_GUARD
    if cell.algorithm == "exact" and not exact_ok:
        raise GuardRefusal(f"cell {cell.cell}: exact distance above n={BENCH_EXACT_GUARD} needs force")
    meter = WorkMeter()
    rng = Rng(seed).split(1)
    start = time.perf_counter()
    if cell.algorithm == "approx":
        estimate, script = approx_ed(x, y, PseudoParams(Fraction(cell.p), cell.B), rng, cell.reps, meter)
        method = "approx"
    elif cell.algorithm == "exact":
        estimate, script = ed_exact(x, y, script=True, meter=meter)
        method = "exact"
    elif cell.algorithm == "low-distance":
        estimate, script = ed_bounded_budgeted(x, y, len(x) * len(y) + len(x) + len(y) + 1, meter)
        method = "exact"
    elif cell.algorithm == "detect":
        result = detect_single_shot(x, y, cell.alpha, rng, repetitions=cell.reps, meter=meter)
        estimate, script, method = result.estimate, result.script, result.method
    else:
        profile = preprocess_source(x, cell.alpha, rng.split(0), meter=meter)
        result = query_source(profile, x, y, rng.split(1), repetitions=cell.reps, meter=meter)
        estimate, script, method = result.estimate, result.script, result.method
    wall = time.perf_counter() - start
    if apply_script(x, script) != y:
        raise AssertionError(f"cell {cell.cell} seed {seed}: emitted script does not reproduce y")
    true = ed_exact(x, y) if exact_ok else None
    return {
        "schema_version": SCHEMA_VERSION, "cell": cell.cell, "seed": seed, "kind": gen.kind,
        "n": gen.n, "alphabet": gen.alphabet, "edits": gen.edits, "algorithm": cell.algorithm,
        "p": cell.p, "B": cell.B, "alpha": cell.alpha, "reps": cell.reps,
        "true_distance": true, "estimate": estimate,
        "ratio": None if true is None else estimate / max(1, true),
        "method": method, "work_units": meter.units, "wall_time": round(wall, 6),
    }


def _run(args: tuple[BenchCell, int, bool]) -> dict[str, Any]:
    return run_cell(*args)


def bench(cells: list[BenchCell], out: str | Path, jobs: int = 1, force: bool = False) -> list[dict[str, Any]]:
    """Run every (cell, seed), write ``<out>.csv`` and ``<out>.jsonl``; returns the records.

    Records are sorted by cell id and seed regardless of completion order.
    """
    tasks = [(cell, seed, force) for cell in cells for seed in cell.seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run, tasks))
    else:
        records = [_run(t) for t in tasks]
    records.sort(key=lambda r: (r["cell"], r["seed"]))
    write_records(records, out)
    return records


def write_records(records: list[dict[str, Any]], out: str | Path) -> tuple[Path, Path]:
    base = Path(out)
    csv_path, jsonl_path = base.with_suffix(".csv"), base.with_suffix(".jsonl")
    try:
        with csv_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=FIELDS)
            writer.writeheader()
            writer.writerows(records)
        with jsonl_path.open("w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(r, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write bench output at {base}: {exc.strerror}") from exc
    return csv_path, jsonl_path
