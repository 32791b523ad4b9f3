"""Run plumbing: deterministic CSV writing, manifests, and the worker pool."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

ARTIFACT_VERSION = "0.1.0"
THREADS_ENV = "CAPACITY_LAB_THREADS"


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Apply fn over items, results in input order regardless of scheduling."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def format_cell(v) -> str:
    """Canonical CSV cell text: repr for floats (round-trip exact), str otherwise."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV with '.' decimals, '\\n' line endings, and a header row."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        cells = [format_cell(v) for v in row]
        for c in cells:
            if "," in c or "\n" in c:
                raise ValueError(f"cell {c!r} needs quoting; keep cells delimiter-free")
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def atomic_write_json(path: str | Path, obj: dict) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    os.replace(tmp, path)


@dataclass
class RunManifest:
    """What a run did: config echo and hash, per-check tallies, output files.

    Timestamps are informational; everything else is reproducible bit for bit
    from (config, seed).
    """

    kind: str
    config: dict
    seed: int
    started_at: float = field(default_factory=time.time)
    finished_at: float | None = None
    results: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    exit_code: int = 0

    def finish(self) -> None:
        self.finished_at = time.time()

    def to_json_dict(self) -> dict:
        return {
            "artifact_version": ARTIFACT_VERSION,
            "kind": self.kind,
            "config": self.config,
            "config_hash": config_hash(self.config),
            "seed": self.seed,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "results": self.results,
            "outputs": sorted(self.outputs),
            "exit_code": self.exit_code,
        }

    def write(self, out_dir: str | Path, name: str = "manifest.json") -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / name
        self.finish()
        atomic_write_json(path, self.to_json_dict())
        return path
