"""Batch helpers shared by the command line: file listing, worker pools, per-file
records and corpus statistics."""
from __future__ import annotations

import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .model import LottieDocument, canonical_equal, parse, serialize
from .optimizer import OptimizeConfig, optimize
from .tokenizer import detokenize, token_count, tokenize

log = logging.getLogger(__name__)

JOBS_ENV = "LOTTIE_FORGE_JOBS"

# (label, lo, hi) with half-open [lo, hi) intervals in seconds
DURATION_BUCKETS: tuple[tuple[str, float, float], ...] = (
    ("0-1s", 0.0, 1.0),
    ("1-2s", 1.0, 2.0),
    ("2-3s", 2.0, 3.0),
    ("3-5s", 3.0, 5.0),
    ("5-10s", 5.0, 10.0),
    ("10+s", 10.0, math.inf),
)
BUCKET_LABELS = tuple(label for label, _, _ in DURATION_BUCKETS)


def duration_bucket(seconds: float) -> str:
    for label, lo, hi in DURATION_BUCKETS:
        if seconds < hi:
            return label
    return BUCKET_LABELS[-1]  # pragma: no cover - inf upper bound catches everything


def list_files(directory: str | os.PathLike, suffixes: Sequence[str] = (".json",)) -> list[Path]:
    """Regular files directly inside `directory`, sorted by name for stable reports."""
    root = Path(directory)
    if not root.is_dir():
        raise NotADirectoryError(str(root))
    return sorted((p for p in root.iterdir() if p.is_file() and p.suffix.lower() in suffixes),
                  key=lambda p: p.name)


def resolve_jobs(requested: int | None) -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            requested = int(env)
        except ValueError:
            log.warning("ignoring non-integer %s=%r", JOBS_ENV, env)
    if requested == 0:  # 0 means one worker per core
        return os.cpu_count() or 1
    return max(1, requested or 1)


@dataclass
class Outcome:
    """Result of one worker call; exactly one of `row` and `error` is set."""

    name: str
    row: dict | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _guarded(fn: Callable, item) -> Outcome:
    name = Path(item[0] if isinstance(item, tuple) else item).name
    try:
        return Outcome(name, fn(item))
    except Exception as exc:  # a broken file must not take the batch down
        return Outcome(name, error=f"{type(exc).__name__}: {exc}")


def run_batch(fn: Callable, items: Iterable, jobs: int = 1) -> list[Outcome]:
    """Apply picklable `fn` to every item, collecting failures per item.

    Results come back in input order whatever the pool size.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        out = [_guarded(fn, it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_guarded, [fn] * len(items), items))
    for o in out:
        if not o.ok:
            log.warning("%s: %s", o.name, o.error)
    return out


# ---------------------------------------------------------------- per-file records


def token_counts(doc: LottieDocument, presets: bool = False) -> tuple[int, int]:
    """(plain, quantized) stream lengths with numbers spelled digit by digit."""
    return (token_count(doc, quantize=False, numerics="digits", presets=presets),
            token_count(doc, quantize=True, numerics="digits", presets=presets))


def roundtrip_ok(doc: LottieDocument, quantize: bool = False, presets: bool = False) -> bool:
    return canonical_equal(detokenize(tokenize(doc, quantize, presets)), doc)


@dataclass(frozen=True)
class FileStats:
    file: str
    frames: float
    duration: float
    bucket: str
    bytes_before: int
    bytes_after: int
    tokens_plain: int
    tokens_quant: int


def file_stats(path: str | os.PathLike, cfg: OptimizeConfig = OptimizeConfig()) -> FileStats:
    raw = Path(path).read_bytes()
    doc = parse(raw)
    plain, quant = token_counts(doc)
    after = len(serialize(optimize(doc, cfg)).encode("utf-8"))
    return FileStats(Path(path).name, doc.meta.frames, doc.meta.duration,
                     duration_bucket(doc.meta.duration), len(raw), after, plain, quant)


def _file_stats_row(path) -> dict:
    return asdict(file_stats(path))


@dataclass(frozen=True)
class CorpusStats:
    files: int
    failed: int = 0
    total_frames: float = 0.0
    mean_frames: float = 0.0
    median_frames: float = 0.0
    total_duration: float = 0.0
    mean_duration: float = 0.0
    median_duration: float = 0.0
    histogram: dict[str, int] = field(default_factory=lambda: dict.fromkeys(BUCKET_LABELS, 0))
    mean_bytes_before: float = 0.0
    mean_bytes_after: float = 0.0
    mean_tokens_plain: float = 0.0
    mean_tokens_quant: float = 0.0

    def summary(self) -> str:
        lines = [f"files: {self.files} (failed: {self.failed})",
                 f"frames: total {self.total_frames:g}, mean {self.mean_frames:.2f}, "
                 f"median {self.median_frames:g}",
                 f"duration (s): total {self.total_duration:.2f}, mean {self.mean_duration:.2f}, "
                 f"median {self.median_duration:.2f}",
                 f"bytes: mean {self.mean_bytes_before:.1f} before, {self.mean_bytes_after:.1f} after optimize",
                 f"tokens: mean {self.mean_tokens_plain:.1f} plain, {self.mean_tokens_quant:.1f} quantized",
                 "duration histogram:"]
        width = max(1, max(self.histogram.values(), default=0))
        for label in BUCKET_LABELS:
            n = self.histogram[label]
            share = n / self.files if self.files else 0.0
            lines.append(f"  {label:>6} {n:6d} {share:7.1%} {'#' * round(30 * n / width)}")
        return "\n".join(lines)


def aggregate(records: Sequence[FileStats], failed: int = 0) -> CorpusStats:
    if not records:
        return CorpusStats(0, failed)
    frames = [r.frames for r in records]
    durations = [r.duration for r in records]
    hist = dict.fromkeys(BUCKET_LABELS, 0)
    for r in records:
        hist[r.bucket] += 1
    n = len(records)
    return CorpusStats(
        files=n, failed=failed,
        total_frames=sum(frames), mean_frames=sum(frames) / n, median_frames=statistics.median(frames),
        total_duration=sum(durations), mean_duration=sum(durations) / n,
        median_duration=statistics.median(durations), histogram=hist,
        mean_bytes_before=sum(r.bytes_before for r in records) / n,
        mean_bytes_after=sum(r.bytes_after for r in records) / n,
        mean_tokens_plain=sum(r.tokens_plain for r in records) / n,
        mean_tokens_quant=sum(r.tokens_quant for r in records) / n,
    )


def stats(directory: str | os.PathLike, jobs: int = 1) -> tuple[CorpusStats, list[Outcome]]:
    """Corpus statistics for every .json file in `directory`.

    Unreadable files are logged and counted in ``failed``; the file count and
    histogram cover the files that parsed.
    """
    outcomes = run_batch(_file_stats_row, list_files(directory), jobs)
    records = [FileStats(**o.row) for o in outcomes if o.ok]
    return aggregate(records, sum(not o.ok for o in outcomes)), outcomes
