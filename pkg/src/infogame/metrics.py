"""Population observables and their CSV exporters."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import IO, Iterable, Sequence

import numpy as np

from .engine import World


@dataclass(frozen=True)
class HistogramRecord:
    sim_time: float
    bin_lo: float
    bin_hi: float
    count: int


@dataclass(frozen=True)
class QualityRecord:
    sim_time: float
    mean_k: float
    mean_f_plus: float
    mean_f_minus: float
    mean_c: float
    mean_p: float


@dataclass(frozen=True)
class SnapshotRecord:
    sim_time: float
    actor_id: int
    persona: str
    k: float
    c: float
    p: float
    f: float
    f_plus: float
    f_minus: float
    f_rumor: float
    initial_k: float


class UndefinedCorrelation(ValueError):
    """Correlation requested for a sequence without variance."""


def bin_edges(bins: int) -> np.ndarray:
    return np.arange(bins + 1) / bins


def histogram_counts(values: np.ndarray, bins: int) -> np.ndarray:
    """Equal-width counts over [0, 1]; the last bin is closed on the right."""
    # rounding to 9 decimals keeps values like 0.49999999999 in the 0.5 bin
    idx = np.floor(np.round(np.asarray(values, dtype=float) * bins, 9)).astype(np.int64)
    idx = np.clip(idx, 0, bins - 1)
    return np.bincount(idx, minlength=bins)


def knowledge_histogram(world: World, bins: int = 50) -> list[HistogramRecord]:
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts = histogram_counts(world.views()["k"], bins)
    edges = bin_edges(bins)
    t = world.sim_time
    return [HistogramRecord(t, float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)]


def quality_summary(world: World) -> QualityRecord:
    v = world.views()
    if world.actor_count == 0:
        return QualityRecord(world.sim_time, 0.0, 0.0, 0.0, 0.0, 0.0)
    return QualityRecord(
        sim_time=world.sim_time,
        mean_k=float(v["k"].mean()),
        mean_f_plus=float(v["f_plus"].mean()),
        mean_f_minus=float(v["f_minus"].mean()),
        mean_c=float(v["c"].mean()),
        mean_p=float(v["p"].mean()),
    )


def snapshot(world: World) -> list[SnapshotRecord]:
    v = world.views()
    t = world.sim_time
    return [
        SnapshotRecord(
            t,
            i,
            world.persona_name(i),
            float(v["k"][i]),
            float(v["c"][i]),
            float(v["p"][i]),
            float(v["f"][i]),
            float(v["f_plus"][i]),
            float(v["f_minus"][i]),
            float(v["f_rumor"][i]),
            float(world.initial_k[i]),
        )
        for i in range(world.actor_count)
    ]


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two 1-d sequences of equal length")
    if len(x) < 2:
        raise ValueError("pearson needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("zero variance; correlation is undefined")
    r = float(dx @ dy) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".9g")


def _write(records: Iterable, record_type, sink: IO[str]) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in fields(record_type)])
    for rec in records:
        writer.writerow([_fmt(v) for v in astuple(rec)])
    text = buf.getvalue()
    sink.write(text)
    return len(text.encode("utf-8"))


def write_timeseries(records: Iterable[QualityRecord], sink: IO[str]) -> int:
    return _write(records, QualityRecord, sink)


def write_histograms(records: Iterable[HistogramRecord], sink: IO[str]) -> int:
    return _write(records, HistogramRecord, sink)


def write_snapshot(records: Iterable[SnapshotRecord], sink: IO[str]) -> int:
    return _write(records, SnapshotRecord, sink)
