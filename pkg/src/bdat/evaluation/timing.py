from __future__ import annotations

import json
import statistics
import tempfile
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from bdat.evaluation.benchmark import class_seed_table, split_class
from bdat.pipeline.config import StageConfig
from bdat.pipeline.core import Pipeline
from bdat.vectors import FeatureVector, group_by_label

SCHEMA_TIMING = "bdat.timing/1"


@dataclass
class StageStats:
    median: float
    spread: float | None  # sample standard deviation; None with one sample
    samples: int

    @classmethod
    def of(cls, values: Sequence[float]) -> "StageStats":
        values = list(values)
        spread = statistics.stdev(values) if len(values) > 1 else None
        return cls(statistics.median(values), spread, len(values))

    def to_dict(self) -> dict:
        return {"median": self.median, "spread": self.spread, "samples": self.samples}


@dataclass
class TimingReport:
    """Wall-clock seconds per stage for one class enrollment and one verification.

    ``*_total`` is timed around the whole call, independently of the stages;
    ``*_stage_sum`` is the per-call sum of the stage times.
    """

    repetitions: int
    enroll: dict[str, StageStats]
    verify: dict[str, StageStats]
    enroll_total: StageStats
    verify_total: StageStats
    enroll_stage_sum: StageStats
    verify_stage_sum: StageStats

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_TIMING,
            "repetitions": self.repetitions,
            "enroll": {k: v.to_dict() for k, v in self.enroll.items()},
            "verify": {k: v.to_dict() for k, v in self.verify.items()},
            "enroll_total": self.enroll_total.to_dict(),
            "verify_total": self.verify_total.to_dict(),
            "enroll_stage_sum": self.enroll_stage_sum.to_dict(),
            "verify_stage_sum": self.verify_stage_sum.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "TimingReport":
        if data.get("schema") != SCHEMA_TIMING:
            raise ValueError(f"not a timing report: schema {data.get('schema')!r}")

        def stats(d):
            return StageStats(d["median"], d["spread"], d["samples"])

        return cls(
            repetitions=data["repetitions"],
            enroll={k: stats(v) for k, v in data["enroll"].items()},
            verify={k: stats(v) for k, v in data["verify"].items()},
            enroll_total=stats(data["enroll_total"]),
            verify_total=stats(data["verify_total"]),
            enroll_stage_sum=stats(data["enroll_stage_sum"]),
            verify_stage_sum=stats(data["verify_stage_sum"]),
        )

    def render(self) -> str:
        lines = [f"timings over {self.repetitions} repetition(s), seconds (median, spread)"]
        for phase, stages, total in (("enroll", self.enroll, self.enroll_total),
                                     ("verify", self.verify, self.verify_total)):
            lines.append(f"{phase}:")
            for name, s in [*stages.items(), ("total", total)]:
                spread = "n/a" if s.spread is None else f"{s.spread:.6f}"
                lines.append(f"  {name:<18} {s.median:.6f}  {spread}")
        return "\n".join(lines) + "\n"


def timing_report(dataset: Sequence[FeatureVector], config: StageConfig,
                  repetitions: int = 3, seed: int = 0) -> TimingReport:
    """Time ``repetitions`` class enrollments and query verifications.

    Repetition ``i`` enrolls class ``i mod C`` in a fresh temporary store and
    verifies that class's first probe, so file I/O is included.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    groups = group_by_label(dataset)
    if not groups:
        raise ValueError("empty dataset")
    labels = list(groups)
    seeds = class_seed_table(labels, seed)
    enroll_stages: dict[str, list[float]] = {}
    verify_stages: dict[str, list[float]] = {}
    totals: dict[str, list[float]] = {"enroll": [], "verify": [], "enroll_sum": [], "verify_sum": []}
    for rep in range(repetitions):
        label = labels[rep % len(labels)]
        train, probes = split_class(groups[label])
        with tempfile.TemporaryDirectory() as root:
            pipe = Pipeline(root, config)
            t0 = time.perf_counter()
            result = pipe.enroll(label, train, seeds[label], created_at=0)
            totals["enroll"].append(time.perf_counter() - t0)

            query = np.asarray(probes[0])
            t0 = time.perf_counter()
            verdict = pipe.verify(label, query)
            totals["verify"].append(time.perf_counter() - t0)
        for name, value in result.timings.items():
            enroll_stages.setdefault(name, []).append(value)
        for name, value in verdict.timings.items():
            verify_stages.setdefault(name, []).append(value)
        totals["enroll_sum"].append(sum(result.timings.values()))
        totals["verify_sum"].append(sum(verdict.timings.values()))
    return TimingReport(
        repetitions=repetitions,
        enroll={k: StageStats.of(v) for k, v in enroll_stages.items()},
        verify={k: StageStats.of(v) for k, v in verify_stages.items()},
        enroll_total=StageStats.of(totals["enroll"]),
        verify_total=StageStats.of(totals["verify"]),
        enroll_stage_sum=StageStats.of(totals["enroll_sum"]),
        verify_stage_sum=StageStats.of(totals["verify_sum"]),
    )
