"""Desk-scale benchmark: enroll every class of a labeled dataset, then score
genuine and imposter probes at each stage of the pipeline."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from bdat.bda import binarize, binary_match_score
from bdat.pipeline.config import Seeds, StageConfig
from bdat.pipeline.core import Enrollment, build_record, verify_batch
from bdat.randproj import gen_matrix, project
from bdat.vectors import FeatureVector, SynthSpec, group_by_label, real_match_score

BENCH_REGISTRY_SALT = b"bdat-benchmark"
SCHEMA_SCORE_TABLE = "bdat.score_table/1"
SCHEMA_HISTOGRAMS = "bdat.histograms/1"

# Column headings of the novel-approach matching-score table.
TABLE_HEADER = ("Images", "Feature Vector", "Cancelable Template",
                "Binary Template Using BDA", "Novel Algorithm")


@dataclass
class EnrolledClass:
    label: str
    train: np.ndarray
    probes: np.ndarray
    enrollment: Enrollment

    @property
    def record(self):
        return self.enrollment.record


@dataclass
class Benchmark:
    config: StageConfig
    seed: int
    classes: dict[str, EnrolledClass]

    def class_seeds(self) -> dict[str, Seeds]:
        return {c: e.enrollment.seeds for c, e in self.classes.items()}


def split_class(vectors: Sequence[FeatureVector], train_fraction: float = 0.5):
    x = np.array([v.values for v in vectors])
    n_train = max(1, int(round(len(x) * train_fraction)))
    if n_train >= len(x):
        return x, x
    return x[:n_train], x[n_train:]


def class_seed_table(labels: Sequence[str], seed: int) -> dict[str, Seeds]:
    rng = np.random.default_rng(seed)
    return {label: Seeds(*(int(s) for s in rng.integers(0, 2**63, size=3))) for label in labels}


def enroll_dataset(dataset: Sequence[FeatureVector], config: StageConfig, seed: int = 0,
                   train_fraction: float = 0.5) -> Benchmark:
    """Enroll each class on its first ``train_fraction`` samples; the rest are probes.

    Classes with a single sample use it both to enroll and to probe. Targets
    come from one shared registry so every class gets a distinct codeword.
    """
    groups = group_by_label(dataset)
    if not groups:
        raise ValueError("empty dataset")
    seeds = class_seed_table(list(groups), seed)
    taken: set[str] = set()
    classes = {}
    for label, vectors in groups.items():
        train, probes = split_class(vectors, train_fraction)
        enrollment = build_record(label, train, config, seeds[label], taken=taken,
                                  registry_salt=BENCH_REGISTRY_SALT, created_at=0)
        taken.add(enrollment.target_fp)
        classes[label] = EnrolledClass(label, train, probes, enrollment)
    return Benchmark(config=config, seed=seed, classes=classes)


@dataclass
class Rates:
    genuine_accepts: int
    genuine_trials: int
    imposter_accepts: int
    imposter_trials: int

    @property
    def genuine_accept_rate(self) -> float:
        return self.genuine_accepts / self.genuine_trials if self.genuine_trials else float("nan")

    @property
    def imposter_accept_rate(self) -> float:
        return self.imposter_accepts / self.imposter_trials if self.imposter_trials else float("nan")


def decision_rates(bench: Benchmark) -> Rates:
    """Every probe against its own class (genuine) and every other class (imposter)."""
    ga = gt = ia = it = 0
    for label, enrolled in bench.classes.items():
        for r in verify_batch(enrolled.record, enrolled.probes):
            ga += r.accepted
            gt += 1
        for other, imposter in bench.classes.items():
            if other == label:
                continue
            for r in verify_batch(enrolled.record, imposter.probes):
                ia += r.accepted
                it += 1
    return Rates(ga, gt, ia, it)


@dataclass
class ScoreRow:
    probe_id: str
    feature_score: int
    cancelable_score: int
    binary_score: int
    accepted: bool
    errors_corrected: list[int | None] = field(default_factory=list)

    def cells(self) -> list[str]:
        return [self.probe_id, str(self.feature_score), str(self.cancelable_score),
                str(self.binary_score), "ACCEPT" if self.accepted else "REJECT"]


@dataclass
class ScoreTable:
    rows: list[ScoreRow]
    score_scale: int
    n_total: int

    def normalized_means(self) -> dict[str, float]:
        if not self.rows:
            raise ValueError("empty score table")
        return {
            "feature": float(np.mean([r.feature_score for r in self.rows])) / self.score_scale,
            "cancelable": float(np.mean([r.cancelable_score for r in self.rows])) / self.score_scale,
            "binary": float(np.mean([r.binary_score for r in self.rows])) / self.n_total,
            "accept_rate": float(np.mean([r.accepted for r in self.rows])),
        }

    @property
    def binary_beats_cancelable(self) -> bool:
        means = self.normalized_means()
        return means["binary"] > means["cancelable"]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_SCORE_TABLE,
            "score_scale": self.score_scale,
            "n_total": self.n_total,
            "rows": [asdict(r) for r in self.rows],
            "summary": {**self.normalized_means(),
                        "binary_beats_cancelable": self.binary_beats_cancelable},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreTable":
        if data.get("schema") != SCHEMA_SCORE_TABLE:
            raise ValueError(f"not a score table: schema {data.get('schema')!r}")
        return cls(rows=[ScoreRow(**r) for r in data["rows"]],
                   score_scale=data["score_scale"], n_total=data["n_total"])

    def render(self) -> str:
        text = format_table(TABLE_HEADER, [r.cells() for r in self.rows])
        means = self.normalized_means()
        verdict = "higher" if self.binary_beats_cancelable else "not higher"
        return (
            text
            + f"\nnormalized means: feature {means['feature']:.4f}, cancelable "
            f"{means['cancelable']:.4f}, binary {means['binary']:.4f}; "
            f"binary stage is {verdict} than cancelable stage\n"
        )


def format_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Aligned columns separated by two spaces; the first column is left-aligned."""
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for r in cells:
        parts = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines) + "\n"


def stage_score_table(dataset: Sequence[FeatureVector] | Benchmark, config: StageConfig | None = None,
                      seed: int = 0) -> ScoreTable:
    """Per genuine probe: feature, cancelable and binary scores plus the decision.

    The reference at each stage is the class training centroid (in feature
    space, projected space, and binarized), matching what enrollment commits.
    """
    bench = dataset if isinstance(dataset, Benchmark) else enroll_dataset(dataset, config, seed)
    config = bench.config
    rows = []
    for label, enrolled in bench.classes.items():
        record = enrolled.record
        key = gen_matrix(record.projection_seed, config.d, config.k)
        ref_feat = enrolled.train.mean(axis=0)
        ref_proj = project(key, enrolled.train).mean(axis=0)
        ref_bits = binarize(record.model, ref_proj)
        probe_proj = project(key, enrolled.probes)
        probe_bits = binarize(record.model, probe_proj)
        decisions = verify_batch(record, enrolled.probes)
        for i, (x, px, bx, dec) in enumerate(zip(enrolled.probes, probe_proj, probe_bits, decisions)):
            rows.append(ScoreRow(
                probe_id=f"{label}/{i}",
                feature_score=real_match_score(x, ref_feat, config.score_scale),
                cancelable_score=real_match_score(px, ref_proj, config.score_scale),
                binary_score=binary_match_score(bx, ref_bits),
                accepted=dec.accepted,
                errors_corrected=dec.errors_corrected,
            ))
    if not rows:
        raise ValueError("no genuine probes to score")
    return ScoreTable(rows=rows, score_scale=config.score_scale, n_total=config.n_total)


@dataclass
class Histograms:
    genuine: np.ndarray
    imposter: np.ndarray
    n_total: int

    @property
    def genuine_pairs(self) -> int:
        return int(self.genuine.sum())

    @property
    def imposter_pairs(self) -> int:
        return int(self.imposter.sum())

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_HISTOGRAMS,
            "n_total": self.n_total,
            "bin_width": 1,
            "genuine": self.genuine.tolist(),
            "imposter": self.imposter.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Histograms":
        if data.get("schema") != SCHEMA_HISTOGRAMS:
            raise ValueError(f"not a histogram report: schema {data.get('schema')!r}")
        return cls(np.array(data["genuine"]), np.array(data["imposter"]), data["n_total"])

    def to_csv(self) -> str:
        lines = ["score,genuine,imposter"]
        lines += [f"{s},{g},{i}" for s, (g, i) in enumerate(zip(self.genuine, self.imposter))]
        return "\n".join(lines) + "\n"


def genuine_imposter_histograms(dataset: Sequence[FeatureVector], config: StageConfig,
                                seed: int = 0, train_fraction: float = 0.5) -> Histograms:
    """Binary match-score histograms over every unordered pair of samples.

    A pair ``(i, j)`` with ``i`` first in dataset order is scored as a claim on
    ``i``'s class: both samples go through that class's projection and model.
    Bins have width 1 over ``[0, n_total]``.
    """
    dataset = list(dataset)
    if len(dataset) < 2:
        raise ValueError("need at least two samples to form a pair")
    bench = enroll_dataset(dataset, config, seed, train_fraction)
    x = np.array([v.values for v in dataset])
    labels = np.array([v.label for v in dataset])
    n_total = config.n_total
    genuine = np.zeros(n_total + 1, dtype=np.int64)
    imposter = np.zeros(n_total + 1, dtype=np.int64)
    for label, enrolled in bench.classes.items():
        record = enrolled.record
        key = gen_matrix(record.projection_seed, config.d, config.k)
        bits = binarize(record.model, project(key, x)).astype(np.int16)
        for i in np.flatnonzero(labels == label):
            if i + 1 >= len(x):
                continue
            scores = n_total - np.count_nonzero(bits[i + 1:] != bits[i], axis=1)
            same = labels[i + 1:] == label
            genuine += np.bincount(scores[same], minlength=n_total + 1)
            imposter += np.bincount(scores[~same], minlength=n_total + 1)
    return Histograms(genuine=genuine, imposter=imposter, n_total=n_total)


def desk_spec(seed: int, num_classes: int = 10, samples_per_class: int = 10,
              dim: int = 128, within_sigma: float = 0.25) -> SynthSpec:
    """The default synthetic benchmark: 10 classes x 10 samples in 128 dimensions."""
    return SynthSpec(seed=seed, num_classes=num_classes, samples_per_class=samples_per_class,
                     dim=dim, class_center_scale=1.0, within_sigma=within_sigma)
