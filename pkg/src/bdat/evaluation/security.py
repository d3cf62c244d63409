"""Brute-force cost accounting per pipeline stage.

A stage whose template has length ``Kc`` is charged ``2^(Kc-1)`` guesses, kept
as the exponent ``Kc - 1`` (never expanded). Ratings against brute-force and
smart (affine-transformation) attacks are fixed per stage name.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

from bdat.evaluation.benchmark import format_table
from bdat.pipeline.config import StageConfig

SCHEMA_SECURITY = "bdat.security/1"

RANDOM_PROJECTION = "random projection"
BDA = "BDA"
FUZZY_COMMITMENT = "fuzzy commitment"
FULL = "full algorithm"

# (brute force, smart attack) ratings of the novel pipeline.
STAGE_RATINGS: dict[str, tuple[str, str]] = {
    RANDOM_PROJECTION: ("High", "Low"),
    BDA: ("High", "High"),
    FUZZY_COMMITMENT: ("High", "High"),
    FULL: ("High", "High"),
}

# Template lengths published for the face-database experiments. The BDA
# stage length was never given.
PRESETS: dict[str, dict[str, int | None]] = {
    "paper-novel": {RANDOM_PROJECTION: 3772, BDA: None, FUZZY_COMMITMENT: 11340, FULL: 6800},
}


@dataclass(frozen=True)
class StageSecurity:
    stage: str
    kc: int | None
    brute_force_bits: int | None
    brute_force_rating: str | None
    smart_attack_rating: str | None

    @property
    def brute_force_cost(self) -> str:
        return "unstated" if self.brute_force_bits is None else f"2^{self.brute_force_bits}"


@dataclass(frozen=True)
class SecurityReport:
    stages: tuple[StageSecurity, ...]
    source: str

    def __getitem__(self, stage: str) -> StageSecurity:
        for s in self.stages:
            if s.stage == stage:
                return s
        raise KeyError(stage)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_SECURITY, "source": self.source,
                "stages": [asdict(s) for s in self.stages]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "SecurityReport":
        if data.get("schema") != SCHEMA_SECURITY:
            raise ValueError(f"not a security report: schema {data.get('schema')!r}")
        return cls(tuple(StageSecurity(**s) for s in data["stages"]), data["source"])

    def render(self) -> str:
        rows = [
            [s.stage, "-" if s.kc is None else s.kc, s.brute_force_cost,
             s.brute_force_rating or "-", s.smart_attack_rating or "-"]
            for s in self.stages
        ]
        header = ("Stage", "Kc", "Brute force", "Brute force rating", "Affine attack rating")
        return f"security strength ({self.source})\n" + format_table(header, rows)


def brute_force_bits(kc: int) -> int:
    if kc < 1:
        raise ValueError(f"template length Kc must be at least 1, got {kc}")
    return kc - 1


def stage_security(stage: str, kc: int | None) -> StageSecurity:
    bits = None if kc is None else brute_force_bits(kc)
    brute, smart = STAGE_RATINGS.get(stage, (None, None))
    return StageSecurity(stage, kc, bits, brute, smart)


def config_lengths(config: StageConfig) -> dict[str, int]:
    """Stage template lengths of a concrete configuration.

    The projected template has ``k`` entries; BDA output, commitment mask and
    stored binary string all have ``n_total`` bits.
    """
    return {RANDOM_PROJECTION: config.k, BDA: config.n_total,
            FUZZY_COMMITMENT: config.n_total, FULL: config.n_total}


def security_report(source: str | StageConfig | Mapping[str, int | None] | Iterable) -> SecurityReport:
    """Report for a named preset, a :class:`StageConfig`, or explicit ``{stage: Kc}``."""
    if isinstance(source, str):
        if source not in PRESETS:
            raise ValueError(f"unknown preset {source!r}; choose from {sorted(PRESETS)}")
        lengths, label = PRESETS[source], source
    elif isinstance(source, StageConfig):
        lengths, label = config_lengths(source), "config"
    else:
        lengths, label = dict(source), "custom"
    return SecurityReport(tuple(stage_security(s, kc) for s, kc in lengths.items()), label)
