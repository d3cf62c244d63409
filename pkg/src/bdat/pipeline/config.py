from __future__ import annotations

import json
import secrets
from dataclasses import asdict, dataclass, fields
from functools import cached_property
from pathlib import Path

import numpy as np

from bdat.bch import BCHCode, build_code


@dataclass(frozen=True)
class StageConfig:
    """Sizes and hyperparameters shared by enrollment and verification.

    ``background`` is the number of synthetic negatives each class model is
    trained against (see :func:`bdat.pipeline.core.background_cohort`).
    """

    d: int = 128
    k: int = 32
    m: int = 6
    t: int = 5
    blocks: int = 1
    epochs: int = 200
    rate: float = 0.1
    score_scale: int = 256
    background: int = 20

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise ValueError("d and k must be positive")
        if self.k > self.d:
            raise ValueError(f"k={self.k} exceeds d={self.d}")
        if self.blocks < 1:
            raise ValueError("blocks must be at least 1")
        if self.epochs < 0 or self.rate <= 0:
            raise ValueError("epochs must be >= 0 and rate > 0")
        if self.score_scale < 1:
            raise ValueError("score_scale must be positive")
        if self.background < 0:
            raise ValueError("background must be non-negative")
        build_code(self.m, self.t)  # validates (m, t)

    @cached_property
    def code(self) -> BCHCode:
        return build_code(self.m, self.t)

    @property
    def n_total(self) -> int:
        return self.blocks * self.code.n

    @property
    def capacity_bits(self) -> int:
        """log2 of the number of distinct class targets."""
        return self.blocks * self.code.k

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "StageConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "StageConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class Seeds:
    projection: int
    targets: int
    commitment: int

    @classmethod
    def fresh(cls) -> "Seeds":
        return cls(secrets.randbits(63), secrets.randbits(63), secrets.randbits(63))

    @classmethod
    def from_master(cls, seed: int) -> "Seeds":
        """Three independent 63-bit seeds derived from one integer."""
        a, b, c = np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
        mask = (1 << 63) - 1
        return cls(int(a) & mask, int(b) & mask, int(c) & mask)
