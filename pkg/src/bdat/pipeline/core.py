"""Enrollment, verification and revocation.

Enrollment: regenerate the projection from its seed, project the training
vectors, draw the class target (one codeword per block), train the class
model against the target and a synthetic background cohort, binarize the
training centroid and commit it block by block. Verification replays the
first three steps on the query and opens every block commitment.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from bdat import commitment as fc
from bdat.bda import ClassModel, binarize, train_class
from bdat.commitment import pack_bits
from bdat.pipeline.config import Seeds, StageConfig
from bdat.pipeline.record import TemplateRecord
from bdat.pipeline.store import DuplicateUserError, TemplateStore, UnknownUserError
from bdat.randproj import gen_matrix, project
from bdat.vectors import FeatureVector


class CapacityError(ValueError):
    """No unused class target is left in the codeword registry."""


@dataclass
class Enrollment:
    record: TemplateRecord
    seeds: Seeds
    target_fp: str
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    # In-memory only; never serialized.
    target: np.ndarray | None = field(default=None, repr=False)
    template: np.ndarray | None = field(default=None, repr=False)


@dataclass
class VerifyResult:
    accepted: bool
    errors_corrected: list[int | None]
    timings: dict[str, float]

    @property
    def total_time(self) -> float:
        return sum(self.timings.values())


def _feature_matrix(vectors: Sequence[FeatureVector] | np.ndarray, d: int) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        x = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    else:
        x = np.array([np.asarray(getattr(v, "values", v), dtype=np.float64) for v in vectors])
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("need at least one feature vector")
    if x.shape[1] != d:
        raise ValueError(f"expected feature dimension {d}, got {x.shape[1]}")
    return x


def target_fingerprint(target: np.ndarray, registry_salt: bytes) -> str:
    return hashlib.sha256(registry_salt + pack_bits(target)).hexdigest()


def draw_target(config: StageConfig, rng: np.random.Generator, taken: set[str],
                registry_salt: bytes) -> tuple[np.ndarray, str]:
    """Next target from ``rng`` whose fingerprint is not already taken."""
    if config.capacity_bits < 63 and len(taken) >= (1 << config.capacity_bits):
        raise CapacityError(f"all {1 << config.capacity_bits} class targets are in use")
    code = config.code
    while True:
        blocks = [code.encode(rng.integers(0, 2, size=code.k, dtype=np.uint8))
                  for _ in range(config.blocks)]
        target = np.concatenate(blocks)
        fp = target_fingerprint(target, registry_salt)
        if fp not in taken:
            return target, fp


def background_cohort(centroid: np.ndarray, target: np.ndarray, config: StageConfig,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Synthetic negatives for one class model.

    Points are drawn isotropically around the origin at the per-coordinate
    scale of the class centroid, each labeled with a random codeword (one per
    block) different from ``target``. Assumes features are roughly centered.
    """
    count = config.background
    k = centroid.size
    code = config.code
    scale = float(np.linalg.norm(centroid)) / np.sqrt(k)
    if scale == 0.0:
        scale = 1.0
    points = rng.normal(0.0, scale, size=(count, k))
    labels = np.empty((count, config.n_total), dtype=np.uint8)
    for i in range(count):
        while True:
            label = np.concatenate([
                code.encode(rng.integers(0, 2, size=code.k, dtype=np.uint8))
                for _ in range(config.blocks)
            ])
            if not np.array_equal(label, target):
                break
        labels[i] = label
    return points, labels


def _block_seeds(seed: int, blocks: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(blocks, dtype=np.uint64)]


def build_record(
    user_id: str,
    training,
    config: StageConfig,
    seeds: Seeds,
    *,
    taken: set[str] = frozenset(),
    registry_salt: bytes = b"",
    created_at: int | None = None,
) -> Enrollment:
    """Run the enrollment path in memory; nothing is written."""
    t0 = time.perf_counter()
    key = gen_matrix(seeds.projection, config.d, config.k)
    t1 = time.perf_counter()
    x = _feature_matrix(training, config.d)
    projected = project(key, x)
    centroid = projected.mean(axis=0)
    t2 = time.perf_counter()

    rng = np.random.default_rng(seeds.targets)
    target, fp = draw_target(config, rng, set(taken), registry_salt)
    bg, bg_labels = background_cohort(centroid, target, config, rng)
    model = train_class(projected, target, epochs=config.epochs, rate=config.rate,
                        background=bg if config.background else None,
                        background_targets=bg_labels if config.background else None,
                        class_id=user_id, code_ref=config.code.code_ref)
    t3 = time.perf_counter()

    template = binarize(model, centroid)
    t4 = time.perf_counter()
    code = config.code
    commitments = [
        fc.commit(template[b * code.n:(b + 1) * code.n], code, seed=s)
        for b, s in enumerate(_block_seeds(seeds.commitment, config.blocks))
    ]
    t5 = time.perf_counter()
    timings = {"projection_matrix": t1 - t0, "project": t2 - t1, "train": t3 - t2,
               "binarize": t4 - t3, "commitment": t5 - t4}

    notes = []
    if not model.converged:
        notes.append(
            f"class model for {user_id!r} did not converge in {model.epochs_run} epochs "
            f"({model.bit_errors} training bit errors left)"
        )
    if created_at is None:
        created_at = int(time.time())
    record = TemplateRecord(user_id=user_id, config=config, projection_seed=seeds.projection,
                            model=model, commitments=commitments, created_at=int(created_at))
    return Enrollment(record=record, seeds=seeds, target_fp=fp, warnings=notes,
                      timings=timings, target=target, template=template)


def verify_record(record: TemplateRecord, query) -> VerifyResult:
    """Run the verification path against an in-memory record."""
    config = record.config
    timings = {}

    t0 = time.perf_counter()
    key = gen_matrix(record.projection_seed, config.d, config.k)
    t1 = time.perf_counter()
    q = _feature_matrix(np.asarray(getattr(query, "values", query)), config.d)[0]
    projected = project(key, q)
    t2 = time.perf_counter()
    bits = binarize(record.model, projected)
    t3 = time.perf_counter()
    code = config.code
    verdicts = [
        fc.verify(cm, bits[b * code.n:(b + 1) * code.n], code)
        for b, cm in enumerate(record.commitments)
    ]
    t4 = time.perf_counter()

    timings["projection_matrix"] = t1 - t0
    timings["project"] = t2 - t1
    timings["binarize"] = t3 - t2
    timings["commitment"] = t4 - t3
    accepted = bool(verdicts) and all(v.accepted for v in verdicts)
    return VerifyResult(accepted=accepted,
                        errors_corrected=[v.errors_corrected for v in verdicts],
                        timings=timings)


def verify_batch(record: TemplateRecord, queries) -> list[VerifyResult]:
    """Verify many queries against one record, building the projection once.

    Per-query timings are not recorded.
    """
    config = record.config
    code = config.code
    key = gen_matrix(record.projection_seed, config.d, config.k)
    bits = binarize(record.model, project(key, _feature_matrix(queries, config.d)))
    results = []
    for row in bits:
        verdicts = [
            fc.verify(cm, row[b * code.n:(b + 1) * code.n], code)
            for b, cm in enumerate(record.commitments)
        ]
        results.append(VerifyResult(
            accepted=bool(verdicts) and all(v.accepted for v in verdicts),
            errors_corrected=[v.errors_corrected for v in verdicts],
            timings={},
        ))
    return results


class Pipeline:
    """Enrollment and verification over a :class:`TemplateStore`."""

    def __init__(self, store: TemplateStore | str, config: StageConfig | None = None):
        self.store = store if isinstance(store, TemplateStore) else TemplateStore(store)
        self.config = config or StageConfig()

    def enroll(self, user_id: str, training, seeds: Seeds | None = None, *,
               overwrite: bool = False, created_at: int | None = None) -> Enrollment:
        seeds = seeds or Seeds.fresh()
        with self.store.user_lock(user_id):
            if user_id in self.store and not overwrite:
                raise DuplicateUserError(f"user {user_id!r} is already enrolled")
            return self._enroll_locked(user_id, training, seeds, created_at)

    def revoke(self, user_id: str, training, seeds: Seeds | None = None, *,
               created_at: int | None = None) -> Enrollment:
        """Reissue ``user_id`` under fresh randomness, replacing the old record."""
        seeds = seeds or Seeds.fresh()
        with self.store.user_lock(user_id):
            if user_id not in self.store:
                raise UnknownUserError(f"user {user_id!r} is not enrolled")
            return self._enroll_locked(user_id, training, seeds, created_at)

    def _enroll_locked(self, user_id, training, seeds, created_at) -> Enrollment:
        salt = self.store.registry_salt()
        taken = self.store.taken_fingerprints(exclude=user_id)
        result = build_record(user_id, training, self.config, seeds, taken=taken,
                              registry_salt=salt, created_at=created_at)
        t0 = time.perf_counter()
        self.store.save(result.record, result.target_fp)
        result.timings["store"] = time.perf_counter() - t0
        return result

    def verify(self, user_id: str, query) -> VerifyResult:
        t0 = time.perf_counter()
        record = self.store.load(user_id)
        t1 = time.perf_counter()
        result = verify_record(record, query)
        result.timings = {"load": t1 - t0, **result.timings}
        return result

    def model(self, user_id: str) -> ClassModel:
        return self.store.load(user_id).model
