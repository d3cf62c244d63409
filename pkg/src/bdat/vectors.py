"""Labeled feature vectors: file I/O, a synthetic class generator and the
real-valued matching score.

CSV layout is one vector per line, ``label,v1,...,vd``, UTF-8, no header.
The packed layout is a small binary container sharing the record format's
framing (magic, version, length prefixes, CRC-32 trailer).
"""

from __future__ import annotations

import csv
import io
import struct
import warnings
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PACKED_MAGIC = b"BDFV"
PACKED_VERSION = 1


class FeatureFormatError(ValueError):
    """A feature file is malformed."""


@dataclass(frozen=True, eq=False)
class FeatureVector:
    label: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("feature values must be one-dimensional")
        if not np.isfinite(values).all():
            raise ValueError("feature values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.label, self.values.tobytes()))


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    num_classes: int
    samples_per_class: int
    dim: int
    class_center_scale: float = 1.0
    within_sigma: float = 0.1


def _check_dims(vectors: Sequence[FeatureVector]) -> int:
    dims = {v.dim for v in vectors}
    if len(dims) > 1:
        raise FeatureFormatError(f"vectors have mixed dimensions {sorted(dims)}")
    return dims.pop()


def _load_csv(text: str) -> list[FeatureVector]:
    vectors = []
    dim = None
    for row_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row:
            continue
        label = row[0].strip()
        if not label:
            raise FeatureFormatError(f"row {row_no}: empty label")
        if dim is None:
            dim = len(row) - 1
            if dim < 1:
                raise FeatureFormatError(f"row {row_no}: no feature values")
        elif len(row) - 1 != dim:
            raise FeatureFormatError(
                f"row {row_no}: ragged row with {len(row) - 1} values, expected {dim}"
            )
        try:
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise FeatureFormatError(f"row {row_no}: {exc}") from None
        try:
            vectors.append(FeatureVector(label, np.array(values)))
        except ValueError as exc:
            raise FeatureFormatError(f"row {row_no}: {exc}") from None
    return vectors


def _dump_csv(vectors: Sequence[FeatureVector]) -> str:
    lines = []
    for v in vectors:
        if "," in v.label or "\n" in v.label or '"' in v.label:
            raise ValueError(f"label {v.label!r} cannot be written to CSV")
        lines.append(",".join([v.label, *(repr(float(x)) for x in v.values)]))
    return "\n".join(lines) + "\n"


def _dump_packed(vectors: Sequence[FeatureVector]) -> bytes:
    dim = _check_dims(vectors) if vectors else 0
    body = bytearray(struct.pack(">II", dim, len(vectors)))
    for v in vectors:
        label = v.label.encode("utf-8")
        body += struct.pack(">H", len(label)) + label
        body += v.values.astype(">f8").tobytes()
    out = PACKED_MAGIC + bytes([PACKED_VERSION]) + bytes(body)
    return out + struct.pack(">I", zlib.crc32(out))


def _load_packed(data: bytes) -> list[FeatureVector]:
    if len(data) < len(PACKED_MAGIC) + 1 + 8 + 4:
        raise FeatureFormatError("packed feature file is truncated")
    if data[:4] != PACKED_MAGIC:
        raise FeatureFormatError("bad magic in packed feature file")
    if data[4] != PACKED_VERSION:
        raise FeatureFormatError(f"unknown packed feature version {data[4]}")
    (crc,) = struct.unpack(">I", data[-4:])
    if zlib.crc32(data[:-4]) != crc:
        raise FeatureFormatError("checksum mismatch in packed feature file")
    dim, count = struct.unpack_from(">II", data, 5)
    pos = 13
    end = len(data) - 4
    vectors = []
    for i in range(count):
        if pos + 2 > end:
            raise FeatureFormatError(f"vector {i + 1}: truncated")
        (n,) = struct.unpack_from(">H", data, pos)
        pos += 2
        label = data[pos:pos + n].decode("utf-8")
        pos += n
        if pos + 8 * dim > end:
            raise FeatureFormatError(f"vector {i + 1}: truncated")
        values = np.frombuffer(data, dtype=">f8", count=dim, offset=pos).astype(np.float64)
        pos += 8 * dim
        vectors.append(FeatureVector(label, values))
    if pos != end:
        raise FeatureFormatError("trailing bytes in packed feature file")
    return vectors


def load_features(path, format: str = "csv") -> list[FeatureVector]:
    """Read labeled vectors in file order. ``format`` is ``"csv"`` or ``"packed"``."""
    path = Path(path)
    if format == "csv":
        vectors = _load_csv(path.read_text(encoding="utf-8"))
    elif format == "packed":
        vectors = _load_packed(path.read_bytes())
    else:
        raise ValueError(f"unknown feature format {format!r}")
    if not vectors:
        raise FeatureFormatError(f"{path}: no feature vectors")
    return vectors


def write_features(vectors: Sequence[FeatureVector], path, format: str = "csv") -> None:
    path = Path(path)
    if format == "csv":
        path.write_text(_dump_csv(vectors), encoding="utf-8")
    elif format == "packed":
        path.write_bytes(_dump_packed(vectors))
    else:
        raise ValueError(f"unknown feature format {format!r}")


def synth_classes(spec: SynthSpec) -> list[FeatureVector]:
    """Gaussian class clusters: ``center_c + N(0, within_sigma^2 I)``.

    Centers are ``N(0, class_center_scale^2 I)``. Output is grouped by class,
    labels ``c000, c001, ...``.
    """
    if spec.num_classes < 1 or spec.samples_per_class < 1:
        raise ValueError("need at least one class and one sample per class")
    if spec.dim < 1:
        raise ValueError("dimension must be positive")
    if spec.class_center_scale <= 0 or spec.within_sigma < 0:
        raise ValueError("class_center_scale must be positive and within_sigma non-negative")
    if spec.within_sigma >= spec.class_center_scale:
        warnings.warn(
            f"within_sigma={spec.within_sigma} >= class_center_scale={spec.class_center_scale}: "
            "classes will overlap",
            stacklevel=2,
        )
    rng = np.random.default_rng(spec.seed)
    centers = rng.normal(0.0, spec.class_center_scale, size=(spec.num_classes, spec.dim))
    noise = rng.normal(0.0, 1.0, size=(spec.num_classes, spec.samples_per_class, spec.dim))
    width = len(str(spec.num_classes - 1))
    vectors = []
    for c in range(spec.num_classes):
        label = f"c{c:0{max(3, width)}d}"
        for s in range(spec.samples_per_class):
            vectors.append(FeatureVector(label, centers[c] + spec.within_sigma * noise[c, s]))
    return vectors


def class_centers(spec: SynthSpec) -> np.ndarray:
    """The centers :func:`synth_classes` draws for ``spec``."""
    rng = np.random.default_rng(spec.seed)
    return rng.normal(0.0, spec.class_center_scale, size=(spec.num_classes, spec.dim))


def group_by_label(vectors: Iterable[FeatureVector]) -> dict[str, list[FeatureVector]]:
    groups: dict[str, list[FeatureVector]] = {}
    for v in vectors:
        groups.setdefault(v.label, []).append(v)
    return groups


def real_match_score(a, b, scale: int = 256) -> int:
    """``round(scale * max(0, cos(a, b)))``; 0 when either vector is zero."""
    a = np.asarray(getattr(a, "values", a), dtype=np.float64)
    b = np.asarray(getattr(b, "values", b), dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0
    cos = float(a @ b) / (na * nb)
    return int(round(scale * min(1.0, max(0.0, cos))))
