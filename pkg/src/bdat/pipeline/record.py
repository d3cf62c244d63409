"""Template records and their byte format.

Layout (all integers big-endian)::

    magic      4 bytes   b"BDAT"
    version    u8        1
    length     u32       total record length in bytes, checksum included
    section*             tag u8, payload length u32, payload
    crc32      u32       zlib CRC-32 of every preceding byte

Sections appear exactly once each, in tag order:

    1 USER    user id, UTF-8
    2 CONFIG  d u32, k u32, m u8, t u8, blocks u16, epochs u32, rate f64,
              score_scale u32, background u32
    3 SEED    projection seed u64, created_at i64 (unix seconds)
    4 MODEL   class id (u16 len + UTF-8), code ref (u16 len + UTF-8),
              n u32, k u32, epochs_run u32, bit_errors u32, converged u8,
              weights n*k f64 row-major, biases n f64
    5 COMMIT  count u16, then per block: code ref (u16 len + UTF-8),
              mask bit length u16, mask packed MSB-first, salt 16 bytes,
              digest 32 bytes

The class target codeword is deliberately absent: it equals the enrolled
binary template whenever training converges.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from bdat.bda import ClassModel
from bdat.commitment import SALT_BYTES, Commitment, pack_bits, unpack_bits
from bdat.pipeline.config import StageConfig

MAGIC = b"BDAT"
VERSION = 1
HEADER = struct.Struct(">4sBI")
SECTION = struct.Struct(">BI")
CONFIG = struct.Struct(">IIBBHIdII")
SEED = struct.Struct(">Qq")
MODEL_FIXED = struct.Struct(">IIIIB")
DIGEST_BYTES = 32

TAG_USER, TAG_CONFIG, TAG_SEED, TAG_MODEL, TAG_COMMIT = 1, 2, 3, 4, 5


class RecordFormatError(ValueError):
    """Base class for unreadable record bytes."""


class BadMagicError(RecordFormatError):
    pass


class UnknownVersionError(RecordFormatError):
    pass


class TruncatedRecordError(RecordFormatError):
    pass


class TrailingBytesError(RecordFormatError):
    pass


class ChecksumError(RecordFormatError):
    pass


class MalformedSectionError(RecordFormatError):
    pass


@dataclass(frozen=True, eq=False)
class TemplateRecord:
    user_id: str
    config: StageConfig
    projection_seed: int
    model: ClassModel
    commitments: list[Commitment] = field(default_factory=list)
    created_at: int = 0
    version: int = VERSION

    def __eq__(self, other):
        if not isinstance(other, TemplateRecord):
            return NotImplemented
        return (
            self.user_id == other.user_id
            and self.version == other.version
            and self.config == other.config
            and self.projection_seed == other.projection_seed
            and self.model.same_parameters(other.model)
            and self.commitments == other.commitments
            and self.created_at == other.created_at
        )


def _text(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("string too long for record")
    return struct.pack(">H", len(raw)) + raw


def _section(tag: int, payload: bytes) -> bytes:
    return SECTION.pack(tag, len(payload)) + payload


def serialize_record(record: TemplateRecord) -> bytes:
    c = record.config
    config = CONFIG.pack(c.d, c.k, c.m, c.t, c.blocks, c.epochs, c.rate, c.score_scale, c.background)

    model = record.model
    model_bytes = (
        _text(model.class_id)
        + _text(model.code_ref)
        + MODEL_FIXED.pack(model.n, model.k, model.epochs_run, model.bit_errors, int(model.converged))
        + np.ascontiguousarray(model.weights, dtype=">f8").tobytes()
        + np.ascontiguousarray(model.biases, dtype=">f8").tobytes()
    )

    commits = bytearray(struct.pack(">H", len(record.commitments)))
    for cm in record.commitments:
        commits += _text(cm.code_ref) + struct.pack(">H", cm.mask.size) + pack_bits(cm.mask)
        commits += cm.salt + cm.digest

    body = b"".join([
        _section(TAG_USER, record.user_id.encode("utf-8")),
        _section(TAG_CONFIG, config),
        _section(TAG_SEED, SEED.pack(record.projection_seed, record.created_at)),
        _section(TAG_MODEL, model_bytes),
        _section(TAG_COMMIT, bytes(commits)),
    ])
    total = HEADER.size + len(body) + 4
    head = HEADER.pack(MAGIC, record.version, total)
    return head + body + struct.pack(">I", zlib.crc32(head + body))


class _Reader:
    def __init__(self, data: bytes, what: str):
        self.data = data
        self.pos = 0
        self.what = what

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise MalformedSectionError(f"{self.what}: field runs past section end")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, st: struct.Struct):
        return st.unpack(self.take(st.size))

    def text(self) -> str:
        (n,) = struct.unpack(">H", self.take(2))
        try:
            return self.take(n).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedSectionError(f"{self.what}: {exc}") from None

    def done(self):
        if self.pos != len(self.data):
            raise MalformedSectionError(f"{self.what}: {len(self.data) - self.pos} unread bytes")


def deserialize_record(data: bytes) -> TemplateRecord:
    if len(data) < HEADER.size:
        raise TruncatedRecordError("record shorter than its header")
    magic, version, total = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnknownVersionError(f"unknown record version {version}")
    if len(data) < total:
        raise TruncatedRecordError(f"record is {len(data)} bytes, header says {total}")
    if len(data) > total:
        raise TrailingBytesError(f"{len(data) - total} bytes after the record")
    if total < HEADER.size + 4:
        raise TruncatedRecordError("record has no room for a checksum")
    (crc,) = struct.unpack(">I", data[-4:])
    if zlib.crc32(data[:-4]) != crc:
        raise ChecksumError("record checksum mismatch")

    sections = {}
    body = _Reader(data[HEADER.size:-4], "record body")
    expected = TAG_USER
    while body.pos < len(body.data):
        tag, length = body.unpack(SECTION)
        if tag != expected:
            raise MalformedSectionError(f"expected section {expected}, found {tag}")
        sections[tag] = body.take(length)
        expected += 1
    if expected != TAG_COMMIT + 1:
        raise MalformedSectionError("record is missing sections")

    try:
        user_id = sections[TAG_USER].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedSectionError(f"user id: {exc}") from None

    r = _Reader(sections[TAG_CONFIG], "config")
    d, k, m, t, blocks, epochs, rate, scale, background = r.unpack(CONFIG)
    r.done()
    try:
        config = StageConfig(d=d, k=k, m=m, t=t, blocks=blocks, epochs=epochs, rate=rate,
                             score_scale=scale, background=background)
    except ValueError as exc:
        raise MalformedSectionError(f"config: {exc}") from None

    r = _Reader(sections[TAG_SEED], "seed")
    projection_seed, created_at = r.unpack(SEED)
    r.done()

    r = _Reader(sections[TAG_MODEL], "model")
    class_id = r.text()
    code_ref = r.text()
    n, mk, epochs_run, bit_errors, converged = r.unpack(MODEL_FIXED)
    if converged not in (0, 1):
        raise MalformedSectionError("model: bad converged flag")
    weights = np.frombuffer(r.take(8 * n * mk), dtype=">f8").astype(np.float64).reshape(n, mk)
    biases = np.frombuffer(r.take(8 * n), dtype=">f8").astype(np.float64)
    r.done()
    weights.setflags(write=False)
    biases.setflags(write=False)
    model = ClassModel(class_id=class_id, weights=weights, biases=biases, target=None,
                       code_ref=code_ref, epochs_run=epochs_run, bit_errors=bit_errors,
                       converged=bool(converged))

    r = _Reader(sections[TAG_COMMIT], "commitments")
    (count,) = struct.unpack(">H", r.take(2))
    commitments = []
    for _ in range(count):
        cref = r.text()
        (nbits,) = struct.unpack(">H", r.take(2))
        try:
            mask = unpack_bits(r.take((nbits + 7) // 8), nbits)
        except ValueError as exc:
            raise MalformedSectionError(f"commitments: {exc}") from None
        mask.setflags(write=False)
        salt = r.take(SALT_BYTES)
        digest = r.take(DIGEST_BYTES)
        commitments.append(Commitment(code_ref=cref, mask=mask, digest=digest, salt=salt))
    r.done()

    return TemplateRecord(user_id=user_id, config=config, projection_seed=projection_seed,
                          model=model, commitments=commitments, created_at=created_at,
                          version=version)
