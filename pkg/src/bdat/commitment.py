"""Fuzzy commitment of a binary template to a random BCH codeword.

Stores ``mask = template XOR c`` and ``SHA-256(pack(c) || salt)`` for a fresh
codeword ``c``. A query is accepted when ``mask XOR query`` decodes to a word
whose salted hash matches, i.e. when the query lies within ``t`` bits of the
enrolled template. The template itself is never stored.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass

import numpy as np

from bdat.bch import BCHCode, as_bits

SALT_BYTES = 16


def pack_bits(bits) -> bytes:
    """8 bits per byte, most significant bit first, zero padded at the end."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def unpack_bits(data: bytes, n: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if bits.size < n or bits[n:].any():
        raise ValueError("packed bit string has wrong length or nonzero padding")
    return bits[:n].copy()


def _digest(codeword: np.ndarray, salt: bytes) -> bytes:
    return hashlib.sha256(pack_bits(codeword) + salt).digest()


@dataclass(frozen=True, eq=False)
class Commitment:
    code_ref: str
    mask: np.ndarray
    digest: bytes
    salt: bytes

    def __eq__(self, other):
        if not isinstance(other, Commitment):
            return NotImplemented
        return (
            self.code_ref == other.code_ref
            and np.array_equal(self.mask, other.mask)
            and self.digest == other.digest
            and self.salt == other.salt
        )


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    errors_corrected: int | None = None

    def __bool__(self):
        return self.accepted


def commit(template, code: BCHCode, seed: int | None = None) -> Commitment:
    """Bind ``template`` to a random codeword.

    With ``seed=None`` the codeword message and salt come from the OS entropy
    pool; a seed makes the commitment reproducible (tests, audited re-runs).
    """
    template = as_bits(template, code.n)
    if seed is None:
        seed = secrets.randbits(64)
    rng = np.random.default_rng(seed)
    message = rng.integers(0, 2, size=code.k, dtype=np.uint8)
    salt = rng.bytes(SALT_BYTES)
    c = code.encode(message)
    mask = template ^ c
    mask.setflags(write=False)
    return Commitment(code_ref=code.code_ref, mask=mask, digest=_digest(c, salt), salt=salt)


def verify(commitment: Commitment, query, code: BCHCode) -> Verdict:
    if commitment.code_ref != code.code_ref:
        raise ValueError(f"commitment is for {commitment.code_ref}, not {code.code_ref}")
    query = as_bits(query, code.n)
    result = code.decode(commitment.mask ^ query)
    if result is None:
        return Verdict(False)
    if not secrets.compare_digest(_digest(result.codeword, commitment.salt), commitment.digest):
        return Verdict(False)
    return Verdict(True, result.errors_corrected)
