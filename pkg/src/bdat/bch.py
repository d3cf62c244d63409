"""Binary narrow-sense BCH codes of length ``n = 2^m - 1``.

Bit order is frozen: index ``i`` of a bit array is the coefficient of ``x^i``.
Encoding is systematic, with the ``n - k`` parity bits at indices
``0 .. n-k-1`` and message bit ``i`` at index ``n - k + i``.

Decoding is bounded-distance: syndromes, Berlekamp-Massey for the error
locator, Chien search for its roots. Words more than ``t`` errors away from
every codeword either fail (``None``) or land on a wrong codeword; callers that
care (the fuzzy commitment) check the result independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np

from bdat.gf import GF2m, field

MAX_EXHAUSTIVE_K = 20


def as_bits(bits, n: int | None = None) -> np.ndarray:
    """Coerce a 0/1 sequence to a uint8 array, checking values and length."""
    arr = np.asarray(bits)
    if arr.dtype == np.uint8 and arr.ndim == 1 and (n is None or arr.size == n):
        if arr.size and arr.max() > 1:
            raise ValueError("bit string may only contain 0 and 1")
        return arr
    if arr.ndim != 1:
        raise ValueError("bit string must be one-dimensional")
    if arr.size and not ((arr == 0) | (arr == 1)).all():
        raise ValueError("bit string may only contain 0 and 1")
    arr = arr.astype(np.uint8, copy=False)
    if n is not None and arr.size != n:
        raise ValueError(f"expected {n} bits, got {arr.size}")
    return arr


def bits_to_int(bits: np.ndarray) -> int:
    """Little-endian: bit ``i`` of the result is ``bits[i]``."""
    out = 0
    for i in np.flatnonzero(bits):
        out |= 1 << int(i)
    return out


def int_to_bits(value: int, n: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(n)], dtype=np.uint8)


def poly_mod(a: int, b: int) -> int:
    """Remainder of GF(2)[x] division, polynomials as bitmasks."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def hamming(a, b) -> int:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


@dataclass(frozen=True)
class DecodeResult:
    codeword: np.ndarray
    errors_corrected: int


@dataclass(frozen=True)
class BCHCode:
    """Parameters of a binary BCH code; build with :func:`build_code`."""

    m: int
    t: int
    n: int
    k: int
    generator: int
    gf: GF2m = dc_field(repr=False, compare=False)

    @property
    def d_min(self) -> int:
        """Designed minimum distance."""
        return 2 * self.t + 1

    @property
    def code_ref(self) -> str:
        return f"BCH({self.n},{self.k},t={self.t})"

    @property
    def generator_bits(self) -> np.ndarray:
        return int_to_bits(self.generator, self.n - self.k + 1)

    def syndromes(self, word: np.ndarray) -> np.ndarray:
        """``S_j = word(alpha^j)`` for ``j = 1 .. 2t``."""
        return np.array(self._syndromes(np.flatnonzero(word).tolist()), dtype=np.int64)

    @cached_property
    def _packed_columns(self) -> list[int]:
        """Per position ``p``: ``alpha^(j p)`` for ``j = 1 .. 2t``, packed ``m`` bits apiece."""
        exp, n, m = self.gf._exp, self.n, self.m
        return [sum(exp[(j * p) % n] << (m * (j - 1)) for j in range(1, 2 * self.t + 1))
                for p in range(n)]

    def _syndromes(self, positions: list[int]) -> list[int]:
        cols = self._packed_columns
        acc = 0
        for p in positions:
            acc ^= cols[p]
        mask = (1 << self.m) - 1
        return [(acc >> (self.m * j)) & mask for j in range(2 * self.t)]

    def is_codeword(self, word) -> bool:
        word = as_bits(word, self.n)
        return not any(self._syndromes(np.flatnonzero(word).tolist()))

    def encode(self, message) -> np.ndarray:
        message = as_bits(message, self.k)
        shifted = bits_to_int(message) << (self.n - self.k)
        return int_to_bits(shifted ^ poly_mod(shifted, self.generator), self.n)

    def message_of(self, codeword) -> np.ndarray:
        """Inverse of :meth:`encode` for a valid codeword."""
        return as_bits(codeword, self.n)[self.n - self.k:].copy()

    def decode(self, word) -> DecodeResult | None:
        """Nearest codeword within distance ``t``, or ``None`` on failure."""
        word = as_bits(word, self.n)
        ones = np.flatnonzero(word).tolist()
        synd = self._syndromes(ones)
        if not any(synd):
            return DecodeResult(word.copy(), 0)

        locator = self._berlekamp_massey(synd)
        degree = len(locator) - 1
        if degree > self.t:
            return None
        positions = self._chien(locator)
        if len(positions) != degree:
            return None
        corrected = word.copy()
        corrected[positions] ^= 1
        # Syndromes are linear: the flips must cancel the received syndromes exactly.
        if self._syndromes(positions) != synd:
            return None
        return DecodeResult(corrected, degree)

    def _berlekamp_massey(self, synd) -> list[int]:
        exp, log, n = self.gf._exp, self.gf._log, self.n
        s = [int(v) for v in synd]
        c = [1]
        b = [1]
        length = 0
        shift = 1
        last = 1
        for r in range(len(s)):
            disc = s[r]
            for i in range(1, min(length, len(c) - 1) + 1):
                if c[i] and s[r - i]:
                    disc ^= exp[log[c[i]] + log[s[r - i]]]
            if disc == 0:
                shift += 1
                continue
            lcoef = (log[disc] - log[last]) % n
            new = c + [0] * max(0, len(b) + shift - len(c))
            for i, bi in enumerate(b):
                if bi:
                    new[i + shift] ^= exp[lcoef + log[bi]]
            if 2 * length <= r:
                b, c = c, new
                length = r + 1 - length
                last = disc
                shift = 1
            else:
                c = new
                shift += 1
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if len(c) - 1 != length:
            # Locator degree disagrees with the LFSR length: inconsistent syndromes.
            return [1] + [0] * (self.t + 1)
        return c

    def _chien(self, locator: list[int]) -> list[int]:
        """Error positions ``p`` with ``locator(alpha^-p) == 0``."""
        exp, log, n = self.gf._exp, self.gf._log, self.n
        terms = [(log[coef], power) for power, coef in enumerate(locator) if coef]
        degree = len(locator) - 1
        found = []
        for p in range(n):
            total = 0
            for lc, power in terms:
                total ^= exp[(lc - power * p) % n]
            if total == 0:
                found.append(p)
                if len(found) == degree:
                    break
        return found

    def random_codewords(self, count: int, seed: int | np.random.Generator) -> list[np.ndarray]:
        """``count`` distinct codewords from seeded random messages."""
        if count < 0:
            raise ValueError("count must be non-negative")
        if self.k < 64 and count > (1 << self.k):
            raise ValueError(f"{self.code_ref} has only {1 << self.k} codewords, asked for {count}")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        if self.k <= MAX_EXHAUSTIVE_K:
            picks = rng.choice(1 << self.k, size=count, replace=False)
            messages = [int_to_bits(int(v), self.k) for v in picks]
        else:
            seen: set[bytes] = set()
            messages = []
            while len(messages) < count:
                msg = rng.integers(0, 2, size=self.k, dtype=np.uint8)
                key = msg.tobytes()
                if key not in seen:
                    seen.add(key)
                    messages.append(msg)
        return [self.encode(msg) for msg in messages]


@lru_cache(maxsize=None)
def build_code(m: int, t: int) -> BCHCode:
    """Narrow-sense binary BCH code of length ``2^m - 1`` correcting ``t`` errors."""
    if not 3 <= m <= 10:
        raise ValueError(f"field degree m must be in 3..10, got {m}")
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    gf = field(m)
    n = gf.n
    if 2 * t + 1 >= n:
        # Designed distance n is the repetition code: nothing left to carry data.
        raise ValueError(f"t={t} too large for n={n}: designed distance must stay below n")
    generator = 1
    used: set[int] = set()
    for i in range(1, 2 * t + 1):
        rep = min(gf.cyclotomic_coset(i))
        if rep in used:
            continue
        used.add(rep)
        generator = poly_mul(generator, gf.minimal_polynomial(i))
    k = n - (generator.bit_length() - 1)
    if k < 1:
        raise ValueError(f"t={t} leaves no message bits for n={n}")
    return BCHCode(m=m, t=t, n=n, k=k, generator=generator, gf=gf)
