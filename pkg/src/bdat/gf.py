"""Arithmetic in GF(2^m) through log/antilog tables.

Field elements are ints in ``[0, 2^m)`` whose bit ``i`` is the coefficient of
``x^i`` in the polynomial basis. The primitive element alpha is ``x`` (the int 2)
modulo the primitive polynomial fixed for each ``m`` in :data:`PRIMITIVE_POLYS`.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Frozen table; changing an entry changes every codeword built on that field.
PRIMITIVE_POLYS: dict[int, int] = {
    3: 0b1011,          # x^3 + x + 1
    4: 0b10011,         # x^4 + x + 1
    5: 0b100101,        # x^5 + x^2 + 1
    6: 0b1000011,       # x^6 + x + 1
    7: 0b10001001,      # x^7 + x^3 + 1
    8: 0b100011101,     # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,    # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}


class GF2m:
    """The field GF(2^m) for ``3 <= m <= 10``.

    ``exp`` has length ``2n`` so that ``exp[log a + log b]`` needs no reduction.
    ``log[0]`` is meaningless and set to -1.
    """

    def __init__(self, m: int):
        if m not in PRIMITIVE_POLYS:
            raise ValueError(f"unsupported field degree m={m}; expected 3..10")
        self.m = m
        self.size = 1 << m
        self.n = self.size - 1
        self.poly = PRIMITIVE_POLYS[m]

        exp = np.zeros(2 * self.n, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        x = 1
        for i in range(self.n):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.size:
                x ^= self.poly
        if x != 1:
            raise AssertionError(f"polynomial {self.poly:#b} is not primitive")
        exp[self.n:] = exp[: self.n]
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp = exp
        self.log = log
        # Plain-list mirrors: scalar indexing into numpy arrays is slow.
        self._exp = exp.tolist()
        self._log = log.tolist()

    def __repr__(self) -> str:
        return f"GF2m(m={self.m})"

    def alpha_pow(self, e: int) -> int:
        return self._exp[e % self.n]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^m)")
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self.n]

    def inv(self, a: int) -> int:
        return self.div(1, a)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % self.n]

    def cyclotomic_coset(self, i: int) -> list[int]:
        """Exponents ``{i, 2i, 4i, ...} mod n``: the conjugates of alpha^i."""
        coset = []
        j = i % self.n
        while j not in coset:
            coset.append(j)
            j = (2 * j) % self.n
        return coset

    def minimal_polynomial(self, i: int) -> int:
        """Minimal polynomial of alpha^i over GF(2), as a coefficient bitmask."""
        # Expand prod (x + alpha^j) over the coset with coefficients in GF(2^m).
        coeffs = [1]  # coeffs[d] is the coefficient of x^d
        for j in self.cyclotomic_coset(i):
            root = self.alpha_pow(j)
            shifted = [0] + coeffs
            for d in range(len(coeffs)):
                shifted[d] ^= self.mul(coeffs[d], root)
            coeffs = shifted
        if any(c not in (0, 1) for c in coeffs):
            raise AssertionError("minimal polynomial has coefficients outside GF(2)")
        return sum(c << d for d, c in enumerate(coeffs))


@lru_cache(maxsize=None)
def field(m: int) -> GF2m:
    return GF2m(m)
