import numpy as np
import pytest

from bdat.bch import build_code


def naive_gf_mul(a, b, poly, m):
    """Shift-and-add multiply in GF(2^m); independent of the log tables."""
    out = 0
    for _ in range(m):
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return out


def gf2_divmod(num, den):
    """Long division of GF(2) polynomials given as coefficient lists, index = degree."""
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    den = list(den)
    while den[-1] == 0:
        den.pop()
    quot = [0] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den):
        shift = len(num) - len(den)
        quot[shift] = 1
        for i, c in enumerate(den):
            num[i + shift] ^= c
        while num and num[-1] == 0:
            num.pop()
    return quot, num


def all_words(n):
    return ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)


@pytest.fixture(scope="session")
def bch7():
    return build_code(3, 1)


@pytest.fixture(scope="session")
def bch15():
    return build_code(4, 2)


@pytest.fixture(scope="session")
def bch63():
    return build_code(6, 5)


@pytest.fixture(scope="session")
def codebook15(bch15):
    msgs = all_words(bch15.k)
    return np.array([bch15.encode(m) for m in msgs])


@pytest.fixture(scope="session")
def codebook7(bch7):
    msgs = all_words(bch7.k)
    return np.array([bch7.encode(m) for m in msgs])
