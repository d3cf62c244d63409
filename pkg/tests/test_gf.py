import pytest

from bdat.gf import PRIMITIVE_POLYS, GF2m, field
from conftest import naive_gf_mul


@pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYS))
def test_log_antilog_roundtrip(m):
    gf = field(m)
    for x in range(1, gf.size):
        assert gf.exp[gf.log[x]] == x
    assert gf.alpha_pow(gf.n) == 1
    # alpha has full order n
    assert len({gf.alpha_pow(i) for i in range(gf.n)}) == gf.n


@pytest.mark.parametrize("m", [3, 4, 6])
def test_table_mul_matches_shift_and_add(m):
    gf = field(m)
    for a in range(gf.size):
        for b in range(gf.size):
            assert gf.mul(a, b) == naive_gf_mul(a, b, gf.poly, m)


def test_division_and_inverse():
    gf = field(5)
    for a in range(1, gf.size):
        assert gf.mul(a, gf.inv(a)) == 1
        assert gf.div(gf.mul(a, 7), 7) == a
    with pytest.raises(ZeroDivisionError):
        gf.div(1, 0)


def test_unsupported_degree():
    with pytest.raises(ValueError):
        GF2m(2)
    with pytest.raises(ValueError):
        GF2m(11)


def test_minimal_polynomial_has_alpha_power_as_root():
    gf = field(4)
    for i in range(1, gf.n):
        mp = gf.minimal_polynomial(i)
        root = gf.alpha_pow(i)
        acc = 0
        for deg in range(mp.bit_length()):
            if mp >> deg & 1:
                acc ^= gf.pow(root, deg)
        assert acc == 0
