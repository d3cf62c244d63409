import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdat.randproj import ORTHO_TOL, gen_matrix, project


@pytest.mark.parametrize("d,k", [(1, 1), (8, 4), (8, 8), (128, 32)])
def test_rows_are_orthonormal(d, k):
    for seed in range(3):
        rows = gen_matrix(seed, d, k).rows
        assert rows.shape == (k, d)
        assert np.abs(rows @ rows.T - np.eye(k)).max() < ORTHO_TOL


def test_same_seed_same_matrix_different_seed_different():
    a = gen_matrix(42, 64, 16)
    b = gen_matrix(42, 64, 16)
    c = gen_matrix(43, 64, 16)
    assert np.array_equal(a.rows, b.rows)
    assert not np.allclose(a.rows, c.rows)


def test_rows_are_read_only():
    key = gen_matrix(0, 8, 4)
    with pytest.raises(ValueError):
        key.rows[0, 0] = 1.0


@pytest.mark.parametrize("d,k", [(4, 5), (0, 1), (3, 0)])
def test_bad_dimensions(d, k):
    with pytest.raises(ValueError):
        gen_matrix(0, d, k)


def test_basis_vector_maps_to_scaled_column():
    key = gen_matrix(5, 16, 4)
    for j in range(16):
        e = np.zeros(16)
        e[j] = 1.0
        assert np.allclose(project(key, e), key.scale * key.rows[:, j])


def test_zero_vector_and_dimension_check():
    key = gen_matrix(1, 10, 3)
    assert np.array_equal(project(key, np.zeros(10)), np.zeros(3))
    with pytest.raises(ValueError):
        project(key, np.ones(9))


def test_stack_matches_single():
    key = gen_matrix(2, 20, 5)
    x = np.random.default_rng(0).normal(size=(6, 20))
    stacked = project(key, x)
    for i in range(6):
        assert np.allclose(stacked[i], key.project(x[i]))


vec = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=12, max_size=12)


@settings(max_examples=60, deadline=None)
@given(vec, vec, st.floats(-10, 10, allow_nan=False), st.integers(0, 2**32))
def test_linearity(u, v, a, seed):
    key = gen_matrix(seed, 12, 5)
    u, v = np.array(u), np.array(v)
    lhs = project(key, a * u + v)
    rhs = a * project(key, u) + project(key, v)
    assert np.allclose(lhs, rhs, atol=1e-6 * (1 + np.abs(rhs).max()))


@settings(max_examples=60, deadline=None)
@given(vec, st.integers(0, 2**32))
def test_norm_bound(v, seed):
    key = gen_matrix(seed, 12, 5)
    v = np.array(v)
    assert np.linalg.norm(project(key, v)) <= key.scale * np.linalg.norm(v) * (1 + 1e-9) + 1e-9


def test_fresh_seeds_give_unrelated_templates():
    v = np.random.default_rng(9).normal(size=128)
    corrs = []
    for seed in range(50):
        a = project(gen_matrix(2 * seed, 128, 32), v)
        b = project(gen_matrix(2 * seed + 1, 128, 32), v)
        corrs.append(np.corrcoef(a, b)[0, 1])
    assert np.mean(np.abs(corrs)) < 0.2
