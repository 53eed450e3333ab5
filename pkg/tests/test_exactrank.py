import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfmimo.cnf import GaussInt
from cfmimo.exactrank import rank, rank_without_row

from conftest import random_gauss_matrix, rational_rank

entry = st.builds(complex, st.integers(-4, 4), st.integers(-4, 4))


@st.composite
def matrices(draw):
    r, c = draw(st.integers(1, 7)), draw(st.integers(1, 5))
    return np.array(draw(st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_identity():
    assert rank(np.eye(6)) == 6


def test_unit_multiple_row():
    assert rank([[1, 1j], [1j, -1]]) == 1


def test_gaussint_entries():
    assert rank([[GaussInt(1, 0), GaussInt(0, 1)], [GaussInt(2, 1), GaussInt(0, 0)]]) == 2


def test_zero_matrix():
    assert rank(np.zeros((3, 4))) == 0


def test_rejects_non_integer():
    with pytest.raises(ValueError):
        rank([[0.5, 1]])


def test_against_rational_oracle(rng):
    for _ in range(200):
        a = random_gauss_matrix(rng, rng.integers(1, 13), rng.integers(1, 9), 5,
                                density=rng.uniform(0.2, 1.0))
        # low-rank products exercise dependence, not just generic full rank
        if rng.random() < 0.4:
            k = rng.integers(1, 4)
            a = random_gauss_matrix(rng, a.shape[0], k, 2) @ random_gauss_matrix(rng, k, a.shape[1], 2)
        assert rank(a) == rational_rank(a)


def test_large_entries_exact():
    big = 10 ** 30
    a = [[big + 1, big], [big, big - 1]]  # det = -1
    assert rank(a) == 2
    assert rank([[(big, 0), (0, 1)], [(0, big), (-1, 0)]]) == 1


def test_rank_without_row_examples():
    a = [[1, 2j], [1, 2j], [0, 1]]
    assert rank_without_row(a, 0) == rank(a) == 2
    assert rank_without_row([[0, 0], [3, 1j]], 1) == 0
    with pytest.raises(IndexError):
        rank_without_row(a, 3)


def test_rank_without_row_matches_deleted_copy(rng):
    for _ in range(100):
        a = random_gauss_matrix(rng, rng.integers(1, 9), rng.integers(1, 6), 3, density=0.5)
        i = int(rng.integers(0, a.shape[0]))
        r = rank_without_row(a, i)
        assert r == rank(np.delete(a, i, axis=0))
        assert rank(a) - 1 <= r <= rank(a)


def test_limit_stops_early():
    assert rank(np.eye(5), limit=3) == 3


@settings(max_examples=200, deadline=None)
@given(matrices(), st.randoms(use_true_random=False), st.sampled_from([1, -1, 1j, -1j]))
def test_rank_invariances(a, rnd, u):
    r = rank(a)
    assert r <= min(a.shape)
    perm = list(range(a.shape[0]))
    rnd.shuffle(perm)
    assert rank(a[perm]) == r
    b = a.copy()
    b[0] = u * b[0]
    assert rank(b) == r
    assert rank(np.vstack([a, a[-1:]])) == r
