from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import stats as sps

from focused_macros.stats import pearson, spearman

samples = st.integers(2, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(-20, 20), min_size=n, max_size=n),
        st.lists(st.integers(-20, 20), min_size=n, max_size=n),
    )
)


def test_examples():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert spearman([1, 2, 3, 4], [1, 4, 9, 16]) == pytest.approx(1.0)
    assert pearson([1, 2, 3, 4], [1, 4, 9, 16]) == pytest.approx(0.984374, abs=1e-6)


def test_constant_sample_gives_zero():
    assert pearson([3, 3, 3], [1, 2, 3]) == 0.0
    assert spearman([1, 2, 3], [0.1, 0.1, 0.1]) == 0.0


def test_shape_errors():
    with pytest.raises(ValueError):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        spearman([], [])


@given(samples)
def test_pearson_matches_scipy(pair):
    x, y = (np.array(v, dtype=float) for v in pair)
    assume(np.ptp(x) > 0 and np.ptp(y) > 0)
    assert pearson(x, y) == pytest.approx(sps.pearsonr(x, y)[0], abs=1e-9)


@given(samples)
def test_spearman_matches_scipy_with_ties(pair):
    x, y = (np.array(v, dtype=float) for v in pair)
    assume(np.ptp(x) > 0 and np.ptp(y) > 0)
    assert spearman(x, y) == pytest.approx(sps.spearmanr(x, y)[0], abs=1e-9)


@given(samples)
def test_symmetric_and_bounded(pair):
    x, y = pair
    for f in (pearson, spearman):
        r = f(x, y)
        assert -1.0 <= r <= 1.0
        assert r == pytest.approx(f(y, x), abs=1e-12)


def test_spearman_against_rank_difference_formula():
    # no ties: 1 - 6 * sum(d^2) / (n (n^2 - 1)) with d = [0, 1, 1, 0]
    assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(1 - 6 * 2 / (4 * 15))
