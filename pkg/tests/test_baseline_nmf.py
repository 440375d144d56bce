import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ideoprop.baseline_nmf import (DegenerateMatrixError, NmfFactors, frobenius, incidence,
                                   nmf_classify, nmf_factorize)
from ideoprop.bhin import PostRecord, build_graph
from ideoprop.neardup import VisualAssertion


def test_rank_one_is_recovered():
    g = np.random.default_rng(0)
    B = np.outer(g.uniform(0.5, 2, 12), g.uniform(0.5, 2, 9))
    f = nmf_factorize(B, k=1, iters=500)
    assert f.losses[-1] < 1e-8


def block_matrix():
    B = np.zeros((10, 14))
    B[:5, :7] = 1
    B[5:, 7:] = 1
    return B


def test_block_diagonal_recovered():
    axes, tie = nmf_classify(nmf_factorize(block_matrix(), k=2))
    planted = np.repeat([0, 1], 7)
    assert not tie.any()
    assert np.array_equal(axes, planted) or np.array_equal(axes, 1 - planted)


def test_classify_examples():
    f = NmfFactors(np.ones((1, 2)), np.array([[0.9, 0.5, 0.2], [0.1, 0.5, 0.3]]), [])
    axes, tie = nmf_classify(f)
    assert axes.tolist() == [0, 0, 1] and tie.tolist() == [False, True, False]
    assert f.k == 2


def test_degenerate_inputs():
    with pytest.raises(DegenerateMatrixError):
        nmf_factorize(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        nmf_factorize(-np.ones((2, 2)))
    with pytest.raises(ValueError):
        nmf_factorize(np.ones((2, 2)), k=0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_monotone_and_non_negative(seed, k):
    g = np.random.default_rng(seed)
    B = (g.random((8, 11)) < 0.3).astype(float)
    B[0, 0] = 1.0
    seen = []
    f = nmf_factorize(B, k, iters=60, seed=seed,
                      callback=lambda it, W, H: seen.append(W.min() >= 0 and H.min() >= 0))
    assert all(seen)
    assert np.all(np.diff(f.losses) <= 1e-10)
    assert f.losses[-1] == pytest.approx(frobenius(B, f.W, f.H))


def test_seed_determinism():
    B = block_matrix() + (np.random.default_rng(1).random((10, 14)) < 0.1)
    a, b = nmf_factorize(B, 2, 100, seed=7), nmf_factorize(B, 2, 100, seed=7)
    assert np.array_equal(nmf_classify(a)[0], nmf_classify(b)[0]) and np.array_equal(a.H, b.H)


def test_incidence_from_graph():
    posts = [PostRecord("u1", "i1"), PostRecord("u2", "i2"), PostRecord("u2", "i1")]
    g = build_graph(posts, [VisualAssertion(0, frozenset({"i1"})), VisualAssertion(1, frozenset({"i2"}))])
    B, rows, cols = incidence(g)
    assert B.tolist() == [[1, 0], [1, 1]] and rows == [0, 1] and cols == [2, 3]
