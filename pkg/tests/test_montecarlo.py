import math

import numpy as np
import pytest

from tamechroma.colouring import count_colourings
from tamechroma.errors import DomainError
from tamechroma.graphs import BitGraph
from tamechroma.iset import GraphParams
from tamechroma.montecarlo import mc_expectation, sample_edge_batch
from tamechroma.profiles import Profile, expect_ordered, expect_unordered


def test_reproducible():
    pr = Profile(8, {2: 4})
    a = mc_expectation(GraphParams(8), pr, 3000, seed=5)
    b = mc_expectation(GraphParams(8), pr, 3000, seed=5)
    assert a == b
    c = mc_expectation(GraphParams(8), pr, 3000, seed=6)
    assert c.mean != a.mean


def test_thread_count_does_not_matter(monkeypatch):
    pr = Profile(8, {3: 2, 2: 1})
    one = mc_expectation(GraphParams(8), pr, 5000, seed=1, batch_size=700)
    monkeypatch.setenv("TAMECHROMA_THREADS", "3")
    three = mc_expectation(GraphParams(8), pr, 5000, seed=1, batch_size=700)
    assert one == three


def test_pairs_example_ci():
    pr = Profile(8, {2: 4})
    exact = float(expect_ordered(pr, GraphParams(8)))
    assert exact == pytest.approx(math.factorial(8) / 2**4 / 2**4)
    res = mc_expectation(GraphParams(8), pr, 100_000, seed=11, level=0.99)
    assert res.ci.lo <= exact <= res.ci.hi


def test_unordered_scaling():
    pr = Profile(8, {2: 4})
    o = mc_expectation(GraphParams(8), pr, 2000, seed=3)
    u = mc_expectation(GraphParams(8), pr, 2000, seed=3, ordered=False)
    assert float(o.mean) == pytest.approx(24 * float(u.mean))
    exact = float(expect_unordered(pr, GraphParams(8)))
    big = mc_expectation(GraphParams(8), pr, 50_000, seed=4, ordered=False, level=0.99)
    assert big.ci.lo <= exact <= big.ci.hi


def test_complete_graph_gives_zero():
    params = GraphParams(8, 0.5, 28)
    res = mc_expectation(params, Profile(8, {2: 4}), 100, seed=0, model="gnm")
    assert res.mean.sign == 0 and res.std == 0
    assert res.histogram == {0: 100}


def test_matches_direct_counting():
    n, pr = 7, Profile(7, {3: 1, 2: 2})
    edges = sample_edge_batch(n, 1, 0, "gnp", 0.5, 0)[0]
    g = BitGraph.from_pair_mask(n, sum(1 << int(i) for i in np.flatnonzero(edges)))
    res = mc_expectation(GraphParams(n), pr, 1, seed=0, batch_size=1)
    assert float(res.mean) == count_colourings(g, pr)


def test_gnm_batch_has_m_edges():
    e = sample_edge_batch(9, 50, 2, "gnm", 0.5, 17)
    assert (e.sum(axis=1) == 17).all()


@pytest.mark.parametrize("kwargs", [
    {"samples": 0}, {"model": "other"}, {"level": 1.0},
])
def test_bad_args(kwargs):
    args = {"samples": 10, "seed": 0, **kwargs}
    with pytest.raises(DomainError):
        mc_expectation(GraphParams(8), Profile(8, {2: 4}), **args)


def test_limits():
    with pytest.raises(DomainError):
        mc_expectation(GraphParams(21), Profile(21, {3: 7}), 10, 0)
    with pytest.raises(DomainError):
        mc_expectation(GraphParams(9), Profile(8, {2: 4}), 10, 0)
