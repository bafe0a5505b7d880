"""Shared fixtures: a hand-sized diamond graph with one misleading estimate.

Vertices s=0, a=1, b=2, g=3. Edges s->a, s->b, a->g, b->g. The s->b edge
estimates 2 but truly costs 5, so lazy planners must discover the lie only
if the search ever leans on that edge. All numbers are small integers so
every expected cost below is exact in floating point.
"""

import pytest

from lazyreplan import Graph, LazyWeights

S, A, B, G = 0, 1, 2, 3

DIAMOND_EDGES = [(S, A, 1.0, 1.0), (S, B, 2.0, 5.0),
                 (A, G, 1.0, 1.0), (B, G, 1.0, 1.0)]


def h_zero(u, v=None):
    return 0.0


@pytest.fixture
def diamond():
    g = Graph()
    g.add_vertices(4)
    est, truth = [], []
    for u, v, e, w in DIAMOND_EDGES:
        g.add_edge(u, v)
        est.append(e)
        truth.append(w)
    return g, est, truth


@pytest.fixture
def diamond_weights(diamond):
    g, est, truth = diamond
    return g, LazyWeights(g, est, truth)
