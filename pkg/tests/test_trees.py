from __future__ import annotations

import itertools
import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treecorr.trees import (
    CapacityError,
    NotATreeError,
    UnlabeledTree,
    aut_count,
    canonical_form,
    enumerate_free_trees,
    path_tree,
    star_tree,
    sub_n,
)

# OEIS A000055 shifted to edge count
COUNTS = {1: 1, 2: 1, 3: 2, 4: 3, 5: 6, 6: 11, 7: 23, 8: 47, 9: 106, 10: 235, 11: 551, 12: 1301}


def prufer_to_edges(seq, nv):
    degree = [1] * nv
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(nv) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(nv) if degree[i] == 1]
    edges.append((u, v))
    return edges


def brute_aut(edges):
    nv = len(edges) + 1
    es = {frozenset(e) for e in edges}
    return sum(
        all(frozenset((p[u], p[v])) in es for u, v in edges)
        for p in itertools.permutations(range(nv))
    )


@pytest.mark.parametrize("k", range(1, 12))
def test_counts(k):
    assert len(enumerate_free_trees(k)) == COUNTS[k]


@pytest.mark.parametrize("k", range(1, 10))
def test_cayley_identity(k):
    total = sum(math.factorial(k + 1) // h.aut for h in enumerate_free_trees(k))
    assert total == (k + 1) ** (k - 1)


@pytest.mark.parametrize("k", range(1, 8))
def test_prufer_oracle(k):
    nv = k + 1
    classes = {}
    for seq in itertools.product(range(nv), repeat=nv - 2):
        canon = canonical_form(prufer_to_edges(seq, nv))
        classes[canon] = classes.get(canon, 0) + 1
    fam = enumerate_free_trees(k)
    assert set(classes) == {h.canon for h in fam}
    # labeled trees per class are (K+1)! / aut
    for h in fam:
        assert classes[h.canon] == math.factorial(nv) // h.aut


@pytest.mark.parametrize("k", range(8, 12))
def test_networkx_oracle(k):
    ours = {h.canon for h in enumerate_free_trees(k)}
    theirs = {canonical_form(list(t.edges())) for t in nx.nonisomorphic_trees(k + 1)}
    assert ours == theirs


@pytest.mark.parametrize("k", range(1, 7))
def test_aut_against_permutations(k):
    for h in enumerate_free_trees(k):
        assert h.aut == brute_aut(h.edges)


def test_named_examples():
    assert path_tree(3).aut == 2
    assert star_tree(5).aut == 120
    ex = UnlabeledTree.from_edges([(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert ex.aut == 8
    assert len(enumerate_free_trees(4)) == 3


def test_sub_n():
    assert sub_n(path_tree(2), 4) == 12
    assert sub_n(star_tree(3), 4) == 4
    assert sub_n(path_tree(5), 4) == 0


def test_errors():
    with pytest.raises(NotATreeError):
        canonical_form([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(NotATreeError):
        canonical_form([(0, 1), (2, 3)])
    with pytest.raises(NotATreeError):
        canonical_form([])
    with pytest.raises(CapacityError):
        enumerate_free_trees(13)


random_trees = st.integers(1, 10).flatmap(
    lambda k: st.tuples(
        st.lists(st.integers(0, k), min_size=k - 1, max_size=k - 1),
        st.permutations(range(k + 1)),
    )
)


@settings(max_examples=200)
@given(random_trees)
def test_canonical_form_is_relabeling_invariant(arg):
    seq, perm = arg
    nv = len(perm)
    edges = [(0, 1)] if nv == 2 else prufer_to_edges(seq, nv)
    moved = [(perm[u], perm[v]) for u, v in edges]
    random.Random(nv).shuffle(moved)
    assert canonical_form(moved) == canonical_form(edges)
    assert aut_count(moved) == aut_count(edges)
    h = UnlabeledTree.from_edges(moved)
    assert canonical_form(h.edges) == h.canon


@settings(max_examples=100)
@given(random_trees, random_trees)
def test_canonical_form_separates(x, y):
    def tree(arg):
        seq, perm = arg
        nv = len(perm)
        return [(0, 1)] if nv == 2 else prufer_to_edges(seq, nv)

    ex, ey = tree(x), tree(y)
    gx, gy = nx.Graph(ex), nx.Graph(ey)
    assert (canonical_form(ex) == canonical_form(ey)) == nx.is_isomorphic(gx, gy)
