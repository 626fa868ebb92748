"""Unlabeled trees: enumeration, canonical forms and automorphism counts.

Canonical forms are AHU parenthesis strings rooted at a centroid (the smaller
string when there are two centroids).  The same recursion that sorts child
codes also yields the automorphism-group order: at each node the children
with identical codes may be permuted freely.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

K_MAX = 12


class CapacityError(ValueError):
    """A request exceeds a configured size cap."""


class NotATreeError(ValueError):
    pass


Edges = Sequence[tuple[int, int]]


def _adjacency(edges: Edges) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        if u == v:
            raise NotATreeError(f"self-loop at {u}")
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj


def _check_tree(edges: Edges) -> dict[int, list[int]]:
    edges = [tuple(e) for e in edges]
    if not edges:
        raise NotATreeError("a tree needs at least one edge")
    if len({frozenset(e) for e in edges}) != len(edges):
        raise NotATreeError("duplicate edge")
    adj = _adjacency(edges)
    if len(adj) != len(edges) + 1:
        raise NotATreeError("vertex count must be edge count + 1")
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(adj):
        raise NotATreeError("graph is disconnected")
    return adj


def centroids(adj: dict[int, list[int]]) -> list[int]:
    """The one or two vertices minimising the largest remaining component."""
    n = len(adj)
    root = min(adj)
    order, parent = [root], {root: None}
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    size = {u: 1 for u in adj}
    for u in reversed(order):
        if parent[u] is not None:
            size[parent[u]] += size[u]
    best, out = n, []
    for u in adj:
        heaviest = n - size[u]
        for w in adj[u]:
            if w != parent[u]:
                heaviest = max(heaviest, size[w])
        if heaviest < best:
            best, out = heaviest, [u]
        elif heaviest == best:
            out.append(u)
    return sorted(out)


def rooted_codes(adj: dict[int, list[int]], root: int) -> tuple[dict[int, str], dict[int, list[int]]]:
    """AHU code of every vertex's subtree and children sorted by code."""
    order, parent = [root], {root: None}
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    kids: dict[int, list[int]] = {}
    for u in reversed(order):
        ch = sorted((w for w in adj[u] if w != parent[u]), key=lambda w: code[w])
        kids[u] = ch
        code[u] = "(" + "".join(code[w] for w in ch) + ")"
    return code, kids


@lru_cache(maxsize=None)
def rooted_aut(code: str) -> int:
    """Automorphisms of a rooted tree fixing the root, from its AHU code."""
    groups = Counter(split_children(code))
    out = 1
    for child, mult in groups.items():
        out *= math.factorial(mult) * rooted_aut(child) ** mult
    return out


def split_children(code: str) -> list[str]:
    """Child codes of the root of an AHU code."""
    out, depth, start = [], 0, 1
    for i, ch in enumerate(code[1:-1], start=1):
        depth += 1 if ch == "(" else -1
        if depth == 0:
            out.append(code[start : i + 1])
            start = i + 1
    return out


def _canonical_root(adj) -> tuple[int, dict[int, str], dict[int, list[int]]]:
    best = None
    for c in centroids(adj):
        code, kids = rooted_codes(adj, c)
        if best is None or code[c] < best[1][best[0]]:
            best = (c, code, kids)
    return best


def canonical_form(edges: Edges) -> bytes:
    """Isomorphism invariant of a tree: equal exactly for isomorphic trees."""
    adj = _check_tree(edges)
    root, code, _ = _canonical_root(adj)
    return code[root].encode("ascii")


def aut_count(edges: Edges) -> int:
    """Order of the automorphism group of a tree."""
    adj = _check_tree(edges)
    cs = centroids(adj)
    root, code, _ = _canonical_root(adj)
    out = rooted_aut(code[root])
    if len(cs) == 2:
        other = cs[1] if cs[0] == root else cs[0]
        if rooted_codes(adj, other)[0][other] == code[root]:
            out *= 2
    return out


def canonical_labeling(edges: Edges) -> list[tuple[int, int]]:
    """Relabel vertices 0..K in preorder from the canonical root.

    Children are visited in code order, so isomorphic inputs give identical
    edge lists.  Each edge is returned as ``(parent, child)``.
    """
    adj = _check_tree(edges)
    root, _, kids = _canonical_root(adj)
    label: dict[int, int] = {}
    out: list[tuple[int, int]] = []

    def visit(u):
        label[u] = len(label)
        for w in kids[u]:
            out.append((u, w))
            visit(w)

    visit(root)
    return [(label[u], label[w]) for u, w in out]


@dataclass(frozen=True)
class UnlabeledTree:
    """Representative of an isomorphism class of trees with ``k`` edges.

    ``edges`` use the canonical labeling: vertex 0 is the canonical root and
    each pair is ``(parent, child)`` in preorder.
    """

    k: int
    edges: tuple[tuple[int, int], ...]
    canon: bytes
    aut: int

    @classmethod
    def from_edges(cls, edges: Edges) -> "UnlabeledTree":
        edges = [tuple(int(x) for x in e) for e in edges]
        lab = canonical_labeling(edges)
        return cls(len(lab), tuple(lab), canonical_form(edges), aut_count(edges))

    @property
    def n_vertices(self) -> int:
        return self.k + 1

    def degrees(self) -> list[int]:
        deg = [0] * (self.k + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class TreeFamily:
    k: int
    trees: tuple[UnlabeledTree, ...]

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[UnlabeledTree]:
        return iter(self.trees)

    def __getitem__(self, i: int) -> UnlabeledTree:
        return self.trees[i]


def rooted_level_sequences(n_vertices: int) -> Iterator[list[int]]:
    """All rooted unlabeled trees as canonical level sequences.

    Beyer–Hedetniemi successor rule; starts at the path and ends at the star.
    """
    levels = list(range(n_vertices))
    while True:
        yield list(levels)
        p = n_vertices - 1
        while p > 0 and levels[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while levels[q] != levels[p] - 1:
            q -= 1
        shift = p - q
        for i in range(p, n_vertices):
            levels[i] = levels[i - shift]


def level_sequence_edges(levels: Sequence[int]) -> list[tuple[int, int]]:
    last_at: dict[int, int] = {}
    edges = []
    for i, d in enumerate(levels):
        if d > 0:
            edges.append((last_at[d - 1], i))
        last_at[d] = i
    return edges


@lru_cache(maxsize=None)
def enumerate_free_trees(k: int, k_max: int = K_MAX) -> TreeFamily:
    """One representative per isomorphism class of trees with ``k`` edges.

    Walks rooted trees on ``k + 1`` vertices and keeps those whose root is
    the canonical centroid, which selects each free tree exactly once.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > k_max:
        raise CapacityError(f"k={k} exceeds the enumeration cap {k_max}")
    out = []
    seen: set[bytes] = set()
    for levels in rooted_level_sequences(k + 1):
        edges = level_sequence_edges(levels)
        adj = _adjacency(edges)
        cs = centroids(adj)
        if 0 not in cs:
            continue
        code0 = rooted_codes(adj, 0)[0][0]
        if len(cs) == 2 and rooted_codes(adj, cs[1])[0][cs[1]] < code0:
            continue
        canon = code0.encode("ascii")
        if canon in seen:  # pragma: no cover - the filter above is exact
            continue
        seen.add(canon)
        out.append(UnlabeledTree.from_edges(edges))
    return TreeFamily(k, tuple(out))


def sub_n(tree: UnlabeledTree, n: int) -> int:
    """Labeled copies of ``tree`` in K_n: ``C(n, K+1) (K+1)! / aut``."""
    if n < tree.k + 1:
        return 0
    return math.perm(n, tree.k + 1) // tree.aut


def path_tree(k: int) -> UnlabeledTree:
    return UnlabeledTree.from_edges([(i, i + 1) for i in range(k)])


def star_tree(k: int) -> UnlabeledTree:
    return UnlabeledTree.from_edges([(0, i) for i in range(1, k + 1)])
