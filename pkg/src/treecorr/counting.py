"""Weighted tree-embedding sums: exhaustive oracles and the color-coding DP.

For a symmetric weight matrix ``M`` and a tree ``H`` with ``K`` edges,
``W_H(M)`` sums ``prod M_ij`` over all copies of ``H`` in K_n.  Under a
coloring ``mu: [n] -> [K+1]`` the colorful part ``X_H(M, mu)`` keeps only
copies whose vertices get pairwise distinct colors; its expectation over a
uniform coloring is ``r * W_H(M)``.

DP tables are arrays of shape ``(n, S, b)``: vertex, color subset (index
into the subsets of a fixed size, see :func:`subsets_of_size`) and coloring
replicate.  Colorings are processed in batches so one matrix product serves
every subset and every replicate in the batch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Union

import numba
import numpy as np
import scipy.sparse as sp

from .graphs import CenteredMatrix, Graph, ParameterError, SeedLike, rng
from .trees import CapacityError, UnlabeledTree, split_children

ORACLE_N_MAX = 12
ORACLE_K_MAX = 5
# soft cap on the bytes of one DP table; fixes the coloring batch size.
# Dense products favour wide batches, the memory-bound sparse path favours
# tables that stay closer to cache.
TABLE_BYTES = 64 * 2**20
SPARSE_TABLE_BYTES = 16 * 2**20

MatrixLike = Union[CenteredMatrix, Graph, np.ndarray]


def as_matrix(m: MatrixLike) -> np.ndarray:
    """Dense float matrix with a zero diagonal."""
    if isinstance(m, CenteredMatrix):
        return m.values
    if isinstance(m, Graph):
        return m.adjacency()
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("weight matrix must be square")
    np.fill_diagonal(a, 0.0)
    return a


# -- colorings ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Coloring:
    n: int
    colors: np.ndarray
    k: int

    def __post_init__(self):
        c = np.asarray(self.colors)
        if c.shape != (self.n,):
            raise ValueError("coloring must assign one color per vertex")
        if c.size and (c.min() < 0 or c.max() > self.k):
            raise ValueError(f"colors must lie in [0, {self.k}]")


def coloring_matrix(n: int, k: int, t: int, seed: SeedLike) -> np.ndarray:
    """``t`` i.i.d. uniform colorings into ``k + 1`` colors, shape ``(t, n)``."""
    if t < 1:
        raise ParameterError("t must be at least 1")
    return rng(seed).integers(0, k + 1, size=(t, n), dtype=np.int8)


def random_colorings(n: int, k: int, t: int, seed: SeedLike) -> list[Coloring]:
    mat = coloring_matrix(n, k, t, seed)
    return [Coloring(n, row, k) for row in mat]


def colorful_probability(k: int) -> float:
    """Chance that ``k + 1`` fixed vertices receive distinct colors."""
    return math.factorial(k + 1) / (k + 1) ** (k + 1)


def _as_color_rows(coloring, n: int, k: int) -> np.ndarray:
    if isinstance(coloring, Coloring):
        if coloring.k != k:
            raise ParameterError(
                f"coloring palette has {coloring.k + 1} colors, tree needs {k + 1}"
            )
        rows = coloring.colors[None, :]
    else:
        rows = np.asarray(coloring)
        if rows.ndim == 1:
            rows = rows[None, :]
    if rows.shape[1] != n:
        raise ParameterError("coloring length does not match the matrix size")
    if rows.size and (rows.min() < 0 or rows.max() > k):
        raise ParameterError(f"palette mismatch: colors must lie in [0, {k}]")
    return rows


# -- exhaustive oracles --------------------------------------------------------


@lru_cache(maxsize=16)
def _injective_maps(n: int, size: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n), size)), dtype=np.intp).reshape(-1, size)


def _check_oracle(n: int, k: int, n_max: int, k_max: int) -> None:
    if n > n_max or k > k_max:
        raise CapacityError(
            f"exhaustive sum over n={n}, K={k} exceeds the oracle cap (n<={n_max}, K<={k_max})"
        )


def _map_products(a: np.ndarray, tree: UnlabeledTree) -> tuple[np.ndarray, np.ndarray]:
    maps = _injective_maps(a.shape[0], tree.k + 1)
    prod = np.ones(len(maps))
    for u, v in tree.edges:
        prod = prod * a[maps[:, u], maps[:, v]]
    return maps, prod


def brute_WH(
    m: MatrixLike, tree: UnlabeledTree, n_max: int = ORACLE_N_MAX, k_max: int = ORACLE_K_MAX
) -> float:
    """``W_H(M)`` by enumerating every injective map of the tree into [n].

    Each copy of the tree is hit by exactly ``aut(H)`` maps.  The products
    are summed with ``math.fsum`` so the result does not depend on vertex
    order.
    """
    a = as_matrix(m)
    _check_oracle(a.shape[0], tree.k, n_max, k_max)
    if a.shape[0] < tree.k + 1:
        return 0.0
    _, prod = _map_products(a, tree)
    return math.fsum(prod) / tree.aut


def xh_bruteforce(
    m: MatrixLike,
    tree: UnlabeledTree,
    coloring,
    n_max: int = ORACLE_N_MAX,
    k_max: int = ORACLE_K_MAX,
) -> float:
    """``X_H(M, mu)``: the colorful part of ``W_H(M)``, by enumeration."""
    a = as_matrix(m)
    n = a.shape[0]
    _check_oracle(n, tree.k, n_max, k_max)
    colors = _as_color_rows(coloring, n, tree.k)[0]
    if n < tree.k + 1:
        return 0.0
    maps, prod = _map_products(a, tree)
    c = np.sort(colors[maps], axis=1)
    colorful = np.all(c[:, 1:] != c[:, :-1], axis=1)
    return math.fsum(prod[colorful]) / tree.aut


# -- rooted decomposition ------------------------------------------------------


@dataclass(frozen=True)
class RootedDecomposition:
    """Edge order and split table driving the DP.

    Index 0 stands for the single-vertex tree.  For ``i = 1..K`` the edge
    ``edges[i-1] = (p_i, c_i)`` joins ``T_{a_i}`` (rooted at ``p_i``) and
    ``T_{b_i}`` (rooted at ``c_i``) into ``T_i`` rooted at ``p_i``.
    ``codes[i]`` is the rooted AHU code of ``T_i``; equal codes give equal
    DP tables, which lets different trees share work.
    """

    root: int
    edges: tuple[tuple[int, int], ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    sizes: tuple[int, ...]
    codes: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.edges)


def decompose(tree: UnlabeledTree | Sequence[tuple[int, int]], root: int | None = None) -> RootedDecomposition:
    """Label edges in reverse DFS order and record the split indices.

    DFS visits children in increasing label order.  The default root is
    vertex 0, the first vertex of the canonical labeling.
    """
    edges = tree.edges if isinstance(tree, UnlabeledTree) else [tuple(e) for e in tree]
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if root is None:
        root = 0 if 0 in adj else min(adj)
    visited: list[tuple[int, int]] = []
    seen = {root}

    def dfs(u):
        for w in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                visited.append((u, w))
                dfs(w)

    dfs(root)
    if len(visited) != len(edges):
        raise ValueError("edge list is not a tree")
    order = visited[::-1]
    k = len(order)
    a, b = [0] * (k + 1), [0] * (k + 1)
    sizes, codes = [1] * (k + 1), ["()"] * (k + 1)
    for i in range(1, k + 1):
        p, c = order[i - 1]
        for j in range(i - 1, 0, -1):
            if p in order[j - 1]:
                a[i] = j
                break
        for j in range(i - 1, 0, -1):
            if c in order[j - 1]:
                b[i] = j
                break
        sizes[i] = sizes[a[i]] + sizes[b[i]]
        kids = split_children(codes[a[i]]) + [codes[b[i]]]
        codes[i] = "(" + "".join(sorted(kids)) + ")"
    return RootedDecomposition(root, tuple(order), tuple(a[1:]), tuple(b[1:]), tuple(sizes), tuple(codes))


# -- the DP ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def subsets_of_size(palette: int, size: int) -> tuple[np.ndarray, dict[int, int]]:
    """Bitmasks with ``size`` bits set, increasing, plus their positions."""
    masks = [m for m in range(1 << palette) if bin(m).count("1") == size]
    return np.array(masks, dtype=np.int64), {m: i for i, m in enumerate(masks)}


@lru_cache(maxsize=None)
def _merge_plan(palette: int, sa: int, sb: int):
    """Index tables for the subset merge.

    For the ``i``-th subset ``C1`` of size ``sa``, the disjoint subsets
    ``C2`` of size ``sb`` and the positions of ``C1|C2`` are
    ``c2[ptr[i]:ptr[i+1]]`` and ``out[ptr[i]:ptr[i+1]]``.
    """
    ma, _ = subsets_of_size(palette, sa)
    mb, _ = subsets_of_size(palette, sb)
    _, pos = subsets_of_size(palette, sa + sb)
    ptr, c2, out = [0], [], []
    for m1 in ma.tolist():
        for i2, m2 in enumerate(mb.tolist()):
            if not m1 & m2:
                c2.append(i2)
                out.append(pos[m1 | m2])
        ptr.append(len(c2))
    as_arr = lambda v: np.array(v, dtype=np.int64)
    return as_arr(ptr), as_arr(c2), as_arr(out)


@numba.njit(cache=True, nogil=True)
def _merge_kernel(ya, myb, ptr, c2, o, out):
    n, sa, tb = ya.shape
    for x in range(n):
        for i1 in range(sa):
            a = ya[x, i1]
            nonzero = False
            for j in range(tb):
                if a[j] != 0.0:
                    nonzero = True
                    break
            if not nonzero:
                continue
            for u in range(ptr[i1], ptr[i1 + 1]):
                b = myb[x, c2[u]]
                r = out[x, o[u]]
                for j in range(tb):
                    r[j] += a[j] * b[j]


@lru_cache(maxsize=None)
def _attach_plan(palette: int, sb: int) -> np.ndarray:
    """``pos[i2, c]``: position of ``C2 | {c}``, or -1 when ``c`` is in ``C2``."""
    mb, _ = subsets_of_size(palette, sb)
    _, pos = subsets_of_size(palette, sb + 1)
    out = np.full((len(mb), palette), -1, dtype=np.int64)
    for i2, m2 in enumerate(mb.tolist()):
        for c in range(palette):
            if not m2 >> c & 1:
                out[i2, c] = pos[m2 | 1 << c]
    return out


@numba.njit(cache=True, nogil=True)
def _attach_kernel(myb, onehot, pos, out):
    # out[x, C2 + {c}] += (M Yb)(x, C2) * [mu(x) = c]; branch-free over the batch
    n, sb, tb = myb.shape
    palette = onehot.shape[1]
    for x in range(n):
        for i2 in range(sb):
            b = myb[x, i2]
            for c in range(palette):
                o = pos[i2, c]
                if o < 0:
                    continue
                h = onehot[x, c]
                r = out[x, o]
                for j in range(tb):
                    r[j] += b[j] * h[j]


def _merge(ya, myb: np.ndarray, onehot: np.ndarray, palette: int, sa: int, sb: int) -> np.ndarray:
    """``Y(x, C) = sum_{C1 + C2 = C} Ya(x, C1) * (M Yb)(x, C2)``.

    When ``T_a`` is a single vertex ``Ya`` is the one-hot color table
    ``onehot`` and the sum collapses to ``(M Yb)(x, C - {mu(x)})``.
    """
    n, _, tb = myb.shape
    out = np.zeros((n, math.comb(palette, sa + sb), tb), dtype=myb.dtype)
    if sa == 1:
        _attach_kernel(myb, onehot, _attach_plan(palette, sb), out)
    else:
        _merge_kernel(ya, myb, *_merge_plan(palette, sa, sb), out)
    return out


def _base_table(colors: np.ndarray, palette: int, dtype=np.float64) -> np.ndarray:
    """One-hot table of the single-vertex tree: ``Y(x, {c}) = [mu(x) = c]``."""
    tb, n = colors.shape
    y = np.zeros((n, palette, tb), dtype=dtype)
    y[np.arange(n)[:, None], colors.T, np.arange(tb)[None, :]] = 1.0
    return y


Operator = Callable[[np.ndarray], np.ndarray]


def dense_operator(a: np.ndarray) -> Operator:
    return lambda y2: a @ y2


@numba.njit(cache=True, nogil=True)
def _csr_times_dense(indptr, indices, data, y, out):
    n, cols = y.shape
    for x in range(n):
        r = out[x]
        r[:] = 0.0
        for p in range(indptr[x], indptr[x + 1]):
            w = data[p]
            src = y[indices[p]]
            for j in range(cols):
                r[j] += w * src[j]


def sparse_operator(adj: sp.csr_matrix, dtype=np.float64) -> Operator:
    """Neighbor sums ``(A y)(x) = sum_{z ~ x} y(z)`` on a CSR adjacency."""
    adj = sp.csr_matrix(adj)
    adj.sort_indices()
    indptr, indices = adj.indptr.astype(np.int64), adj.indices.astype(np.int64)
    data = adj.data.astype(dtype)

    def op(y2: np.ndarray) -> np.ndarray:
        y2 = np.ascontiguousarray(y2)
        out = np.empty_like(y2)
        _csr_times_dense(indptr, indices, data, y2, out)
        return out

    return op


class _Batch:
    """DP tables for one batch of colorings, shared across trees.

    Tables are keyed by rooted code.  ``uses`` (from :func:`_plan_uses`)
    counts the remaining reads of each table; a table is dropped when its
    count reaches zero.
    """

    def __init__(self, op: Operator, colors: np.ndarray, k: int, uses: dict, dtype=np.float64):
        self.op = op
        self.dtype = dtype
        self.palette = k + 1
        # the single-vertex table; kept for the whole batch
        self.onehot = _base_table(np.asarray(colors, dtype=np.intp), self.palette, dtype)
        self.y: dict[str, np.ndarray] = {}
        self.my: dict[str, np.ndarray] = {}
        self.uses_y = dict(uses["y"])
        self.uses_my = dict(uses["my"])
        self.built: set[str] = set()

    @staticmethod
    def _take(store, uses, code):
        val = store[code]
        uses[code] -= 1
        if uses[code] <= 0:
            del store[code]
        return val

    def _y(self, code: str) -> np.ndarray:
        if code == "()":
            return self.onehot
        return self._take(self.y, self.uses_y, code)

    def _my(self, code: str) -> np.ndarray:
        if code not in self.my:
            y = self._y(code)
            n, s, tb = y.shape
            self.my[code] = self.op(y.reshape(n, s * tb)).reshape(n, s, tb)
        return self._take(self.my, self.uses_my, code)

    def build(self, dec: RootedDecomposition) -> np.ndarray:
        """Fill ``T_1..T_K``; returns ``sum_x Y(x, T_K, all colors)`` per coloring."""
        codes = dec.codes
        for i in range(1, dec.k + 1):
            ci = codes[i]
            if ci in self.built:
                continue
            self.built.add(ci)
            ai, bi = dec.a[i - 1], dec.b[i - 1]
            ya = self._y(codes[ai])
            myb = self._my(codes[bi])
            self.y[ci] = _merge(ya, myb, self.onehot, self.palette, dec.sizes[ai], dec.sizes[bi])
        full = self._y(codes[dec.k])
        return full[:, 0, :].sum(axis=0, dtype=np.float64)


def _plan_uses(decs: Sequence[RootedDecomposition]) -> dict:
    """Read counts for each table over a sequence of decompositions."""
    built: set[str] = set()
    uses_y: dict[str, int] = {}
    uses_my: dict[str, int] = {}
    for dec in decs:
        for i in range(1, dec.k + 1):
            ci = dec.codes[i]
            if ci in built:
                continue
            built.add(ci)
            ca, cb = dec.codes[dec.a[i - 1]], dec.codes[dec.b[i - 1]]
            uses_y[ca] = uses_y.get(ca, 0) + 1
            if cb not in uses_my:
                uses_y[cb] = uses_y.get(cb, 0) + 1
            uses_my[cb] = uses_my.get(cb, 0) + 1
        top = dec.codes[dec.k]
        uses_y[top] = uses_y.get(top, 0) + 1
    return {"y": uses_y, "my": uses_my}


def batch_size(n: int, k: int, table_bytes: int | None = None, itemsize: int = 8) -> int:
    """Colorings per batch so the widest table stays near ``table_bytes``."""
    table_bytes = TABLE_BYTES if table_bytes is None else table_bytes
    widest = math.comb(k + 1, (k + 1) // 2)
    return max(1, table_bytes // (itemsize * n * widest))


def exact_float32(max_degree: int, k: int) -> bool:
    """Whether float32 tables hold every colorful count of a 0/1 graph exactly.

    A rooted tree with ``j`` edges has at most ``max_degree**j`` copies at a
    vertex, and every partial sum in the recursion is bounded by its final
    value, so all entries are integers below ``2**24`` when this holds.  The
    per-coloring total over vertices is accumulated in float64.
    """
    return max_degree**k < 2**24


def colorful_sums(
    op: Operator,
    n: int,
    trees: Sequence[UnlabeledTree],
    colors: np.ndarray,
    decs: Sequence[RootedDecomposition] | None = None,
    table_bytes: int | None = None,
    dtype=np.float64,
) -> np.ndarray:
    """``X_H(M, mu_j)`` for every tree ``H`` and every coloring row ``j``.

    Returns shape ``(len(trees), t)``.  All trees share one pass over each
    coloring batch.  ``dtype`` sets the table precision; float32 is only
    exact for integer counts below ``2**24`` (see :func:`exact_float32`).
    """
    if not trees:
        return np.zeros((0, len(colors)))
    k = trees[0].k
    if any(t.k != k for t in trees):
        raise ParameterError("all trees must have the same number of edges")
    colors = np.asarray(colors)
    if colors.ndim != 2 or colors.shape[1] != n:
        raise ParameterError("colorings must have shape (t, n)")
    if colors.size and (colors.min() < 0 or colors.max() > k):
        raise ParameterError(f"palette mismatch: colors must lie in [0, {k}]")
    if decs is None:
        decs = [decompose(t) for t in trees]
    t_total = colors.shape[0]
    out = np.zeros((len(trees), t_total))
    if n < k + 1:
        return out
    uses = _plan_uses(decs)
    step = batch_size(n, k, table_bytes, np.dtype(dtype).itemsize)
    for lo in range(0, t_total, step):
        batch = _Batch(op, colors[lo : lo + step], k, uses, dtype)
        for h, (tree, dec) in enumerate(zip(trees, decs)):
            out[h, lo : lo + step] = batch.build(dec) / tree.aut
    return out


def xh_dp(
    m: MatrixLike,
    tree: UnlabeledTree,
    decomposition: RootedDecomposition | None,
    coloring,
) -> float | np.ndarray:
    """``X_H(M, mu)`` by the color-coding DP on a dense weight matrix.

    ``coloring`` may be a :class:`Coloring`, a length-``n`` array, or a
    ``(t, n)`` array of colorings (then an array of ``t`` values is returned).
    The ``y != x`` restriction of the recursion is implicit: a term with
    ``y = x`` would use the color of ``x`` twice and is never colorful.
    """
    a = as_matrix(m)
    n = a.shape[0]
    single = isinstance(coloring, Coloring) or np.asarray(coloring).ndim == 1
    rows = _as_color_rows(coloring, n, tree.k)
    dec = decomposition or decompose(tree)
    vals = colorful_sums(dense_operator(a), n, [tree], rows, [dec])[0]
    return float(vals[0]) if single else vals


def wh_unweighted_neighbors(
    g: Graph,
    tree: UnlabeledTree,
    decomposition: RootedDecomposition | None,
    coloring,
) -> float | np.ndarray:
    """Same DP on the 0/1 adjacency, summing only over neighbors.

    The matrix products run on the sparse adjacency, so the cost scales
    with the edge count instead of ``n**2``.
    """
    single = isinstance(coloring, Coloring) or np.asarray(coloring).ndim == 1
    rows = _as_color_rows(coloring, g.n, tree.k)
    dec = decomposition or decompose(tree)
    vals = colorful_sums(sparse_operator(g.sparse_adjacency()), g.n, [tree], rows, [dec])[0]
    return float(vals[0]) if single else vals


def all_colorings(n: int, k: int) -> np.ndarray:
    """Every map ``[n] -> [k+1]`` as rows, shape ``((k+1)**n, n)``."""
    return np.array(list(itertools.product(range(k + 1), repeat=n)), dtype=np.int8).reshape(-1, n)
