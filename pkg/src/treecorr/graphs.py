"""Erdős–Rényi graph pairs, centering and complements.

Graphs are stored as a sorted ``(m, 2)`` edge array with ``u < v``.  All
randomness goes through :func:`rng`, a Philox (counter-based) generator keyed
by ``(seed, *stream_key)`` so that separate pairs never share a stream and
can be generated in any order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp

SeedLike = Union[int, Sequence[int]]


class ParameterError(ValueError):
    """A model parameter is outside its admissible range."""


def rng(seed: SeedLike) -> np.random.Generator:
    """Philox generator for ``seed`` or ``(seed, *stream_key)``."""
    if isinstance(seed, (int, np.integer)):
        ss = np.random.SeedSequence(int(seed))
    else:
        seed = [int(s) for s in seed]
        ss = np.random.SeedSequence(seed[0], spawn_key=tuple(seed[1:]))
    return np.random.Generator(np.random.Philox(ss))


def _check_q(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ParameterError(f"edge probability q must lie in (0, 1), got {q!r}")


def rho_range(q: float) -> tuple[float, float]:
    """Admissible correlation interval for two Bernoulli(q) variables."""
    _check_q(q)
    return -min(q / (1.0 - q), (1.0 - q) / q), 1.0


def _normalize_edges(n: int, edges) -> np.ndarray:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if e.size and (e.min() < 0 or e.max() >= n):
        raise ValueError(f"edge endpoint outside [0, {n})")
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("self-loops are not allowed")
    e = np.sort(e, axis=1)
    e = np.unique(e, axis=0) if len(e) else e
    return np.ascontiguousarray(e)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph on ``range(n)``.

    ``q`` is the nominal edge probability used for centering.  When omitted
    it is estimated as the edge density ``m / C(n, 2)`` (clamped into (0, 1)).
    """

    n: int
    edges: np.ndarray
    q: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        e = _normalize_edges(self.n, self.edges)
        object.__setattr__(self, "edges", e)
        e.setflags(write=False)
        q = self.q
        if q is None:
            q = density_estimate(self.n, len(e))
        _check_q(q)
        object.__setattr__(self, "q", float(q))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.q == other.q
            and np.array_equal(self.edges, other.edges)
        )

    def __hash__(self):
        return hash((self.n, self.q, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, q={self.q:g})"

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix (float64)."""
        a = np.zeros((self.n, self.n))
        if self.m:
            u, v = self.edges.T
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def sparse_adjacency(self) -> sp.csr_matrix:
        u, v = self.edges.T
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``i`` renamed ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        return Graph(self.n, perm[self.edges], self.q)


def density_estimate(n: int, m: float) -> float:
    pairs = n * (n - 1) // 2
    if pairs == 0:
        return 0.5
    eps = 0.5 / pairs
    return min(max(m / pairs, eps), 1.0 - eps)


@dataclass(frozen=True, eq=False)
class CenteredMatrix:
    """Dense symmetric matrix ``A - q`` off the diagonal, zero on it."""

    n: int
    q: float
    values: np.ndarray

    def __getitem__(self, idx):
        return self.values[idx]


def center(g: Graph) -> CenteredMatrix:
    """Entries ``1 - q`` on edges and ``-q`` on non-edges."""
    vals = np.full((g.n, g.n), -g.q)
    if g.m:
        u, v = g.edges.T
        vals[u, v] = 1.0 - g.q
        vals[v, u] = 1.0 - g.q
    np.fill_diagonal(vals, 0.0)
    vals.setflags(write=False)
    return CenteredMatrix(g.n, g.q, vals)


def complement(g: Graph) -> Graph:
    """Complement within K_n; carries ``q' = 1 - q``."""
    iu, ju = np.triu_indices(g.n, k=1)
    present = np.zeros((g.n, g.n), dtype=bool)
    if g.m:
        present[g.edges[:, 0], g.edges[:, 1]] = True
    keep = ~present[iu, ju]
    return Graph(g.n, np.stack([iu[keep], ju[keep]], axis=1), 1.0 - g.q)


@dataclass(frozen=True)
class CorrelatedPair:
    a: Graph
    b: Graph
    pi: np.ndarray
    rho: float


def joint_law(q: float, rho: float) -> tuple[float, float, float, float]:
    """``(p11, p10, p01, p00)`` for a pair of Bernoulli(q) with correlation rho."""
    lo, hi = rho_range(q)
    if not lo - 1e-12 <= rho <= hi + 1e-12:
        raise ParameterError(
            f"rho={rho!r} outside the admissible range [{lo:.6g}, {hi:g}] for q={q:g}"
        )
    p11 = q * q + rho * q * (1.0 - q)
    p10 = q * (1.0 - q) * (1.0 - rho)
    p00 = 1.0 - 2.0 * q + p11
    return max(p11, 0.0), max(p10, 0.0), max(p10, 0.0), max(p00, 0.0)


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def sample_independent_pair(n: int, q: float, seed: SeedLike) -> tuple[Graph, Graph]:
    """Two independent G(n, q) graphs."""
    _check_q(q)
    if n < 1:
        raise ParameterError("n must be at least 1")
    gen = rng(seed)
    iu, ju = _pair_index(n)
    ua = gen.random(len(iu))
    ub = gen.random(len(iu))
    ea = np.stack([iu[ua < q], ju[ua < q]], axis=1)
    eb = np.stack([iu[ub < q], ju[ub < q]], axis=1)
    return Graph(n, ea, q), Graph(n, eb, q)


def sample_correlated_pair(n: int, q: float, rho: float, seed: SeedLike) -> CorrelatedPair:
    """Correlated pair: ``(A_ij, B_{pi(i) pi(j)})`` i.i.d. with correlation rho."""
    _check_q(q)
    if n < 1:
        raise ParameterError("n must be at least 1")
    p11, p10, p01, _ = joint_law(q, rho)
    gen = rng(seed)
    pi = gen.permutation(n)
    iu, ju = _pair_index(n)
    u = gen.random(len(iu))
    a_on = u < p11 + p10
    b_on = (u < p11) | ((u >= p11 + p10) & (u < p11 + p10 + p01))
    ea = np.stack([iu[a_on], ju[a_on]], axis=1)
    eb = np.stack([pi[iu[b_on]], pi[ju[b_on]]], axis=1)
    return CorrelatedPair(Graph(n, ea, q), Graph(n, eb, q), pi, float(rho))


def subsampling_params(q: float, rho: float) -> tuple[float, float]:
    """Parent density ``p`` and subsampling rate ``s`` with ``q = p s``."""
    if rho <= 0:
        raise ParameterError("the subsampling view needs rho > 0")
    _check_q(q)
    s = rho * (1.0 - q) + q
    return q / s, s


# -- edge-list files -------------------------------------------------------


def _data_lines(lines: Iterable[str]):
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_edgelist(text: str, q: float | None = None) -> Graph:
    lines = _data_lines(text.splitlines())
    try:
        n, m = (int(x) for x in next(lines).split())
    except StopIteration:
        raise ValueError("empty edge-list file") from None
    edges = [tuple(int(x) for x in line.split()) for line in lines]
    if len(edges) != m:
        raise ValueError(f"header announces {m} edges, found {len(edges)}")
    if any(len(e) != 2 for e in edges):
        raise ValueError("each edge line must hold exactly two vertex ids")
    return Graph(n, edges if edges else np.empty((0, 2), np.int64), q)


def read_edgelist(path: str | os.PathLike, q: float | None = None) -> Graph:
    with open(path) as fh:
        return parse_edgelist(fh.read(), q)


def format_edgelist(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(out) + "\n"


def write_edgelist(g: Graph, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_edgelist(g, comment))


def n_pairs(n: int) -> int:
    return math.comb(n, 2)
