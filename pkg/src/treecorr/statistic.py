"""Signed-tree test statistics and thresholded decisions.

All statistics are reported on the scale of the exact signed-tree count
``f``: ``E_P[f] = rho**(2K) |T|`` and ``E_Q[f] = 0``, so one threshold
``tau = c rho**(2K) |T|`` serves every mode.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .counting import (
    SPARSE_TABLE_BYTES,
    brute_WH,
    colorful_probability,
    colorful_sums,
    coloring_matrix,
    dense_operator,
    exact_float32,
    sparse_operator,
)
from .graphs import Graph, ParameterError, SeedLike, center
from .trees import TreeFamily, UnlabeledTree, enumerate_free_trees, sub_n

Mode = Literal["exact", "signed", "unsigned", "unsigned-exact"]
MODES = ("exact", "signed", "unsigned", "unsigned-exact")
MODE_ALIASES = {"signed-cc": "signed", "unsigned-cc": "unsigned"}


def default_t(k: int) -> int:
    return math.ceil(1.0 / colorful_probability(k))


@dataclass(frozen=True)
class StatConfig:
    """Parameters of one statistic evaluation.

    ``q=None`` centers each graph with its own ``q`` and uses the mean of the
    two for the scale factor.  ``t=None`` means ``ceil(1/r)`` colorings per
    side.
    """

    k: int
    rho: float
    q: float | None = None
    t: int | None = None
    c: float = 0.5
    mode: Mode = "signed"

    def __post_init__(self):
        object.__setattr__(self, "mode", MODE_ALIASES.get(self.mode, self.mode))
        if self.k < 1:
            raise ParameterError("k must be at least 1")
        if self.rho == 0:
            raise ParameterError(
                "rho = 0 makes the scale factor vanish; with no correlation to "
                "exploit use an edge-count test instead"
            )
        if not -1.0 <= self.rho <= 1.0:
            raise ParameterError(f"rho must lie in [-1, 1], got {self.rho}")
        if not 0.0 < self.c < 1.0:
            raise ParameterError(f"threshold constant c must lie in (0, 1), got {self.c}")
        if self.t is not None and self.t < 1:
            raise ParameterError("t must be at least 1")
        if self.q is not None and not 0.0 < self.q < 1.0:
            raise ParameterError("q must lie in (0, 1)")
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}; choose from {MODES}")

    @property
    def colorings(self) -> int:
        return self.t if self.t is not None else default_t(self.k)


@dataclass(frozen=True)
class StatResult:
    value: float
    threshold: float
    decision: str
    components: tuple[float, ...] = ()
    wall_ms: float = 0.0

    @property
    def correlated(self) -> bool:
        return self.decision == "correlated"


@dataclass(frozen=True)
class ScaleFactors:
    beta: float
    r: float
    a_h: tuple[float, ...]
    sigma2: float


def beta(n: int, k: int, q: float, rho: float) -> float:
    """``(rho / (q (1-q)))**K (n-K-1)! / n!`` as a telescoped product."""
    if n < k + 1:
        raise ParameterError(f"need n >= k + 1, got n={n}, k={k}")
    ratio = rho / (q * (1.0 - q))
    out = 1.0
    for j in range(k):
        out *= ratio / (n - j)
    return out / (n - k)


def scale_factors(n: int, family: TreeFamily, q: float, rho: float) -> ScaleFactors:
    k = family.k
    a_h = tuple(rho**k / sub_n(h, n) for h in family)
    return ScaleFactors(beta(n, k, q, rho), colorful_probability(k), a_h, q * (1.0 - q))


def threshold(cfg: StatConfig, family: TreeFamily | None = None) -> float:
    """``c rho**(2K) |T|``, on the scale of ``f``."""
    size = len(family) if family is not None else len(enumerate_free_trees(cfg.k))
    return cfg.c * cfg.rho ** (2 * cfg.k) * size


def y_scale_threshold(cfg: StatConfig, n: int, q: float) -> float:
    """The same threshold on the raw color-coding scale of ``Y``."""
    r = colorful_probability(cfg.k)
    return r * r / beta(n, cfg.k, q, cfg.rho) * threshold(cfg)


def gamma_h(tree: UnlabeledTree, n: int, q: float) -> float:
    """Mean tree count in G(n, q): ``sub_n(H) q**K``."""
    return sub_n(tree, n) * q**tree.k


def _check_pair(a: Graph, b: Graph, k: int) -> None:
    if a.n != b.n:
        raise ParameterError("graphs must have the same vertex count")
    if a.n < k + 1:
        raise ParameterError(f"graphs need at least k + 1 = {k + 1} vertices")


def _qs(a: Graph, b: Graph, cfg: StatConfig) -> tuple[float, float, float]:
    if cfg.q is not None:
        return cfg.q, cfg.q, cfg.q
    return a.q, b.q, 0.5 * (a.q + b.q) if a.q != b.q else a.q


def _centered(g: Graph, q: float) -> np.ndarray:
    return center(g if g.q == q else Graph(g.n, g.edges, q)).values


def _result(value: float, tau: float, comps: Sequence[float], t0: float) -> StatResult:
    decision = "correlated" if value >= tau else "independent"
    return StatResult(float(value), float(tau), decision, tuple(float(x) for x in comps),
                      (time.perf_counter() - t0) * 1e3)


def _side_seeds(seed: SeedLike) -> tuple[tuple[int, ...], tuple[int, ...]]:
    base = (int(seed),) if isinstance(seed, (int, np.integer)) else tuple(int(s) for s in seed)
    return base + (0,), base + (1,)


def f_exact(a: Graph, b: Graph, cfg: StatConfig) -> StatResult:
    """Exact signed-tree statistic via the exhaustive oracle (small n only)."""
    t0 = time.perf_counter()
    _check_pair(a, b, cfg.k)
    qa, qb, qbeta = _qs(a, b, cfg)
    family = enumerate_free_trees(cfg.k)
    bt = beta(a.n, cfg.k, qbeta, cfg.rho)
    ma, mb = _centered(a, qa), _centered(b, qb)
    comps = [bt * h.aut * brute_WH(ma, h) * brute_WH(mb, h) for h in family]
    return _result(math.fsum(comps), threshold(cfg, family), comps, t0)


def colorful_means(
    m: np.ndarray | None,
    g: Graph,
    family: TreeFamily,
    t: int,
    seed: SeedLike,
    sparse: bool = False,
) -> np.ndarray:
    """Mean of ``X_H`` over ``t`` colorings for every tree of the family."""
    colors = coloring_matrix(g.n, family.k, t, seed)
    dtype = np.float64
    if sparse:
        adj = g.sparse_adjacency()
        max_deg = int(np.diff(adj.indptr).max(initial=0))
        dtype = np.float32 if exact_float32(max_deg, family.k) else np.float64
        op = sparse_operator(adj, dtype)
    else:
        op = dense_operator(m)
    table_bytes = SPARSE_TABLE_BYTES if sparse else None
    sums = colorful_sums(op, g.n, family.trees, colors, table_bytes=table_bytes, dtype=dtype)
    return np.array([math.fsum(row) / t for row in sums])


def y_stat(a: Graph, b: Graph, cfg: StatConfig, seed: SeedLike) -> float:
    """Raw color-coding statistic ``Y = sum aut(H) xbar_H(A) xbar_H(B)``."""
    return _y_parts(a, b, cfg, seed)[0]


def _y_parts(a, b, cfg, seed):
    _check_pair(a, b, cfg.k)
    qa, qb, _ = _qs(a, b, cfg)
    family = enumerate_free_trees(cfg.k)
    sa, sb = _side_seeds(seed)
    xa = colorful_means(_centered(a, qa), a, family, cfg.colorings, sa)
    xb = colorful_means(_centered(b, qb), b, family, cfg.colorings, sb)
    comps = [h.aut * x * y for h, x, y in zip(family, xa, xb)]
    return math.fsum(comps), comps


def f_tilde(a: Graph, b: Graph, cfg: StatConfig, seed: SeedLike) -> StatResult:
    """Color-coding estimate of ``f``: ``(beta / r**2) Y``."""
    t0 = time.perf_counter()
    y, comps = _y_parts(a, b, cfg, seed)
    _, _, qbeta = _qs(a, b, cfg)
    scale = beta(a.n, cfg.k, qbeta, cfg.rho) / colorful_probability(cfg.k) ** 2
    return _result(scale * y, threshold(cfg), [scale * c for c in comps], t0)


def g_exact(a: Graph, b: Graph, cfg: StatConfig) -> StatResult:
    """Uncentered statistic ``beta sum aut(H) (W_H(A) - gamma_H)(W_H(B) - gamma_H)``."""
    t0 = time.perf_counter()
    _check_pair(a, b, cfg.k)
    qa, qb, qbeta = _qs(a, b, cfg)
    family = enumerate_free_trees(cfg.k)
    bt = beta(a.n, cfg.k, qbeta, cfg.rho)
    aa, ab = a.adjacency(), b.adjacency()
    comps = [
        bt * h.aut * (brute_WH(aa, h) - gamma_h(h, a.n, qa)) * (brute_WH(ab, h) - gamma_h(h, b.n, qb))
        for h in family
    ]
    return _result(math.fsum(comps), threshold(cfg, family), comps, t0)


def z_stat(a: Graph, b: Graph, cfg: StatConfig, seed: SeedLike) -> float:
    """Raw uncentered color-coding statistic ``Z``.

    Counts run on the sparse adjacency.  The subtracted mean is
    ``r gamma_H``, the expectation of one colorful count, which makes
    ``E[Z | A, B] = (r**2 / beta) g``.
    """
    return _z_parts(a, b, cfg, seed)[0]


def _z_parts(a, b, cfg, seed):
    _check_pair(a, b, cfg.k)
    qa, qb, _ = _qs(a, b, cfg)
    family = enumerate_free_trees(cfg.k)
    r = colorful_probability(cfg.k)
    sa, sb = _side_seeds(seed)
    xa = colorful_means(None, a, family, cfg.colorings, sa, sparse=True)
    xb = colorful_means(None, b, family, cfg.colorings, sb, sparse=True)
    comps = [
        h.aut * (x - r * gamma_h(h, a.n, qa)) * (y - r * gamma_h(h, b.n, qb))
        for h, x, y in zip(family, xa, xb)
    ]
    return math.fsum(comps), comps


def z_tilde(a: Graph, b: Graph, cfg: StatConfig, seed: SeedLike) -> StatResult:
    """Color-coding estimate of ``g`` on the ``f`` scale: ``(beta / r**2) Z``."""
    t0 = time.perf_counter()
    z, comps = _z_parts(a, b, cfg, seed)
    _, _, qbeta = _qs(a, b, cfg)
    scale = beta(a.n, cfg.k, qbeta, cfg.rho) / colorful_probability(cfg.k) ** 2
    return _result(scale * z, threshold(cfg), [scale * c for c in comps], t0)


def evaluate(a: Graph, b: Graph, cfg: StatConfig, seed: SeedLike = 0) -> StatResult:
    """Dispatch on ``cfg.mode``."""
    if cfg.mode == "exact":
        return f_exact(a, b, cfg)
    if cfg.mode == "signed":
        return f_tilde(a, b, cfg, seed)
    if cfg.mode == "unsigned":
        return z_tilde(a, b, cfg, seed)
    return g_exact(a, b, cfg)
