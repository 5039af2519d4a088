"""Degree statistics, clustering, path length, and the small-world verdict."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .baseline import analytic_c_random, analytic_l_random
from .errors import GraphError
from .graph import ComponentSummary, DependencyGraph, giant_sweep, weakly_connected_components

DEFAULT_SAMPLES = 1000
DEFAULT_R_MIN = 10.0
DEFAULT_F_MAX = 2.0


@dataclass(frozen=True)
class DegreeHistogram:
    direction: str
    counts: dict[int, int]
    n: int
    mean_degree: float

    def total_degree(self) -> int:
        return sum(k * c for k, c in self.counts.items())

    @property
    def zero_count(self) -> int:
        return self.counts.get(0, 0)


def _degrees(g: DependencyGraph, direction: str) -> np.ndarray:
    if direction == "in":
        return g.in_degree
    if direction == "out":
        return g.out_degree
    if direction == "total":
        return g.in_degree + g.out_degree
    raise ValueError(f"unknown degree direction: {direction!r}")


def degree_distribution(g: DependencyGraph, direction: str = "out") -> DegreeHistogram:
    """Exact degree histogram, degree 0 included."""
    deg = _degrees(g, direction)
    values, counts = np.unique(deg, return_counts=True)
    hist = {int(k): int(c) for k, c in zip(values, counts)}
    edges = g.m if direction != "total" else 2 * g.m
    mean = edges / g.n if g.n else 0.0
    return DegreeHistogram(direction, hist, g.n, mean)


class Clustering(NamedTuple):
    local: np.ndarray
    average: float
    low_degree_count: int

    @property
    def average_excluding_low_degree(self) -> float:
        """Mean over vertices with undirected degree >= 2 (0.0 if none)."""
        n_eligible = len(self.local) - self.low_degree_count
        if n_eligible == 0:
            return 0.0
        return math.fsum(self.local.tolist()) / n_eligible


def clustering_coefficient(g: DependencyGraph) -> Clustering:
    """Local clustering on the undirected projection and its plain mean.

    ``C_v`` is the number of edges among the neighbours of ``v`` divided by
    ``k_v (k_v - 1) / 2``. Vertices with fewer than two neighbours count as 0.
    """
    if g.n == 0:
        raise GraphError("clustering coefficient is undefined for an empty graph")
    tri = _kernels.triangles(g.und_indptr, g.und_indices)
    k = g.und_degree.astype(np.float64)
    local = np.zeros(g.n, dtype=np.float64)
    ok = g.und_degree >= 2
    local[ok] = 2.0 * tri[ok] / (k[ok] * (k[ok] - 1.0))
    average = math.fsum(local.tolist()) / g.n
    return Clustering(local, average, int(g.n - ok.sum()))


@dataclass(frozen=True)
class PathLength:
    value: float
    mode: str
    sources: int
    giant_size: int
    seed: int | None = None


def sample_sources(comps: ComponentSummary, samples: int, seed: int) -> np.ndarray:
    giant = comps.giant_vertices
    rng = np.random.default_rng(seed)
    picked = rng.choice(giant, size=min(samples, giant.size), replace=False)
    return np.sort(picked)


def characteristic_path_length(
    g: DependencyGraph,
    mode: str = "exact",
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    comps: ComponentSummary | None = None,
) -> PathLength:
    """Mean undirected geodesic over ordered pairs of distinct giant vertices.

    ``mode="sampled"`` averages over ``samples`` BFS sources drawn without
    replacement from the giant component; with ``samples`` at least the giant
    size the result equals the exact value.
    """
    comps = comps or weakly_connected_components(g)
    if comps.giant_size < 2:
        raise GraphError("characteristic path length needs a giant component of >= 2 vertices")
    if mode == "exact":
        sw = giant_sweep(g, comps=comps)
        return PathLength(sw.distance_sum / sw.pair_count, "exact", len(sw.sources), comps.giant_size)
    if mode != "sampled":
        raise ValueError(f"unknown path-length mode: {mode!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sw = giant_sweep(g, sample_sources(comps, samples, seed), comps=comps)
    return PathLength(sw.distance_sum / sw.pair_count, "sampled", len(sw.sources), comps.giant_size, seed)


@dataclass(frozen=True)
class SmallWorldVerdict:
    c_observed: float
    l_observed: float
    c_random: float
    l_random: float
    clustering_ratio: float
    path_ratio: float
    is_small_world: bool
    r_min: float
    f_max: float
    n: int
    mean_degree: float
    degree_convention: str


def small_world_assessment(
    c_observed: float,
    l_observed: float,
    n: int,
    mean_degree: float,
    r_min: float = DEFAULT_R_MIN,
    f_max: float = DEFAULT_F_MAX,
    degree_convention: str = "undirected",
) -> SmallWorldVerdict:
    """Compare observed C and L against the equivalent random graph.

    Small-world means ``C / C_random >= r_min`` and ``L <= f_max * L_random``
    with ``C_random = k / n`` and ``L_random = ln n / ln k``.
    """
    if n < 2:
        raise GraphError("small-world baseline needs n >= 2")
    if mean_degree <= 1:
        raise GraphError(f"small-world baseline undefined for mean degree {mean_degree} <= 1")
    c_random = analytic_c_random(n, mean_degree)
    l_random = analytic_l_random(n, mean_degree)
    ratio = c_observed / c_random
    return SmallWorldVerdict(
        c_observed=c_observed,
        l_observed=l_observed,
        c_random=c_random,
        l_random=l_random,
        clustering_ratio=ratio,
        path_ratio=l_observed / l_random,
        is_small_world=bool(ratio >= r_min and l_observed <= f_max * l_random),
        r_min=r_min,
        f_max=f_max,
        n=n,
        mean_degree=mean_degree,
        degree_convention=degree_convention,
    )


def mean_degree(g: DependencyGraph, convention: str = "undirected") -> float:
    """Mean degree under a named convention.

    ``directed`` is m / n (average number of dependencies per package);
    ``undirected`` is 2 m' / n with m' the edge count of the undirected
    projection, matching the graph the clustering and path metrics use.
    """
    if g.n == 0:
        return 0.0
    if convention == "directed":
        return g.m / g.n
    if convention == "undirected":
        return 2 * g.m_undirected / g.n
    raise ValueError(f"unknown degree convention: {convention!r}")


@dataclass(frozen=True)
class SummaryStatistics:
    n: int
    m: int
    mean_degree: float
    zero_in_count: int
    zero_in_fraction: float
    nonzero_out_count: int
    nonzero_out_fraction: float
    unresolved_edges: int


def summary_statistics(g: DependencyGraph) -> SummaryStatistics:
    zero_in = int(np.count_nonzero(g.in_degree == 0))
    nonzero_out = int(np.count_nonzero(g.out_degree))
    n = g.n
    return SummaryStatistics(
        n=n,
        m=g.m,
        mean_degree=g.m / n if n else 0.0,
        zero_in_count=zero_in,
        zero_in_fraction=zero_in / n if n else 0.0,
        nonzero_out_count=nonzero_out,
        nonzero_out_fraction=nonzero_out / n if n else 0.0,
        unresolved_edges=g.unresolved_edges,
    )


def top_k_in_degree(g: DependencyGraph, k: int = 20) -> list[tuple[str, int]]:
    """Most depended-upon packages, ties broken by name."""
    if k < 1:
        raise ValueError("k must be >= 1")
    # ids are in name order, so a stable sort on -degree breaks ties by name
    order = np.argsort(-g.in_degree, kind="stable")[:k]
    return [(g.names[i], int(g.in_degree[i])) for i in order]
