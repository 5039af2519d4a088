"""Erdős–Rényi G(n, m) generator and analytic random-graph baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .graph import DependencyGraph

# Recorded in reports so a baseline run can be reproduced exactly.
ALGORITHM_ID = "numpy-pcg64/pair-rejection/v1"


@dataclass(frozen=True)
class RandomGraphSpec:
    n: int
    m: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.m <= self.max_edges:
            raise ValueError(f"m must be in [0, {self.max_edges}] for n={self.n}, got {self.m}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @property
    def max_edges(self) -> int:
        return self.n * (self.n - 1) // 2


def _draw_pairs(n: int, count: int, rng: np.random.Generator) -> set[tuple[int, int]]:
    """``count`` distinct unordered pairs by rejection of loops and repeats."""
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < count:
        batch = max(2 * (count - len(chosen)), 16)
        u = rng.integers(0, n, size=batch)
        v = rng.integers(0, n, size=batch)
        for a, b in zip(u.tolist(), v.tolist()):
            if a == b:
                continue
            pair = (a, b) if a < b else (b, a)
            if pair not in chosen:
                chosen.add(pair)
                if len(chosen) == count:
                    break
    return chosen


def er_edges(spec: RandomGraphSpec) -> np.ndarray:
    """Undirected edge array ``(m, 2)`` with ``u < v``, sorted."""
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m
    if m <= spec.max_edges // 2:
        pairs = _draw_pairs(n, m, rng)
    else:
        # dense: reject into the complement, then invert
        excluded = _draw_pairs(n, spec.max_edges - m, rng)
        iu, ju = np.triu_indices(n, k=1)
        pairs = {p for p in zip(iu.tolist(), ju.tolist()) if p not in excluded}
    out = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
    return out


def vertex_names(n: int) -> list[str]:
    width = len(str(max(n - 1, 0)))
    return [f"v{i:0{width}d}" for i in range(n)]


def er_random_graph(spec: RandomGraphSpec) -> "DependencyGraph":
    """Uniform G(n, m) as a symmetric digraph (each edge stored both ways)."""
    from .graph import DependencyGraph

    edges = er_edges(spec)
    both = np.concatenate([edges, edges[:, ::-1]])
    return DependencyGraph.from_edges(vertex_names(spec.n), both)


def analytic_c_random(n: int, mean_degree: float) -> float:
    if n <= 0:
        raise ValueError("n must be >= 1")
    if mean_degree < 0:
        raise ValueError("mean degree must be >= 0")
    return mean_degree / n


def analytic_l_random(n: int, mean_degree: float) -> float:
    if n < 2:
        raise ValueError("n must be >= 2")
    if mean_degree <= 1:
        raise ValueError(f"ln n / ln k is undefined for mean degree {mean_degree} <= 1")
    return math.log(n) / math.log(mean_degree)
