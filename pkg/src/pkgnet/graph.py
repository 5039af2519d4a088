"""Immutable dependency digraph, components, and geodesic primitives.

Degree statistics use the directed edges. Components, distances and the
diameter use the undirected projection, where ``u -- v`` exists whenever
either ``u -> v`` or ``v -> u`` does.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .errors import GraphError
from .ingest import PackageRecord, is_valid_name


class DepKind(str, Enum):
    BUILD = "build"
    RUN = "run"


class UnknownPolicy(str, Enum):
    DROP = "drop"
    STUB = "stub"


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    indices = np.ascontiguousarray(dst[order], dtype=np.int64)
    return indptr, indices


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DependencyGraph:
    """Simple directed graph over package names.

    Vertex ids are dense and follow lexicographic name order. Adjacency is
    stored in CSR form for both directions plus the undirected projection.
    Build instances with :meth:`from_edges` or :func:`build_graph`.
    """

    names: tuple[str, ...]
    out_indptr: np.ndarray
    out_indices: np.ndarray
    in_indptr: np.ndarray
    in_indices: np.ndarray
    und_indptr: np.ndarray
    und_indices: np.ndarray
    unresolved_edges: int = 0

    @classmethod
    def from_edges(
        cls,
        names: Iterable[str],
        edges: Iterable[tuple[str, str]] | np.ndarray = (),
        unresolved_edges: int = 0,
    ) -> "DependencyGraph":
        """Build from vertex names and ``(source, target)`` pairs.

        ``edges`` may also be an ``(m, 2)`` integer array of ids into the
        sorted name list. Self-loops and repeated edges are dropped.
        """
        names = sorted(set(names))
        n = len(names)
        if isinstance(edges, np.ndarray):
            pairs = edges.astype(np.int64, copy=False).reshape(-1, 2)
        else:
            index = {name: i for i, name in enumerate(names)}
            try:
                pairs = np.array([(index[s], index[t]) for s, t in edges], dtype=np.int64).reshape(-1, 2)
            except KeyError as exc:
                raise GraphError(f"edge endpoint {exc.args[0]!r} is not a vertex") from None
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise GraphError("edge endpoint out of range")
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        pairs = np.unique(pairs, axis=0) if pairs.size else pairs
        src, dst = pairs[:, 0], pairs[:, 1]

        und = np.unique(np.concatenate([pairs, pairs[:, ::-1]]), axis=0) if pairs.size else pairs
        out_ptr, out_idx = _csr(n, src, dst)
        in_ptr, in_idx = _csr(n, dst, src)
        und_ptr, und_idx = _csr(n, und[:, 0], und[:, 1])
        return cls(
            names=tuple(names),
            out_indptr=_frozen(out_ptr),
            out_indices=_frozen(out_idx),
            in_indptr=_frozen(in_ptr),
            in_indices=_frozen(in_idx),
            und_indptr=_frozen(und_ptr),
            und_indices=_frozen(und_idx),
            unresolved_edges=int(unresolved_edges),
        )

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return int(self.out_indices.shape[0])

    @property
    def m_undirected(self) -> int:
        return int(self.und_indices.shape[0]) // 2

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def out_degree(self) -> np.ndarray:
        return _frozen(np.diff(self.out_indptr))

    @cached_property
    def in_degree(self) -> np.ndarray:
        return _frozen(np.diff(self.in_indptr))

    @cached_property
    def und_degree(self) -> np.ndarray:
        return _frozen(np.diff(self.und_indptr))

    def successors(self, v: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[v]:self.out_indptr[v + 1]]

    def predecessors(self, v: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[v]:self.in_indptr[v + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        return self.und_indices[self.und_indptr[v]:self.und_indptr[v + 1]]

    def edges(self) -> list[tuple[str, str]]:
        src = np.repeat(np.arange(self.n), self.out_degree)
        return [(self.names[s], self.names[t]) for s, t in zip(src.tolist(), self.out_indices.tolist())]

    def edge_array(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.out_degree)
        return np.column_stack([src, self.out_indices])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return (
            self.names == other.names
            and np.array_equal(self.out_indptr, other.out_indptr)
            and np.array_equal(self.out_indices, other.out_indices)
        )

    def __repr__(self) -> str:
        return f"DependencyGraph(n={self.n}, m={self.m}, unresolved_edges={self.unresolved_edges})"


def build_graph(
    records: Sequence[PackageRecord],
    dep_kind: DepKind | str = DepKind.RUN,
    unknown_policy: UnknownPolicy | str = UnknownPolicy.DROP,
) -> DependencyGraph:
    """Turn package records into a :class:`DependencyGraph`.

    Each record contributes one vertex and an edge ``name -> dep`` for every
    dependency of the selected kind. Dependencies naming no record are
    counted in ``unresolved_edges`` and either dropped or, with
    ``unknown_policy="stub"``, added as extra target vertices.
    """
    dep_kind = DepKind(dep_kind)
    unknown_policy = UnknownPolicy(unknown_policy)
    known: set[str] = set()
    for rec in records:
        if rec.name in known:
            raise GraphError(f"duplicate package record: {rec.name!r}")
        known.add(rec.name)

    vertices = set(known)
    edges: list[tuple[str, str]] = []
    unresolved = 0
    for rec in records:
        for dep in rec.deps(dep_kind.value):
            if dep == rec.name:
                continue
            if dep not in known:
                unresolved += 1
                if unknown_policy is UnknownPolicy.DROP:
                    continue
                vertices.add(dep)
            edges.append((rec.name, dep))
    return DependencyGraph.from_edges(vertices, edges, unresolved_edges=unresolved)


@dataclass(frozen=True)
class ComponentSummary:
    component_count: int
    component_sizes: tuple[int, ...]
    giant_size: int
    giant_fraction: float
    labels: np.ndarray
    giant_label: int

    @property
    def giant_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.labels == self.giant_label)


def weakly_connected_components(g: DependencyGraph) -> ComponentSummary:
    """Components of the undirected projection.

    The giant component is the largest one; among equally large components
    the one holding the smallest vertex id is chosen.
    """
    if g.n == 0:
        return ComponentSummary(0, (), 0, 0.0, np.zeros(0, dtype=np.int64), -1)
    adj = csr_matrix(
        (np.ones(g.und_indices.shape[0], dtype=np.int8), g.und_indices, g.und_indptr),
        shape=(g.n, g.n),
    )
    count, labels = connected_components(adj, directed=False)
    labels = labels.astype(np.int64)
    sizes = np.bincount(labels, minlength=count)
    first = np.full(count, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n))
    giant = int(np.lexsort((first, -sizes))[0])
    giant_size = int(sizes[giant])
    return ComponentSummary(
        component_count=int(count),
        component_sizes=tuple(sorted(sizes.tolist(), reverse=True)),
        giant_size=giant_size,
        giant_fraction=giant_size / g.n,
        labels=_frozen(labels),
        giant_label=giant,
    )


def _adjacency(g: DependencyGraph, directed: bool) -> tuple[np.ndarray, np.ndarray]:
    if directed:
        return g.out_indptr, g.out_indices
    return g.und_indptr, g.und_indices


def bfs_distances(g: DependencyGraph, source: int, directed: bool = False) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices get -1.

    With ``directed=True`` edges are followed in the dependency direction,
    otherwise the undirected projection is searched.
    """
    if not 0 <= int(source) < g.n:
        raise GraphError(f"source id {source} out of range for n={g.n}")
    indptr, indices = _adjacency(g, directed)
    dist = np.empty(g.n, dtype=np.int64)
    queue = np.empty(g.n, dtype=np.int64)
    _kernels.bfs(indptr, indices, int(source), dist, queue)
    return dist


@dataclass(frozen=True)
class GiantSweep:
    """Per-source BFS results restricted to the giant component."""

    sources: np.ndarray
    giant_size: int
    totals: np.ndarray
    eccentricities: np.ndarray

    @property
    def distance_sum(self) -> int:
        return int(self.totals.sum())

    @property
    def pair_count(self) -> int:
        return len(self.sources) * (self.giant_size - 1)


def giant_sweep(g: DependencyGraph, sources: np.ndarray | None = None, comps: ComponentSummary | None = None) -> GiantSweep:
    """Run BFS from ``sources`` (default: every giant-component vertex)."""
    comps = comps or weakly_connected_components(g)
    if comps.giant_size == 0:
        raise GraphError("graph has no giant component")
    if sources is None:
        sources = comps.giant_vertices
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    if sources.size and np.any(comps.labels[sources] != comps.giant_label):
        raise GraphError("sweep sources must lie in the giant component")
    reached, totals, ecc = _kernels.sweep(g.und_indptr, g.und_indices, sources)
    if np.any(reached != comps.giant_size):
        raise GraphError("BFS reach disagrees with component size")
    return GiantSweep(sources, comps.giant_size, totals, ecc)


@dataclass(frozen=True)
class Diameter:
    value: int
    is_lower_bound: bool
    mode: str
    sweeps: int | None = None
    seed: int | None = None


def diameter_of_giant(
    g: DependencyGraph,
    mode: str = "exact",
    sweeps: int = 10,
    seed: int = 0,
    comps: ComponentSummary | None = None,
) -> Diameter:
    """Longest undirected geodesic inside the giant component.

    ``mode="exact"`` runs BFS from every giant vertex. ``mode="sampled"``
    runs ``sweeps`` double sweeps (BFS from a random vertex, then from the
    farthest vertex found) and returns the best lower bound.
    """
    comps = comps or weakly_connected_components(g)
    if comps.giant_size == 0:
        raise GraphError("graph has no giant component")
    if mode == "exact":
        value, used = _bounded_diameter(g, comps.giant_vertices)
        return Diameter(value, False, "exact", sweeps=used)
    if mode != "sampled":
        raise ValueError(f"unknown diameter mode: {mode!r}")
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")

    rng = np.random.default_rng(seed)
    giant = comps.giant_vertices
    dist = np.empty(g.n, dtype=np.int64)
    queue = np.empty(g.n, dtype=np.int64)
    best = 0
    for start in rng.choice(giant, size=sweeps, replace=True):
        _, _, ecc, far = _kernels.bfs(g.und_indptr, g.und_indices, int(start), dist, queue)
        _, _, ecc2, _ = _kernels.bfs(g.und_indptr, g.und_indices, int(far), dist, queue)
        best = max(best, int(ecc), int(ecc2))
    return Diameter(best, True, "sampled", sweeps=sweeps, seed=seed)


def _bounded_diameter(g: DependencyGraph, giant: np.ndarray) -> tuple[int, int]:
    """Exact diameter of one component using eccentricity bounds.

    After a BFS from ``v`` with eccentricity ``e``, every ``w`` satisfies
    ``max(d(v,w), e - d(v,w)) <= ecc(w) <= e + d(v,w)``. The search alternates
    between the vertex with the largest upper bound and the one with the
    smallest lower bound, and stops once no unvisited vertex can beat the best
    eccentricity found. Returns ``(diameter, bfs_runs)``.
    """
    size = giant.size
    if size == 1:
        return 0, 0
    lower = np.zeros(size, dtype=np.int64)
    upper = np.full(size, np.iinfo(np.int64).max, dtype=np.int64)
    visited = np.zeros(size, dtype=bool)
    # prefer hubs on ties; they tend to tighten bounds fastest
    tiebreak = -g.und_degree[giant]
    dist = np.empty(g.n, dtype=np.int64)
    queue = np.empty(g.n, dtype=np.int64)
    best = 0
    runs = 0
    pick_high = True
    while True:
        open_ = ~visited
        if not open_.any() or upper[open_].max() <= best:
            return best, runs
        cand = np.flatnonzero(open_)
        if pick_high:
            i = cand[np.lexsort((cand, tiebreak[cand], -upper[cand]))[0]]
        else:
            i = cand[np.lexsort((cand, tiebreak[cand], lower[cand]))[0]]
        pick_high = not pick_high
        _, _, ecc, _ = _kernels.bfs(g.und_indptr, g.und_indices, int(giant[i]), dist, queue)
        runs += 1
        d = dist[giant]
        ecc = int(ecc)
        best = max(best, ecc)
        visited[i] = True
        np.maximum(lower, np.maximum(d, ecc - d), out=lower)
        np.minimum(upper, ecc + d, out=upper)
        best = max(best, int(lower.max()))


def write_edge_list(g: DependencyGraph) -> str:
    """Canonical edge list: ``source<TAB>target`` lines, sorted.

    Vertices without any incident edge are written as a bare name so the
    vertex set survives a round trip.
    """
    lines = [f"{s}\t{t}" for s, t in g.edges()]
    touched = (g.out_degree + g.in_degree) > 0
    lines.extend(name for name, t in zip(g.names, touched.tolist()) if not t)
    lines.sort()
    return "".join(line + "\n" for line in lines)


def read_edge_list(text: str) -> DependencyGraph:
    names: set[str] = set()
    edges: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) > 2 or not all(is_valid_name(p) for p in parts):
            raise GraphError(f"line {lineno}: malformed edge-list entry {line!r}")
        names.update(parts)
        if len(parts) == 2:
            edges.append((parts[0], parts[1]))
    return DependencyGraph.from_edges(names, edges)
