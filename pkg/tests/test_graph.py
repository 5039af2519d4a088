import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    bfs_all_pairs,
    floyd_warshall,
    giant_diameter_bfs,
    names_for,
    random_edges,
    union_find_components,
)
from pkgnet.baseline import RandomGraphSpec, er_edges
from pkgnet.errors import GraphError
from pkgnet.graph import (
    DependencyGraph,
    bfs_distances,
    build_graph,
    diameter_of_giant,
    weakly_connected_components,
)
from pkgnet.ingest import PackageRecord, parse_bsd_index, parse_debian_packages
from pkgnet.metrics import degree_distribution, summary_statistics, top_k_in_degree


def graph(n, edges):
    return DependencyGraph.from_edges(names_for(n), np.array(edges, dtype=np.int64).reshape(-1, 2))


def test_two_vertices():
    g = build_graph([PackageRecord("a", run_deps=("b",)), PackageRecord("b")])
    assert (g.n, g.m) == (2, 1)
    assert g.edges() == [("a", "b")]


def test_self_loop_and_duplicates_removed():
    # PackageRecord itself forbids these, so feed edges directly
    g = DependencyGraph.from_edges(["a", "b"], [("a", "a"), ("a", "b"), ("a", "b")])
    assert (g.n, g.m) == (2, 1)


def test_duplicate_record_rejected():
    with pytest.raises(GraphError, match="'a'"):
        build_graph([PackageRecord("a"), PackageRecord("a")])


def test_unknown_policy():
    recs = [PackageRecord("a", run_deps=("b", "zz"))]
    drop = build_graph(recs, "run", "drop")
    stub = build_graph(recs, "run", "stub")
    assert (drop.n, drop.m, drop.unresolved_edges) == (1, 0, 2)
    assert (stub.n, stub.m, stub.unresolved_edges) == (3, 2, 2)
    assert stub.out_degree[stub.index["b"]] == 0


def test_ids_follow_name_order():
    g = build_graph([PackageRecord("zeta"), PackageRecord("alpha", run_deps=("zeta",)), PackageRecord("mid")])
    assert g.names == ("alpha", "mid", "zeta")


def test_components_small_cases():
    s = weakly_connected_components(graph(4, [(0, 1), (2, 3)]))
    assert (s.component_count, s.component_sizes) == (2, (2, 2))
    s = weakly_connected_components(graph(3, [(0, 1), (1, 2), (2, 0)]))
    assert (s.component_count, s.component_sizes, s.giant_fraction) == (1, (3,), 1.0)
    s = weakly_connected_components(DependencyGraph.from_edges([], []))
    assert s.component_count == 0


def test_components_vs_union_find_er():
    edges = er_edges(RandomGraphSpec(200, 150, seed=7))
    s = weakly_connected_components(graph(200, edges))
    assert list(s.component_sizes) == union_find_components(200, edges.tolist())
    assert s.giant_size == max(s.component_sizes)


def test_bfs_path_and_isolated():
    g = graph(3, [(0, 1), (2, 1)])
    assert bfs_distances(g, 0).tolist() == [0, 1, 2]
    assert bfs_distances(g, 0, directed=True).tolist() == [0, 1, -1]
    g = graph(3, [(1, 2)])
    assert bfs_distances(g, 0).tolist() == [0, -1, -1]
    with pytest.raises(GraphError):
        bfs_distances(g, 3)


@pytest.mark.parametrize("seed", range(20))
def test_bfs_vs_floyd_warshall(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 64)
    edges = random_edges(n, rng.choice([0.02, 0.05, 0.15]), rng)
    g = graph(n, edges)
    fw = floyd_warshall(n, edges)
    for s in range(n):
        d = bfs_distances(g, s).astype(float)
        d[d < 0] = np.inf
        assert np.array_equal(d, fw[s])


def test_diameter_small_cases():
    path = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert diameter_of_giant(path).value == 4
    k6 = graph(6, [(u, v) for u in range(6) for v in range(6) if u < v])
    assert diameter_of_giant(k6).value == 1
    lb = diameter_of_giant(path, "sampled", sweeps=3, seed=1)
    assert lb.is_lower_bound and lb.value <= 4


@pytest.mark.parametrize("seed", range(10))
def test_diameter_vs_all_pairs_bfs(seed):
    rng = random.Random(1000 + seed)
    n = 50
    edges = [(i, i + 1) for i in range(n - 1)]  # connected backbone
    edges += random_edges(n, 0.02, rng)
    g = graph(n, edges)
    assert diameter_of_giant(g).value == giant_diameter_bfs(n, edges)
    assert diameter_of_giant(g, "sampled", sweeps=5, seed=seed).value <= giant_diameter_bfs(n, edges)


edge_lists = st.integers(1, 30).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=80))
)


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_graph_invariants(case):
    n, edges = case
    g = graph(n, edges)
    assert g.out_degree.sum() == g.in_degree.sum() == g.m
    pairs = set(map(tuple, g.edge_array().tolist()))
    assert len(pairs) == g.m and all(u != v for u, v in pairs)
    assert all(0 <= x < n for p in pairs for x in p)
    for direction in ("in", "out"):
        h = degree_distribution(g, direction)
        assert sum(k * c for k, c in h.counts.items()) == g.m
        assert sum(h.counts.values()) == n
    und = {(u, int(v)) for u in range(n) for v in g.neighbors(u)}
    assert all((v, u) in und for u, v in und)
    for s in range(n):
        d = bfs_distances(g, s, directed=True)
        for u, v in pairs:
            if d[u] >= 0:
                assert 0 <= d[v] <= d[u] + 1
    s = weakly_connected_components(g)
    assert sum(s.component_sizes) == n
    assert list(s.component_sizes) == union_find_components(n, edges)


def test_fixture_graph_matches_manifest(debian_text, debian_manifest):
    recs, _ = parse_debian_packages(debian_text)
    g = build_graph(recs)
    want = debian_manifest["default"]
    assert (g.n, g.m, g.unresolved_edges) == (want["n"], want["m"], want["unresolved_edges"])
    assert {name: int(g.out_degree[i]) for i, name in enumerate(g.names)} == want["out_degree"]
    s = weakly_connected_components(g)
    assert (s.component_count, list(s.component_sizes)) == (want["component_count"], want["component_sizes"])
    assert {str(k): v for k, v in degree_distribution(g, "in").counts.items()} == want["in_histogram"]
    assert {str(k): v for k, v in degree_distribution(g, "out").counts.items()} == want["out_histogram"]
    stats = summary_statistics(g)
    assert (stats.zero_in_count, stats.nonzero_out_count) == (want["zero_in_count"], want["nonzero_out_count"])
    assert [list(x) for x in top_k_in_degree(g, 6)] == want["top_6"]


@pytest.mark.parametrize(
    "kwargs, key",
    [
        ({"alt_policy": "all"}, "alt_all"),
        ({"alt_policy": "none"}, "alt_none"),
        ({"include_pre_depends": True}, "pre_depends"),
    ],
)
def test_fixture_policy_variants(debian_text, debian_manifest, kwargs, key):
    g = build_graph(parse_debian_packages(debian_text, **kwargs)[0])
    want = debian_manifest[key]
    assert (g.m, g.unresolved_edges) == (want["m"], want["unresolved_edges"])
    if "giant_size" in want:
        s = weakly_connected_components(g)
        assert (s.component_count, s.giant_size) == (want["component_count"], want["giant_size"])


def test_fixture_stub_and_build(debian_text, debian_manifest):
    recs, _ = parse_debian_packages(debian_text)
    g = build_graph(recs, "run", "stub")
    assert (g.n, g.m) == (debian_manifest["stub"]["n"], debian_manifest["stub"]["m"])
    g = build_graph(recs, "build")
    assert (g.n, g.m) == (debian_manifest["build"]["n"], debian_manifest["build"]["m"])


def test_bsd_fixture_graphs(bsd_text, bsd_manifest):
    recs, _ = parse_bsd_index(bsd_text)
    for kind in ("build", "run"):
        g = build_graph(recs, kind)
        want = bsd_manifest[kind]
        assert (g.n, g.m, g.unresolved_edges) == (want["n"], want["m"], want["unresolved_edges"])
        s = weakly_connected_components(g)
        assert (s.component_count, list(s.component_sizes)) == (want["component_count"], want["component_sizes"])
    g = build_graph(recs, "build")
    assert {name: int(g.out_degree[i]) for i, name in enumerate(g.names)} == bsd_manifest["build"]["out_degree"]
    assert [list(x) for x in top_k_in_degree(g, 5)] == bsd_manifest["build"]["top_5"]


def test_graph_is_read_only():
    g = graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.out_indices[0] = 2
    with pytest.raises(AttributeError):
        g.names = ("x",)
