"""Complex-network statistics for package dependency graphs."""

__version__ = "0.1.0"

from .baseline import RandomGraphSpec, analytic_c_random, analytic_l_random, er_random_graph
from .graph import (
    ComponentSummary,
    DependencyGraph,
    bfs_distances,
    build_graph,
    diameter_of_giant,
    read_edge_list,
    weakly_connected_components,
    write_edge_list,
)
from .ingest import IngestDiagnostics, PackageRecord, parse_bsd_index, parse_debian_packages
from .metrics import (
    DegreeHistogram,
    SmallWorldVerdict,
    characteristic_path_length,
    clustering_coefficient,
    degree_distribution,
    small_world_assessment,
    summary_statistics,
    top_k_in_degree,
)
from .powerlaw import PowerLawFit, emit_scatter, fit_power_law

__all__ = [
    "ComponentSummary",
    "DegreeHistogram",
    "DependencyGraph",
    "IngestDiagnostics",
    "PackageRecord",
    "PowerLawFit",
    "RandomGraphSpec",
    "SmallWorldVerdict",
    "analytic_c_random",
    "analytic_l_random",
    "bfs_distances",
    "build_graph",
    "characteristic_path_length",
    "clustering_coefficient",
    "degree_distribution",
    "diameter_of_giant",
    "emit_scatter",
    "er_random_graph",
    "fit_power_law",
    "parse_bsd_index",
    "parse_debian_packages",
    "read_edge_list",
    "small_world_assessment",
    "summary_statistics",
    "top_k_in_degree",
    "weakly_connected_components",
    "write_edge_list",
]
