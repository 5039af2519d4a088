"""Report assembly, JSON/CSV emission, and snapshot comparison."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from . import __version__
from .baseline import (
    ALGORITHM_ID,
    RandomGraphSpec,
    analytic_c_random,
    analytic_l_random,
    er_random_graph,
)
from .errors import EmptyParseError, FitError, GraphError, InputError, InvariantError
from .graph import DependencyGraph, build_graph, diameter_of_giant, weakly_connected_components
from .ingest import AltPolicy, IngestDiagnostics, SourceFormat, parse
from .metrics import (
    DEFAULT_F_MAX,
    DEFAULT_R_MIN,
    DEFAULT_SAMPLES,
    DegreeHistogram,
    characteristic_path_length,
    clustering_coefficient,
    degree_distribution,
    mean_degree,
    small_world_assessment,
    summary_statistics,
    top_k_in_degree,
)
from .powerlaw import emit_scatter, fit_power_law

REPORT_SCHEMA_ID = "pkgnet.report/1"
BASELINE_SCHEMA_ID = "pkgnet.baseline/1"
# Giant components at or above this size switch "auto" modes to sampling.
EXACT_LIMIT = 50_000
SIG_DIGITS = 9

CLUSTERING_CONVENTION = (
    "local clustering on the undirected projection, averaged over all n vertices; "
    "vertices with fewer than 2 neighbours contribute 0"
)

# Published September 2004 figures, for side-by-side display only.
PUBLISHED_VALUES: dict[str, dict[str, float | int]] = {
    "debian": {
        "n": 19504,
        "m": 73960,
        "giant_size": 17351,
        "alpha_in": 0.9,
        "alpha_out": 2.33,
        "clustering": 0.52,
        "path_length": 3.34,
        "mean_degree": 3.79,
        "c_random": 0.0019,
        "l_random": 7.41,
        "component_count": 1945,
        "diameter": 31,
        "zero_in_count": 10142,
        "nonzero_out_fraction": 0.73,
    },
    "bsd": {
        "n": 10222,
        "m": 74318,
        "giant_size": 7441,
        "alpha_in": 0.62,
        "alpha_out": 1.28,
        "clustering": 0.56,
        "path_length": 2.86,
        "mean_degree": 7.27,
        "c_random": 0.007,
        "l_random": 7.11,
    },
}


def schema(name: str = "report") -> dict:
    text = resources.files("pkgnet").joinpath(f"schema/{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def canonical(value: Any, path: str = "$") -> Any:
    """Round floats to 9 significant digits and reject non-finite numbers."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise InvariantError(f"non-finite number at {path}: {value}")
        return float(f"{float(value):.{SIG_DIGITS}g}")
    if isinstance(value, dict):
        return {k: canonical(v, f"{path}.{k}") for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v, f"{path}[{i}]") for i, v in enumerate(value)]
    raise TypeError(f"cannot serialise {type(value).__name__} at {path}")


def dumps(report: dict) -> str:
    return json.dumps(canonical(report), indent=2, ensure_ascii=False) + "\n"


@dataclass
class AnalyzeOptions:
    fmt: SourceFormat = SourceFormat.DEBIAN
    dep_kind: str | None = None
    alt_policy: AltPolicy = AltPolicy.FIRST
    include_pre_depends: bool = False
    unknown_policy: str = "drop"
    k_min: int = 1
    fit_method: str = "frequency"
    top: int = 20
    l_mode: str = "auto"
    samples: int = DEFAULT_SAMPLES
    diameter_mode: str = "auto"
    sweeps: int = 10
    seed: int = 0
    degree_convention: str = "undirected"
    r_min: float = DEFAULT_R_MIN
    f_max: float = DEFAULT_F_MAX
    label: str | None = None
    timestamp: str | None = None
    paper_values: bool = False

    def __post_init__(self) -> None:
        self.fmt = SourceFormat(self.fmt)
        self.alt_policy = AltPolicy(self.alt_policy)
        if self.dep_kind is None:
            # Debian binary metadata only carries run-time dependencies
            self.dep_kind = "run" if self.fmt is SourceFormat.DEBIAN else "build"
        if self.top < 1:
            raise InputError("--top must be >= 1")
        if self.samples < 1 or self.sweeps < 1:
            raise InputError("--samples and --sweeps must be >= 1")


@dataclass
class Analysis:
    """Everything computed for one snapshot; ``report`` is the JSON payload."""

    graph: DependencyGraph
    diagnostics: IngestDiagnostics
    hist_in: DegreeHistogram
    hist_out: DegreeHistogram
    top: list[tuple[str, int]]
    report: dict = field(default_factory=dict)


def _fit_block(hist: DegreeHistogram, opts: AnalyzeOptions) -> dict:
    try:
        fit = fit_power_law(hist, k_min=opts.k_min, method=opts.fit_method)
    except FitError as exc:
        return {"method": opts.fit_method, "k_min": max(opts.k_min, 1), "alpha": None, "error": str(exc)}
    return {
        "method": fit.method,
        "k_min": fit.k_min,
        "alpha": fit.alpha,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points_used": fit.points_used,
        "excluded_zero_degree": fit.excluded_zero_degree,
    }


def _resolve_mode(requested: str, giant_size: int) -> str:
    if requested == "auto":
        return "exact" if giant_size < EXACT_LIMIT else "sampled"
    if requested not in ("exact", "sampled"):
        raise InputError(f"unknown mode: {requested!r}")
    return requested


def _published_block(reference: str, report: dict) -> dict:
    ref_values = PUBLISHED_VALUES[reference]
    n, k = ref_values["n"], ref_values["mean_degree"]
    return {
        "reference": reference,
        "published": dict(ref_values),
        "published_inputs_recomputed": {
            "c_random": analytic_c_random(n, k),
            "l_random": analytic_l_random(n, k),
        },
        "observed": {
            "n": report["n"],
            "m": report["m"],
            "giant_size": report["components"]["giant_size"],
            "alpha_in": report["power_law"]["in"]["alpha"],
            "alpha_out": report["power_law"]["out"]["alpha"],
            "clustering": report["clustering"]["value"],
            "path_length": report["path_length"]["value"],
        },
        "note": (
            "published values come from September 2004 snapshots and are not reproducible; "
            "the recomputed baselines apply k/n and ln n / ln k to the published n and k"
        ),
    }


def _check_invariants(g: DependencyGraph, hist_in: DegreeHistogram, hist_out: DegreeHistogram, comps, clustering) -> None:
    for hist in (hist_in, hist_out):
        if hist.total_degree() != g.m or sum(hist.counts.values()) != g.n:
            raise InvariantError(f"{hist.direction}-degree histogram disagrees with n={g.n}, m={g.m}")
    if sum(comps.component_sizes) != g.n:
        raise InvariantError("component sizes do not partition the vertex set")
    if clustering.local.size and (clustering.local.min() < 0 or clustering.local.max() > 1):
        raise InvariantError("local clustering outside [0, 1]")


def analyze_records(records, diagnostics: IngestDiagnostics, opts: AnalyzeOptions, input_path: str = "") -> Analysis:
    g = build_graph(records, opts.dep_kind, opts.unknown_policy)
    stats = summary_statistics(g)
    comps = weakly_connected_components(g)
    hist_in = degree_distribution(g, "in")
    hist_out = degree_distribution(g, "out")
    clustering = clustering_coefficient(g)
    _check_invariants(g, hist_in, hist_out, comps, clustering)

    l_mode = _resolve_mode(opts.l_mode, comps.giant_size)
    d_mode = _resolve_mode(opts.diameter_mode, comps.giant_size)
    if comps.giant_size >= 2:
        pl = characteristic_path_length(g, l_mode, opts.samples, opts.seed, comps=comps)
        path_block = {"value": pl.value, "mode": pl.mode, "sources": pl.sources, "giant_size": pl.giant_size, "seed": pl.seed}
    else:
        path_block = {"value": None, "mode": l_mode, "sources": 0, "giant_size": comps.giant_size, "seed": None,
                      "error": "giant component has fewer than 2 vertices"}
    dia = diameter_of_giant(g, d_mode, opts.sweeps, opts.seed, comps=comps)

    k_bar = mean_degree(g, opts.degree_convention)
    sw_block = {"is_small_world": None, "mean_degree": k_bar, "degree_convention": opts.degree_convention,
                "r_min": opts.r_min, "f_max": opts.f_max}
    try:
        if path_block["value"] is None:
            raise GraphError("no path length available")
        v = small_world_assessment(clustering.average, path_block["value"], g.n, k_bar,
                                   opts.r_min, opts.f_max, opts.degree_convention)
    except GraphError as exc:
        sw_block["error"] = str(exc)
    else:
        sw_block = {
            "is_small_world": v.is_small_world,
            "c_observed": v.c_observed,
            "l_observed": v.l_observed,
            "c_random": v.c_random,
            "l_random": v.l_random,
            "clustering_ratio": v.clustering_ratio,
            "path_ratio": v.path_ratio,
            "r_min": v.r_min,
            "f_max": v.f_max,
            "mean_degree": v.mean_degree,
            "degree_convention": v.degree_convention,
        }

    top = top_k_in_degree(g, opts.top) if g.n else []
    report = {
        "schema": REPORT_SCHEMA_ID,
        "generator": f"pkgnet {__version__}",
        "snapshot": {
            "label": opts.label if opts.label is not None else Path(input_path).name,
            "source_format": opts.fmt.value,
            "input_path": input_path,
            "timestamp": opts.timestamp,
            "dep_kind": opts.dep_kind,
            "alt_policy": opts.alt_policy.value if opts.fmt is SourceFormat.DEBIAN else None,
            "include_pre_depends": opts.include_pre_depends if opts.fmt is SourceFormat.DEBIAN else None,
            "unknown_policy": opts.unknown_policy,
        },
        "ingest": {
            "records": len(records),
            "stanza_count": diagnostics.stanza_count,
            "dropped_self_refs": diagnostics.dropped_self_refs,
            "alternative_groups_seen": diagnostics.alternative_groups_seen,
            "malformed_lines": [{"line": e.line, "reason": e.reason} for e in diagnostics.malformed_lines],
        },
        "n": stats.n,
        "m": stats.m,
        "mean_degree": stats.mean_degree,
        "unresolved_edges": stats.unresolved_edges,
        "components": {
            "count": comps.component_count,
            "giant_size": comps.giant_size,
            "giant_fraction": comps.giant_fraction,
            "sizes": list(comps.component_sizes),
        },
        "diameter": {
            "value": dia.value,
            "is_lower_bound": dia.is_lower_bound,
            "mode": dia.mode,
            "bfs_runs": dia.sweeps,
            "seed": dia.seed,
        },
        "clustering": {
            "value": clustering.average,
            "convention": CLUSTERING_CONVENTION,
            "low_degree_vertices": clustering.low_degree_count,
            "value_excluding_low_degree": clustering.average_excluding_low_degree,
        },
        "path_length": path_block,
        "degrees": {
            "zero_in_count": stats.zero_in_count,
            "zero_in_fraction": stats.zero_in_fraction,
            "nonzero_out_count": stats.nonzero_out_count,
            "nonzero_out_fraction": stats.nonzero_out_fraction,
            "max_in_degree": max(hist_in.counts) if hist_in.counts else 0,
            "max_out_degree": max(hist_out.counts) if hist_out.counts else 0,
        },
        "power_law": {"in": _fit_block(hist_in, opts), "out": _fit_block(hist_out, opts)},
        "small_world": sw_block,
        "top_k": [{"rank": i, "name": name, "in_degree": d} for i, (name, d) in enumerate(top, start=1)],
        "paper_comparison": None,
    }
    if opts.paper_values:
        ref = "debian" if opts.fmt is SourceFormat.DEBIAN else "bsd"
        report["paper_comparison"] = _published_block(ref, report)
    return Analysis(g, diagnostics, hist_in, hist_out, top, report)


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def output_files(a: Analysis) -> dict[str, str]:
    return {
        "report.json": dumps(a.report),
        "degree_in.csv": _csv(["degree", "count"], sorted(a.hist_in.counts.items())),
        "degree_out.csv": _csv(["degree", "count"], sorted(a.hist_out.counts.items())),
        "scatter_in.csv": _csv(["degree", "count"], emit_scatter(a.hist_in)),
        "scatter_out.csv": _csv(["degree", "count"], emit_scatter(a.hist_out)),
        "top_k.csv": _csv(["rank", "name", "in_degree"], [(r["rank"], r["name"], r["in_degree"]) for r in a.report["top_k"]]),
    }


def _read_input(path: str | os.PathLike) -> tuple[bytes, os.stat_result]:
    try:
        with open(path, "rb") as fh:
            return fh.read(), os.fstat(fh.fileno())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def run_analyze(path: str | os.PathLike, out_dir: str | os.PathLike, opts: AnalyzeOptions) -> dict:
    """Analyse one snapshot file and write the report bundle into ``out_dir``."""
    data, st = _read_input(path)
    kwargs = {}
    if opts.fmt is SourceFormat.DEBIAN:
        kwargs = {"alt_policy": opts.alt_policy, "include_pre_depends": opts.include_pre_depends}
    records, diag = parse(data, opts.fmt, **kwargs)
    if not records:
        raise EmptyParseError(f"no package records parsed from {path}")
    if opts.timestamp is None:
        opts.timestamp = datetime.fromtimestamp(int(st.st_mtime), tz=timezone.utc).isoformat()
    analysis = analyze_records(records, diag, opts, input_path=str(path))
    files = output_files(analysis)
    try:
        jsonschema.validate(json.loads(files["report.json"]), schema("report"))
    except jsonschema.ValidationError as exc:
        raise InvariantError(f"report failed schema validation: {exc.message}") from exc

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    return analysis.report


def load_report(path: str | os.PathLike) -> dict:
    try:
        report = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from exc
    try:
        jsonschema.validate(report, schema("report"))
    except jsonschema.ValidationError as exc:
        raise InputError(f"{path} does not match the report schema: {exc.message}") from exc
    return report


COMPARE_ROWS = [
    ("n", lambda r: r["n"], "n"),
    ("m", lambda r: r["m"], "m"),
    ("|Omega|", lambda r: r["components"]["giant_size"], "giant_size"),
    ("alpha_in", lambda r: r["power_law"]["in"]["alpha"], "alpha_in"),
    ("alpha_out", lambda r: r["power_law"]["out"]["alpha"], "alpha_out"),
    ("C", lambda r: r["clustering"]["value"], "clustering"),
    ("L", lambda r: r["path_length"]["value"], "path_length"),
]


def _cell(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, int):
        return str(v)
    return f"{v:.6g}"


def compare_rows(a: dict, b: dict, paper_values: bool = False) -> list[list[Any]]:
    rows = []
    for label, get, key in COMPARE_ROWS:
        va, vb = get(a), get(b)
        delta = None if va is None or vb is None else vb - va
        row = [label, va, vb, delta]
        if paper_values:
            row += [PUBLISHED_VALUES["debian"][key], PUBLISHED_VALUES["bsd"][key]]
        rows.append(row)
    return rows


def render_compare(a: dict, b: dict, paper_values: bool = False) -> str:
    header = ["metric", a["snapshot"]["label"] or "A", b["snapshot"]["label"] or "B", "delta (B-A)"]
    if paper_values:
        header += ["2004 Debian", "2004 BSD"]
    body = [[_cell(v) if i else v for i, v in enumerate(row)] for row in compare_rows(a, b, paper_values)]
    widths = [max(len(str(r[i])) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
             for r in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def run_compare(path_a: str | os.PathLike, path_b: str | os.PathLike, paper_values: bool = False) -> str:
    return render_compare(load_report(path_a), load_report(path_b), paper_values)


def _moments(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return {"mean": None, "std": None, "stderr": None, "values": []}
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return {
        "mean": math.fsum(values) / len(values),
        "std": std,
        "stderr": std / math.sqrt(arr.size),
        "values": list(values),
    }


def run_random_baseline(
    n: int,
    m: int,
    seeds: int,
    seed: int = 0,
    l_mode: str = "auto",
    samples: int = DEFAULT_SAMPLES,
) -> dict:
    """Measure C and L on ``seeds`` independent G(n, m) draws.

    Seeds used are ``seed, seed + 1, ...``. Mean degree is ``2m / n``.
    """
    if seeds < 1:
        raise InputError("seeds must be >= 1")
    try:
        specs = [RandomGraphSpec(n, m, seed + i) for i in range(seeds)]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    k_bar = 2 * m / n
    c_vals: list[float] = []
    c_eligible: list[float] = []
    l_vals: list[float] = []
    modes = set()
    for spec in specs:
        g = er_random_graph(spec)
        comps = weakly_connected_components(g)
        cl = clustering_coefficient(g)
        c_vals.append(cl.average)
        c_eligible.append(cl.average_excluding_low_degree)
        if comps.giant_size >= 2:
            mode = _resolve_mode(l_mode, comps.giant_size)
            modes.add(mode)
            l_vals.append(characteristic_path_length(g, mode, samples, spec.seed, comps=comps).value)
    return {
        "schema": BASELINE_SCHEMA_ID,
        "algorithm": ALGORITHM_ID,
        "n": n,
        "m": m,
        "seeds": [s.seed for s in specs],
        "mean_degree": k_bar,
        "l_mode": sorted(modes)[0] if len(modes) == 1 else l_mode,
        "samples": samples if "sampled" in modes else None,
        "analytic": {
            "undirected": _analytic(n, k_bar),
            "directed": _analytic(n, m / n),
        },
        "measured": {
            "clustering": _moments(c_vals),
            "clustering_excluding_low_degree": _moments(c_eligible),
            "path_length": _moments(l_vals),
        },
    }


def _analytic(n: int, k_bar: float) -> dict:
    return {
        "mean_degree": k_bar,
        "c_random": analytic_c_random(n, k_bar),
        "l_random": analytic_l_random(n, k_bar) if n >= 2 and k_bar > 1 else None,
    }


def render_baseline(result: dict) -> str:
    measured = result["measured"]
    c, ce, l = measured["clustering"], measured["clustering_excluding_low_degree"], measured["path_length"]
    und, dirs = result["analytic"]["undirected"], result["analytic"]["directed"]
    rows = [
        ["", "measured mean", "std", "stderr", f"k=2m/n={und['mean_degree']:.4g}", f"k=m/n={dirs['mean_degree']:.4g}"],
        ["C", c["mean"], c["std"], c["stderr"], und["c_random"], dirs["c_random"]],
        ["C (k>=2)", ce["mean"], ce["std"], ce["stderr"], und["c_random"], dirs["c_random"]],
        ["L", l["mean"], l["std"], l["stderr"], und["l_random"], dirs["l_random"]],
    ]
    cells = [[r[0]] + [v if isinstance(v, str) else _cell(v) for v in r[1:]] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    lines = [f"G(n={result['n']}, m={result['m']})  seeds={len(result['seeds'])}  algorithm={result['algorithm']}"]
    lines += ["  ".join(v.ljust(w) if i == 0 else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths))) for r in cells]
    return "\n".join(lines) + "\n"
