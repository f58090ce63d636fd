"""Parameter sweeps over graph families with canonical CSV, JSON, and SVG output.

An :class:`ExperimentSpec` pins down a graph family, a parameter grid, the
seeds, the checks to run, and budget knobs. :func:`run_experiment` expands
the grid, runs every (parameters, seed) instance, and writes one CSV row per
instance plus an aggregate ``summary.json`` and an optional SVG scatter.

Determinism contract: instances are sorted by (family, parameters, seed)
before anything runs, the randomness of sampling-based subroutines is drawn
from ``numpy.random.SeedSequence([master_seed, row_index])`` over that
sorted order, and wall-clock metadata is quarantined in ``metadata.json`` so
that re-running the same spec reproduces the CSV, the summary, and the SVG
byte for byte. A failing instance fills its ``error`` column and the sweep
moves on; only a broken spec aborts the run.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import generators
from .errors import CyclespanError, InsufficientData, InvalidInput
from .expansion import (
    BRUTE_FORCE_CUTOFF,
    ExpansionCertificate,
    exact_expansion,
    is_beta_graph,
    spectral_alpha,
)
from .graph import CycleCertificate, Graph, subdivide
from .spectrum import DEFAULT_BUDGET, cycle_spectrum, max_gap
from .thm1 import PRACTICAL_PRESETS, PipelineConstants, run_thm1
from .thm2 import run_thm2
from .thm3 import run_thm3

__all__ = [
    "FAMILIES",
    "ExperimentSpec",
    "make_graph",
    "run_experiment",
]


# -- graph families ----------------------------------------------------------

#: family name -> parameter names it requires (seed is passed separately and
#: ignored by the deterministic families).
FAMILIES: dict[str, tuple[str, ...]] = {
    "complete": ("n",),
    "complete-bipartite": ("a", "b"),
    "cycle": ("n",),
    "path": ("n",),
    "petersen": (),
    "random-regular": ("n", "d"),
    "binomial": ("n", "p"),
    "clique-plus-isolated": ("n", "beta"),
    "subdivided-regular": ("n", "d", "m"),
}

_INT_PARAMS = frozenset({"n", "d", "a", "b", "m"})
_FRACTION_PARAMS = frozenset({"p", "beta"})


def _coerce_param(key: str, value: Any) -> Any:
    if key in _INT_PARAMS:
        return int(value)
    if key in _FRACTION_PARAMS:
        # Fraction(str(0.5)) reads the decimal literal, not the float bits,
        # so JSON specs can say 0.5 and mean exactly 1/2.
        return Fraction(str(value))
    raise InvalidInput(f"unknown parameter {key!r}", key=key)


def make_graph(family: str, params: Mapping[str, Any], seed: int = 0) -> Graph:
    """Build one instance of ``family``; raises :class:`InvalidInput` on bad specs."""
    if family not in FAMILIES:
        raise InvalidInput(
            f"unknown family {family!r}", family=family, known=sorted(FAMILIES)
        )
    needed = FAMILIES[family]
    missing = [k for k in needed if k not in params]
    if missing:
        raise InvalidInput(
            f"family {family!r} needs parameters {', '.join(missing)}",
            family=family,
            missing=missing,
        )
    extra = [k for k in params if k not in needed]
    if extra:
        raise InvalidInput(
            f"family {family!r} does not take {', '.join(sorted(extra))}",
            family=family,
            extra=sorted(extra),
        )
    p = {k: _coerce_param(k, params[k]) for k in needed}
    if family == "complete":
        return generators.complete(p["n"])
    if family == "complete-bipartite":
        return generators.complete_bipartite(p["a"], p["b"])
    if family == "cycle":
        return generators.cycle_graph(p["n"])
    if family == "path":
        return generators.path_graph(p["n"])
    if family == "petersen":
        return generators.petersen()
    if family == "random-regular":
        return generators.random_regular(p["n"], p["d"], seed)
    if family == "binomial":
        return generators.binomial_random(p["n"], p["p"], seed)
    if family == "clique-plus-isolated":
        return generators.clique_plus_isolated(p["n"], p["beta"])
    # subdivided-regular
    return subdivide(generators.random_regular(p["n"], p["d"], seed), p["m"])


# -- experiment specification ------------------------------------------------

_CHECK_ORDER = ("expansion", "beta", "spectrum", "thm1", "thm2", "thm3")

_CHECK_COLUMNS: dict[str, tuple[str, ...]] = {
    "expansion": ("alpha", "alpha_kind"),
    "beta": ("beta_ok", "beta_witness"),
    "spectrum": (
        "girth",
        "circumference",
        "spectrum_size",
        "spectrum_complete",
        "max_gap",
    ),
    "thm1": ("thm1_targets", "thm1_successes", "thm1_stage"),
    "thm2": ("thm2_count", "thm2_density", "thm2_lengths"),
    "thm3": ("thm3_targets", "thm3_successes", "thm3_stage"),
}


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: a family, a parameter grid, seeds, checks, and knobs.

    ``grid`` maps parameter names to value lists; the sweep runs the full
    cartesian product crossed with ``seeds``. ``checks`` selects which
    analyses run per instance. ``budgets`` carries enumeration caps (key
    ``spectrum``). ``settings`` carries check-specific knobs:

    - ``alpha_source``: ``auto`` (exact up to the brute-force cutoff, else
      spectral), ``exact``, ``spectral``, or ``asserted`` with ``alpha``.
    - ``beta``: the beta to test and to hand to ``thm3``.
    - ``preset``: practical constants name for ``thm1`` (paper constants
      otherwise), ``targets``: explicit target list for ``thm1``.
    - ``ell`` or ``ell_range`` ([lo, hi], inclusive): targets for ``thm3``.

    The spec round-trips through :meth:`to_json` / :meth:`from_json`
    unchanged, so a saved spec re-runs bit for bit.
    """

    family: str
    grid: Mapping[str, Sequence[Any]]
    seeds: tuple[int, ...]
    checks: tuple[str, ...]
    out_dir: str
    budgets: Mapping[str, int] = field(default_factory=dict)
    settings: Mapping[str, Any] = field(default_factory=dict)
    svg: bool = True

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InvalidInput(f"unknown family {self.family!r}", family=self.family)
        bad = sorted(set(self.checks) - set(_CHECK_ORDER))
        if bad:
            raise InvalidInput(
                f"unknown checks: {', '.join(bad)}", checks=bad, known=list(_CHECK_ORDER)
            )
        allowed = set(FAMILIES[self.family])
        stray = sorted(set(self.grid) - allowed)
        if stray:
            raise InvalidInput(
                f"grid keys {', '.join(stray)} not parameters of {self.family!r}",
                family=self.family,
                stray=stray,
            )

    def to_json(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "grid": {k: list(self.grid[k]) for k in sorted(self.grid)},
            "seeds": list(self.seeds),
            "checks": list(self.checks),
            "out_dir": self.out_dir,
            "budgets": {k: self.budgets[k] for k in sorted(self.budgets)},
            "settings": {k: self.settings[k] for k in sorted(self.settings)},
            "svg": self.svg,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ExperimentSpec":
        try:
            return cls(
                family=data["family"],
                grid={k: tuple(v) for k, v in data.get("grid", {}).items()},
                seeds=tuple(int(s) for s in data.get("seeds", [0])),
                checks=tuple(data.get("checks", ["spectrum"])),
                out_dir=str(data.get("out_dir", ".")),
                budgets=dict(data.get("budgets", {})),
                settings=dict(data.get("settings", {})),
                svg=bool(data.get("svg", True)),
            )
        except KeyError as exc:
            raise InvalidInput(f"experiment spec missing field {exc}") from exc

    def instances(self) -> list[tuple[dict[str, Any], int]]:
        """The sorted (parameters, seed) work list; empty grids yield no rows."""
        keys = sorted(self.grid)
        combos = itertools.product(*(self.grid[k] for k in keys))
        work = [
            (dict(zip(keys, combo)), seed) for combo in combos for seed in self.seeds
        ]
        work.sort(key=lambda item: (_param_sort_key(item[0]), item[1]))
        return work

    def header(self) -> list[str]:
        cols = ["family", *sorted(self.grid), "seed", "graph_n", "graph_m", "error"]
        for check in _CHECK_ORDER:
            if check in self.checks:
                cols.extend(_CHECK_COLUMNS[check])
        return cols


def _param_sort_key(params: Mapping[str, Any]) -> tuple:
    return tuple((k, str(params[k])) for k in sorted(params))


# -- per-instance execution --------------------------------------------------


def _resolve_alpha(
    g: Graph, settings: Mapping[str, Any]
) -> tuple[ExpansionCertificate | Fraction, str]:
    source = settings.get("alpha_source", "auto")
    if source == "asserted":
        if "alpha" not in settings:
            raise InvalidInput("alpha_source 'asserted' needs an 'alpha' setting")
        return Fraction(str(settings["alpha"])), "asserted"
    if source == "auto":
        source = "exact" if g.n <= BRUTE_FORCE_CUTOFF else "spectral"
    if source == "exact":
        return exact_expansion(g, math.ceil(g.n / 2)), "exact"
    if source == "spectral":
        return spectral_alpha(g), "spectral"
    raise InvalidInput(f"unknown alpha_source {source!r}", alpha_source=source)


def _alpha_value(alpha: ExpansionCertificate | Fraction) -> Fraction:
    return alpha.value if isinstance(alpha, ExpansionCertificate) else alpha


def _fill_expansion(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    alpha, kind = _resolve_alpha(g, spec.settings)
    row["alpha"] = float(_alpha_value(alpha))
    row["alpha_kind"] = kind


def _fill_beta(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    if "beta" not in spec.settings:
        raise InvalidInput("the 'beta' check needs a 'beta' setting")
    beta = Fraction(str(spec.settings["beta"]))
    ok, witness = is_beta_graph(
        g, beta, mode=spec.settings.get("beta_mode", "auto"), seed=row_seed
    )
    row["beta_ok"] = ok
    row["beta_witness"] = (
        "" if witness is None else json.dumps([sorted(witness[0]), sorted(witness[1])])
    )


def _fill_spectrum(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    budget = int(spec.budgets.get("spectrum", DEFAULT_BUDGET))
    s = cycle_spectrum(g, budget=budget, witnesses=False)
    row["girth"] = "" if s.girth is None else s.girth
    row["circumference"] = "" if s.circumference is None else s.circumference
    row["spectrum_size"] = len(s.lengths)
    row["spectrum_complete"] = s.complete
    try:
        row["max_gap"] = max_gap(s, s.girth, s.circumference) if s.complete else ""
    except InsufficientData:
        row["max_gap"] = ""


def _fill_thm1(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    alpha, _ = _resolve_alpha(g, spec.settings)
    preset = spec.settings.get("preset")
    consts = PRACTICAL_PRESETS[preset] if preset else None
    targets = spec.settings.get("targets")
    if targets is None:
        window = (consts or PipelineConstants.paper(_alpha_value(alpha))).target_window(
            g.n
        )
        targets = list(range(window[0], window[1] + 1))
    row["thm1_targets"] = len(targets)
    _, results = run_thm1(g, alpha, consts=consts, targets=targets, seed=row_seed)
    row["thm1_successes"] = sum(
        1 for r in results if isinstance(r, CycleCertificate)
    )
    row["thm1_stage"] = ""


def _fill_thm2(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    alpha, _ = _resolve_alpha(g, spec.settings)
    trace = run_thm2(g, _alpha_value(alpha))
    lengths = [c.length for c in trace.cycles]
    row["thm2_count"] = len(lengths)
    row["thm2_density"] = f"{len(lengths) / g.n:.6f}"
    row["thm2_lengths"] = " ".join(str(ell) for ell in lengths)


def _fill_thm3(row: dict, g: Graph, spec: ExperimentSpec, row_seed: int) -> None:
    if "beta" not in spec.settings:
        raise InvalidInput("the 'thm3' check needs a 'beta' setting")
    beta = Fraction(str(spec.settings["beta"]))
    if "ell" in spec.settings:
        targets = [int(spec.settings["ell"])]
    elif "ell_range" in spec.settings:
        lo, hi = spec.settings["ell_range"]
        targets = list(range(int(lo), int(hi) + 1))
    else:
        raise InvalidInput("the 'thm3' check needs 'ell' or 'ell_range'")
    row["thm3_targets"] = len(targets)
    successes = 0
    first_failure = ""
    for ell in targets:
        try:
            run_thm3(g, beta, ell, seed=row_seed)
            successes += 1
        except CyclespanError as exc:
            if not first_failure:
                first_failure = f"ell={ell}:{exc.code}"
    row["thm3_successes"] = successes
    row["thm3_stage"] = first_failure


_FILLERS = {
    "expansion": _fill_expansion,
    "beta": _fill_beta,
    "spectrum": _fill_spectrum,
    "thm1": _fill_thm1,
    "thm2": _fill_thm2,
    "thm3": _fill_thm3,
}


def _run_row(
    spec_json: Mapping[str, Any], params: Mapping[str, Any], seed: int, row_seed: int
) -> dict[str, Any]:
    """Run every requested check on one instance; failures stay in the row."""
    spec = ExperimentSpec.from_json(spec_json)
    row: dict[str, Any] = {"family": spec.family, "seed": seed, "error": ""}
    for k in sorted(params):
        row[k] = params[k]
    errors: list[str] = []
    try:
        g = make_graph(spec.family, params, seed)
    except CyclespanError as exc:
        row["graph_n"] = ""
        row["graph_m"] = ""
        row["error"] = f"generate:{exc.code}"
        for check in _CHECK_ORDER:
            if check in spec.checks:
                for col in _CHECK_COLUMNS[check]:
                    row[col] = ""
        return row
    row["graph_n"] = g.n
    row["graph_m"] = g.m
    for check in _CHECK_ORDER:
        if check not in spec.checks:
            continue
        try:
            _FILLERS[check](row, g, spec, row_seed)
        except CyclespanError as exc:
            errors.append(f"{check}:{exc.code}")
            for col in _CHECK_COLUMNS[check]:
                row.setdefault(col, "")
            stage_col = f"{check}_stage"
            if stage_col in _CHECK_COLUMNS.get(check, ()):
                detail = getattr(exc, "stage", exc.code)
                row[stage_col] = str(detail)
    row["error"] = ";".join(errors)
    return row


# -- the sweep ---------------------------------------------------------------


def run_experiment(
    spec: ExperimentSpec, master_seed: int = 0, workers: int | None = None
) -> dict[str, Any]:
    """Expand the grid, run every instance, and write the output files.

    Writes ``results.csv``, ``summary.json``, ``metadata.json``, and (when
    ``spec.svg`` and the needed columns exist) ``scatter.svg`` under
    ``spec.out_dir``. Returns the summary dict. ``workers`` defaults to the
    ``CYCLESPAN_WORKERS`` environment variable, then to serial execution;
    row order and content are identical either way.
    """
    started = time.time()
    if workers is None:
        workers = int(os.environ.get("CYCLESPAN_WORKERS", "1") or "1")
    out_dir = FsPath(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    work = spec.instances()
    spec_json = spec.to_json()
    row_seeds = [
        int(np.random.SeedSequence([master_seed, i]).generate_state(1)[0])
        for i in range(len(work))
    ]
    if workers > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    _run_row,
                    itertools.repeat(spec_json),
                    (params for params, _ in work),
                    (seed for _, seed in work),
                    row_seeds,
                )
            )
    else:
        rows = [
            _run_row(spec_json, params, seed, rs)
            for (params, seed), rs in zip(work, row_seeds)
        ]

    header = spec.header()
    csv_path = out_dir / "results.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in header})

    svg_path = _write_svg(out_dir, rows, spec) if spec.svg else None

    summary = _summarize(spec, rows)
    summary["csv"] = str(csv_path)
    summary["svg"] = None if svg_path is None else str(svg_path)
    summary_path = out_dir / "summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    # Timestamps live here and only here; everything above is reproducible.
    with open(out_dir / "metadata.json", "w") as fh:
        json.dump(
            {
                "started": started,
                "finished": time.time(),
                "workers": workers,
                "master_seed": master_seed,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    return summary


def _summarize(spec: ExperimentSpec, rows: list[dict[str, Any]]) -> dict[str, Any]:
    failed = [r for r in rows if r["error"]]
    summary: dict[str, Any] = {
        "spec": spec.to_json(),
        "rows": len(rows),
        "rows_with_errors": len(failed),
    }
    if "expansion" in spec.checks:
        alphas = [r["alpha"] for r in rows if r.get("alpha") != ""]
        summary["alpha_min"] = min(alphas) if alphas else None
        summary["alpha_max"] = max(alphas) if alphas else None
    if "spectrum" in spec.checks:
        sizes = [r["spectrum_size"] for r in rows if r.get("spectrum_size") != ""]
        summary["spectrum_size_total"] = sum(sizes)
        gaps = [r["max_gap"] for r in rows if r.get("max_gap") != ""]
        summary["max_gap_values"] = sorted(set(gaps))
    for check in ("thm1", "thm3"):
        if check in spec.checks:
            done = [r for r in rows if r.get(f"{check}_targets") != ""]
            targets = sum(r[f"{check}_targets"] for r in done)
            hits = sum(r[f"{check}_successes"] for r in done)
            summary[f"{check}_targets"] = targets
            summary[f"{check}_successes"] = hits
            summary[f"{check}_failure_rate"] = (
                None if targets == 0 else round(1 - hits / targets, 6)
            )
    if "thm2" in spec.checks:
        counts = [r["thm2_count"] for r in rows if r.get("thm2_count") != ""]
        summary["thm2_cycles_total"] = sum(counts)
    return summary


# -- SVG scatter (no plotting dependency) -------------------------------------


def _write_svg(
    out_dir: FsPath, rows: list[dict[str, Any]], spec: ExperimentSpec
) -> FsPath | None:
    panels: list[str] = []
    if "expansion" in spec.checks and "spectrum" in spec.checks:
        pts = [
            (r["alpha"], r["spectrum_size"] / r["graph_n"])
            for r in rows
            if r.get("alpha") != "" and r.get("spectrum_size") != "" and r["graph_n"]
        ]
        if pts:
            panels.append(_scatter_panel(pts, "alpha", "|L(G)| / n", 0))
    if "spectrum" in spec.checks:
        pts = [
            (r["graph_m"], r["max_gap"])
            for r in rows
            if r.get("max_gap") != "" and r.get("graph_m") != ""
        ]
        if pts:
            panels.append(_scatter_panel(pts, "edges", "max gap", len(panels)))
    if not panels:
        return None
    width, height = 440, 320 * len(panels)
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        + "\n".join(panels)
        + "\n</svg>\n"
    )
    path = out_dir / "scatter.svg"
    path.write_text(svg)
    return path


def _scatter_panel(
    points: list[tuple[float, float]], xlabel: str, ylabel: str, index: int
) -> str:
    left, top = 60, 20 + 320 * index
    plot_w, plot_h = 340, 240
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xspan = (x1 - x0) or 1.0
    yspan = (y1 - y0) or 1.0

    def px(x: float) -> float:
        return left + (x - x0) / xspan * plot_w

    def py(y: float) -> float:
        return top + plot_h - (y - y0) / yspan * plot_h

    parts = [
        '<g font-family="monospace" font-size="11" fill="black">',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv = x0 + frac * xspan
        yv = y0 + frac * yspan
        parts.append(
            f'<text x="{px(xv):.1f}" y="{top + plot_h + 16}" '
            f'text-anchor="middle">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{left - 6}" y="{py(yv) + 4:.1f}" '
            f'text-anchor="end">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2}" y="{top + plot_h + 34}" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{top + plot_h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + plot_h / 2})">{ylabel}</text>'
    )
    for x, y in points:
        parts.append(
            f'<circle cx="{px(float(x)):.2f}" cy="{py(float(y)):.2f}" r="3" '
            'fill="steelblue" fill-opacity="0.7"/>'
        )
    parts.append("</g>")
    return "\n".join(parts)
