"""Command line front end.

Subcommands: ``gen``, ``check-expansion``, ``check-beta``, ``spectrum``,
``thm1``, ``thm2``, ``thm3``, ``experiment``, ``validate``. Results go to
stdout as JSON unless ``--out`` (or ``--csv`` where offered) redirects them.

Exit codes: 0 on success, 1 on a structured failure (a pipeline stage gave
up, a certification was refuted, a cycle failed validation), 2 on usage
errors. Every exit-1 payload is machine-readable JSON carrying an ``error``
code; nothing has to be scraped out of prose.

Fractions are first-class: ``--alpha`` and ``--beta`` accept ``1/10`` and
``0.1`` alike and both parse to the exact rational 1/10.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Any, Sequence

from .errors import CyclespanError, InvalidInput, NotACycle
from .expansion import (
    BRUTE_FORCE_CUTOFF,
    ExpansionCertificate,
    exact_expansion,
    is_beta_graph,
    refute_expansion,
    spectral_alpha,
)
from .experiment import FAMILIES, ExperimentSpec, make_graph, run_experiment
from .graph import CycleCertificate, Graph, validate_cycle
from .graphio import dumps_graph, load_graph, save_graph, write_json
from .spectrum import DEFAULT_BUDGET, cycle_spectrum
from .thm1 import PRACTICAL_PRESETS, PipelineConstants, run_thm1
from .thm2 import run_thm2
from .thm3 import Thm3Params, run_thm3

__all__ = ["cli_dispatch", "main"]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _int_range(text: str) -> range:
    """Parse ``LO:HI`` into an inclusive range."""
    try:
        lo_s, hi_s = text.split(":", 1)
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from exc
    return range(lo, hi + 1)


def _emit(obj: dict[str, Any], out: str | None) -> None:
    """JSON to ``out`` when given, else to stdout."""
    if out:
        with open(out, "w") as fh:
            write_json(obj, fh)
    else:
        write_json(obj, sys.stdout)


def _load(path: str) -> Graph:
    return load_graph(path)


# -- alpha plumbing shared by check-expansion / thm1 / thm2 -------------------


def _add_alpha_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--alpha-source",
        choices=("exact", "spectral", "asserted"),
        default="spectral",
        help="how to obtain alpha: certify exactly (n <= %d), bound "
        "spectrally, or trust --alpha as given" % BRUTE_FORCE_CUTOFF,
    )
    p.add_argument(
        "--alpha",
        type=_fraction,
        help="expansion ratio for --alpha-source asserted",
    )


def _resolve_alpha(g: Graph, args: argparse.Namespace) -> ExpansionCertificate | Fraction:
    if args.alpha_source == "asserted":
        if args.alpha is None:
            args.parser.error("--alpha-source asserted needs --alpha")
        return args.alpha
    if args.alpha_source == "exact":
        return exact_expansion(g, math.ceil(g.n / 2))
    return spectral_alpha(g)


def _alpha_json(alpha: ExpansionCertificate | Fraction) -> dict[str, Any]:
    if isinstance(alpha, ExpansionCertificate):
        return {"alpha": float(alpha.value), "alpha_kind": alpha.kind}
    return {"alpha": float(alpha), "alpha_kind": "asserted"}


# -- subcommand handlers -------------------------------------------------------


def _cmd_gen(args: argparse.Namespace) -> int:
    params = {}
    for key in FAMILIES[args.family]:
        value = getattr(args, key, None)
        if value is None:
            args.parser.error(f"family {args.family!r} needs --{key}")
        params[key] = value
    g = make_graph(args.family, params, seed=args.seed)
    if args.out:
        fmt = args.format or ("json" if args.out.endswith(".json") else "edgelist")
        save_graph(g, args.out, fmt=fmt)
        _emit(
            {
                "family": args.family,
                "n": g.n,
                "m": g.m,
                "out": args.out,
                "format": fmt,
            },
            None,
        )
    else:
        sys.stdout.write(dumps_graph(g, fmt=args.format or "json"))
    return 0


def _cmd_check_expansion(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    k = args.k if args.k is not None else math.ceil(g.n / 2)
    if args.refute:
        if args.alpha is None:
            args.parser.error("--refute needs --alpha, the threshold to beat")
        witness = refute_expansion(g, args.alpha, k, trials=args.trials, seed=args.seed)
        result = {
            "alpha": float(args.alpha),
            "k": k,
            "refuted": witness is not None,
            "witness": None if witness is None else sorted(witness),
        }
        _emit(result, args.out)
        return 1 if witness is not None else 0
    if args.spectral:
        cert = spectral_alpha(g)
    elif args.exact:
        cert = exact_expansion(g, k, cutoff=args.cutoff)
    else:
        cert = (
            exact_expansion(g, k, cutoff=args.cutoff)
            if g.n <= args.cutoff
            else spectral_alpha(g)
        )
    _emit(cert.to_json(), args.out)
    return 0


def _cmd_check_beta(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    ok, witness = is_beta_graph(
        g, args.beta, mode=args.mode, trials=args.trials, seed=args.seed
    )
    result: dict[str, Any] = {"beta": float(args.beta), "is_beta_graph": ok}
    if witness is not None:
        result["witness"] = [sorted(witness[0]), sorted(witness[1])]
    _emit(result, args.out)
    return 0 if ok else 1


def _cmd_spectrum(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    s = cycle_spectrum(g, budget=args.budget, witnesses=not args.no_witnesses)
    _emit(s.to_json(include_witnesses=not args.no_witnesses), args.out)
    return 0


def _override(text: str) -> tuple[str, Any]:
    """Parse one ``KEY=VALUE`` pipeline-constant override at argparse time."""
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    if key not in PipelineConstants.__dataclass_fields__:
        raise argparse.ArgumentTypeError(f"unknown constant {key!r}")
    if key == "mode":
        return key, value
    if value.lstrip("-").isdigit():
        return key, int(value)
    try:
        return key, Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from exc


def _cmd_thm1(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    alpha = _resolve_alpha(g, args)
    av = alpha.value if isinstance(alpha, ExpansionCertificate) else alpha
    base = PRACTICAL_PRESETS[args.preset] if args.preset else PipelineConstants.paper(av)
    consts = replace(base, **dict(args.override)) if args.override else base
    targets: list[int] = list(args.target or [])
    if args.target_range is not None:
        targets.extend(args.target_range)
    if not targets:
        lo, hi = consts.target_window(g.n)
        targets = list(range(lo, hi + 1))
    trace, results = run_thm1(g, alpha, consts=consts, targets=targets, seed=args.seed)
    rows = []
    successes = 0
    for ell, res in zip(targets, results):
        if isinstance(res, CycleCertificate):
            successes += 1
            rows.append({"ell": ell, "ok": True, "cycle": res.to_json()})
        else:
            rows.append({"ell": ell, "ok": False, "error": res.to_json()})
    out = {
        **_alpha_json(alpha),
        "window": list(consts.target_window(g.n)),
        "band_width": consts.A,
        "targets": len(targets),
        "successes": successes,
        "results": rows,
    }
    if args.trace:
        with open(args.trace, "w") as fh:
            write_json(trace.to_json(), fh)
        out["trace"] = args.trace
    _emit(out, args.out)
    return 0 if successes or not targets else 1


def _cmd_thm2(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    alpha = _resolve_alpha(g, args)
    av = alpha.value if isinstance(alpha, ExpansionCertificate) else alpha
    trace = run_thm2(g, av)
    lengths = [c.length for c in trace.cycles]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "length", "vertices"])
            for i, cert in enumerate(trace.cycles):
                writer.writerow([i, cert.length, " ".join(map(str, cert.vertices))])
        return 0
    out = {
        **_alpha_json(alpha),
        "k": trace.k,
        "lengths": lengths,
        "count": len(lengths),
        "density": len(lengths) / g.n,
        "cycles": [c.to_json() for c in trace.cycles],
    }
    _emit(out, args.out)
    return 0


def _cmd_thm3(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    targets: list[int] = list(args.ell or [])
    if args.ell_range is not None:
        targets.extend(args.ell_range)
    if not targets:
        args.parser.error("thm3 needs --ell or --ell-range")
    params = (
        None
        if args.variant == "auto"
        else Thm3Params.derive(args.beta, g.n, args.variant)
    )
    rows = []
    failures = 0
    for ell in targets:
        try:
            cert = run_thm3(
                g,
                args.beta,
                ell,
                params=params,
                seed=args.seed,
                retries=args.retries,
                strict=args.strict,
            )
            rows.append({"ell": ell, "ok": True, "cycle": cert.to_json()})
        except CyclespanError as exc:
            failures += 1
            rows.append({"ell": ell, "ok": False, "error": exc.to_json()})
    out = {
        "beta": float(args.beta),
        "targets": len(targets),
        "failures": failures,
        "results": rows,
    }
    _emit(out, args.out)
    return 1 if failures else 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    with open(args.spec) as fh:
        data = json.load(fh)
    spec = ExperimentSpec.from_json(data)
    if args.out_dir:
        spec = replace(spec, out_dir=args.out_dir)
    if args.budget is not None:
        spec = replace(spec, budgets={**spec.budgets, "spectrum": args.budget})
    summary = run_experiment(spec, master_seed=args.seed, workers=args.workers)
    _emit(summary, args.out)
    return 0


def _find_cycles(node: Any) -> list[list[int]]:
    """Collect every ``{"vertices": [...]}`` object under ``node``."""
    found: list[list[int]] = []
    if isinstance(node, dict):
        vertices = node.get("vertices")
        if isinstance(vertices, list) and all(isinstance(v, int) for v in vertices):
            found.append(vertices)
        for value in node.values():
            found.extend(_find_cycles(value))
    elif isinstance(node, list):
        for value in node:
            found.extend(_find_cycles(value))
    return found


def _cmd_validate(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    with open(args.artifact) as fh:
        data = json.load(fh)
    cycles = _find_cycles(data)
    if not cycles and isinstance(data, list) and all(isinstance(v, int) for v in data):
        cycles = [data]
    if not cycles:
        raise InvalidInput(
            "no cycle objects found in artifact", artifact=args.artifact
        )
    rows = []
    valid = 0
    for vertices in cycles:
        try:
            cert = validate_cycle(g, vertices)
            valid += 1
            rows.append({"valid": True, "length": cert.length})
        except NotACycle as exc:
            rows.append({"valid": False, "error": exc.to_json()})
    _emit({"checked": len(cycles), "valid": valid, "results": rows}, args.out)
    return 0 if valid == len(cycles) else 1


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclespan",
        description="Cycle spectra of expander graphs: certify, construct, validate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(handler=handler, parser=p)
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        return p

    p = add("gen", _cmd_gen, "generate a graph from a named family")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, help="vertex count")
    p.add_argument("--d", type=int, help="degree (regular families)")
    p.add_argument("--a", type=int, help="first side size (complete-bipartite)")
    p.add_argument("--b", type=int, help="second side size (complete-bipartite)")
    p.add_argument("--m", type=int, help="subdivision count (subdivided-regular)")
    p.add_argument("--p", type=_fraction, help="edge probability (binomial)")
    p.add_argument("--beta", type=_fraction, help="beta (clique-plus-isolated)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("edgelist", "json"))

    p = add("check-expansion", _cmd_check_expansion, "certify or refute expansion")
    p.add_argument("graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exhaustive certificate")
    mode.add_argument("--spectral", action="store_true", help="eigenvalue bound")
    mode.add_argument(
        "--refute", action="store_true", help="search for a violating set"
    )
    p.add_argument("--alpha", type=_fraction, help="threshold for --refute")
    p.add_argument("--k", type=int, help="set-size bound (default ceil(n/2))")
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=BRUTE_FORCE_CUTOFF)

    p = add("check-beta", _cmd_check_beta, "test the two-set adjacency property")
    p.add_argument("graph")
    p.add_argument("--beta", type=_fraction, required=True)
    p.add_argument("--mode", choices=("auto", "exhaustive", "sample"), default="auto")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = add("spectrum", _cmd_spectrum, "enumerate all cycle lengths")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-witnesses", action="store_true")

    p = add("thm1", _cmd_thm1, "build cycles with lengths in a narrow window")
    p.add_argument("graph")
    _add_alpha_flags(p)
    p.add_argument("--preset", choices=sorted(PRACTICAL_PRESETS))
    p.add_argument(
        "--override",
        action="append",
        type=_override,
        default=[],
        metavar="KEY=VALUE",
        help="replace one pipeline constant (repeatable)",
    )
    p.add_argument("--target", action="append", type=int, help="one length (repeatable)")
    p.add_argument("--target-range", type=_int_range, metavar="LO:HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="dump the full pipeline trace to this JSON file")

    p = add("thm2", _cmd_thm2, "build a fan of cycles with distinct lengths")
    p.add_argument("graph")
    _add_alpha_flags(p)
    p.add_argument("--csv", help="write per-cycle rows here instead of JSON")

    p = add("thm3", _cmd_thm3, "build a cycle of one exact length")
    p.add_argument("graph")
    p.add_argument("--beta", type=_fraction, required=True)
    p.add_argument("--ell", action="append", type=int, help="exact length (repeatable)")
    p.add_argument("--ell-range", type=_int_range, metavar="LO:HI")
    p.add_argument("--variant", choices=("auto", "broad", "binary"), default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=64)
    p.add_argument("--strict", action="store_true", help="enforce the advisory window")

    p = add("experiment", _cmd_experiment, "run a parameter sweep from a spec file")
    p.add_argument("spec", help="JSON experiment spec")
    p.add_argument("--out-dir", help="override the spec's output directory")
    p.add_argument("--budget", type=int, help="override the spectrum budget")
    p.add_argument("--seed", type=int, default=0, help="master seed for sampling")
    p.add_argument("--workers", type=int, help="parallel rows (default: CYCLESPAN_WORKERS)")

    p = add("validate", _cmd_validate, "re-validate emitted cycles against a graph")
    p.add_argument("graph")
    p.add_argument("artifact", help="JSON file containing cycle objects")

    return parser


def cli_dispatch(argv: Sequence[str]) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.handler(args)
    except SystemExit as exc:
        # argparse.error() and --help exit directly; surface their code.
        return int(exc.code or 0)
    except CyclespanError as exc:
        write_json(exc.to_json(), sys.stdout)
        return 1
    except FileNotFoundError as exc:
        write_json({"error": "file-not-found", "message": str(exc)}, sys.stdout)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
