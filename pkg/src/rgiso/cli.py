"""Command-line surface: theory reports, region maps, simulations, heatmaps.

Every run echoes its resolved configuration into the output (CSV `#` comment
lines, JSON `meta` object, SVG XML comments) so artifacts self-describe.
Worker count is deliberately left out of the echo: it never affects results,
and outputs are byte-identical across worker counts.

Exit codes: 0 success, 2 usage, 3 domain error, 4 every trial timed out.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import figures, svg, thresholds
from .errors import BudgetExhausted, DomainError
from .graphs import ProbPair, edge_count, from_text, gen_gnm
from .montecarlo import (
    copy_count_distribution,
    estimate_containment,
    fixed_pattern_containment,
    heatmap_containment,
    mcis_concentration,
)
from .pseudorandom import GraphModel, check_A, check_E, check_F, estimate_property_rate
from .rng import Seed
from .solver import SearchBudget

_ESTIMATE_HEADER = "x,y,n,N,trials,rate,ci_lo,ci_hi,timeouts"


def _fmt9(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    return f"{v:.9g}"


def _meta_comments(meta: dict) -> list[str]:
    return [f"# {k}={_fmt9(meta[k]) if meta[k] is not None else ''}" for k in sorted(meta)]


def _svg_with_meta(text: str, meta: dict) -> str:
    lines = text.split("\n")
    comments = [f"<!-- {k}={_fmt9(meta[k])} -->" for k in sorted(meta)]
    return "\n".join(lines[:1] + comments + lines[1:])


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _json_payload(meta: dict, body: dict) -> str:
    return json.dumps({"meta": meta, **body}, indent=2, sort_keys=True) + "\n"


def _seed_obj(seed: Seed) -> dict:
    return {"master": seed.master, "stream": seed.stream}


def _resolve_workers(flag: int | None) -> int:
    if flag is not None:
        value = flag
    elif "RGISO_WORKERS" in os.environ:
        try:
            value = int(os.environ["RGISO_WORKERS"])
        except ValueError as exc:
            raise DomainError(
                f"RGISO_WORKERS must be an integer, got {os.environ['RGISO_WORKERS']!r}"
            ) from exc
    else:
        value = os.cpu_count() or 1
    if value < 1:
        raise DomainError(f"worker count must be positive, got {value}")
    return value


def _budget(ns) -> SearchBudget | None:
    if ns.budget_ms is None and ns.budget_nodes is None:
        return None
    return SearchBudget(max_nodes=ns.budget_nodes, wall_ms=ns.budget_ms)


def _budget_meta(ns, meta: dict) -> None:
    meta["budget_ms"] = ns.budget_ms
    meta["budget_nodes"] = ns.budget_nodes


def _estimate_row(x: float, y: float, n: int, N: int, rep) -> str:
    return ",".join(
        [
            _fmt9(x),
            _fmt9(y),
            str(n),
            str(N),
            str(rep.trials),
            _fmt9(rep.rate),
            _fmt9(rep.ci_lo),
            _fmt9(rep.ci_hi),
            str(rep.timeouts),
        ]
    )


def _estimate_json(rep) -> dict:
    return {
        "rate": rep.rate,
        "ci_lo": rep.ci_lo,
        "ci_hi": rep.ci_hi,
        "trials": rep.trials,
        "timeouts": rep.timeouts,
        "seed": _seed_obj(rep.seed),
    }


def _distribution_json(rep) -> dict:
    return {
        "values": list(rep.values),
        "counts": list(rep.counts),
        "reference": rep.reference,
        "reference_params": rep.reference_params,
        "distance_kind": rep.distance_kind,
        "distance": rep.distance,
        "trials": rep.trials,
        "timeouts": rep.timeouts,
        "seed": _seed_obj(rep.seed),
    }


# ---------------------------------------------------------------- threshold


def cmd_threshold(ns) -> int:
    pp = ProbPair(ns.p1, ns.p2)
    report = thresholds.threshold_report(pp, ns.N)
    samples = []
    if report.sigma2 > 0.0:
        sigma = math.sqrt(report.sigma2)
        for i in range(101):
            c = -5.0 * sigma + i * (10.0 * sigma / 100.0)
            samples.append((c, thresholds.containment_limit(pp, c)))
    meta = {"subcommand": "threshold", "p1": ns.p1, "p2": ns.p2, "N": ns.N}
    if ns.fig is not None:
        if not samples:
            raise DomainError(
                "profile figure is undefined at target density 1/2 (zero variance)"
            )
        figures.fig_threshold(samples, meta, ns.fig)
    if ns.format == "json":
        body = {
            "a": report.a,
            "n_star": report.n_star,
            "sigma2": report.sigma2,
            "psi": report.psi,
            "eps_N": report.eps_N,
            "samples": [{"c": c, "f": f} for c, f in samples],
        }
        _emit(_json_payload(meta, body), ns.out)
    else:
        lines = _meta_comments(meta)
        for key in ("a", "n_star", "sigma2", "psi", "eps_N"):
            lines.append(f"# {key}={_fmt9(getattr(report, key))}")
        lines.append("c,f")
        lines.extend(f"{_fmt9(c)},{_fmt9(f)}" for c, f in samples)
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


# ----------------------------------------------------------- mcis-location


def cmd_mcis_location(ns) -> int:
    report = thresholds.mcis_location(ProbPair(ns.p1, ns.p2), ns.N)
    meta = {"subcommand": "mcis-location", "p1": ns.p1, "p2": ns.p2, "N": ns.N}
    body = {
        "region": report.region,
        "p_opt": report.p_opt,
        "p0": report.p0,
        "x0": report.x0,
        "x1": report.x1,
        "x2": report.x2,
        "n_N": report.n_N,
        "interval_lo": report.interval_lo,
        "interval_hi": report.interval_hi,
        "eps_N": report.eps_N,
        "ambiguous": report.ambiguous,
    }
    _emit(_json_payload(meta, body), ns.out)
    return 0


# -------------------------------------------------------------- region-map


def cmd_region_map(ns) -> int:
    if ns.grid < 8:
        raise DomainError(f"region map needs a grid of at least 8, got {ns.grid}")
    axis = [(i + 1) / (ns.grid + 1) for i in range(ns.grid)]
    cells = []
    for x in axis:
        for y in axis:
            region, _, _ = thresholds.classify_region(ProbPair(x, y))
            cells.append((x, y, region))
    meta = {"subcommand": "region-map", "grid": ns.grid}
    if ns.fig is not None:
        figures.fig_region_map(cells, ns.grid, ns.fig)
    if ns.format == "svg":
        _emit(_svg_with_meta(svg.region_map_svg(cells, ns.grid), meta), ns.out)
    elif ns.format == "json":
        body = {
            "grid_k": ns.grid,
            "cells": [{"x": x, "y": y, "region": r} for x, y, r in cells],
        }
        _emit(_json_payload(meta, body), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append("x,y,region")
        lines.extend(f"{_fmt9(x)},{_fmt9(y)},{r}" for x, y, r in cells)
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


# ----------------------------------------------------------------- heatmap


def _threshold_curves(
    N: int, n: int, lo: float, hi: float
) -> list[list[tuple[float, float]]]:
    """Level set of the threshold location at pattern size n, per-column scan.

    The location is single-peaked in the target density (peak where the two
    densities agree), so each column has at most two roots: one on each side.
    """
    lower: list[tuple[float, float]] = []
    upper: list[tuple[float, float]] = []
    ys = [0.001 + i * 0.998 / 400 for i in range(401)]
    for i in range(201):
        x = lo + i * (hi - lo) / 200
        prev_y, prev_v = None, None
        for y in ys:
            v = thresholds.threshold_location(ProbPair(x, y), N) - n
            if prev_v is not None and (v >= 0) != (prev_v >= 0):
                a, b = prev_y, y
                fa = prev_v
                for _ in range(50):
                    mid = 0.5 * (a + b)
                    fm = thresholds.threshold_location(ProbPair(x, mid), N) - n
                    if (fm >= 0) == (fa >= 0):
                        a, fa = mid, fm
                    else:
                        b = mid
                root = 0.5 * (a + b)
                (lower if root < x else upper).append((x, root))
            prev_y, prev_v = y, v
    return [lower, upper]


def cmd_heatmap(ns) -> int:
    report = heatmap_containment(
        ns.N,
        ns.n,
        ns.grid,
        ns.trials,
        Seed(ns.seed),
        _budget(ns),
        _resolve_workers(ns.workers),
    )
    if all(c.rate is None for c in report.cells):
        raise BudgetExhausted("every cell timed out completely")
    meta = {
        "subcommand": "heatmap",
        "N": ns.N,
        "n": ns.n,
        "grid": ns.grid,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    _budget_meta(ns, meta)
    cells = [(c.x, c.y, c.rate) for c in report.cells]
    axis_lo, axis_hi = cells[0][0], cells[-1][0]
    curves = _threshold_curves(ns.N, ns.n, axis_lo, axis_hi)
    if ns.fig is not None:
        figures.fig_heatmap(cells, ns.grid, curves, ns.fig)
    if ns.format == "svg":
        _emit(_svg_with_meta(svg.heatmap_svg(cells, ns.grid, curves), meta), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append(_ESTIMATE_HEADER)
        for c in report.cells:
            lines.append(
                ",".join(
                    [
                        _fmt9(c.x),
                        _fmt9(c.y),
                        str(ns.n),
                        str(ns.N),
                        str(ns.trials),
                        _fmt9(c.rate),
                        _fmt9(c.ci_lo),
                        _fmt9(c.ci_hi),
                        str(c.timeouts),
                    ]
                )
            )
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


# ---------------------------------------------------------------- simulate


def _sim_containment(ns) -> int:
    rep = estimate_containment(
        ns.n,
        ns.p1,
        ns.N,
        ns.p2,
        ns.trials,
        Seed(ns.seed),
        _budget(ns),
        _resolve_workers(ns.workers),
    )
    meta = {
        "subcommand": "simulate",
        "mode": "containment",
        "n": ns.n,
        "p1": ns.p1,
        "N": ns.N,
        "p2": ns.p2,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    _budget_meta(ns, meta)
    if ns.format == "json":
        _emit(_json_payload(meta, _estimate_json(rep)), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append(_ESTIMATE_HEADER)
        lines.append(_estimate_row(ns.p1, ns.p2, ns.n, ns.N, rep))
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


def _sim_copies(ns) -> int:
    rep = copy_count_distribution(
        ns.n,
        ns.N,
        ns.p1,
        ns.p2,
        ns.trials,
        Seed(ns.seed),
        _budget(ns),
        _resolve_workers(ns.workers),
    )
    meta = {
        "subcommand": "simulate",
        "mode": "copies",
        "n": ns.n,
        "N": ns.N,
        "p1": ns.p1,
        "p2": ns.p2,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    _budget_meta(ns, meta)
    if ns.fig is not None:
        figures.fig_count_distribution(
            rep.values, rep.counts, rep.reference_params["mu"], ns.fig
        )
    if ns.format == "json":
        _emit(_json_payload(meta, _distribution_json(rep)), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append(f"# reference=poisson mu={_fmt9(rep.reference_params['mu'])}")
        lines.append(f"# tv={_fmt9(rep.distance)} timeouts={rep.timeouts}")
        lines.append("value,count")
        lines.extend(f"{_fmt9(v)},{c}" for v, c in zip(rep.values, rep.counts))
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


def _sim_mcis(ns) -> int:
    rep = mcis_concentration(
        ns.N,
        ns.p1,
        ns.p2,
        ns.trials,
        Seed(ns.seed),
        _budget(ns),
        _resolve_workers(ns.workers),
        ns.slack,
    )
    meta = {
        "subcommand": "simulate",
        "mode": "mcis",
        "N": ns.N,
        "p1": ns.p1,
        "p2": ns.p2,
        "trials": ns.trials,
        "seed": ns.seed,
        "slack": ns.slack,
    }
    _budget_meta(ns, meta)
    interval = (
        (rep.interval_lo, rep.interval_hi) if rep.interval_lo is not None else None
    )
    if ns.fig is not None:
        figures.fig_mcis_histogram(rep.values, rep.counts, interval, ns.fig)
    if ns.format == "json":
        body = {
            "values": list(rep.values),
            "counts": list(rep.counts),
            "lower_bounds": list(rep.lower_bounds),
            "trials": rep.trials,
            "timeouts": rep.timeouts,
            "seed": _seed_obj(rep.seed),
            "slack": rep.slack,
            "n_N": rep.n_N,
            "eps_N": rep.eps_N,
            "interval_lo": rep.interval_lo,
            "interval_hi": rep.interval_hi,
            "hit_rate": rep.hit_rate,
        }
        _emit(_json_payload(meta, body), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append(
            f"# n_N={_fmt9(rep.n_N)} eps_N={_fmt9(rep.eps_N)} "
            f"interval_lo={_fmt9(rep.interval_lo)} interval_hi={_fmt9(rep.interval_hi)}"
        )
        lines.append(
            f"# hit_rate={_fmt9(rep.hit_rate)} timeouts={rep.timeouts} "
            f"lower_bounds={';'.join(str(b) for b in rep.lower_bounds)}"
        )
        lines.append("value,count")
        lines.extend(f"{v},{c}" for v, c in zip(rep.values, rep.counts))
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


def _sim_fixed_pattern(ns) -> int:
    if ns.pattern_file is not None:
        with open(ns.pattern_file) as fh:
            pattern = from_text(fh.read())
        source = "file"
    elif ns.n is not None and ns.m is not None:
        pattern = gen_gnm(ns.n, ns.m, Seed(ns.seed).child(0))
        source = "generated"
    else:
        print(
            "error: fixed-pattern needs --pattern-file or both --n and --m",
            file=sys.stderr,
        )
        return 2
    rep = fixed_pattern_containment(
        pattern,
        ns.N,
        ns.p2,
        ns.trials,
        Seed(ns.seed),
        _budget(ns),
        _resolve_workers(ns.workers),
    )
    m = edge_count(pattern)
    meta = {
        "subcommand": "simulate",
        "mode": "fixed-pattern",
        "n": pattern.n,
        "m": m,
        "pattern_source": source,
        "N": ns.N,
        "p2": ns.p2,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    _budget_meta(ns, meta)
    if ns.p1 is not None:
        meta["p1"] = ns.p1
        meta["forecast"] = thresholds.predict_fixed_pattern_containment(
            pattern.n, m, ns.N, ProbPair(ns.p1, ns.p2)
        ).value
    density = m / math.comb(pattern.n, 2) if pattern.n >= 2 else 0.0
    if ns.format == "json":
        _emit(_json_payload(meta, _estimate_json(rep)), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append(_ESTIMATE_HEADER)
        lines.append(_estimate_row(density, ns.p2, pattern.n, ns.N, rep))
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


def _sim_pseudorandom(ns) -> int:
    if ns.model == "gnp":
        if ns.p1 is None:
            print("error: gnp model needs --p1", file=sys.stderr)
            return 2
        model = GraphModel("gnp", ns.n, p=ns.p1)
    else:
        if ns.m is None:
            print("error: gnm model needs --m", file=sys.stderr)
            return 2
        model = GraphModel("gnm", ns.n, m=ns.m)
    rep = estimate_property_rate(
        ns.property, model, ns.trials, Seed(ns.seed), _resolve_workers(ns.workers)
    )
    meta = {
        "subcommand": "simulate",
        "mode": "pseudorandom",
        "property": ns.property,
        "model": ns.model,
        "n": ns.n,
        "p1": ns.p1,
        "m": ns.m,
        "trials": ns.trials,
        "seed": ns.seed,
    }
    if ns.format == "json":
        _emit(_json_payload(meta, _estimate_json(rep)), ns.out)
    else:
        lines = _meta_comments(meta)
        lines.append("property,model,n,p,m,trials,rate,ci_lo,ci_hi,timeouts")
        lines.append(
            ",".join(
                [
                    ns.property,
                    ns.model,
                    str(ns.n),
                    _fmt9(ns.p1),
                    "" if ns.m is None else str(ns.m),
                    str(rep.trials),
                    _fmt9(rep.rate),
                    _fmt9(rep.ci_lo),
                    _fmt9(rep.ci_hi),
                    str(rep.timeouts),
                ]
            )
        )
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


_SIM_HANDLERS = {
    "containment": _sim_containment,
    "copies": _sim_copies,
    "mcis": _sim_mcis,
    "fixed-pattern": _sim_fixed_pattern,
    "pseudorandom": _sim_pseudorandom,
}


def cmd_simulate(ns) -> int:
    return _SIM_HANDLERS[ns.mode](ns)


# ------------------------------------------------------ check-pseudorandom


def cmd_check_pseudorandom(ns) -> int:
    with open(ns.graph_file) as fh:
        g = from_text(fh.read())
    if ns.property == "A":
        verdict = check_A(g)
    elif ns.property == "E":
        m = ns.m if ns.m is not None else edge_count(g)
        verdict = check_E(g, m)
    else:
        if ns.p1 is None:
            print("error: property F needs --p1", file=sys.stderr)
            return 2
        verdict = check_F(g, ns.p1)
    meta = {
        "subcommand": "check-pseudorandom",
        "graph_file": ns.graph_file,
        "property": ns.property,
        "n": g.n,
        "m": edge_count(g),
    }
    if ns.p1 is not None:
        meta["p1"] = ns.p1
    body = {
        "property": ns.property,
        "holds": verdict.holds,
        "witness": list(verdict.witness) if verdict.witness is not None else None,
    }
    _emit(_json_payload(meta, body), ns.out)
    return 0


# ------------------------------------------------------------------ parser


def _add_output(p, formats: tuple[str, ...], fig: bool = False) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", default=None, help="output path (default stdout)")
    if fig:
        p.add_argument("--fig", default=None, help="also render a figure to this path")


def _add_run(p) -> None:
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--budget-ms", dest="budget_ms", type=float, default=None)
    p.add_argument("--budget-nodes", dest="budget_nodes", type=int, default=None)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rgiso",
        description="Induced-containment thresholds and common-subgraph "
        "concentration for dense random graphs: closed-form reports, seeded "
        "simulations, and figure reproduction.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="sharp-threshold report")
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    _add_output(p, ("json", "csv"), fig=True)
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("mcis-location", help="common-subgraph location report")
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_mcis_location)

    p = sub.add_parser("region-map", help="cost-branch region over the unit square")
    p.add_argument("--grid", type=int, required=True)
    _add_output(p, ("csv", "svg", "json"), fig=True)
    p.set_defaults(handler=cmd_region_map)

    p = sub.add_parser("heatmap", help="containment-rate grid with threshold overlay")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    _add_run(p)
    _add_output(p, ("csv", "svg"), fig=True)
    p.set_defaults(handler=cmd_heatmap)

    psim = sub.add_parser("simulate", help="seeded Monte Carlo experiments")
    modes = psim.add_subparsers(dest="mode", required=True)

    m = modes.add_parser("containment", help="random pattern in random target")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--p1", type=float, required=True)
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--p2", type=float, required=True)
    _add_run(m)
    _add_output(m, ("csv", "json"))

    m = modes.add_parser("copies", help="induced-copy counts vs the Poisson law")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--p1", type=float, required=True)
    m.add_argument("--p2", type=float, required=True)
    _add_run(m)
    _add_output(m, ("csv", "json"), fig=True)

    m = modes.add_parser("mcis", help="common-subgraph size concentration")
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--p1", type=float, required=True)
    m.add_argument("--p2", type=float, required=True)
    m.add_argument("--slack", type=int, default=1)
    _add_run(m)
    _add_output(m, ("csv", "json"), fig=True)

    m = modes.add_parser("fixed-pattern", help="one fixed pattern vs fresh targets")
    m.add_argument("--pattern-file", dest="pattern_file", default=None)
    m.add_argument("--n", type=int, default=None)
    m.add_argument("--m", type=int, default=None)
    m.add_argument("--p1", type=float, default=None, help="enables the forecast echo")
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--p2", type=float, required=True)
    _add_run(m)
    _add_output(m, ("csv", "json"))

    m = modes.add_parser("pseudorandom", help="property rates over sampled graphs")
    m.add_argument("--property", choices=("A", "E", "F", "AE", "AF"), required=True)
    m.add_argument("--model", choices=("gnp", "gnm"), required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--p1", type=float, default=None)
    m.add_argument("--m", type=int, default=None)
    _add_run(m)
    _add_output(m, ("csv", "json"))

    psim.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("check-pseudorandom", help="exact property check of one graph")
    p.add_argument("--graph-file", dest="graph_file", required=True)
    p.add_argument("--property", choices=("A", "E", "F"), required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--p1", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_check_pseudorandom)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return ns.handler(ns)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
