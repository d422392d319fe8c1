#!/usr/bin/env python3
"""
currentlab command line
Validate currents, certify tropical rank, build dual complexes and run the model checks
"""

import argparse
import json
import logging
import math
import random
import sys
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import config
from current_core import DiscreteCurrent, is_lamination, is_symmetric, total_mass
from current_io import (
    complex_to_json,
    load_json,
    parse_periodic,
    parse_submeasures,
    rational,
    read_current,
)
from cyclic_boundary import BoundaryPoint, parse_angle
from dual_space import LPoint, enumerate_complex, is_tree, metric_d, relative_distance, symmetric_members
from errors import CurrentLabError, ValidationError
from finsler_plane import (
    MINUS,
    PLUS,
    Polyline,
    busemann,
    corridor,
    cross_ratio_b,
    distance,
    is_geodesic,
    ray_path,
)
from holonomy import HolonomyContext, cross_ratio, holonomy_context, triple_ratio
from mobius_model import (
    CONFIGURATIONS,
    angle_to_real,
    hilbert_length_check,
    random_hyperbolic,
    random_schottky_pair,
    verify_abc,
    veronese_rank_check,
)
from periodic_model import period_ray_check, symmetrized_period_check, translation_length
from svg_render import render_finsler_svg, render_png, render_svg
from tropical import certify_tropical_rank, forbidden_scan

logger = logging.getLogger("currentlab")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VIOLATED = 3

RAY_REACH = 3.0


@dataclass
class RunConfig:
    """Everything a single invocation needs, built from the parsed arguments"""

    subcommand: str
    action: Optional[str] = None
    inputs: List[str] = field(default_factory=list)
    mass: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    out: Optional[str] = None
    svg: Optional[str] = None
    png: Optional[str] = None
    seed: int = 0
    trials: int = 10
    deterministic: bool = True
    workers: Optional[int] = None
    budget: Optional[int] = None
    points: List[str] = field(default_factory=list)
    numbers: List[float] = field(default_factory=list)
    configuration: Optional[str] = None
    with_complex: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__ and v is not None}
        return cls(**known)


@dataclass
class Outcome:
    report: Dict[str, Any]
    exit_code: int = EXIT_OK


def _context(mu: DiscreteCurrent, mass: Optional[str]) -> HolonomyContext:
    if mass is not None:
        return holonomy_context(mu, rational(mass, "mass level"))
    if is_symmetric(mu):
        return holonomy_context(mu)
    raise ValidationError("--mass is required for a current that is not symmetric")


def _resolve_point(mu: DiscreteCurrent, token: str) -> BoundaryPoint:
    for p, name in mu.labels.items():
        if name == token:
            return p
    return parse_angle(token)


def _first_input(cfg: RunConfig) -> str:
    if not cfg.inputs:
        raise ValidationError(f"{cfg.subcommand} needs an input file")
    return cfg.inputs[0]


def run_check(cfg: RunConfig) -> Outcome:
    mu = read_current(_first_input(cfg))
    return Outcome({
        "ok": True,
        "chords": len(mu),
        "mass": str(total_mass(mu)),
        "symmetric": is_symmetric(mu),
        "lamination": is_lamination(mu),
    })


def run_rank(cfg: RunConfig) -> Outcome:
    if cfg.n is None:
        raise ValidationError("rank needs --n")
    mu = read_current(_first_input(cfg))
    ctx = _context(mu, cfg.mass)
    result = certify_tropical_rank(ctx, cfg.n, workers=cfg.workers, deterministic=cfg.deterministic)
    report = {"ok": result.certified, **result.to_report()}
    scan = forbidden_scan(mu, cfg.n) if len(mu) else None
    report["interleaved"] = [mu.chord_name(c) for c in scan] if scan else None
    if result.witness is not None:
        report["witness"]["rows"] = [mu.label(p) for p in result.witness.rows]
        report["witness"]["cols"] = [mu.label(p) for p in result.witness.cols]
    return Outcome(report, EXIT_OK if result.certified else EXIT_VIOLATED)


def run_dual(cfg: RunConfig) -> Outcome:
    mu = read_current(_first_input(cfg))
    ctx = _context(mu, cfg.mass)
    complex_ = enumerate_complex(ctx, budget=cfg.budget, workers=cfg.workers)
    report = {"ok": True, **complex_to_json(complex_), "tree": is_tree(complex_)}
    if is_symmetric(mu) and ctx.T == total_mass(mu) / 2:
        members = symmetric_members(complex_)
        report["symmetric_faces"] = len(members)
        report["symmetric_dimension"] = max((m.dimension for m in members), default=0)
    if cfg.svg:
        render_svg(mu, complex_, cfg.svg, seed=cfg.seed)
    if cfg.png:
        render_png(mu, complex_, cfg.png, seed=cfg.seed)
    return Outcome(report)


def run_metric(cfg: RunConfig) -> Outcome:
    if len(cfg.inputs) != 2:
        raise ValidationError("metric needs a current file and a submeasure file")
    mu = read_current(cfg.inputs[0])
    points = parse_submeasures(load_json(cfg.inputs[1]), mu)
    ctx = _context(mu, cfg.mass) if cfg.mass is not None else None
    pairs = []
    for (na, a, oa), (nb, b, ob) in combinations(points, 2):
        pairs.append({
            "a": na,
            "b": nb,
            "d": str(metric_d(a, b, ctx)),
            "relative_ab": str(relative_distance(LPoint(a, oa), LPoint(b, ob), ctx)),
            "relative_ba": str(relative_distance(LPoint(b, ob), LPoint(a, oa), ctx)),
        })
    return Outcome({"ok": True, "pairs": pairs})


def _points(cfg: RunConfig, mu: DiscreteCurrent, count: int) -> List[BoundaryPoint]:
    if len(cfg.points) != count:
        raise ValidationError(f"{cfg.subcommand} needs exactly {count} points")
    return [_resolve_point(mu, t) for t in cfg.points]


def run_triple_ratio(cfg: RunConfig) -> Outcome:
    mu = read_current(_first_input(cfg))
    ctx = _context(mu, cfg.mass)
    x, y, z = _points(cfg, mu, 3)
    return Outcome({"ok": True, "mass": str(ctx.T), "triple_ratio": str(triple_ratio(ctx, x, y, z))})


def run_cross_ratio(cfg: RunConfig) -> Outcome:
    mu = read_current(_first_input(cfg))
    ctx = _context(mu, cfg.mass)
    x1, x2, y1, y2 = _points(cfg, mu, 4)
    return Outcome({"ok": True, "mass": str(ctx.T), "cross_ratio": str(cross_ratio(ctx, x1, x2, y1, y2))})


def run_translation_length(cfg: RunConfig) -> Outcome:
    mu = parse_periodic(load_json(_first_input(cfg)))
    m = 1 if cfg.m is None else cfg.m
    return Outcome({"ok": True, "m": m, "translation_length": str(translation_length(mu, m))})


def run_period_check(cfg: RunConfig) -> Outcome:
    mu = parse_periodic(load_json(_first_input(cfg)))
    lhs, rhs = symmetrized_period_check(mu)
    moved, still = period_ray_check(mu)
    ok = lhs == rhs and moved == still
    return Outcome(
        {"ok": ok, "lhs": str(lhs), "rhs": str(rhs), "ray_shifted": str(moved), "ray_base": str(still)},
        EXIT_OK if ok else EXIT_VIOLATED,
    )


def _relative_gap(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / (1 + abs(lhs))


def run_sl2(cfg: RunConfig) -> Outcome:
    rng = random.Random(cfg.seed)
    worst = 0.0
    if cfg.action == "verify-abc":
        configurations = [cfg.configuration] if cfg.configuration else list(CONFIGURATIONS)
        for i in range(cfg.trials):
            pair = random_schottky_pair(rng, configurations[i % len(configurations)])
            worst = max(worst, _relative_gap(*verify_abc(pair)))
        ok = worst < config.ABC_RTOL
    elif cfg.action == "hilbert":
        for _ in range(cfg.trials):
            g = random_hyperbolic(rng)
            x = angle_to_real(rng.uniform(-math.pi * 0.9, math.pi * 0.9))
            worst = max(worst, _relative_gap(*hilbert_length_check(g, x)))
        ok = worst < config.ABC_RTOL
    elif cfg.action == "veronese":
        n = cfg.n or 2
        top, lowest = 0.0, math.inf
        for _ in range(cfg.trials):
            xs = [(i + rng.uniform(0.2, 0.8)) / (n + 1) for i in range(n + 1)]
            ys = [1.5 + (j + rng.uniform(0.2, 0.8)) / (n + 1) for j in range(n + 1)]
            big, small = veronese_rank_check(n, xs, ys)
            top, lowest = max(top, big), min(lowest, small)
        ok = top < config.VERONESE_RTOL < lowest
        return Outcome({"ok": ok, "n": n, "trials": cfg.trials, "max_top_minor": top, "min_lower_minor": lowest},
                       EXIT_OK if ok else EXIT_VIOLATED)
    else:
        raise ValidationError(f"Unknown sl2 action {cfg.action!r}")
    return Outcome({"ok": ok, "trials": cfg.trials, "worst_relative_error": worst},
                   EXIT_OK if ok else EXIT_VIOLATED)


def _complex_pair(value: Sequence[Any], what: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(f"{what} must be a pair [x, y]")
    try:
        return complex(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Malformed {what}: {str(e)}")


def _rays(data: Dict[str, Any]):
    if "corridor" in data:
        return corridor(float(data["corridor"]))
    rays = data.get("rays")
    if not isinstance(rays, dict):
        raise ValidationError("Finsler config needs 'corridor' or 'rays'")
    built = []
    for key, sign in (("g1", MINUS), ("g2", MINUS), ("h1", PLUS), ("h2", PLUS)):
        ray = rays.get(key)
        if not isinstance(ray, dict):
            raise ValidationError(f"Missing ray {key!r}")
        built.append(busemann(_complex_pair(ray.get("base"), f"{key} base"),
                              _complex_pair(ray.get("direction"), f"{key} direction"), sign))
    return tuple(built)


def run_finsler(cfg: RunConfig) -> Outcome:
    if cfg.action == "dist":
        if len(cfg.numbers) != 4:
            raise ValidationError("finsler dist needs x1 y1 x2 y2")
        p, q = complex(*cfg.numbers[:2]), complex(*cfg.numbers[2:])
        return Outcome({"ok": True, "distance": distance(p, q), "reverse": distance(q, p)})
    if cfg.action == "crossratio":
        data = load_json(_first_input(cfg))
        horofunctions = _rays(data)
        if cfg.svg:
            widths = [float(data["corridor"])] if "corridor" in data else []
            render_finsler_svg([ray_path(f, RAY_REACH) for f in horofunctions], cfg.svg, corridors=widths)
        by_pairing = cross_ratio_b(*horofunctions, method="pairing")
        by_distance = cross_ratio_b(*horofunctions, method="cross-distance")
        ok = _relative_gap(by_pairing, by_distance) < config.CROSS_RATIO_RTOL
        return Outcome({"ok": ok, "pairing": by_pairing, "cross_distance": by_distance},
                       EXIT_OK if ok else EXIT_VIOLATED)
    if cfg.action == "geodesic":
        data = load_json(_first_input(cfg))
        raw = data.get("points")
        if not isinstance(raw, list):
            raise ValidationError("Polyline file needs a 'points' list")
        path = Polyline([_complex_pair(p, "polyline point") for p in raw])
        if cfg.svg:
            render_finsler_svg([path], cfg.svg)
        return Outcome({
            "ok": True,
            "geodesic": is_geodesic(path),
            "length": path.length(),
            "distance": distance(path.points[0], path.points[-1]),
        })
    raise ValidationError(f"Unknown finsler action {cfg.action!r}")


def run_render(cfg: RunConfig) -> Outcome:
    if not cfg.svg:
        raise ValidationError("render needs --svg")
    mu = read_current(_first_input(cfg))
    complex_ = enumerate_complex(_context(mu, cfg.mass), budget=cfg.budget) if cfg.with_complex else None
    render_svg(mu, complex_, cfg.svg, seed=cfg.seed)
    if cfg.png:
        render_png(mu, complex_, cfg.png, seed=cfg.seed)
    return Outcome({"ok": True, "svg": cfg.svg, "png": cfg.png})


HANDLERS = {
    "check": run_check,
    "rank": run_rank,
    "dual": run_dual,
    "metric": run_metric,
    "triple-ratio": run_triple_ratio,
    "cross-ratio": run_cross_ratio,
    "translation-length": run_translation_length,
    "period-check": run_period_check,
    "sl2": run_sl2,
    "finsler": run_finsler,
    "render": run_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="currentlab", description="Exact tools for oriented geodesic currents")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def with_current(name, help_text, mass=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("inputs", nargs=1, metavar="current.json")
        if mass:
            p.add_argument("--mass", help="mass level T as p/q")
        return p

    with_current("check", "validate a current file", mass=False)
    rank = with_current("rank", "certify tropical rank n")
    rank.add_argument("--n", type=int, required=True)
    rank.add_argument("--workers", type=int)
    rank.add_argument("--nondeterministic", dest="deterministic", action="store_false")
    dual = with_current("dual", "enumerate the dual complex")
    dual.add_argument("--svg")
    dual.add_argument("--png")
    dual.add_argument("--seed", type=int, default=config.SVG_SEED)
    dual.add_argument("--budget", type=int)
    dual.add_argument("--workers", type=int)

    metric = sub.add_parser("metric", help="distances between submeasures")
    metric.add_argument("inputs", nargs=2, metavar=("current.json", "submeasures.json"))
    metric.add_argument("--mass")

    for name, count in (("triple-ratio", 3), ("cross-ratio", 4)):
        p = with_current(name, f"{name} from the potential")
        p.add_argument("--points", nargs=count, required=True, help="point names or p/q angles")

    tl = sub.add_parser("translation-length", help="translation length of a periodic current")
    tl.add_argument("inputs", nargs=1, metavar="periodic.json")
    tl.add_argument("--m", type=int, default=1)
    pc = sub.add_parser("period-check", help="symmetrized period and ray checks")
    pc.add_argument("inputs", nargs=1, metavar="periodic.json")

    sl2 = sub.add_parser("sl2", help="floating-point SL(2,R) checks")
    sl2.add_argument("action", choices=["verify-abc", "veronese", "hilbert"])
    sl2.add_argument("--seed", type=int, default=0)
    sl2.add_argument("--trials", type=int, default=10)
    sl2.add_argument("--n", type=int)
    sl2.add_argument("--configuration", choices=list(CONFIGURATIONS))

    finsler = sub.add_parser("finsler", help="triangular Finsler plane")
    finsler.add_argument("action", choices=["dist", "crossratio", "geodesic"])
    finsler.add_argument("numbers", nargs="*", type=float)
    finsler.add_argument("--config", dest="config_path")
    finsler.add_argument("--polyline", dest="polyline_path")
    finsler.add_argument("--svg", help="draw the rays or the polyline over the unit triangle")

    render = with_current("render", "draw a current and optionally its dual complex")
    render.add_argument("--svg", required=True)
    render.add_argument("--png")
    render.add_argument("--seed", type=int, default=config.SVG_SEED)
    render.add_argument("--complex", dest="with_complex", action="store_true")
    render.add_argument("--budget", type=int)
    return parser


def _emit(report: Dict[str, Any], out: Optional[str]) -> None:
    line = json.dumps(report, sort_keys=True, default=str)
    if out:
        Path(out).write_text(line + "\n", encoding="utf-8")
    else:
        print(line)


def run(cfg: RunConfig) -> int:
    """Dispatch one subcommand and emit its report; returns the exit code"""
    try:
        outcome = HANDLERS[cfg.subcommand](cfg)
    except CurrentLabError as e:
        logger.error(f"{cfg.subcommand} failed: {str(e)}")
        _emit(e.to_report(), cfg.out)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error in {cfg.subcommand}: {str(e)}")
        _emit({"ok": False, "error": type(e).__name__, "message": str(e)}, cfg.out)
        return EXIT_UNEXPECTED
    _emit(outcome.report, cfg.out)
    return outcome.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level="INFO" if args.verbose else config.log_level(), stream=sys.stderr)
    if getattr(args, "config_path", None):
        args.inputs = [args.config_path]
    if getattr(args, "polyline_path", None):
        args.inputs = [args.polyline_path]
    return run(RunConfig.from_args(args))


if __name__ == "__main__":
    sys.exit(main())
