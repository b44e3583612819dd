"""Rotation sets of lifted torus maps from the command line.

    rotset observable  --map f1 --random 1000 --length 1000 --seed 1
    rotset discretized --map f1 --n 100 --reference unit-square
    rotset asymptotic  --map f1 --n-min 100 --n-max 200 --step 10
    rotset mean        --map f1 --quadrature 1024
    rotset hull        results.csv --reference unit-square
    rotset reproduce   5

Every run writes ``<name>.csv``, ``<name>.json`` and (unless ``--no-plot``)
``<name>.svg`` into the output directory.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import checks as checklib
from .config import RunConfig, parse_key_values
from .discretize import asymptotic_union, discretized_rotation_set
from .errors import RotsetError
from .geometry import ConvexPolygon, convex_hull, hausdorff, segment, unit_square
from .maps import MapSpec
from .observable import SamplingPlan, mean_rotation_vector, sample_observable
from .presets import PRESETS_VERSION, preset
from .report import (REPORT_SCHEMA, rational_json, read_vectors_csv, tool_version,
                     write_discretized_csv, write_json, write_samples_csv)

log = logging.getLogger("rotset")


def parse_reference(text: str) -> ConvexPolygon | None:
    """``unit-square``, ``segment:x1,y1,x2,y2`` or ``point:x,y``."""
    if not text:
        return None
    kind, _, rest = text.partition(":")
    nums = [float(s) for s in rest.split(",") if s.strip()]
    if kind == "unit-square" and not nums:
        return unit_square()
    if kind == "segment" and len(nums) == 4:
        return segment(nums[:2], nums[2:])
    if kind == "point" and len(nums) == 2:
        return ConvexPolygon(np.array([nums]))
    raise RotsetError(f"unrecognised reference region {text!r}")


def _stem(cfg: RunConfig, default: str) -> Path:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out / (cfg.name or default)


def _base_report(cfg: RunConfig, command: str) -> dict:
    spec = MapSpec.parse(cfg.map)
    return dict(schema=REPORT_SCHEMA, version=tool_version(), command=command,
                config=cfg.to_dict(), map=dict(name=spec.name, overrides=spec.overrides))


def _geometry(report, points, cfg: RunConfig, check_names=()):
    reference = parse_reference(cfg.reference)
    hull = convex_hull(points) if len(points) else None
    report["hull"] = hull.to_json() if hull else None
    report["reference"] = reference.to_json() if reference else None
    report["hausdorff_to_reference"] = (
        hausdorff(hull, reference) if hull is not None and reference is not None else None)
    results = [checklib.CHECKS[name](points) for name in check_names]
    if cfg.check and reference is not None and hull is not None:
        d = report["hausdorff_to_reference"]
        results.append(dict(name="hull_reference", passed=d <= cfg.tolerance,
                            hausdorff=d, tolerance=cfg.tolerance))
    report["checks"] = results
    report["passed"] = all(r["passed"] for r in results)
    return hull, reference


def _finish(report, cfg, stem, points, t0, title, weights=None, hull=None, reference=None):
    report["timing"] = dict(wall_seconds=time.perf_counter() - t0)
    files = dict(json=str(stem.with_suffix(".json")))
    if cfg.plot:
        from .plotting import scatter_rotation_set

        svg = scatter_rotation_set(points, stem.with_suffix(".svg"), title=title,
                                   hull=hull, reference=reference, weights=weights)
        files["svg"] = str(svg)
    if stem.with_suffix(".csv").exists():
        files["csv"] = str(stem.with_suffix(".csv"))
    report["files"] = files
    write_json(stem.with_suffix(".json"), report)
    return report


def cmd_observable(cfg: RunConfig, check_names=()) -> dict:
    t0 = time.perf_counter()
    fmap = MapSpec.parse(cfg.map).build()
    plan = SamplingPlan(cfg.mode, cfg.count, cfg.length, cfg.seed)
    samples = sample_observable(fmap, plan, workers=cfg.workers)
    stem = _stem(cfg, f"observable_{cfg.map.split(':')[0]}_{cfg.mode}{cfg.count}")
    write_samples_csv(stem.with_suffix(".csv"), samples)
    report = _base_report(cfg, "observable")
    report["plan"] = dict(mode=plan.mode, count=plan.count, length=plan.length, seed=plan.seed,
                          n_samples=plan.n_samples)
    report["vectors"] = dict(kind="real", data=samples.vectors.tolist())
    hull, ref = _geometry(report, samples.vectors, cfg, check_names)
    title = f"{cfg.map}: {plan.n_samples} orbits, T={plan.length}"
    return _finish(report, cfg, stem, samples.vectors, t0, title, hull=hull, reference=ref)


def cmd_discretized(cfg: RunConfig, check_names=()) -> dict:
    t0 = time.perf_counter()
    fmap = MapSpec.parse(cfg.map).build()
    dset = discretized_rotation_set(fmap, cfg.n, workers=cfg.workers)
    stem = _stem(cfg, f"discretized_{cfg.map.split(':')[0]}_n{cfg.n}")
    write_discretized_csv(stem.with_suffix(".csv"), [dset])
    report = _base_report(cfg, "discretized")
    report["n"] = cfg.n
    report["cycle_count"] = len(dset.cycles)
    report["vectors"] = dict(kind="rational", data=rational_json(dset.vectors))
    points = dset.points()
    hull, ref = _geometry(report, points, cfg, check_names)
    weights = [e.basin_mass for e in dset.vectors]
    title = f"{cfg.map}: discretized, grid {cfg.n}x{cfg.n}"
    return _finish(report, cfg, stem, points, t0, title, weights, hull, ref)


def cmd_asymptotic(cfg: RunConfig, check_names=()) -> dict:
    t0 = time.perf_counter()
    fmap = MapSpec.parse(cfg.map).build()
    result = asymptotic_union(fmap, cfg.n_min, cfg.n_max, cfg.step, workers=cfg.workers)
    stem = _stem(cfg, f"asymptotic_{cfg.map.split(':')[0]}_{cfg.n_min}-{cfg.n_max}")
    per_n_dir = stem.parent / (stem.name + "_per_n")
    per_n_dir.mkdir(exist_ok=True)
    for dset in result.per_n:
        write_discretized_csv(per_n_dir / f"n{dset.n}.csv", [dset])
    write_discretized_csv(stem.with_suffix(".csv"), result.per_n)
    report = _base_report(cfg, "asymptotic")
    report["sides"] = result.sides
    report["per_n"] = [dict(n=d.n, cycle_count=len(d.cycles), vector_count=len(d.vectors))
                       for d in result.per_n]
    report["vectors"] = dict(kind="rational", data=rational_json(result.union))
    points = result.points()
    hull, ref = _geometry(report, points, cfg, check_names)
    title = f"{cfg.map}: union of grids {cfg.n_min}..{cfg.n_max} step {cfg.step}"
    return _finish(report, cfg, stem, points, t0, title, hull=hull, reference=ref)


def cmd_mean(cfg: RunConfig) -> dict:
    t0 = time.perf_counter()
    fmap = MapSpec.parse(cfg.map).build()
    vec = mean_rotation_vector(fmap, cfg.quadrature)
    stem = _stem(cfg, f"mean_{cfg.map.split(':')[0]}")
    report = _base_report(cfg, "mean")
    report["vectors"] = dict(kind="real", data=[vec.tolist()])
    report["checks"] = []
    report["passed"] = True
    report["timing"] = dict(wall_seconds=time.perf_counter() - t0)
    report["files"] = dict(json=str(stem.with_suffix(".json")))
    write_json(stem.with_suffix(".json"), report)
    print(f"mean rotation vector: {float(vec[0])!r} {float(vec[1])!r}")
    return report


def cmd_hull(cfg: RunConfig) -> dict:
    t0 = time.perf_counter()
    if not cfg.input:
        raise RotsetError("hull needs an input CSV")
    points, exact = read_vectors_csv(cfg.input)
    stem = _stem(cfg, f"hull_{Path(cfg.input).stem}")
    report = _base_report(cfg, "hull")
    report["vectors"] = (dict(kind="rational", data=[[v.num_x, v.num_y, v.den] for v in exact])
                         if exact else dict(kind="real", data=points.tolist()))
    hull, ref = _geometry(report, points, cfg)
    if hull is not None:
        for x, y in hull.vertices.tolist():
            print(f"{x!r},{y!r}")
    return _finish(report, cfg, stem, points, t0, f"hull of {Path(cfg.input).name}",
                   hull=hull, reference=ref)


COMMANDS = {
    "observable": cmd_observable,
    "discretized": cmd_discretized,
    "asymptotic": cmd_asymptotic,
}


def cmd_reproduce(cfg: RunConfig) -> dict:
    p = preset(cfg.figure, cfg.scale, cfg.full)
    values = cfg.to_dict()
    values.update(p["params"])
    values.update(map=p["map"], command=p["method"],
                  reference=cfg.reference or "unit-square",
                  name=cfg.name or f"figure{cfg.figure}")
    sub = RunConfig(**values).validate()
    checks = [p["check"]] if p["check"] else []
    report = COMMANDS[p["method"]](sub, checks)
    report["figure"] = dict(id=cfg.figure, presets_version=PRESETS_VERSION, full=cfg.full,
                            scale=cfg.scale)
    write_json(Path(report["files"]["json"]), report)
    return report


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--map", default=S, help="built-in map, e.g. f1 or translation:0.25,0.25")
    common.add_argument("--out", default=S, help="output directory ($ROTSET_OUTPUT_DIR)")
    common.add_argument("--name", default=S, help="output file stem")
    common.add_argument("--threads", type=int, default=S, help="worker threads (0: all cores)")
    common.add_argument("--no-plot", dest="plot", action="store_false", default=S)
    common.add_argument("--reference", default=S,
                        help="unit-square | segment:x1,y1,x2,y2 | point:x,y")
    common.add_argument("--tolerance", type=float, default=S)
    common.add_argument("--check", action="store_true", default=S,
                        help="fail unless the hull is within --tolerance of --reference")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rotset", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("observable", parents=[common], help="orbit-segment rotation vectors")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--random", type=int, dest="random", default=S, metavar="COUNT")
    grp.add_argument("--grid", type=int, dest="grid", default=S, metavar="SIDE")
    p.add_argument("--length", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)

    p = sub.add_parser("discretized", parents=[common], help="discretized rotation set")
    p.add_argument("--n", type=int, default=S)

    p = sub.add_parser("asymptotic", parents=[common], help="union over grid sides")
    p.add_argument("--n-min", type=int, default=S)
    p.add_argument("--n-max", type=int, default=S)
    p.add_argument("--step", type=int, default=S)

    p = sub.add_parser("mean", parents=[common], help="mean rotation vector")
    p.add_argument("--quadrature", type=int, default=S)

    p = sub.add_parser("hull", parents=[common], help="hull of vectors from a CSV")
    p.add_argument("input", nargs="?", default=S)

    p = sub.add_parser("reproduce", parents=[common], help="rerun a published figure")
    p.add_argument("figure", type=int)
    p.add_argument("--scale", type=float, default=S)
    p.add_argument("--full", action="store_true", default=S,
                   help="caption-size parameters (minutes to hours)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(parse_key_values(Path(args.config).read_text()))
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    if "random" in flags:
        flags["mode"], flags["count"] = "random", flags.pop("random")
    if "grid" in flags:
        flags["mode"], flags["count"] = "grid", flags.pop("grid")
    values.update(flags)
    return RunConfig.from_mapping(values).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        runner = {"mean": cmd_mean, "hull": cmd_hull, "reproduce": cmd_reproduce}.get(
            cfg.command, COMMANDS.get(cfg.command))
        report = runner(cfg)
    except (RotsetError, OSError, ValueError) as exc:
        print(f"rotset: error: {exc}", file=sys.stderr)
        return 2
    for r in report.get("checks", []):
        print(f"{r['name']}: {'PASS' if r['passed'] else 'FAIL'}")
    log.info("wrote %s", ", ".join(report["files"].values()))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
