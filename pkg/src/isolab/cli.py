"""Command-line entry point: ``isolab generate|profile|growth|verify|compare``.

Exit codes: 0 pass, 1 claim failed, 2 invalid input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceeded, IsolabError
from .generators import REGISTRY, build
from .harness.experiments import EXPERIMENTS, ExperimentSpec, run_experiment
from .harness.plot import emit_plot
from .harness.report import dumps, emit_report
from .profiles import (FamilySpec, ProfileCurve, compare, exact_profile, family_profile,
                       parse_grid)
from .space import ball, growth_curve, space_from_json, space_to_json

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

# fallbacks applied after --config, so that config values beat them
DEFAULTS = {
    "h": 1, "mode": "lower", "grid": "2^0..2^10", "compare_mode": "dominates",
    "format": "json", "budget": 2_000_000, "params": None,
}


class UsageError(IsolabError):
    pass


def _load_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} {path!r} is not valid JSON: {exc}") from exc


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _ints(text, what):
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}") from exc


def _radii(text):
    """``"1,2,4"`` or an inclusive range ``"1..20"``."""
    text = str(text)
    if ".." in text:
        lo, hi = _ints(text.replace("..", ","), "radii")
        return list(range(lo, hi + 1))
    return sorted(set(_ints(text, "radii")))


def _vertex(space, text):
    """Coordinates without the tag; full ids are accepted on finite spaces."""
    c = tuple(_ints(text, "center"))
    if space.finite:
        for v in (c, c + (0,)):
            if v in space.vertices:
                return v
        raise UsageError(f"{text!r} is not a vertex of {space.name}")
    return c + (0,)


def _params(args):
    if args.params is None:
        return {}
    if isinstance(args.params, dict):
        return args.params
    obj = _load_json(args.params, "params file")
    if not isinstance(obj, dict):
        raise UsageError("params file must hold a JSON object")
    return obj


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args):
    g = build(args.generator, _params(args))
    doc = space_to_json(g.space, explicit=args.explicit)
    doc["summary"] = g.describe()
    _write(_dump(doc), args.out)
    return EXIT_PASS


def _family(doc, space, args):
    spec = args.family
    if spec == "balls":
        if not args.center or not args.radii:
            raise UsageError("--family balls needs --center and --radii")
        fam = {}
        for c in args.center:
            x = _vertex(space, c)
            for r in _radii(args.radii):
                fam[f"B({c};{r})"] = ball(space, x, r, budget=args.budget)
        return "balls", fam
    if spec.startswith("named:"):
        name = spec[len("named:"):]
        if "generator" not in doc:
            raise UsageError("named families need a generator-form space document")
        g = build(doc["generator"], doc.get("params", {}))
        if name in g.families:
            return name, g.families[name]
        if name in g.named:
            return name, {name: g.named[name]}
        known = sorted(g.families) + sorted(g.named)
        raise UsageError(f"no family or set {name!r}; known: {known}")
    raise UsageError("--family must be 'balls' or 'named:<set>'")


def cmd_profile(args):
    doc = _load_json(args.space, "space file")
    space = space_from_json(doc)
    h = int(args.h)
    if args.exact == bool(args.family):
        raise UsageError("choose exactly one of --exact and --family")
    if args.exact:
        prof = exact_profile(space, h, connected_only=args.connected)
    else:
        name, fam = _family(doc, space, args)
        prof = family_profile(space, FamilySpec(name, fam), h, args.mode)
    text = prof.to_csv() if args.format == "csv" else prof.to_json() + "\n"
    _write(text, args.out)
    return EXIT_PASS


def cmd_growth(args):
    space = space_from_json(_load_json(args.space, "space file"))
    if not args.center or not args.radii:
        raise UsageError("growth needs --center and --radii")
    x = _vertex(space, args.center[0])
    g = growth_curve(space, x, _radii(args.radii))
    doc = {"center": list(x), "scale": g.scale, "points": [list(p) for p in g.points]}
    if args.format == "csv":
        text = "r,volume\n" + "".join(f"{r},{v}\n" for r, v in g.points)
    else:
        text = _dump(doc)
    _write(text, args.out)
    return EXIT_PASS


def cmd_verify(args):
    spec = ExperimentSpec(args.experiment, _params(args), budget=int(args.budget),
                          wall_clock=args.wall_clock)
    rep = run_experiment(spec)
    if args.report:
        emit_report(rep, args.report, args.format)
    else:
        sys.stdout.write(dumps(rep, args.format))
    if args.plot:
        emit_plot(rep.curves, args.plot, log=not args.linear, title=rep.experiment)
    print(f"{rep.experiment}: {rep.status}{' (' + rep.reason + ')' if rep.reason else ''}",
          file=sys.stderr)
    if rep.status == "pass":
        return EXIT_PASS
    if rep.reason.startswith("budget exceeded"):
        return EXIT_BUDGET
    return EXIT_FAIL


def _curve(path):
    obj = _load_json(path, "curve file")
    if isinstance(obj, dict) and "kind" in obj:
        return ProfileCurve.from_dict(obj)
    if isinstance(obj, dict) and "points" in obj:
        return [tuple(p) for p in obj["points"]]
    if isinstance(obj, list):
        return [tuple(p) for p in obj]
    raise UsageError(f"{path!r} holds neither a profile nor a list of points")


def cmd_compare(args):
    w = compare(_curve(args.f), _curve(args.g), parse_grid(args.grid), mode=args.compare_mode)
    _write(w.to_json() + "\n", args.out)
    return EXIT_FAIL if w.relation == "refuted" else EXIT_PASS


# ---------------------------------------------------------------------------
# parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isolab", description="Asymptotic isoperimetry lab.")
    p.add_argument("--config", help="JSON file of option values; flags override it")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a test space and write it as JSON")
    g.add_argument("generator", choices=sorted(REGISTRY))
    g.add_argument("--params", help="JSON file of generator parameters")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--explicit", action="store_true", default=None,
                   help="write vertices and edges instead of the generator form")
    g.set_defaults(func=cmd_generate)

    pr = sub.add_parser("profile", help="exact or family-restricted h-profile")
    pr.add_argument("--space", required=True)
    pr.add_argument("--h", type=int, help="boundary width in scaled units (default 1)")
    pr.add_argument("--exact", action="store_true", default=None)
    pr.add_argument("--connected", action="store_true", default=None,
                    help="with --exact, only metrically connected sets")
    pr.add_argument("--family", help="'balls' or 'named:<set>'")
    pr.add_argument("--mode", choices=("lower", "upper"))
    pr.add_argument("--center", action="append", help="ball center coordinates, e.g. 0,0")
    pr.add_argument("--radii", help="'1,2,4' or '1..20' (scaled units)")
    pr.add_argument("--budget", type=int)
    pr.add_argument("--format", choices=("json", "csv"))
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_profile)

    gr = sub.add_parser("growth", help="ball volumes around a center")
    gr.add_argument("--space", required=True)
    gr.add_argument("--center", action="append")
    gr.add_argument("--radii")
    gr.add_argument("--format", choices=("json", "csv"))
    gr.add_argument("--out")
    gr.set_defaults(func=cmd_growth)

    v = sub.add_parser("verify", help="run a named experiment")
    v.add_argument("experiment", choices=sorted(EXPERIMENTS))
    v.add_argument("--params", help="JSON file of experiment parameters")
    v.add_argument("--report", help="report file (default stdout)")
    v.add_argument("--format", choices=("json", "csv"))
    v.add_argument("--plot", help="SVG file for the experiment's curves")
    v.add_argument("--linear", action="store_true", default=None, help="linear plot axes")
    v.add_argument("--budget", type=int, help="vertex budget")
    v.add_argument("--wall-clock", type=float, help="seconds allowed")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="compare two sampled curves up to constants")
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--grid")
    c.add_argument("--mode", dest="compare_mode", choices=("dominates", "equivalent"))
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)
    return p


def _apply_config(args):
    if args.config:
        cfg = _load_json(args.config, "config file")
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in cfg.items():
            key = key.replace("-", "_")
            if key == "mode" and args.command == "compare":
                key = "compare_mode"
            if getattr(args, key, None) is None and hasattr(args, key):
                setattr(args, key, val)
    for key, val in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)
    for flag in ("explicit", "exact", "connected", "linear"):
        if hasattr(args, flag):
            setattr(args, flag, bool(getattr(args, flag)))
    if hasattr(args, "center") and isinstance(args.center, str):
        args.center = [args.center]
    if hasattr(args, "wall_clock") and args.wall_clock is not None:
        args.wall_clock = float(args.wall_clock)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INVALID
    try:
        _apply_config(args)
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"isolab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (IsolabError, KeyError, ValueError) as exc:
        print(f"isolab: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
