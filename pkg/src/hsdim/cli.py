"""Command line interface.

Subcommands: ``generate``, ``count``, ``profile``, ``estimate``, ``verify`` and
``run --config cfg.json``. Exit codes: 0 success, 1 verification failure,
2 invalid input (bad flags, set description or config), 3 engine error.
"""
import argparse
import io
import json
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

import jsonschema
import numpy as np

from .covering import ExactCapError, ResourceCapError, cube_count
from .measures import estimate_dimension, liminf_value, premeasure_profile
from .serialize import (
    SchemaError,
    dumps,
    load_model,
    model_from_json,
    model_to_json,
    schedule_from_json,
    schedule_to_json,
)
from .sets import DigitSet, FinitePoints, HarmonicTail, InexactBaseError, Product, Schedule, ScheduleError
from .sets import schedule_to_digit_sets
from .validation import as_fraction, default_cell_cap, default_exact_cap, format_fraction
from .verify import SUITES, random_points, run_suite

EXIT_OK, EXIT_FAILED, EXIT_SCHEMA, EXIT_ENGINE = 0, 1, 2, 3

COMMANDS = ("generate", "count", "profile", "estimate", "verify")

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "set": {"oneOf": [{"type": "string"}, {"type": "object"}]},
        "base": {"type": "integer", "minimum": 2},
        "levels": {"oneOf": [{"type": "string"}, {"type": "array", "items": {"type": "integer", "minimum": 0}}]},
        "radii": {"oneOf": [{"type": "string"}, {"type": "array"}]},
        "scales": {"type": "string"},
        "t": {"oneOf": [{"type": "string"}, {"type": "array"}]},
        "output": {"type": "string"},
        "exact_cap": {"type": "integer", "minimum": 1},
        "cell_cap": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "suite": {"enum": ["all", *SUITES]},
        "schedule": {"oneOf": [{"type": "string"}, {"type": "object"}]},
        "mode": {"enum": ["auto", "exact", "greedy"]},
        "fit": {"enum": ["all", "liminf"]},
        "kind": {"type": "string"},
    },
    "additionalProperties": False,
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    set: object = None
    base: int = None
    levels: object = None
    radii: object = None
    scales: str = None
    t: object = None
    output: str = None
    exact_cap: int = None
    cell_cap: int = None
    seed: int = 0
    suite: str = "all"
    schedule: object = "default"
    mode: str = "auto"
    fit: str = "all"
    kind: str = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.exact_cap is None:
            self.exact_cap = default_exact_cap()
        if self.cell_cap is None:
            self.cell_cap = default_cell_cap()
        if self.exact_cap <= 0 or self.cell_cap <= 0:
            raise UsageError("caps must be positive")

    @classmethod
    def from_json(cls, doc):
        try:
            jsonschema.validate(doc, RUN_CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SchemaError(f"config: {exc.message}") from exc
        return cls(**doc)


def parse_levels(text):
    if isinstance(text, (list, tuple)):
        levels = [int(k) for k in text]
    elif ".." in text:
        lo, hi = text.split("..")
        levels = list(range(int(lo), int(hi) + 1))
    else:
        levels = [int(k) for k in text.split(",") if k.strip()]
    if not levels or min(levels) < 0:
        raise UsageError(f"level range must be nonempty and non-negative: {text!r}")
    return levels


def _split(text):
    if isinstance(text, (list, tuple)):
        return list(text)
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _load_set(spec):
    if spec is None:
        raise UsageError("--set is required")
    if isinstance(spec, dict):
        return model_from_json(spec)
    if spec.lstrip().startswith("{"):
        try:
            return model_from_json(json.loads(spec))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"inline set: {exc}") from exc
    try:
        return load_model(spec)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{spec}: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc}") from exc


def _load_schedule(spec, blocks=3):
    if spec in (None, "default"):
        return Schedule.minimal(blocks)
    if isinstance(spec, dict):
        return schedule_from_json(spec)
    try:
        with open(spec) as fh:
            return schedule_from_json(json.load(fh))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{spec}: {exc}") from exc
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc}") from exc


def _profile(cfg, model, t_grid=(0,)):
    if cfg.levels is not None:
        if cfg.base is None:
            raise UsageError("--levels needs --base")
        return premeasure_profile(model, "cube", parse_levels(cfg.levels), t_grid, base=cfg.base)
    if cfg.scales is not None:
        if cfg.scales != "deltas":
            raise UsageError("--scales accepts only 'deltas'")
        return premeasure_profile(model, "ball", "deltas", t_grid, mode=cfg.mode, exact_cap=cfg.exact_cap)
    if cfg.radii is not None:
        radii = [as_fraction(r) for r in _split(cfg.radii)]
        return premeasure_profile(model, "ball", radii, t_grid, mode=cfg.mode, exact_cap=cfg.exact_cap)
    raise UsageError("give --levels with --base, --radii, or --scales deltas")


def _emit(cfg, text, stdout):
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _summary_stream(cfg, stdout, stderr):
    return stdout if cfg.output else stderr


def _table(rows, header):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(header, widths))]
    lines += ["  ".join(str(x).ljust(w) for x, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def _display(value, bound=1e300):
    return "inf" if value > bound else f"{value:.6g}"


def cmd_generate(cfg, stdout, stderr):
    kind = cfg.kind or cfg.extra.get("kind")
    ex = cfg.extra
    if kind == "cantor":
        model = DigitSet.uniform(cfg.base or 3, [int(d) for d in _split(ex.get("digits") or "0,2")], ex.get("depth") or 12)
    elif kind == "harmonic":
        model = HarmonicTail(ex.get("n") or 64)
    elif kind == "schedule-set":
        schedule = _load_schedule(cfg.schedule)
        depth = ex.get("depth")
        depth = schedule.m[-1] if depth is None else depth
        first, second = schedule_to_digit_sets(schedule, depth)
        model = first if (ex.get("part") or "A") == "A" else second
    elif kind == "random":
        rng = np.random.default_rng(cfg.seed)
        model = FinitePoints(tuple(random_points(rng, ex.get("count") or 10, ex.get("dim") or 1)))
    elif kind == "product":
        model = Product(_load_set(ex.get("left")), _load_set(ex.get("right")))
    elif kind == "schedule":
        _emit(cfg, dumps(schedule_to_json(_load_schedule(cfg.schedule, ex.get("blocks") or 3))), stdout)
        return EXIT_OK
    else:
        raise UsageError(f"unknown set kind {kind!r}")
    _emit(cfg, dumps(model_to_json(model)), stdout)
    return EXIT_OK


def cmd_count(cfg, stdout, stderr):
    model = _load_set(cfg.set)
    profile = _profile(cfg, model)
    buf = io.StringIO()
    profile.write_counts_csv(buf)
    _emit(cfg, buf.getvalue(), stdout)
    rows = [(s, c, lo, hi) for s, c, lo, hi in profile.count_rows()]
    _summary_stream(cfg, stdout, stderr).write(_table(rows, ("scale", "count", "lower", "upper")))
    if cfg.levels is not None and cfg.base is not None:
        for k in parse_levels(cfg.levels):
            res = cube_count(model, cfg.base, k, cell_cap=cfg.cell_cap)
            if res.cells is not None and len(res.cells) <= 16:
                _summary_stream(cfg, stdout, stderr).write(f"level {k} cells: {[list(c) for c in res.cells]}\n")
    return EXIT_OK


def _t_grid(cfg, default="0"):
    return _split(cfg.t if cfg.t is not None else default)


def cmd_profile(cfg, stdout, stderr):
    model = _load_set(cfg.set)
    profile = _profile(cfg, model, _t_grid(cfg, "0,1/2,1"))
    buf = io.StringIO()
    profile.write_values_csv(buf)
    _emit(cfg, buf.getvalue(), stdout)
    rows = [(t, s, _display(v)) for t, s, v in profile.value_rows()]
    _summary_stream(cfg, stdout, stderr).write(_table(rows, ("t", "scale", "value")))
    return EXIT_OK


def cmd_estimate(cfg, stdout, stderr):
    model = _load_set(cfg.set)
    t_grid = _t_grid(cfg)
    profile = _profile(cfg, model, t_grid)
    est = estimate_dimension(profile, cfg.fit)
    doc = {"dimension": est.to_json(), "liminf": []}
    if len(profile.scales) >= 3:
        doc["liminf"] = [liminf_value(profile, t).to_json() for t in profile.t_grid]
    _emit(cfg, dumps(doc), stdout)
    _summary_stream(cfg, stdout, stderr).write(
        f"premeasure-based dimension estimate: slope={est.slope:.6f} "
        f"residual={est.residual:.3g} scales={len(est.indices)} mode={est.mode}\n"
    )
    return EXIT_OK


def cmd_verify(cfg, stdout, stderr):
    schedule = _load_schedule(cfg.schedule)
    reports = run_suite(cfg.suite, schedule, cfg.seed, exact_cap=cfg.exact_cap)
    _emit(cfg, dumps([r.to_json() for r in reports]), stdout)
    rows = [(r.claim_id, r.status) for r in reports]
    _summary_stream(cfg, stdout, stderr).write(_table(rows, ("claim", "status")))
    return EXIT_FAILED if any(r.status == "fail" for r in reports) else EXIT_OK


HANDLERS = {
    "generate": cmd_generate,
    "count": cmd_count,
    "profile": cmd_profile,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
}


def run(config, stdout=None, stderr=None):
    """Execute a :class:`RunConfig`; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return HANDLERS[config.command](config, stdout, stderr)
    except (SchemaError, ScheduleError, UsageError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_SCHEMA
    except (ExactCapError, ResourceCapError, InexactBaseError, ValueError, OverflowError) as exc:
        stderr.write(f"engine error: {exc}\n")
        return EXIT_ENGINE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="hsdim", description="Covering numbers, premeasures and dimension estimates.")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="JSON run config; flags override its entries")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--exact-cap", type=int, help="max points for exhaustive covers")
        p.add_argument("--cell-cap", type=int, help="max cube count whose cells are listed")
        p.add_argument("--seed", type=int)

    def scales(p):
        p.add_argument("--set", help="set description: JSON file or inline JSON")
        p.add_argument("--base", type=int)
        p.add_argument("--levels", help="level range 'a..b' or list 'a,b,c'")
        p.add_argument("--radii", help="comma-separated radii, e.g. 1/8,1/16")
        p.add_argument("--scales", help="'deltas' for harmonic sets")
        p.add_argument("--mode", choices=["auto", "exact", "greedy"])

    g = sub.add_parser("generate", help="write a set description")
    common(g)
    g.add_argument("kind", choices=["cantor", "harmonic", "schedule-set", "schedule", "random", "product"])
    g.add_argument("--base", type=int)
    g.add_argument("--digits")
    g.add_argument("--depth", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--part", choices=["A", "B"])
    g.add_argument("--schedule")
    g.add_argument("--blocks", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--dim", type=int, choices=[1, 2])
    g.add_argument("--left")
    g.add_argument("--right")

    c = sub.add_parser("count", help="covering counts as CSV (scale,count,lower,upper)")
    common(c)
    scales(c)

    p = sub.add_parser("profile", help="premeasure values as CSV (t,scale,value)")
    common(p)
    scales(p)
    p.add_argument("--t", help="comma-separated exponents")

    e = sub.add_parser("estimate", help="dimension estimate as JSON")
    common(e)
    scales(e)
    e.add_argument("--t", help="comma-separated exponents for liminf values")
    e.add_argument("--fit", choices=["all", "liminf"])

    v = sub.add_parser("verify", help="run claim checks, JSON reports")
    common(v)
    v.add_argument("--suite", choices=["all", *SUITES])
    v.add_argument("--schedule", help="'default' or a schedule JSON file")

    r = sub.add_parser("run", help="run a JSON config")
    r.add_argument("--config", required=True)
    return parser


_EXTRA = ("digits", "depth", "n", "part", "blocks", "count", "dim", "left", "right")


def config_from_args(args):
    doc = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{args.config}: {exc}") from exc
        except OSError as exc:
            raise UsageError(f"cannot read {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise SchemaError("config must be a JSON object")
        extra = doc.pop("extra", {})
        cfg_doc = dict(doc)
        if args.command != "run":
            cfg_doc["command"] = args.command
    else:
        extra = {}
        cfg_doc = {"command": args.command}
    names = {f.name for f in fields(RunConfig)} - {"command", "extra"}
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            cfg_doc[name] = value
    for name in _EXTRA:
        value = getattr(args, name, None)
        if value is not None:
            extra[name] = value
    cfg = RunConfig.from_json(cfg_doc)
    cfg.extra = extra
    return cfg


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        cfg = config_from_args(args)
    except (UsageError, SchemaError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_SCHEMA
    return run(cfg, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
