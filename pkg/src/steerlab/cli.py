"""Command-line interface: ``steerlab verdict|sweep|table|certify``.

Exit status is 0 on success (whatever the verdict), 2 for unusable input
and 3 when a numerical step fails. Options resolve as command-line flag,
then ``--config`` JSON file, then built-in default.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import criteria as crit
from .errors import DomainError, SteerlabError
from .lhs_oracle import certify_no_violation
from .moments import QuadratureSetting, default_settings
from .states import SWEEP_PARAM, Werner, make_state, parse_state

SCHEMA_LINE = "# steerlab-schema v1"
ROW_COLUMNS = ("family", "param", "criterion", "lhs", "rhs", "ratio", "steerable",
               "clamped_mass", "grid_n", "box_halfwidth")
TABLE_COLUMNS = ("family", "param", "reid", "entropic", "sum", "clamped_mass", "grid_n",
                 "box_halfwidth", "status")

DEFAULTS = {
    "grid_n": None,
    "box_halfwidth": None,
    "out": None,
    "format": "csv",
    "seed": 42,
    "method": "analytic",
    "criterion": "sum",
    "criteria": "reid,entropic,sum",
    "samples": 10_000,
    "kind": "cv",
    "plot_dir": None,
    "theta1": None,
    "theta2": None,
    "phi1": None,
    "phi2": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(x, ".12g")


def _common(parser):
    g = parser.add_argument_group("global options")
    g.add_argument("--grid-n", type=int, help="quadrature nodes per axis (odd, >= 33)")
    g.add_argument("--box-halfwidth", type=float, help="integration box half-width")
    g.add_argument("--out", help="output file (default: standard output)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--seed", type=int)
    g.add_argument("--config", help="flat JSON file with option values")


def _angles(parser):
    for name in ("theta1", "theta2", "phi1", "phi2"):
        parser.add_argument(f"--{name}", type=float, help="measurement angle in radians")


def build_parser():
    parser = _Parser(prog="steerlab", description="EPR-steering criteria for CV and qubit states")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verdict", help="evaluate one criterion on one state")
    _common(p)
    p.add_argument("--state", help='state string, e.g. "tmsv:r=0.5" or "lg:m=0,n=2"')
    p.add_argument("--criterion", choices=crit.CRITERIA)
    p.add_argument("--method", choices=("analytic", "quadrature"))
    _angles(p)

    p = sub.add_parser("sweep", help="evaluate criteria over a parameter range")
    _common(p)
    p.add_argument("--state", help='family with fixed parameters, e.g. "werner" or "lg:m=0"')
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--values", help="explicit comma-separated parameter list")
    p.add_argument("--criteria", help="comma-separated subset of " + ",".join(crit.CRITERIA))
    p.add_argument("--method", choices=("analytic", "quadrature"))
    p.add_argument("--plot-dir", help="directory for <family>_<criterion>.dat plot data")
    _angles(p)

    p = sub.add_parser("table", help="reproduce a violation-ratio table by quadrature")
    _common(p)
    p.add_argument("which", choices=sorted(crit.TABLE_POINTS))

    p = sub.add_parser("certify", help="check the sum inequality on random LHS models")
    _common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--kind", choices=("cv", "qubit"))
    return parser


def resolve_options(args):
    """Merge command-line values over config-file values over defaults."""
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(config, dict) or any(isinstance(v, (dict, list)) for v in config.values()):
            raise UsageError("config file must be a flat JSON object")
        config = {k.replace("-", "_"): v for k, v in config.items()}
    opts = dict(DEFAULTS)
    opts.update(config)
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    return opts


def param_grid(opts):
    if opts.get("values") not in (None, ""):
        vals = opts["values"]
        items = vals if isinstance(vals, list) else str(vals).split(",")
        try:
            return [float(v) for v in items if str(v).strip()]
        except ValueError:
            raise UsageError(f"bad --values {vals!r}") from None
    start, stop, step = (opts.get(k) for k in ("start", "stop", "step"))
    if None in (start, stop, step):
        raise UsageError("sweep needs --values or all of --start, --stop, --step")
    start, stop, step = float(start), float(stop), float(step)
    if not step > 0:
        raise UsageError("--step must be positive")
    if start > stop:
        raise UsageError("--start must not exceed --stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _resolution(opts):
    n, L = opts.get("grid_n"), opts.get("box_halfwidth")
    if n is not None and (int(n) < 33 or int(n) % 2 == 0):
        raise UsageError("--grid-n must be odd and at least 33")
    if L is not None and not float(L) > 0:
        raise UsageError("--box-halfwidth must be positive")
    return crit.Resolution(None if n is None else int(n), None if L is None else float(L))


def _settings(opts, desc):
    given = {k: opts[k] for k in ("theta1", "theta2", "phi1", "phi2") if opts.get(k) is not None}
    if not given or isinstance(desc, Werner):
        return None
    base = default_settings(desc)
    return QuadratureSetting(**{**base.__dict__, **{k: float(v) for k, v in given.items()}})


def _criteria_list(opts):
    raw = opts.get("criteria")
    items = raw if isinstance(raw, list) else str(raw or "").split(",")
    items = [c.strip() for c in items if c.strip()]
    if not items:
        raise UsageError("criteria list is empty")
    bad = [c for c in items if c not in crit.CRITERIA]
    if bad:
        raise UsageError(f"unknown criteria {bad}")
    return items


def _check_supported(family, criteria):
    allowed = crit.WERNER_CRITERIA if family == "werner" else crit.CV_CRITERIA
    bad = [c for c in criteria if c not in allowed]
    if bad:
        raise UsageError(f"criteria {bad} are not defined for family {family!r}")


def _row_record(row):
    v = row.verdict
    if v is None:
        return {"family": row.family, "param": row.param, "criterion": row.criterion,
                "lhs": math.nan, "rhs": math.nan, "ratio": math.nan, "steerable": "error",
                "clamped_mass": None, "grid_n": None, "box_halfwidth": None, "error": row.error}
    return {"family": row.family, "param": row.param, "criterion": row.criterion, "lhs": v.lhs,
            "rhs": v.rhs, "ratio": v.ratio, "steerable": v.steerable,
            "clamped_mass": v.clamped_mass, "grid_n": v.grid_n, "box_halfwidth": v.box_halfwidth}


def _param_value(family, value):
    return int(value) if SWEEP_PARAM[family] in ("n", "m") else value


def render(records, columns, fmt):
    if fmt == "json":
        clean = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in r.items()}
                 for r in records]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([r[c] if isinstance(r[c], str) else _fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_output(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def cmd_verdict(opts):
    if not opts.get("state"):
        raise UsageError("verdict needs --state")
    try:
        desc = parse_state(opts["state"])
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    criterion = opts["criterion"]
    _check_supported(desc.family, [criterion])
    resolution = _resolution(opts)
    settings = _settings(opts, desc)
    v = crit.verdict(desc, criterion, settings, opts["method"], resolution)
    row = crit.SweepRow(desc.family, _param_value(desc.family, desc.param), criterion, v)
    write_output(render([_row_record(row)], ROW_COLUMNS, opts["format"]), opts.get("out"))
    return 0


def _fixed_params(state):
    family, _, rest = str(state).partition(":")
    family = family.strip().lower()
    if family not in SWEEP_PARAM:
        raise UsageError(f"unknown family {family!r}")
    fixed = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq:
            raise UsageError(f"bad fixed parameter {item!r}")
        try:
            fixed[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"bad fixed parameter {item!r}") from None
    try:
        make_state(family, **fixed)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    fixed.pop(SWEEP_PARAM[family], None)
    return family, fixed


def cmd_sweep(opts):
    if not opts.get("state"):
        raise UsageError("sweep needs --state (family name, optionally with fixed parameters)")
    family, fixed = _fixed_params(opts["state"])
    criteria = _criteria_list(opts)
    _check_supported(family, criteria)
    params = [_param_value(family, p) for p in param_grid(opts)]
    resolution = _resolution(opts)
    settings = None
    if family != "werner":
        settings = _settings(opts, make_state(family, **fixed))
    rows = crit.sweep(family, params, criteria, fixed, settings, opts["method"], resolution)
    records = [_row_record(r) for r in rows]
    write_output(render(records, ROW_COLUMNS, opts["format"]), opts.get("out"))
    if opts.get("plot_dir"):
        write_plot_data(rows, family, criteria, opts["plot_dir"])
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"steerlab: {family} {r.param} {r.criterion}: {r.error}", file=sys.stderr)
    return 3 if failed else 0


def write_plot_data(rows, family, criteria, directory):
    for c in criteria:
        lines = [f"# {family} {c}: parameter violation_ratio"]
        lines += [f"{_fmt(r.param)} {_fmt(r.verdict.ratio)}" for r in rows
                  if r.criterion == c and r.verdict is not None]
        write_output("\n".join(lines) + "\n", Path(directory) / f"{family}_{c}.dat")


def cmd_table(opts):
    rows = crit.reproduce_table(opts["which"], _resolution(opts))
    records = []
    for r in rows:
        rec = {c: getattr(r, c) for c in TABLE_COLUMNS if c != "status"}
        rec["param"] = _param_value(r.family, r.param)
        rec["status"] = "failed" if r.error else "ok"
        records.append(rec)
    write_output(render(records, TABLE_COLUMNS, opts["format"]), opts.get("out"))
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"steerlab: {r.family} {r.param}: {r.error}", file=sys.stderr)
    return 3 if failed else 0


def cmd_certify(opts):
    samples = int(opts["samples"])
    if samples < 1000:
        raise UsageError("--samples must be at least 1000")
    report = certify_no_violation(samples, int(opts["seed"]), opts["kind"])
    write_output(report.to_json() + "\n", opts.get("out"))
    return 0


COMMANDS = {"verdict": cmd_verdict, "sweep": cmd_sweep, "table": cmd_table, "certify": cmd_certify}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        opts = resolve_options(args)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except (SteerlabError, ArithmeticError) as exc:
        print(f"steerlab: numerical failure: {exc}", file=sys.stderr)
        return 3
