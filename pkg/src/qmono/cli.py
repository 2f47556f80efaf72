"""Command-line front end.

Subcommands: measures, scan, surface, path, sample, bell.  Options can also
come from a ``key = value`` config file ('#' starts a comment); flags given
on the command line win.  Exit codes: 0 success, 1 numeric failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bell import mk_optimize
from .monogamy import delta_d
from .qcore import load_state
from .scan import (
    FAMILY_PARAMS,
    find_zero_crossings,
    grid_scan,
    path_trace,
    sample_experiment,
    surface_zero,
    write_csv,
)


@dataclass(frozen=True)
class RunConfig:
    """Effective options of one invocation, canonicalizable for audit."""

    subcommand: str
    options: tuple[tuple[str, object], ...]

    def canonical_text(self) -> str:
        lines = [f"subcommand = {self.subcommand}"]
        for key, value in sorted(self.options):
            if value is None:
                continue
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "func", "config")}
        return cls(ns.subcommand, tuple(sorted(opts.items())))


def parse_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit2(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


class SystemExit2(Exception):
    """Usage error carried to the exit-code mapping."""


def _axis_values(spec: str) -> np.ndarray:
    """Parse 'start:stop:count' (inclusive linspace) or a single value."""
    parts = spec.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) == 3:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise SystemExit2(f"axis count must be >= 1 in {spec!r}")
        return np.linspace(start, stop, count)
    raise SystemExit2(f"axis spec {spec!r} is not 'value' or 'start:stop:count'")


def _float_fmt(x) -> str:
    return "" if x is None else f"{x:.9g}"


def _cmd_measures(ns) -> int:
    state = load_state(ns.state)
    report = delta_d(state, ns.nodal, seed=ns.seed, restarts=ns.restarts)
    text = report.to_json()
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_scan(ns) -> int:
    names = FAMILY_PARAMS[ns.family]
    specs = dict(kv.split("=", 1) for kv in ns.axis)
    unknown = set(specs) - set(names)
    if unknown:
        raise SystemExit2(f"unknown axis {sorted(unknown)} for family {ns.family!r}")
    missing = set(names) - set(specs)
    if missing:
        raise SystemExit2(f"missing axis {sorted(missing)} for family {ns.family!r}")
    axes = [(n, _axis_values(specs[n])) for n in names]
    records = grid_scan(
        ns.family, axes, epsilon=ns.epsilon, mk_mode=ns.mk,
        mk_restarts=ns.restarts, seed=ns.seed,
    )
    write_csv(records, ns.output)
    print(f"wrote {len(records)} records to {ns.output}")
    return 0


def _cmd_surface(ns) -> int:
    points = surface_zero(
        _axis_values(ns.theta), _axis_values(ns.kappa), xtol=ns.xtol
    )
    import csv as _csv

    with open(ns.output, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(
            ["theta", "kappa", "alpha_star", "delta_D", "ggm",
             "closed_form_residual", "in_domain"]
        )
        for p in points:
            w.writerow(
                [_float_fmt(p.theta), _float_fmt(p.kappa), _float_fmt(p.alpha_star),
                 _float_fmt(p.delta_d), _float_fmt(p.ggm),
                 _float_fmt(p.closed_form_residual),
                 "true" if p.in_closed_form_domain else "false"]
            )
    print(f"wrote {len(points)} surface points to {ns.output}")
    return 0


def _cmd_path(ns) -> int:
    records = path_trace(
        ns.id, ns.resolution, epsilon=ns.epsilon, mk_mode=ns.mk,
        mk_restarts=ns.restarts, seed=ns.seed,
    )
    write_csv(records, ns.output)
    flips = sum(
        1
        for a, b in zip(records, records[1:])
        if a.delta_d * b.delta_d < 0
    )
    print(f"wrote {len(records)} records to {ns.output}; delta_D sign changes: {flips}")
    return 0


def _cmd_sample(ns) -> int:
    summary = sample_experiment(
        ns.n, ns.seed, epsilon=ns.epsilon, jobs=ns.jobs, per_sample_path=ns.output
    )
    print(
        f"n={summary.n} seed={summary.seed} epsilon={summary.epsilon:g} "
        f"band_count={summary.band_count} "
        f"max_ggm_in_band={_float_fmt(summary.max_ggm_in_band) or 'n/a'} "
        f"max_ggm_overall={_float_fmt(summary.max_ggm_overall)}"
    )
    if ns.summary_json:
        data = {
            "n": summary.n,
            "seed": summary.seed,
            "epsilon": summary.epsilon,
            "band_count": summary.band_count,
            "max_ggm_in_band": summary.max_ggm_in_band,
            "max_ggm_overall": summary.max_ggm_overall,
            "delta_hist": summary.delta_hist,
            "band_ggm_hist": summary.band_ggm_hist,
        }
        with open(ns.summary_json, "w") as fh:
            json.dump(data, fh, indent=1)
    return 0


def _cmd_bell(ns) -> int:
    state = load_state(ns.state)
    value, settings = mk_optimize(state, restarts=ns.restarts, seed=ns.seed)
    data = {
        "mk_value": value,
        "violates": bool(abs(value) > 1.0),
        "settings_a": [list(map(float, v)) for v in settings.a],
        "settings_a_prime": [list(map(float, v)) for v in settings.a_prime],
    }
    text = json.dumps(data, indent=1)
    if ns.output:
        with open(ns.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmono",
        description="Quantum-correlation monogamy scores for tripartite states",
    )
    parser.add_argument("--version", action="version", version=f"qmono {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, seed=True, restarts=None):
        p.add_argument("--config", help="key = value options file; flags win")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed (determinism contract)")
        if restarts is not None:
            p.add_argument("--restarts", type=int, default=restarts, help="optimizer restarts")

    p = sub.add_parser("measures", help="monogamy report for one state file")
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("--nodal", default="A", help="nodal observer label")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    common(p, restarts=64)
    p.set_defaults(func=_cmd_measures)

    p = sub.add_parser("scan", help="grid sweep of a state family")
    p.add_argument("--family", required=True, choices=sorted(FAMILY_PARAMS))
    p.add_argument(
        "--axis", action="append", default=[], metavar="NAME=START:STOP:COUNT",
        help="one per family parameter; single values allowed",
    )
    p.add_argument("--epsilon", type=float, default=1e-4, help="zero-band half width")
    p.add_argument("--mk", choices=["closed", "optimize", "skip"], default=None)
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    common(p, restarts=24)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("surface", help="delta_D = 0 surface of the symmetric family")
    p.add_argument("--theta", required=True, metavar="START:STOP:COUNT")
    p.add_argument("--kappa", required=True, metavar="START:STOP:COUNT")
    p.add_argument("--xtol", type=float, default=1e-6, help="bisection width in alpha")
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    common(p, seed=False)
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("path", help="trace one interpolation path")
    p.add_argument("--id", required=True, choices=["ghz", "w-ghz"])
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--mk", choices=["optimize", "skip"], default="skip",
                   help="per-point MK optimization is expensive; default skip")
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    common(p, restarts=24)
    p.set_defaults(func=_cmd_path)

    p = sub.add_parser("sample", help="Haar-random sampling experiment")
    p.add_argument("-n", type=int, required=True, help="number of samples")
    p.add_argument("--epsilon", type=float, default=1e-3, help="zero-band half width")
    p.add_argument("--jobs", type=int, default=1, help="worker cap for chunked evaluation")
    p.add_argument("-o", "--output", help="per-sample CSV path")
    p.add_argument("--summary-json", help="write the summary as JSON here")
    common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bell", help="optimized MK value for one state file")
    p.add_argument("--state", required=True, help="JSON state file")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    common(p, restarts=100)
    p.set_defaults(func=_cmd_bell)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Inject config-file values as defaults; command-line flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise SystemExit2("--config needs a path")
    values = parse_config_file(argv[i + 1])
    # find the subparser to validate keys against its known destinations
    sub_actions = [a for a in parser._actions if isinstance(a, argparse._SubParsersAction)]
    subname = next((a for a in argv if not a.startswith("-")), None)
    if subname is None or subname not in sub_actions[0].choices:
        raise SystemExit2("--config requires a subcommand")
    subparser = sub_actions[0].choices[subname]
    known = {a.dest for a in subparser._actions}
    unknown = set(values) - known
    if unknown:
        raise SystemExit2(f"unknown config keys {sorted(unknown)}")
    converted = {}
    for key, raw in values.items():
        action = next(a for a in subparser._actions if a.dest == key)
        if action.type is not None:
            converted[key] = action.type(raw)
        elif isinstance(action, argparse._AppendAction):
            converted[key] = [raw]
        else:
            converted[key] = raw
    subparser.set_defaults(**converted)
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        ns = parser.parse_args(argv)
    except SystemExit2 as exc:
        print(f"qmono: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help/--version or usage error
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except SystemExit2 as exc:
        print(f"qmono: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"qmono: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
