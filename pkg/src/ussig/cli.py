"""Command line front end.

One subcommand per protocol runs an honest execution or a named attack
and emits a delimited report (JSON lines or CSV) with a header echoing
the full configuration. ``attack --config`` replays such an echoed
configuration verbatim. ``sweep`` crosses up to two parameter ranges,
tabulates the runs, and renders a figure next to the output file.

Exit codes: 0 success, 1 configuration error, 2 an empirical frequency
exceeded its analytic bound, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from ussig.harness import (
    AttackSpec,
    TrialReport,
    run_attack,
    run_honest,
    transferability_experiment,
)
from ussig.reports import header_record, render_report, render_sweep_figure

_ATTACKS = {
    "p2": ("none", "repudiate", "forge"),
    "mqds": ("none", "repudiate", "forge", "transfer"),
    "gc-qds": ("none", "forge", "tamper-keys", "transfer"),
    "hanaoka": ("none", "forge"),
}

_PARAM_FLAGS = {
    "p2": ("L", "s_a", "s_v", "inject", "noise"),
    "mqds": ("L", "alpha", "s_a", "s_v", "inject", "measurement",
             "symmetrise", "noise"),
    "gc-qds": ("M", "L", "T", "code", "code_m", "cross_rounds", "noise",
               "s_a", "s_v", "overlap"),
    "hanaoka": ("q", "n", "omega", "psi", "verifiers"),
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this harness reserves 2
    for bound violations, so parse errors surface as ValueError and the
    caller maps them to exit code 1."""

    def error(self, message):
        raise ValueError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--out", default="-",
                        help="output path, '-' for stdout (default)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _add_protocol_flags(parser: argparse.ArgumentParser, protocol: str) -> None:
    flags = _PARAM_FLAGS[protocol]
    if "L" in flags:
        parser.add_argument("--L", type=int,
                            default={"p2": 64, "mqds": 200, "gc-qds": 8}[protocol])
    if "s_a" in flags:
        parser.add_argument("--sa", dest="s_a", type=float, default=0.0)
    if "s_v" in flags:
        parser.add_argument("--sv", dest="s_v", type=float,
                            default={"p2": 0.1, "mqds": 0.05,
                                     "gc-qds": 0.2}[protocol])
    if "inject" in flags:
        parser.add_argument("--inject", type=int, default=None,
                            help="planted mismatches (default: smallest "
                                 "count the far threshold rejects)")
    if "noise" in flags:
        parser.add_argument("--noise", type=float, default=0.0)
    if protocol == "mqds":
        parser.add_argument("--alpha", type=float, default=1.0)
        parser.add_argument("--measurement", choices=("usd", "use"),
                            default="usd")
        parser.add_argument("--symmetrise", choices=("multiport", "forwarding"),
                            default="multiport")
    if protocol == "gc-qds":
        parser.add_argument("--M", type=int, default=8)
        parser.add_argument("--T", type=int, default=1)
        parser.add_argument("--code", choices=("identity", "hadamard", "random"),
                            default="identity")
        parser.add_argument("--code-m", dest="code_m", type=int, default=None)
        parser.add_argument("--cross-rounds", dest="cross_rounds", type=int,
                            default=1)
        parser.add_argument("--overlap", type=float, default=0.0,
                            help="state overlap handed out by a tampering "
                                 "signer (tamper-keys only)")
    if protocol == "hanaoka":
        parser.add_argument("--q", type=int, default=11)
        parser.add_argument("--n", type=int, default=3)
        parser.add_argument("--omega", type=int, default=1)
        parser.add_argument("--psi", type=int, default=1)
        parser.add_argument("--verifiers", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="ussig",
                     description="Simulators and attack harness for "
                                 "unconditionally secure signature protocols.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    for protocol in _ATTACKS:
        p = sub.add_parser(protocol)
        p.add_argument("--attack", choices=_ATTACKS[protocol], default="none")
        _add_common(p)
        _add_protocol_flags(p, protocol)

    replay = sub.add_parser("attack", help="replay an echoed configuration")
    replay.add_argument("--config", required=True,
                        help="JSON file with protocol, attack, params, "
                             "trials, seed")
    replay.add_argument("--out", default="-")
    replay.add_argument("--format", choices=("json", "csv"), default=None)

    sweep = sub.add_parser("sweep", help="cross up to two parameter ranges")
    sweep.add_argument("protocol", choices=tuple(_ATTACKS))
    sweep.add_argument("--attack", default="forge")
    sweep.add_argument("--param", action="append", default=[],
                       metavar="NAME=V1,V2,...",
                       help="swept parameter (repeat once for a second)")
    sweep.add_argument("--set", action="append", default=[],
                       metavar="NAME=VALUE", help="fixed parameter override")
    sweep.add_argument("--max-runs", type=int, default=64)
    sweep.add_argument("--no-plot", action="store_true")
    _add_common(sweep)
    return parser


def _coerce(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_assignment(text: str) -> tuple[str, list]:
    name, _, values = text.partition("=")
    if not name or not values:
        raise ValueError(f"expected NAME=VALUE[,VALUE...], got {text!r}")
    return name, [_coerce(v) for v in values.split(",")]


def _gather_params(args, protocol: str) -> dict:
    params = {}
    for name in _PARAM_FLAGS[protocol]:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    return params


def _execute(protocol: str, attack: str, params: dict, trials: int, seed: int):
    if attack == "none":
        return run_honest(protocol, params, trials, seed)
    if attack == "transfer":
        return transferability_experiment(protocol, params, trials, seed)
    spec = AttackSpec(protocol=protocol, kind=attack, params=params,
                      trials=trials, seed=seed)
    return run_attack(spec)


def _write_out(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit(reports, protocol, attack, trials, seed, fmt, out,
          swept=None, plot=False) -> int:
    records = [r.to_record() for r in reports]
    config = {
        "protocol": protocol,
        "attack": attack,
        "params": records[0]["params"] if len(records) == 1 else None,
        "trials": trials,
        "seed": seed,
        "format": fmt,
    }
    if config["params"] is None:
        del config["params"]
    text = render_report(records, fmt, header_record(seed, config))
    _write_out(text, out)
    if plot and swept and out != "-":
        render_sweep_figure(records, swept, str(Path(out).with_suffix(".png")))
    violated = any(isinstance(r, TrialReport) and r.within_bound() is False
                   for r in reports)
    return 2 if violated else 0


def _run_single(args) -> int:
    protocol = args.command
    params = _gather_params(args, protocol)
    report = _execute(protocol, args.attack, params, args.trials, args.seed)
    return _emit([report], protocol, args.attack, args.trials, args.seed,
                 args.format, args.out)


def _run_config(args) -> int:
    config = json.loads(Path(args.config).read_text())
    for key in ("protocol", "attack", "params", "trials", "seed"):
        if key not in config:
            raise ValueError(f"config is missing {key!r}")
    fmt = args.format or config.get("format", "json")
    report = _execute(config["protocol"], config["attack"], config["params"],
                      config["trials"], config["seed"])
    return _emit([report], config["protocol"], config["attack"],
                 config["trials"], config["seed"], fmt, args.out)


def _run_sweep(args) -> int:
    if not args.param:
        raise ValueError("sweep needs at least one --param")
    if len(args.param) > 2:
        raise ValueError("at most two parameters can be swept")
    if args.attack not in _ATTACKS[args.protocol]:
        raise ValueError(f"{args.protocol} does not support attack "
                         f"{args.attack!r}")
    swept = [_parse_assignment(p) for p in args.param]
    fixed = dict(_parse_assignment(s) for s in args.set)
    base = {name: values[0] for name, values in fixed.items()}
    combos = list(itertools.product(*(values for _, values in swept)))
    if len(combos) > args.max_runs:
        raise ValueError(f"{len(combos)} runs exceed --max-runs={args.max_runs}")
    reports = []
    for combo in combos:
        params = dict(base)
        params.update({name: value
                       for (name, _), value in zip(swept, combo)})
        reports.append(_execute(args.protocol, args.attack, params,
                                args.trials, args.seed))
    return _emit(reports, args.protocol, args.attack, args.trials, args.seed,
                 args.format, args.out, swept=[name for name, _ in swept],
                 plot=not args.no_plot)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "attack":
            return _run_config(args)
        if args.command == "sweep":
            return _run_sweep(args)
        return _run_single(args)
    except KeyError as exc:
        print(f"error: missing parameter {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001  (runtime failures map to 3)
        print(f"failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
