"""Command-line front end; every subcommand writes one CSV table.

Exit codes: 0 success, 1 numeric/runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import analysis, montecarlo, oracles
from .core import AttackChain, ChannelNoise, assess
from .tables import SweepTable

COMMANDS = (
    "assess",
    "qber-curve",
    "lost-info",
    "phase2d",
    "phase3d",
    "simulate",
    "verify",
    "critical-p",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def probability(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{x!r} out of [0,1]")
    return x


def probability_list(text: str) -> tuple[float, ...]:
    parts = [s for s in text.split(",") if s.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(probability(s.strip()) for s in parts)


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"{n} must be >= 1")
    return n


def seed_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return n


def q_rule_name(text: str) -> str:
    if text != "uniform":
        raise argparse.ArgumentTypeError("only 'uniform' is accepted; use --q for explicit values")
    return text


# Option table per subcommand: dest -> (flag type, default).  A default of
# ``None`` with dest listed in REQUIRED means the value must come from a flag
# or the config file.
_P_GRID = {"p_min": (probability, 0.0), "p_max": (probability, 0.20), "p_steps": (positive_int, 200)}
OPTIONS: dict[str, dict[str, tuple[Any, Any]]] = {
    "assess": {"p": (probability, None), "omega": (probability_list, None)},
    "qber-curve": {"n_eves": (positive_int, 1), **_P_GRID, "p_max": (probability, 0.16)},
    "lost-info": {
        **_P_GRID,
        "p_max": (probability, 0.25),
        "omega": (probability, None),
        "q1": (probability_list, (0.0, 0.5, 1.0)),
    },
    "phase2d": {"n_eves": (positive_int, 1), **_P_GRID},
    "phase3d": {"p": (probability, None), "omega_steps": (positive_int, 50)},
    "simulate": {
        "photons": (positive_int, 1_000_000),
        "seed": (seed_int, 0),
        "p": (probability, None),
        "omega": (probability_list, None),
        "threads": (positive_int, 1),
    },
    "verify": {"n_eves": (positive_int, 3), "trials": (positive_int, 1000), "seed": (seed_int, 0)},
    "critical-p": {},
}
# commands taking --q / --q-rule
Q_COMMANDS = {"assess", "qber-curve", "phase2d", "phase3d", "simulate"}
REQUIRED = {
    "assess": ("p", "omega"),
    "lost-info": ("omega",),
    "phase3d": ("p",),
    "simulate": ("p", "omega"),
}


@dataclass
class CommandSpec:
    command: str
    options: dict[str, Any] = field(default_factory=dict)
    output: str | None = None  # None means stdout

    def __getattr__(self, name):
        try:
            return self.options[name]
        except KeyError:
            raise AttributeError(name) from None


def build_parser() -> _Parser:
    parser = _Parser(prog="bb84eve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        for dest, (typ, _) in OPTIONS[name].items():
            sp.add_argument("--" + dest.replace("_", "-"), dest=dest, type=typ, default=None)
        if name in Q_COMMANDS:
            sp.add_argument("--q", dest="q", type=probability_list, default=None)
            sp.add_argument("--q-rule", dest="q_rule", type=q_rule_name, default=None)
        sp.add_argument("--config", default=None, help="JSON file with flag values")
        sp.add_argument("-o", "--output", default=None, help="write CSV here instead of stdout")
    return parser


def _load_config(path: str, command: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}")
    if not isinstance(data, dict):
        raise UsageError(f"config {path!r} must hold a JSON object")
    known = dict(OPTIONS[command])
    if command in Q_COMMANDS:
        known["q"] = (probability_list, None)
        known["q_rule"] = (q_rule_name, None)
    values = {}
    for key, raw in data.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest == "command":
            continue
        if dest not in known:
            raise UsageError(f"config key {key!r} is not an option of {command}")
        text = ",".join(str(v) for v in raw) if isinstance(raw, list) else str(raw)
        try:
            values[dest] = known[dest][0](text)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"config key {key!r}: {exc}")
    return values


def parse_args(argv: Sequence[str]) -> CommandSpec:
    """Parse and validate a command line.

    Raises:
        UsageError: on any validation failure (exit code 2).
    """
    argv = list(argv)
    if not argv:
        raise UsageError(f"bb84eve: error: a command is required ({', '.join(COMMANDS)})")
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError("bb84eve: error: a command is required")
    command = ns.command
    opts = {k: v for k, v in vars(ns).items() if k not in ("command", "config", "output")}
    if ns.config:
        for dest, value in _load_config(ns.config, command).items():
            if opts.get(dest) is None:
                opts[dest] = value
    for dest, (_, default) in OPTIONS[command].items():
        if opts.get(dest) is None:
            opts[dest] = default
    prefix = f"bb84eve {command}: error:"
    for dest in REQUIRED.get(command, ()):
        if opts[dest] is None:
            raise UsageError(f"{prefix} --{dest.replace('_', '-')} is required")

    if command in Q_COMMANDS:
        if opts["q"] is not None and opts["q_rule"] is not None:
            raise UsageError(f"{prefix} --q and --q-rule are mutually exclusive")
        if opts["q"] is None and opts["q_rule"] is None:
            if command in ("assess", "simulate"):
                raise UsageError(f"{prefix} one of --q or --q-rule uniform is required")
            opts["q_rule"] = "uniform"
        if opts["q"] is not None:
            if abs(sum(opts["q"]) - 1.0) > 1e-9:
                raise UsageError(f"{prefix} --q values must sum to 1")
            n = {
                "assess": lambda: len(opts["omega"]),
                "simulate": lambda: len(opts["omega"]),
                "qber-curve": lambda: opts["n_eves"],
                "phase2d": lambda: opts["n_eves"],
                "phase3d": lambda: 3,
            }[command]()
            if len(opts["q"]) != n + 1:
                raise UsageError(
                    f"{prefix} --q needs {n + 1} values for {n} eavesdropper(s), got {len(opts['q'])}"
                )
    if "p_min" in opts and opts["p_min"] > opts["p_max"]:
        raise UsageError(f"{prefix} --p-min exceeds --p-max")
    if "p_min" in opts and opts["p_steps"] > 1 and opts["p_min"] == opts["p_max"]:
        raise UsageError(f"{prefix} a grid with several steps needs --p-min < --p-max")
    if command == "verify" and opts["n_eves"] > 12:
        raise UsageError(f"{prefix} --n-eves is limited to 12 for enumeration")
    return CommandSpec(command, opts, ns.output)


def _q_rule(spec: CommandSpec) -> analysis.QRule:
    if spec.q is not None:
        return analysis.QRule.explicit(spec.q)
    return analysis.UNIFORM


def _chain(spec: CommandSpec) -> AttackChain:
    return AttackChain(spec.omega, _q_rule(spec).qs_for(len(spec.omega)))


def _p_grid(spec: CommandSpec):
    return analysis.grid(spec.p_min, spec.p_max, spec.p_steps)


def execute(spec: CommandSpec) -> tuple[SweepTable, int]:
    """Compute the table for a command; the int is the exit code to report."""
    cmd = spec.command
    if cmd == "assess":
        a = assess(ChannelNoise(spec.p), _chain(spec))
        table = SweepTable(("i_ab", "i_ae_max", "h_delta", "i_lost", "p_err", "secured"))
        table.append((a.i_ab, a.i_ae_max, a.h_delta, a.i_lost, a.added_error, a.secured))
        return table, 0
    if cmd == "qber-curve":
        return analysis.qber_curve(_p_grid(spec), spec.n_eves, _q_rule(spec)), 0
    if cmd == "lost-info":
        return analysis.lost_info_curve(_p_grid(spec), spec.omega, spec.q1), 0
    if cmd == "phase2d":
        return analysis.phase_boundary_2d(_p_grid(spec), spec.n_eves, _q_rule(spec)), 0
    if cmd == "phase3d":
        omegas = analysis.grid(0.0, 1.0, spec.omega_steps)
        qs = _q_rule(spec).qs_for(3)
        return analysis.phase_surface_3d(omegas, omegas, spec.p, qs), 0
    if cmd == "simulate":
        chain = _chain(spec)
        est = montecarlo.run(
            montecarlo.SimConfig(spec.photons, spec.seed), spec.p, chain, workers=spec.threads
        )
        report = montecarlo.compare_to_closed_form(est, spec.p, chain)
        table = SweepTable(("party", "agreement_hat", "stderr", "z_score"))
        for row in report.rows:
            table.append((row.party, row.hat, row.stderr, row.z))
        return table, 0
    if cmd == "verify":
        results = oracles.run_checks(spec.n_eves, spec.trials, spec.seed)
        table = SweepTable(("check", "trials", "max_abs_error", "passed"))
        for r in results:
            table.append((r.check, r.trials, r.max_abs_error, r.passed))
        return table, 0 if all(r.passed for r in results) else 1
    if cmd == "critical-p":
        return SweepTable(("p_critical",), [(analysis.critical_noise_no_attack(),)]), 0
    raise UsageError(f"bb84eve: error: unknown command {cmd!r}")


def run_command(spec: CommandSpec) -> int:
    try:
        table, code = execute(spec)
    except (montecarlo.SimulationError, analysis.NoThresholdError, ArithmeticError) as exc:
        print(f"bb84eve {spec.command}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"bb84eve {spec.command}: error: {exc}", file=sys.stderr)
        return 2
    text = table.to_csv()
    if spec.output:
        with open(spec.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        spec = parse_args(argv)
    except UsageError as exc:
        print(str(exc).splitlines()[0], file=sys.stderr)
        return 2
    return run_command(spec)


if __name__ == "__main__":
    sys.exit(main())
