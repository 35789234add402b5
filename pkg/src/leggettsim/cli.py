"""Command-line front end.

Subcommands: sweep, verify, thresholds, report, simulate.  Angles are
degrees at the CLI boundary and radians internally.  Exit codes: 0 ok,
1 verification failure, 2 usage/config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

from . import expsim, geometry, inequalities, oracle, qstate

PUBLISHED_VALUES = (
    {"kind": "i26", "dataset": "raw", "value": 6.136, "sigma": 0.034},
    {"kind": "i26", "dataset": "corrected", "value": 6.382, "sigma": 0.035},
    {"kind": "i28", "dataset": "raw", "value": 8.323, "sigma": 0.045},
    {"kind": "i28", "dataset": "corrected", "value": 8.729, "sigma": 0.047},
)

SWEEP_COLUMNS = (
    "phi_deg",
    "I_analytic",
    "bound",
    "I_raw",
    "sigma_raw",
    "I_corrected",
    "sigma_corrected",
    "sigmas_violation_raw",
    "sigmas_violation_corrected",
    "violated",
    "marginal",
)


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    inequality: str = "i26"
    bell: str = "phi_minus"
    visibility: float = 1.0
    phi_start: float = 0.0
    phi_stop: float = 90.0
    steps: int = 61
    shots: int = 0  # 0 is the analytic-only sentinel
    seed: int = 0
    correct: bool = False
    f0_nuclear: float = 1.0
    f1_nuclear: float = 1.0
    f0_electron: float = 1.0
    f1_electron: float = 1.0
    out: str = ""
    format: str = "csv"

    def validate(self):
        if self.inequality not in inequalities.KINDS:
            raise UsageError(f"inequality: unknown kind {self.inequality!r}")
        if self.bell not in qstate.BELL_KINDS:
            raise UsageError(f"bell: unknown Bell state {self.bell!r}")
        if not 0.0 <= self.visibility <= 1.0:
            raise UsageError(f"visibility: must lie in [0, 1], got {self.visibility}")
        if not 0.0 <= self.phi_start <= self.phi_stop <= 180.0:
            raise UsageError(
                f"phi range: need 0 <= start <= stop <= 180, got "
                f"[{self.phi_start}, {self.phi_stop}]"
            )
        if self.steps < 1:
            raise UsageError(f"steps: must be >= 1, got {self.steps}")
        if self.shots < 0:
            raise UsageError(f"shots: must be >= 0, got {self.shots}")
        for name in ("f0_nuclear", "f1_nuclear", "f0_electron", "f1_electron"):
            f = getattr(self, name)
            if not 0.5 < f <= 1.0:
                raise UsageError(f"{name}: must lie in (0.5, 1], got {f}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"format: must be csv or json, got {self.format!r}")

    def readout_model(self) -> expsim.ReadoutModel:
        return expsim.ReadoutModel.from_fidelities(
            self.f0_nuclear, self.f1_nuclear, self.f0_electron, self.f1_electron
        )

    @classmethod
    def load(cls, args) -> "RunConfig":
        values = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    data = json.load(fh)
            except OSError as exc:
                raise UsageError(f"config: cannot read {args.config}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise UsageError(f"config: {args.config}: {exc}") from exc
            known = {f.name for f in fields(cls)}
            for key, value in data.items():
                if key not in known:
                    raise UsageError(f"config: unknown field {key!r}")
                values[key] = value
        for f in fields(cls):
            override = getattr(args, f.name, None)
            if override is not None:
                values[f.name] = override
        try:
            config = cls(**values)
        except TypeError as exc:
            raise UsageError(f"config: {exc}") from exc
        config.validate()
        return config


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_table(rows, columns, fmt: str, out_path: str):
    if fmt == "json":
        text = json.dumps([dict(zip(columns, row)) for row in rows], indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(cell) for cell in row) for row in rows]
        text = "\n".join(lines) + "\n"
    _write_text(text, out_path)


def _write_text(text: str, out_path: str):
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise IOError(f"cannot write {out_path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    config = RunConfig.load(args)
    kind = inequalities.KINDS[config.inequality]
    canonical = geometry.canonical_i26 if kind.tag == "i26" else geometry.canonical_i28

    state = tensor = None
    if config.shots > 0:
        state = qstate.werner(config.visibility, config.bell)
        tensor = qstate.correlation_tensor(state)
        readout = config.readout_model()

    rows = []
    for i in range(config.steps):
        if config.steps == 1:
            phi_deg = config.phi_start
        else:
            phi_deg = config.phi_start + i * (config.phi_stop - config.phi_start) / (
                config.steps - 1
            )
        phi = math.radians(phi_deg)
        analytic = inequalities.quantum_value(kind, phi, config.visibility)
        if config.shots == 0:
            rows.append(
                (
                    phi_deg,
                    analytic,
                    kind.bound,
                    None,
                    None,
                    None,
                    None,
                    None,
                    None,
                    analytic > kind.bound,
                    None,
                )
            )
            continue
        settings = geometry.adapt_to_state(tensor, canonical(phi))
        result = expsim.run_experiment(
            state,
            settings,
            kind,
            shots_per_setting=config.shots,
            seed=config.seed + 1000003 * i,
            readout=readout,
            correct=config.correct,
        )
        if config.correct:
            value, sigma = result.corrected.value, result.sigma_corrected
        else:
            value, sigma = result.raw.value, result.sigma_raw
        rows.append(
            (
                phi_deg,
                analytic,
                kind.bound,
                result.raw.value,
                result.sigma_raw,
                result.corrected.value if config.correct else None,
                result.sigma_corrected if config.correct else None,
                result.sigmas_violation_raw,
                result.sigmas_violation_corrected if config.correct else None,
                value > kind.bound,
                abs(value - kind.bound) < 3.0 * sigma,
            )
        )
    _write_table(rows, SWEEP_COLUMNS, config.format, config.out)
    return 0


def cmd_verify(args) -> int:
    if args.inequality not in inequalities.KINDS:
        raise UsageError(f"inequality: unknown kind {args.inequality!r}")
    if args.grid_size < 50:
        raise UsageError(f"grid-size: must be >= 50, got {args.grid_size}")
    if not args.phi:
        raise UsageError("phi: at least one angle required")
    canonical = (
        geometry.canonical_i26 if args.inequality == "i26" else geometry.canonical_i28
    )
    reports = []
    all_pass = True
    for phi_deg in args.phi:
        if not 0.0 <= phi_deg <= 180.0:
            raise UsageError(f"phi: must lie in [0, 180], got {phi_deg}")
        report = oracle.verify_bound(canonical(math.radians(phi_deg)), args.grid_size)
        reports.append(report.to_json_dict())
        all_pass = all_pass and report.passed
    _write_text(json.dumps(reports, indent=2) + "\n", args.out or "")
    return 0 if all_pass else 1


def cmd_thresholds(args) -> int:
    if args.inequality not in inequalities.KINDS:
        raise UsageError(f"inequality: unknown kind {args.inequality!r}")
    kind = inequalities.KINDS[args.inequality]
    phi_star, max_value = inequalities.max_violation(kind, 1.0)
    payload = {
        "v_min": inequalities.v_min(kind),
        "f_min": inequalities.f_min(kind),
        "phi_star_deg": math.degrees(phi_star),
        "max_value": max_value,
    }
    _write_text(json.dumps(payload, indent=2) + "\n", getattr(args, "out", "") or "")
    return 0


def cmd_report(args) -> int:
    if args.from_file:
        try:
            with open(args.from_file) as fh:
                entries = json.load(fh)
        except OSError as exc:
            raise IOError(f"cannot read {args.from_file}: {exc}") from exc
    else:
        entries = [dict(e) for e in PUBLISHED_VALUES]
    rows = []
    for entry in entries:
        kind = inequalities.KINDS[entry["kind"]]
        nsig = inequalities.sigma_violation(entry["value"], entry["sigma"], kind)
        rows.append(
            {
                "kind": entry["kind"],
                "dataset": entry.get("dataset", ""),
                "value": entry["value"],
                "sigma": entry["sigma"],
                "bound": kind.bound,
                "sigmas_violation": nsig,
            }
        )
    if args.json:
        _write_text(json.dumps(rows, indent=2) + "\n", args.out or "")
    else:
        lines = ["kind dataset value sigma bound sigmas_violation"]
        for r in rows:
            lines.append(
                f"{r['kind']} {r['dataset']} {r['value']:.3f} {r['sigma']:.3f} "
                f"{r['bound']:.0f} {r['sigmas_violation']:.2f}"
            )
        _write_text("\n".join(lines) + "\n", args.out or "")
    return 0


def cmd_simulate(args) -> int:
    config = RunConfig.load(args)
    if config.shots < 1:
        raise UsageError("shots: simulate requires shots >= 1")
    kind = inequalities.KINDS[config.inequality]
    canonical = geometry.canonical_i26 if kind.tag == "i26" else geometry.canonical_i28
    state = qstate.werner(config.visibility, config.bell)
    tensor = qstate.correlation_tensor(state)
    settings = geometry.adapt_to_state(tensor, canonical(math.radians(args.phi)))
    result = expsim.run_experiment(
        state,
        settings,
        kind,
        shots_per_setting=config.shots,
        seed=config.seed,
        readout=config.readout_model(),
        correct=config.correct,
    )
    _write_text(json.dumps(result.to_json_dict(), indent=2) + "\n", config.out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _add_run_options(sub):
    sub.add_argument("--config", default=None, help="JSON config file")
    sub.add_argument("--inequality", choices=("i26", "i28"), default=None)
    sub.add_argument("--bell", choices=qstate.BELL_KINDS, default=None)
    sub.add_argument("--visibility", type=float, default=None)
    sub.add_argument("--shots", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--correct", action="store_const", const=True, default=None)
    sub.add_argument("--f0-nuclear", dest="f0_nuclear", type=float, default=None)
    sub.add_argument("--f1-nuclear", dest="f1_nuclear", type=float, default=None)
    sub.add_argument("--f0-electron", dest="f0_electron", type=float, default=None)
    sub.add_argument("--f1-electron", dest="f1_electron", type=float, default=None)
    sub.add_argument("--out", default=None)
    sub.add_argument("--format", choices=("csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leggettsim")
    subs = parser.add_subparsers(dest="command", required=True)

    sweep = subs.add_parser("sweep", help="phi sweep; shots=0 is analytic-only")
    _add_run_options(sweep)
    sweep.add_argument("--phi-start", dest="phi_start", type=float, default=None)
    sweep.add_argument("--phi-stop", dest="phi_stop", type=float, default=None)
    sweep.add_argument("--steps", type=int, default=None)
    sweep.set_defaults(func=cmd_sweep)

    verify = subs.add_parser("verify", help="brute-force bound certification")
    verify.add_argument("--inequality", choices=("i26", "i28"), required=True)
    verify.add_argument("--phi", type=float, action="append", help="degrees; repeatable")
    verify.add_argument("--grid-size", dest="grid_size", type=int, default=500)
    verify.add_argument("--out", default=None)
    verify.set_defaults(func=cmd_verify)

    thresholds = subs.add_parser("thresholds", help="visibility/fidelity thresholds")
    thresholds.add_argument("--inequality", required=True)
    thresholds.add_argument("--out", default=None)
    thresholds.set_defaults(func=cmd_thresholds)

    report = subs.add_parser("report", help="sigma arithmetic on published values")
    report.add_argument("--json", action="store_true")
    report.add_argument("--from-file", dest="from_file", default=None)
    report.add_argument("--out", default=None)
    report.set_defaults(func=cmd_report)

    simulate = subs.add_parser("simulate", help="single-phi experiment simulation")
    _add_run_options(simulate)
    simulate.add_argument("--phi", type=float, required=True, help="degrees")
    simulate.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
