"""Command-line front end; a thin client of the service API.

Subcommands: check-code, sweep, teleport-demo, curve.  Without --server
the requests are dispatched to the service in-process, so no deployment
is needed for local runs.  Exit codes: 0 success, 2 usage/config/
validation, 3 I/O (including malformed code files), 4 numeric guard.

Flags may also be given in a config file of flat `key = value` lines
(--config); explicit flags override the file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from .client import ServiceClient, ServiceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_GUARD = 4

_ERROR_EXITS = {"config": EXIT_CONFIG, "validation": EXIT_CONFIG, "parse": EXIT_IO, "guard": EXIT_GUARD}

CSV_COLUMNS = ["seed", "model", "code", "n", "param1", "param2", "param3", "trials", "failures", "rate", "ci95"]


class CliError(Exception):
    def __init__(self, message: str, exit_code: int):
        self.exit_code = exit_code
        super().__init__(message)


def parse_code_source(source: str) -> dict:
    """--code values: library name, random:<n>,<k>, or file:<path>."""
    if source.startswith("random:"):
        try:
            n, k = (int(x) for x in source[len("random:"):].split(","))
        except ValueError as exc:
            raise CliError(f"bad random code spec {source!r}: {exc}", EXIT_CONFIG) from exc
        return {"kind": "random", "n": n, "k": k}
    if source.startswith("file:"):
        path = Path(source[len("file:"):])
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError(f"cannot read code file {path}: {exc}", EXIT_IO) from exc
        return {"kind": "text", "text": text, "label": path.name}
    return {"kind": "library", "name": source}


def parse_axis(value: str | None):
    """Rate flags: a scalar, or an inclusive start:end:step range."""
    if value is None:
        return None
    if ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise CliError(f"range syntax is start:end:step, got {value!r}", EXIT_CONFIG)
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise CliError(f"bad range {value!r}: {exc}", EXIT_CONFIG) from exc
        return {"start": start, "stop": stop, "step": step}
    try:
        return float(value)
    except ValueError as exc:
        raise CliError(f"bad rate {value!r}: {exc}", EXIT_CONFIG) from exc


def load_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}", EXIT_IO) from exc
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{line_no}: expected key = value", EXIT_CONFIG)
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def _format_number(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_format_number(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc}", EXIT_IO) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teleportec", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check-code", help="validate and inspect a code")
    check.add_argument("--code", required=True, help="bell_pair|five_qubit|four_one_two|random:<n>,<k>|file:<path>")
    check.add_argument("--seed", type=int, default=0)

    sweep = sub.add_parser("sweep", help="Monte Carlo sweep over a noise grid")
    sweep.add_argument("--config", help="flat key=value config file; flags override")
    sweep.add_argument("--model", choices=["erasure", "depolarizing"])
    sweep.add_argument("--code", action="append", help="repeatable code source")
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--out", help="output path (default stdout)")
    sweep.add_argument("--format", choices=["csv", "json"])
    for flag in ("--em", "--eb", "--dm", "--db", "--dp"):
        sweep.add_argument(flag, help="rate value or start:end:step range")

    demo = sub.add_parser("teleport-demo", help="trace one teleportation EC step")
    demo.add_argument("--code", required=True)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--model", choices=["erasure", "depolarizing"], default="erasure")
    for flag in ("--em", "--eb", "--dm", "--db", "--dp"):
        demo.add_argument(flag, type=float, default=0.0)
    demo.add_argument("--inject", help="Pauli string to inject as the incoming error")
    demo.add_argument("--dense", action="store_true", help="cross-check against the dense oracle")

    curve = sub.add_parser("curve", help="emit the analytic threshold boundary")
    curve.add_argument("--model", choices=["erasure", "depolarizing"], required=True)
    curve.add_argument("--resolution", type=int, default=51)
    curve.add_argument("--out")

    return parser


def cmd_check_code(client: ServiceClient, args) -> int:
    report = client.check_code(parse_code_source(args.code), seed=args.seed)
    print(f"code: {report['code']}")
    print(f"n={report['n']} l={report['l']} k={report['k']}")
    for row in report["rows"]:
        print(f"  {row}")
    if report["distance"] is not None:
        print(f"distance: {report['distance']}")
    else:
        print(f"distance: {report['distance_note']}")
    if report["logical_x"] is not None:
        print(f"logical X: {report['logical_x']}")
        print(f"logical Z: {report['logical_z']}")
    for entry in report["erasure_summary"]:
        print(
            f"erasures |S|={entry['size']}: {entry['correctable']}/{entry['total']} correctable"
        )
    return EXIT_OK


_SWEEP_DEFAULTS = {"model": "erasure", "format": "csv", "trials": None, "seed": None}


def cmd_sweep(client: ServiceClient, args) -> int:
    config = load_config_file(args.config) if args.config else {}

    def setting(name, cast=lambda v: v):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in config:
            return cast(config[name])
        return _SWEEP_DEFAULTS.get(name)

    model = setting("model")
    trials = setting("trials", int)
    seed = setting("seed", int)
    fmt = setting("format")
    out = setting("out")
    code_flags = args.code if args.code else (
        [c.strip() for c in config["code"].split(";")] if "code" in config else None
    )
    if trials is None or trials < 1:
        raise CliError("trials must be a positive integer", EXIT_CONFIG)
    if seed is None:
        raise CliError("sweep commands require an explicit --seed", EXIT_CONFIG)
    if not code_flags:
        raise CliError("at least one --code source is required", EXIT_CONFIG)

    request = {
        "model": model,
        "codes": [parse_code_source(c) for c in code_flags],
        "trials": trials,
        "seed": seed,
    }
    for axis in ("em", "eb", "dm", "db", "dp"):
        value = getattr(args, axis, None)
        if value is None and axis in config:
            value = config[axis]
        parsed = parse_axis(value)
        if parsed is not None:
            request[axis] = parsed
    rows = client.sweep(**request)["rows"]
    if fmt == "csv":
        _write_output(rows_to_csv(rows), out)
    else:
        _write_output(json.dumps({"rows": rows}, indent=2) + "\n", out)
    return EXIT_OK


def cmd_teleport_demo(client: ServiceClient, args) -> int:
    report = client.teleport_demo(
        code=parse_code_source(args.code),
        seed=args.seed,
        model=args.model,
        em=args.em,
        eb=args.eb,
        dm=args.dm,
        db=args.db,
        dp=args.dp,
        inject=args.inject,
        dense=args.dense,
    )
    print(f"code: {report['code']} (n={report['n']}, model={report['model']})")
    print(f"incoming error: {report['incoming']}")
    print(f"erased qubits: {report['erased'] or 'none'}")
    for q, outcome in enumerate(report["outcomes"]):
        print(f"  pair {q}: {outcome}")
    print(f"correction product: {report['correction_product']}")
    print(f"inferred syndrome: {report['inferred_syndrome']}")
    print(f"decoder action: {report['decoder_correction'] or 'detected failure'}")
    print(f"residual: {report['residual_class']}; status: {report['status']}")
    if report.get("dense"):
        d = report["dense"]
        print(
            f"dense check: {d['verdict']} (syndrome {d['syndrome']}, fidelity {d['fidelity']:.12f})"
        )
    return EXIT_OK


def cmd_curve(client: ServiceClient, args) -> int:
    data = client.curve(args.model, args.resolution)
    lines = [",".join(data["columns"])]
    for x, y in data["points"]:
        lines.append(f"{_format_number(x)},{_format_number(y)}")
    _write_output("\n".join(lines) + "\n", getattr(args, "out", None))
    return EXIT_OK


_COMMANDS = {
    "check-code": cmd_check_code,
    "sweep": cmd_sweep,
    "teleport-demo": cmd_teleport_demo,
    "curve": cmd_curve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = ServiceClient(base_url=args.server)
    try:
        return _COMMANDS[args.command](client, args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _ERROR_EXITS.get(exc.kind, EXIT_CONFIG)
    except httpx.ConnectError as exc:  # pragma: no cover - needs a dead server
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
