"""Command-line interface: a thin client of the HTTP service.

Reads a JSON jobspec (file or stdin), merges the command-line flags into it,
posts it to the service (in-process by default, or a remote server via
--server) and prints the JSON report to stdout.

Exit codes: 0 success / all checks passed, 1 verification failure,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

COMMANDS = ("alpha", "sequence", "h0", "chudnovsky", "verify-theorems",
            "falsify", "check-witness")

# commands whose jobspec may be empty
_NO_SPEC_OK = {"verify-theorems", "falsify"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delpezzo",
        description="Exact initial degrees of fat-point subschemes on "
                    "blow-ups of the plane at general points.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("jobspec", nargs="?",
                        help="path to a JSON jobspec ('-' or omitted: stdin; "
                             "may be omitted entirely for verify-theorems)")
    parser.add_argument("--seed", type=int, help="sampling seed (u64)")
    parser.add_argument("--kmax", type=int, help="degree search cap (default 12)")
    parser.add_argument("--cases", help="comma-separated case ids for verify-theorems")
    parser.add_argument("--trials", type=int, help="trial count for falsify")
    parser.add_argument("--family", help="falsification family for falsify")
    parser.add_argument("--prime", type=int, help="modular filter prime")
    parser.add_argument("--no-modular", action="store_true",
                        help="disable the modular fast path (fully exact)")
    parser.add_argument("--server", help="base URL of a running service "
                                         "(default: run in-process)")
    return parser


def _load_jobspec(args) -> dict:
    if args.jobspec is None:
        if args.command in _NO_SPEC_OK:
            return {}
        if sys.stdin.isatty():
            raise ValueError(f"command {args.command!r} requires a jobspec")
        text = sys.stdin.read()
    elif args.jobspec == "-":
        text = sys.stdin.read()
    else:
        with open(args.jobspec, "r", encoding="utf-8") as fh:
            text = fh.read()
    if not text.strip():
        if args.command in _NO_SPEC_OK:
            return {}
        raise ValueError("empty jobspec")
    spec = json.loads(text)
    if not isinstance(spec, dict):
        raise ValueError("jobspec must be a JSON object")
    return spec


def _merge_flags(spec: dict, args) -> dict:
    spec = dict(spec)
    if args.seed is not None:
        if args.command in ("alpha", "sequence", "h0", "chudnovsky",
                            "check-witness"):
            spec["surface"] = dict(spec.get("surface", {}))
            spec["surface"]["seed"] = args.seed
        else:
            spec["seed"] = args.seed
    if args.kmax is not None and args.command != "falsify":
        spec["kmax"] = args.kmax
    if args.cases is not None:
        spec["cases"] = [c.strip() for c in args.cases.split(",") if c.strip()]
    if args.trials is not None:
        spec["trials"] = args.trials
    if args.family is not None:
        spec["family"] = args.family
    if args.prime is not None:
        spec["prime"] = args.prime
    if args.no_modular:
        spec["modular"] = False
    if args.command == "falsify" and "seed" not in spec:
        raise ValueError("falsify requires a seed (jobspec field or --seed)")
    return spec


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .service import app
    return TestClient(app, raise_server_exceptions=False)


def _verdict(command: str, report: dict) -> int:
    if command == "h0":
        if report.get("match") is False:
            return EXIT_FAIL
        return EXIT_OK
    passed = report.get("passed")
    if passed is False:
        return EXIT_FAIL
    return EXIT_OK


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        spec = _merge_flags(_load_jobspec(args), args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True), file=sys.stderr)
        return EXIT_INPUT
    try:
        with _client(args.server) as client:
            resp = client.post(f"/{args.command}", json=spec)
    except httpx.HTTPError as exc:
        print(json.dumps({"error": f"service unreachable: {exc}"},
                         sort_keys=True), file=sys.stderr)
        return EXIT_INPUT
    try:
        report = resp.json()
    except ValueError:
        print(json.dumps({"error": "malformed service response"},
                         sort_keys=True), file=sys.stderr)
        return EXIT_INPUT
    if resp.status_code in (400, 422):
        print(json.dumps(report, sort_keys=True, indent=2, default=str),
              file=sys.stderr)
        return EXIT_INPUT
    if resp.status_code != 200:
        print(json.dumps(report, sort_keys=True, indent=2, default=str),
              file=sys.stderr)
        return EXIT_FAIL
    print(json.dumps(report, sort_keys=True, indent=2))
    return _verdict(args.command, report)


def main():  # console-script entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
