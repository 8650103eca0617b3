"""Thin-client command line interface.

Every subcommand marshals its flags into a request, sends it to the HTTP
service, and renders the response. By default the request goes to the
bundled FastAPI app *in-process* (no server or socket involved), so the
CLI works standalone and deterministically; pass ``--server URL`` to talk
to a remote instance instead.

Subcommands:
  simulate   run a seeded experiment and write the report (json/csv)
  table1     render a pre-existing-outcome ledger for a contexts file
  chsh       analytic CHSH value for given angles and model
  verify     run the built-in verification suite

Exit codes: 0 success, 1 usage/operational error, 2 verification failure.

Angle grammar: radians or pi fractions, e.g. ``0,pi/2,pi/4,3pi/4``.
A JSON config file (``--config``) may supply any of the simulate options
(keys: model, angles, contexts, trials, seed, format, out, workers);
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any

import httpx

from .config import AngleParseError, load_contexts_file, parse_angle_list
from .reporting import ReportWriteError, write_sidecar

DEFAULT_ANGLES = "0,pi/2,pi/4,3pi/4"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class UsageError(Exception):
    """Bad invocation; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for
    # verification failures here, so raise and let main() return 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="eprb-lab",
        description="Monte Carlo laboratory for the EPR-Bohm singlet experiment.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        metavar="URL",
        help="base URL of a running eprb-lab service (default: in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", parents=[common], help="run a seeded experiment and emit a report"
    )
    sim.add_argument("--model", choices=("quantum", "realist", "lhv"), default=None)
    sim.add_argument(
        "--angles", default=None, metavar="a,a',b,b'",
        help=f"four CHSH angles (default {DEFAULT_ANGLES})",
    )
    sim.add_argument(
        "--contexts", default=None, metavar="FILE",
        help="CSV of extra theta,phi contexts to measure",
    )
    sim.add_argument("--trials", type=int, default=None, metavar="N")
    sim.add_argument("--seed", type=int, default=None, metavar="S")
    sim.add_argument("--format", choices=("json", "csv"), default=None)
    sim.add_argument("--out", default=None, metavar="PATH")
    sim.add_argument("--workers", type=int, default=None, metavar="N")
    sim.add_argument(
        "--config", default=None, metavar="FILE",
        help="JSON file with default option values (flags override)",
    )
    sim.add_argument(
        "--sidecar", action="store_true",
        help="also write <out>.sidecar.json with provenance metadata",
    )

    tab = sub.add_parser(
        "table1", parents=[common],
        help="render the pre-existing-outcome ledger for a contexts file",
    )
    tab.add_argument("--contexts", required=True, metavar="FILE")
    tab.add_argument("--seed", type=int, default=1, metavar="S")
    tab.add_argument("--out", default=None, metavar="PATH", help="write CSV here")

    chsh = sub.add_parser(
        "chsh", parents=[common], help="analytic CHSH value for given angles"
    )
    chsh.add_argument("--model", choices=("quantum", "realist", "lhv"), default="quantum")
    chsh.add_argument("--angles", default=DEFAULT_ANGLES, metavar="a,a',b,b'")

    ver = sub.add_parser(
        "verify", parents=[common], help="run the built-in verification suite"
    )
    ver.add_argument(
        "--quick", action="store_true",
        help="smoke-test mode: N=10^4 with widened tolerances",
    )
    ver.add_argument(
        "--check", action="append", default=None, metavar="NAME",
        help="run only the named check (repeatable)",
    )
    return parser


def _post(server: str | None, path: str, payload: dict[str, Any]) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post(path, json=payload)

    async def _inproc() -> httpx.Response:
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://eprb-lab", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(_inproc())


def _fail(response: httpx.Response) -> int:
    try:
        detail = response.json().get("detail", response.text)
    except ValueError:
        detail = response.text
    print(f"error: {detail}", file=sys.stderr)
    return EXIT_USAGE


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path!r} must contain a JSON object")
    return data


def _merge(flag_value: Any, file_value: Any, default: Any) -> Any:
    if flag_value is not None:
        return flag_value
    if file_value is not None:
        return file_value
    return default


def _cmd_simulate(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config) if args.config else {}

    angles_text = _merge(args.angles, file_cfg.get("angles"), DEFAULT_ANGLES)
    if isinstance(angles_text, str):
        angles = list(parse_angle_list(angles_text, expected=4))
    else:
        if len(angles_text) != 4:
            raise UsageError(f"config 'angles' must have 4 entries, got {angles_text!r}")
        angles = list(angles_text)

    contexts_value = _merge(args.contexts, file_cfg.get("contexts"), None)
    contexts: list[list[Any]] = []
    if isinstance(contexts_value, str):
        contexts = [list(c) for c in load_contexts_file(contexts_value)]
    elif contexts_value is not None:
        contexts = [list(c) for c in contexts_value]

    out = _merge(args.out, file_cfg.get("out"), None)
    payload = {
        "model": _merge(args.model, file_cfg.get("model"), "quantum"),
        "angles": angles,
        "contexts": contexts,
        "trials_per_pair": int(_merge(args.trials, file_cfg.get("trials"), 100_000)),
        "seed": int(_merge(args.seed, file_cfg.get("seed"), 1)),
        "format": _merge(args.format, file_cfg.get("format"), "json"),
        "out": out,
        "workers": int(_merge(args.workers, file_cfg.get("workers"), 1)),
        # tolerance overrides have no flags; a config file may set them
        "gof_alpha": file_cfg.get("gof_alpha", 0.01),
        "no_signaling_tolerance": file_cfg.get("no_signaling_tolerance"),
    }

    response = _post(args.server, "/simulate", payload)
    if response.status_code != 200:
        return _fail(response)

    if out is None:
        sys.stdout.buffer.write(response.content)
        return EXIT_OK
    try:
        with open(out, "wb") as fh:
            fh.write(response.content)
    except OSError as exc:
        print(f"error: cannot write report to {out!r}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.sidecar:
        write_sidecar(out)
    return EXIT_OK


def _cmd_table1(args: argparse.Namespace) -> int:
    contexts = [list(c) for c in load_contexts_file(args.contexts)]
    response = _post(args.server, "/table1", {"contexts": contexts, "seed": args.seed})
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    sys.stdout.write(body["table"])
    if args.out is not None:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body["csv"])
        except OSError as exc:
            print(f"error: cannot write CSV to {args.out!r}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK


def _cmd_chsh(args: argparse.Namespace) -> int:
    angles = list(parse_angle_list(args.angles, expected=4))
    response = _post(args.server, "/chsh", {"model": args.model, "angles": angles})
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    labels = ("E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')")
    for label, value in zip(labels, body["pair_correlations"]):
        print(f"{label} = {value:+.6f}")
    print(f"S = {body['s_value']:+.6f}  (model {body['model']})")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {"quick": args.quick}
    if args.check:
        payload["checks"] = args.check
    response = _post(args.server, "/verify", payload)
    if response.status_code != 200:
        return _fail(response)
    body = response.json()
    for check in body["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status}  {check['name']}: {check['detail']}")
    if body["passed"]:
        print("all checks passed")
        return EXIT_OK
    print("verification FAILED", file=sys.stderr)
    return EXIT_VERIFY_FAILED


_COMMANDS = {
    "simulate": _cmd_simulate,
    "table1": _cmd_table1,
    "chsh": _cmd_chsh,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (UsageError, AngleParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReportWriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as exc:
        print(f"error: request failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
