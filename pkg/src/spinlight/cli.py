"""Command-line client.

All verbs (run, sweep, check, demo) go through the HTTP interface: served in
process by default, or by a remote instance when --server is given. `serve`
starts that instance. Exit codes: 0 ok, 1 assert failure, 2 parse/usage
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from .runner import report_to_json


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinlight",
        description="simulate and certify light-mediated entanglement protocols",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p):
        p.add_argument("--server", metavar="URL", default=None,
                       help="send requests to a running server instead of in-process")

    p = sub.add_parser("run", help="run a protocol script")
    p.add_argument("file", help="script path, or - for stdin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="PATH", default=None,
                   help="write the full JSON report here")
    add_server(p)

    p = sub.add_parser("sweep", help="run a script template over a parameter grid")
    p.add_argument("file", help="script template path, or - for stdin")
    p.add_argument("--grid", required=True, metavar="SPEC",
                   help="comma-separated axes, each name=lo:hi:count")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="CSV output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    add_server(p)

    p = sub.add_parser("check", help="parse a script without running it")
    p.add_argument("file", help="script path, or - for stdin")
    add_server(p)

    p = sub.add_parser("demo", help="print a built-in example script")
    p.add_argument("name", help="one of: epr, eraser, ghz, cluster")
    add_server(p)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _read_script(path: str) -> str | None:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def _print_report(report: dict) -> None:
    print(f"status: {report['status']}")
    for i, outcome in enumerate(report["outcomes"], start=1):
        if outcome is not None:
            print(f"outcome {i}: {outcome:.12g}")
    for i, value in enumerate(report["predictions"], start=1):
        print(f"prediction {i}: {value:.12g}")
    for name, value in report["variances"].items():
        print(f"{name} = {value:.12g}")
    for name, value in report["negativities"].items():
        print(f"{name} = {value:.12g}")
    for item in report["asserts"]:
        tag = "PASS" if item["passed"] else "FAIL"
        if item["kind"] == "negativity":
            detail = f"value={item['value']:.6g}"
        elif item["kind"] == "nullifiers":
            pairs = " ".join(f"{a}:{v:.6g}" for a, v in item["variances"])
            detail = f"variances {pairs}"
        else:
            detail = f"lhs={item['lhs']:.6g} bound={item['bound']:.6g}"
        print(f"{tag} assert {item['kind']} {detail} expect={item['expect']}")


def _cmd_run(args) -> int:
    text = _read_script(args.file)
    if text is None:
        return 2
    with _make_client(args.server) as client:
        response = client.post("/run", json={"script": text, "seed": args.seed})
    payload = response.json()
    if payload.get("error"):
        print(f"error: {payload['error']}", file=sys.stderr)
    if payload.get("report"):
        _print_report(payload["report"])
        if args.json:
            try:
                with open(args.json, "w", encoding="utf-8") as handle:
                    handle.write(report_to_json(payload["report"]))
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
    return int(payload["exit_code"])


def _cmd_sweep(args) -> int:
    text = _read_script(args.file)
    if text is None:
        return 2
    with _make_client(args.server) as client:
        response = client.post("/sweep", json={
            "script": text, "grid": args.grid,
            "seed": args.seed, "jobs": args.jobs,
        })
    payload = response.json()
    if payload.get("error"):
        print(f"error: {payload['error']}", file=sys.stderr)
    if payload.get("csv") is not None:
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8", newline="") as handle:
                    handle.write(payload["csv"])
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return 2
        else:
            sys.stdout.write(payload["csv"])
    return int(payload["exit_code"])


def _cmd_check(args) -> int:
    text = _read_script(args.file)
    if text is None:
        return 2
    with _make_client(args.server) as client:
        response = client.post("/check", json={"script": text})
    payload = response.json()
    if payload.get("error"):
        print(f"error: {payload['error']}", file=sys.stderr)
    else:
        print(f"ok: {payload['statements']} statements")
    return int(payload["exit_code"])


def _cmd_demo(args) -> int:
    with _make_client(args.server) as client:
        response = client.get(f"/demo/{args.name}")
    if response.status_code == 404:
        print(f"error: {response.json()['detail']}", file=sys.stderr)
        return 2
    sys.stdout.write(response.json()["script"])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "check": _cmd_check,
        "demo": _cmd_demo,
        "serve": _cmd_serve,
    }[args.command]
    try:
        return command(args)
    except (ConnectionError, httpx.HTTPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
