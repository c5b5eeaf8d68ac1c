"""Thin command line client for the laboratory service.

All work happens behind the HTTP API: by default each command talks to the
in-process app over an ASGI transport, and --url points the same commands at
a remote server started with `sortlab serve`. Files (JSONL records, CSV
tables, plot data) are written client-side.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


class LabClient:
    """POSTs to a remote server when url is set, otherwise to the bundled app."""

    def __init__(self, url: str | None = None):
        self.url = url.rstrip("/") if url else None

    def post(self, path: str, payload: dict) -> dict:
        try:
            if self.url:
                resp = httpx.post(self.url + path, json=payload, timeout=None)
            else:
                resp = asyncio.run(self._asgi_post(path, payload))
        except httpx.HTTPError as exc:
            raise CliError(f"request to {path} failed: {exc}") from exc
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise CliError(f"{path} -> HTTP {resp.status_code}: {detail}")
        return resp.json()

    async def _asgi_post(self, path: str, payload: dict) -> httpx.Response:
        from .service.app import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://sortlab.local",
                                     timeout=None) as client:
            return await client.post(path, json=payload)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}") from exc


def cmd_run(args: argparse.Namespace) -> int:
    payload: dict = {}
    if args.config:
        try:
            payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}") from exc
    overrides = {
        "experiment": args.experiment,
        "n_grid": _int_list(args.n) if args.n else None,
        "p_grid": _int_list(args.p) if args.p else None,
        "families": args.family or None,
        "trials": args.trials,
        "master_seed": args.seed,
        "threads": args.threads,
        "exhaustive": True if args.exhaustive else None,
        "fit": True if args.fit else None,
    }
    payload.update({k: v for k, v in overrides.items() if v is not None})
    if "experiment" not in payload:
        raise CliError("an experiment must be named via --experiment or the config file")
    client = LabClient(args.url)
    data = client.post("/experiments/run", payload)
    if args.out:
        _write_text(args.out, data["jsonl"])
    else:
        sys.stdout.write(data["jsonl"])
    if args.summary_csv:
        _write_text(args.summary_csv, data["summary_csv"])
    if args.plot_dir:
        plot_dir = Path(args.plot_dir)
        try:
            plot_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CliError(f"cannot create {plot_dir}: {exc}") from exc
        series: dict[tuple, list] = {}
        for row in data["summary"].get("rows", []):
            series.setdefault((row["family"], row["p"]), []).append(
                (row["n"], row["mean"]))
        for (family, p), pts in sorted(series.items()):
            lines = "".join(f"{n} {mean:.10g}\n" for n, mean in sorted(pts))
            _write_text(str(plot_dir / f"{payload['experiment']}_{family}_p{p}.dat"),
                        lines)
    rows = data["summary"].get("rows", [])
    print(f"{data['record_count']} records, {len(rows)} rows "
          f"({payload['experiment']})")
    for row in rows:
        bits = [f"n={row['n']}", f"p={row['p']}"]
        if "family" in row:
            bits.append(f"family={row['family']}")
        if "mean" in row:
            bits.append(f"mean {row['metric']}={row['mean']:.4g}")
        if "M_star" in row:
            bits.append(f"M*={row['M_star']}  ratio={row['p_n_ratio']:.4g}")
        if "m_star" in row:
            bits.append(f"M*={row['m_star']}")
        if "mean_over_sqrt_n" in row:
            bits.append(f"mean/sqrt(n)={row['mean_over_sqrt_n']:.4g}")
        print("  " + "  ".join(bits))
    for fit in data["summary"].get("fits", []):
        print(f"  fit family={fit['family']} p={fit['p']}: "
              f"exponent={fit['exponent']:.4f} r2={fit['r_squared']:.6f}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    client = LabClient(args.url)
    data = client.post("/verify", {"deep": not args.quick})
    for check in data["checks"]:
        tag = "PASS" if check["passed"] else "FAIL"
        line = f"{tag}  {check['name']}  (checked {check['checked']})"
        if check["detail"]:
            line += f"  {check['detail']}"
        print(line)
        if check["counterexample"]:
            print(f"      counterexample: {check['counterexample']}")
    print(f"total items checked: {data['total_checked']}")
    return 0 if data["all_passed"] else 1


def cmd_bounds(args: argparse.Namespace) -> int:
    client = LabClient(args.url)
    data = client.post("/analysis/bound-table",
                       {"n_grid": _int_list(args.n), "p_grid": _int_list(args.p)})
    for skip in data["skipped"]:
        print(f"warning: skipped n={skip['n']} p={skip['p']}: {skip['reason']}",
              file=sys.stderr)
    if args.out:
        _write_text(args.out, data["csv"])
        print(f"wrote {len(data['rows'])} rows to {args.out}")
    else:
        sys.stdout.write(data["csv"])
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("sortlab.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sortlab",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--url", default=None,
                        help="base URL of a running sortlab server "
                             "(default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a seeded experiment and write JSONL records")
    run.add_argument("--config", help="JSON config file; flags override its fields")
    run.add_argument("--experiment",
                     choices=["shellsort", "pstacks", "pqueues", "seqsearch",
                              "bounds", "verify"])
    run.add_argument("--n", help="comma-separated list of sizes")
    run.add_argument("--p", help="comma-separated list of pass counts")
    run.add_argument("--family", action="append",
                     help="increment family (repeatable): shell, pratt, chazelle, "
                          "geometric, target")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int, help="64-bit master seed")
    run.add_argument("--threads", type=int, help="worker processes")
    run.add_argument("--exhaustive", action="store_true",
                     help="run every permutation of each n (n <= 8)")
    run.add_argument("--fit", action="store_true",
                     help="fit a power law across the size grid")
    run.add_argument("--out", help="JSONL output path (default: stdout)")
    run.add_argument("--summary-csv", help="also write per-row aggregates as CSV")
    run.add_argument("--plot-dir", help="write two-column (n, mean) plot files here")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="run the exhaustive self-check suite")
    verify.add_argument("--quick", action="store_true",
                        help="smaller ranges for a fast smoke check")
    verify.set_defaults(func=cmd_verify)

    bounds = sub.add_parser("bounds", help="emit the solved lower-bound table as CSV")
    bounds.add_argument("--n", required=True, help="comma-separated sizes")
    bounds.add_argument("--p", required=True, help="comma-separated pass counts")
    bounds.add_argument("--out", help="CSV output path (default: stdout)")
    bounds.set_defaults(func=cmd_bounds)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
