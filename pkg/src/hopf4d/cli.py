"""Command-line interface: builds scene documents, exports meshes, runs the
verification suites, and serves the scene endpoint for the viewer.

Exit codes: 0 success, 1 usage error, 2 math-domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from pathlib import Path

from . import verify as verify_mod
from .errors import Hopf4dError
from .scene import build_scene, export_obj, read_scene, write_scene

USAGE_EXIT = 1
DOMAIN_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _atomic_write(path: str, data: bytes) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out.parent, prefix=out.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_grid(text: str) -> list[int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"grid must look like 96x96, got {text!r}")
    return [int(parts[0]), int(parts[1])]


def _read_curve_csv(path: str) -> list[list[float]]:
    rows = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].lstrip().startswith("#"):
                continue
            if len(record) < 2:
                raise ValueError(f"curve rows need phi,psi columns, got {record!r}")
            rows.append([float(record[0]), float(record[1])])
    return rows


def build_parser() -> _Parser:
    parser = _Parser(prog="hopf4d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fiber", help="fiber of one base point")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--out", required=True)

    p = sub.add_parser("torus", help="Hopf torus of a base circle")
    p.add_argument("--mode", choices=["kappa", "mu"], required=True)
    p.add_argument("--psi", type=float, help="polar angle (kappa mode)")
    p.add_argument("--phi", type=float, help="azimuth (mu mode)")
    p.add_argument("--grid", type=_parse_grid, default=[96, 96])
    p.add_argument("--out", required=True)

    p = sub.add_parser("nested", help="nested torus family")
    p.add_argument("--family", choices=["xy", "z"], required=True)
    p.add_argument("--count", type=int, default=None, help="default 12 (xy) or 6 (z)")
    p.add_argument("--grid", type=_parse_grid, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("lift", help="cyclic surface over a sampled base curve")
    p.add_argument("--curve", required=True, help="CSV file of phi,psi rows")
    p.add_argument("--open", action="store_true", help="treat the curve as open")
    p.add_argument("--n-beta", type=int, default=96)
    p.add_argument("--out", required=True)

    p = sub.add_parser("arcs", help="planar arc chain lifted to cyclic surfaces")
    p.add_argument("--spec", required=True, help="JSON file with the arc list")
    p.add_argument("--samples-per-arc", type=int, default=48)
    p.add_argument("--n-beta", type=int, default=96)
    p.add_argument("--out", required=True)

    p = sub.add_parser("modulation", help="nPolSK-mPSK constellation")
    p.add_argument("--poly", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta-offset", type=float, default=0.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("packing", help="twisted filament packing")
    p.add_argument("--poly", required=True)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export", help="export one image space as OBJ")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--space", choices=["xi", "omega", "stereo"], required=True)
    p.add_argument("--format", choices=["obj"], default="obj")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run the property suites and print a report")
    p.add_argument("--suite", default="all", choices=["all", *verify_mod.SUITE_NAMES])
    p.add_argument(
        "--report-dir", default="hopf4d-report",
        help="where the CSV report and figures go; use '' to skip files",
    )

    p = sub.add_parser("serve", help="serve POST /scene for the viewer")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8420)

    return parser


def _request_from_args(args: argparse.Namespace) -> dict:
    if args.command == "fiber":
        return {
            "request": "fiber", "phi": args.phi, "psi": args.psi, "samples": args.samples
        }
    if args.command == "torus":
        req = {"request": "torus", "mode": args.mode, "grid": args.grid}
        if args.mode == "kappa":
            if args.psi is None:
                raise SystemExit(_usage_error("torus --mode kappa requires --psi"))
            req["psi"] = args.psi
        else:
            if args.phi is None:
                raise SystemExit(_usage_error("torus --mode mu requires --phi"))
            req["phi"] = args.phi
        return req
    if args.command == "nested":
        count = args.count if args.count is not None else (12 if args.family == "xy" else 6)
        req = {"request": "nested", "family": args.family, "count": count}
        if args.grid is not None:
            req["grid"] = args.grid
        return req
    if args.command == "lift":
        return {
            "request": "curve_lift",
            "curve": _read_curve_csv(args.curve),
            "closed": not args.open,
            "n_beta": args.n_beta,
        }
    if args.command == "arcs":
        with open(args.spec) as fh:
            arcs = json.load(fh)
        return {
            "request": "arcs_shape",
            "arcs": arcs,
            "samples_per_arc": args.samples_per_arc,
            "n_beta": args.n_beta,
        }
    if args.command == "modulation":
        return {
            "request": "modulation", "poly": args.poly, "m": args.m,
            "beta_offset": args.beta_offset,
        }
    if args.command == "packing":
        req = {"request": "packing", "poly": args.poly, "samples": args.samples}
        if args.radius is not None:
            req["radius"] = args.radius
        return req
    raise AssertionError(args.command)


def _usage_error(message: str) -> int:
    print(f"hopf4d: error: {message}", file=sys.stderr)
    return USAGE_EXIT


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        if args.command == "export":
            doc = read_scene(Path(args.input).read_bytes())
            _atomic_write(args.out, export_obj(doc, args.space))
            return 0
        if args.command == "verify":
            results, figure_data = verify_mod.run_suites(args.suite)
            for r in results:
                print(r.line())
            if args.report_dir:
                written = verify_mod.write_report(results, figure_data, args.report_dir)
                print(f"report written to {args.report_dir}/ ({len(written)} files)")
            failed = [r for r in results if not r.passed]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
            return 0 if not failed else DOMAIN_EXIT
        if args.command == "serve":
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
            return 0
        request = _request_from_args(args)
        doc = build_scene(request)
        _atomic_write(args.out, write_scene(doc))
        return 0
    except SystemExit as e:
        return int(e.code or 0)
    except Hopf4dError as e:
        print(f"hopf4d: {type(e).__name__}: {e}", file=sys.stderr)
        return DOMAIN_EXIT
    except OSError as e:
        print(f"hopf4d: {e}", file=sys.stderr)
        return USAGE_EXIT
    except ValueError as e:
        print(f"hopf4d: invalid input: {e}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
