"""Command-line interface: solve | sweep | metrics | gen-db | validate | serve.

Exit codes: 0 success, 1 load/parse/spec errors, 2 out-of-range input
under --clamp error.
"""

from __future__ import annotations

import argparse
import sys

from . import database, service, solver
from .server import make_server


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--db", help="motion database CSV (default: $SCAPULA_IK_DB, "
                                "else the built-in synthetic data)")
    p.add_argument("--method", choices=(solver.METHOD_SQUAD, solver.METHOD_SLERP),
                   default=solver.METHOD_SQUAD)
    p.add_argument("--clamp", choices=(solver.CLAMP_CLAMP, solver.CLAMP_ERROR),
                   default=solver.CLAMP_CLAMP)
    p.add_argument("--skeleton", help="skeleton config JSON path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scapula-ik",
        description="Data-driven shoulder IK over a measured motion grid.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="solve one (theta, psi) input, JSON to stdout")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--psi", type=float, required=True)
    _common_flags(p)

    p = sub.add_parser("sweep", help="dense trajectory sweep, CSV output")
    p.add_argument("--theta", required=True, help="value or start:end:step")
    p.add_argument("--psi", required=True, help="value or start:end:step")
    p.add_argument("-o", "--output", help="write CSV here instead of stdout")
    _common_flags(p)

    p = sub.add_parser("metrics", help="squad-vs-slerp smoothness report, JSON")
    p.add_argument("--theta", required=True, help="value or start:end:step")
    p.add_argument("--psi", required=True, help="value or start:end:step")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    _common_flags(p)

    p = sub.add_parser("gen-db", help="write the synthetic database CSV")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("validate", help="check a database file, exit 0 iff valid")
    p.add_argument("path")

    p = sub.add_parser("serve", help="serve the JSON API for the pose viewer")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--verbose", action="store_true")
    _common_flags(p)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except solver.OutOfRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (database.DatabaseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    if args.cmd == "gen-db":
        database.export_csv(database.generate_synthetic(), args.output)
        print(f"wrote synthetic database to {args.output}")
        return 0

    if args.cmd == "validate":
        db = database.load_csv(args.path)
        cells = 22 * 3
        print(f"{args.path}: OK")
        print(f"source: {db.source or '(unspecified)'}")
        for joint in database.JointId:
            print(f"{joint.value}: {cells} cells, sequence {db.grids[joint].sequence.label}")
        return 0

    db = service.resolve_database(getattr(args, "db", None))
    skeleton = service.load_skeleton(getattr(args, "skeleton", None))

    if args.cmd == "solve":
        response = service.solve_response(db, skeleton, args.theta, args.psi,
                                          args.method, args.clamp)
        sys.stdout.write(service.dumps_json(response, indent=2))
        return 0

    if args.cmd == "sweep":
        thetas = service.parse_range_spec(args.theta)
        psis = service.parse_range_spec(args.psi)
        samples, _ = service.run_sweep(db, thetas, psis, args.method, args.clamp)
        csv_text = service.format_sweep_csv(service.sweep_rows(db, skeleton, samples))
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as f:
                f.write(csv_text)
        else:
            sys.stdout.write(csv_text)
        return 0

    if args.cmd == "metrics":
        thetas = service.parse_range_spec(args.theta)
        psis = service.parse_range_spec(args.psi)
        report = service.smoothness_report(db, skeleton, thetas, psis, args.clamp)
        text = service.dumps_json(report, indent=2)
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
        return 0

    if args.cmd == "serve":
        httpd = make_server(db, skeleton, args.host, args.port, args.verbose)
        host, port = httpd.server_address[:2]
        print(f"serving on http://{host}:{port} (Ctrl-C to stop)", file=sys.stderr)
        try:
            httpd.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            httpd.server_close()
        return 0

    raise AssertionError(f"unhandled command {args.cmd}")


if __name__ == "__main__":
    sys.exit(main())
