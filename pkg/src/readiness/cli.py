"""Command-line front door.

Subcommands: validate, assess, serve, sessions list, sessions progression.
Exit codes are stable: 0 success, 1 runtime failure (unreadable files, bind
failure), 2 usage error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .catalog import (
    CatalogError,
    NodeKind,
    load_bundled_catalog,
    load_catalog_file,
    nodes_of_kind,
)
from .report import (
    DEFAULT_FLAG_THRESHOLD,
    histogram,
    render_csv,
    render_json,
    render_text,
)
from .scoring import ScoringError, format_fraction, load_assessment, rollup
from .session import (
    SessionError,
    SessionStore,
    UnknownSessionError,
    format_timestamp,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3

DEFAULT_STORE = "store"
STORE_ENV_VAR = "READINESS_STORE"


def _store_default() -> str:
    return os.environ.get(STORE_ENV_VAR, DEFAULT_STORE)


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readiness",
        description="ISO 27001 compliance-readiness assessment toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser(
        "validate", help="check a catalog document and print its shape"
    )
    p_validate.add_argument("catalog", help="path to a catalog JSON document")

    p_assess = sub.add_parser(
        "assess", help="score an assessment file against a catalog"
    )
    p_assess.add_argument("catalog", help="path to a catalog JSON document")
    p_assess.add_argument("assessment", help="path to an assessment JSON document")
    p_assess.add_argument(
        "--partial",
        action="store_true",
        help="accept incomplete assessments (means over scored leaves only)",
    )
    p_assess.add_argument(
        "--format",
        choices=("text", "json", "csv"),
        default="text",
        help="output format (default: text)",
    )
    p_assess.add_argument(
        "--level",
        choices=("domain", "control"),
        default="domain",
        help="histogram level for csv output (default: domain)",
    )
    p_assess.add_argument(
        "--flag-threshold",
        type=_fraction_arg,
        default=DEFAULT_FLAG_THRESHOLD,
        metavar="PRIORITY",
        help="flag controls at or above this priority (default: 2)",
    )

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8402)
    p_serve.add_argument(
        "--store",
        default=None,
        help=f"session store directory (default: ${STORE_ENV_VAR} or ./{DEFAULT_STORE})",
    )
    p_serve.add_argument(
        "--catalog",
        default=None,
        help="catalog JSON document to serve (default: the bundled catalog)",
    )
    p_serve.add_argument(
        "--cors-origin",
        action="append",
        default=None,
        metavar="ORIGIN",
        help="allowed CORS origin, repeatable (default: *)",
    )

    p_sessions = sub.add_parser("sessions", help="inspect the session store")
    sessions_sub = p_sessions.add_subparsers(dest="sessions_command", required=True)

    p_list = sessions_sub.add_parser("list", help="list sessions in the store")
    p_list.add_argument("--store", default=None)

    p_prog = sessions_sub.add_parser(
        "progression", help="print grade progression for one session"
    )
    p_prog.add_argument("session_id")
    p_prog.add_argument("--store", default=None)

    return parser


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        catalog = load_catalog_file(args.catalog)
    except OSError as exc:
        print(f"error: cannot read {args.catalog}: {exc.strerror}", file=sys.stderr)
        return EXIT_RUNTIME
    except CatalogError as exc:
        print(f"invalid catalog: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    domains = len(nodes_of_kind(catalog, NodeKind.DOMAIN))
    controls = len(nodes_of_kind(catalog, NodeKind.CONTROL))
    issues = len(nodes_of_kind(catalog, NodeKind.ISSUE))
    print(
        f"OK: {catalog.name} v{catalog.version}: "
        f"{domains} domains, {controls} controls, {issues} assessment issues"
    )
    return EXIT_OK


def cmd_assess(args: argparse.Namespace) -> int:
    try:
        catalog = load_catalog_file(args.catalog)
        with open(args.assessment, encoding="utf-8") as fh:
            assessment = load_assessment(fh.read())
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (CatalogError, ScoringError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        report = rollup(catalog, assessment, partial=args.partial)
    except ScoringError as exc:
        print(f"assessment rejected: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    if args.format == "text":
        sys.stdout.write(render_text(report, catalog, args.flag_threshold))
    elif args.format == "json":
        sys.stdout.write(render_json(report, catalog, args.flag_threshold))
    else:
        series = histogram(report, catalog, NodeKind(args.level))
        sys.stdout.write(render_csv(series))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import run_server

    try:
        if args.catalog:
            catalog = load_catalog_file(args.catalog)
        else:
            catalog = load_bundled_catalog()
    except OSError as exc:
        print(f"error: cannot read catalog: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except CatalogError as exc:
        print(f"invalid catalog: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    store = SessionStore(args.store or _store_default())
    origins = tuple(args.cors_origin) if args.cors_origin else ("*",)
    try:
        run_server(
            catalog, store, host=args.host, port=args.port, cors_origins=origins
        )
    except SystemExit as exc:
        # uvicorn signals startup failure (e.g. bind error) via SystemExit
        return EXIT_RUNTIME if exc.code else EXIT_OK
    return EXIT_OK


def cmd_sessions_list(args: argparse.Namespace) -> int:
    store = SessionStore(args.store or _store_default())
    entries = store.list_sessions()
    rows = [
        (
            entry["session_id"],
            entry["user"],
            f"{entry['catalog']['name']} v{entry['catalog']['version']}",
            str(entry["experiments"]),
            entry["updated_at"],
        )
        for entry in entries
    ]
    _print_table(("session_id", "user", "catalog", "experiments", "updated_at"), rows)
    return EXIT_OK


def cmd_sessions_progression(args: argparse.Namespace) -> int:
    store = SessionStore(args.store or _store_default())
    try:
        entries = store.progression(args.session_id)
    except UnknownSessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    rows = []
    for entry in entries:
        grade = (
            format_fraction(entry.achievement)
            if entry.achievement is not None
            else "n/a"
        )
        if entry.delta is None:
            delta = "-"
        else:
            sign = "+" if entry.delta >= 0 else ""
            delta = sign + format_fraction(entry.delta)
        rows.append(
            (str(entry.index), format_timestamp(entry.finished_at), grade, delta)
        )
    _print_table(("index", "finished_at", "grade", "delta"), rows)
    return EXIT_OK


def _print_table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> None:
    widths = [len(column) for column in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    for row in [header, *rows]:
        line = "  ".join(cell.ljust(width) for cell, width in zip(row, widths))
        print(line.rstrip())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args)
    if args.command == "assess":
        return cmd_assess(args)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "sessions":
        if args.sessions_command == "list":
            return cmd_sessions_list(args)
        return cmd_sessions_progression(args)
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
