"""
One handler per CLI subcommand.

Handlers return the process exit code: 0 when everything holds, 2 when an
inequality is violated. Errors propagate to ``cli.main`` which maps them to 1.
"""

import argparse
import logging
import sys

from spectral_var import bounds, render
from spectral_var.constants import constants_table, cp
from spectral_var.harness import TrialConfig, run_sweep, sharpness_search
from spectral_var.matrix_io import read_matrix, to_json_dense
from spectral_var.proof_chain import verify_proof_chain
from spectral_var.report_builder import (
    build_report_document,
    sibling_path,
    write_document,
    write_sweep_csv,
    write_trace_csv,
)
from spectral_var.session import Session
from spectral_var.utils import parse_selection


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2


def _say(text: str) -> None:
    print(text, file=sys.stderr)


def _exit_code(holds: bool) -> int:
    return EXIT_OK if holds else EXIT_VIOLATED


def handle_check(args: argparse.Namespace, session: Session) -> int:
    """Evaluate one bound on the matrices in ``--a`` and ``--b``."""
    a, b = read_matrix(args.a), read_matrix(args.b)
    logger.debug("Checking %s bound on %s matrices at p=%g", args.bound, a.shape, args.p)
    angles = session.angle_count if args.angles is None else args.angles
    checkers = {
        "corollary": lambda: bounds.check_corollary(a, b, args.p, args.mode),
        "main": lambda: bounds.check_main_theorem(a, b, args.p, args.mode),
        "kato": lambda: bounds.check_kato(a, b, args.p),
        "interval": lambda: bounds.check_interval_bound(a, b, args.p),
        "numrange": lambda: bounds.check_numrange_bound(a, b, args.p, angles),
    }
    report = checkers[args.bound]()

    _say(render.render_report(report))
    document = build_report_document(args.bound, report.to_dict(), {"a": args.a, "b": args.b})
    write_document(document, args.out)
    return _exit_code(report.holds)


def handle_chain(args: argparse.Namespace, session: Session) -> int:
    a, b = read_matrix(args.a), read_matrix(args.b)
    selection = parse_selection(args.select) if args.select else None
    chain = verify_proof_chain(a, b, args.p, selection, args.mode)

    _say(render.render_chain(chain))
    document = build_report_document("chain", chain.to_dict(), {"a": args.a, "b": args.b})
    write_document(document, args.out)
    return _exit_code(chain.holds)


def handle_sweep(args: argparse.Namespace, session: Session) -> int:
    """
    Run a seeded sweep. With ``--csv`` the rows go to that file and the
    summary to ``<stem>.summary.json`` next to it; the summary document is
    always written to stdout.
    """
    config = TrialConfig(
        dim=args.dim,
        p=args.p,
        trials=args.trials,
        seed=args.seed,
        ensemble=args.ensemble,
    )
    summary = run_sweep(config, session)

    _say(render.render_sweep_summary(summary))
    document = build_report_document("sweep", summary.to_dict())
    if args.csv:
        csv_path = write_sweep_csv(summary.rows, args.csv)
        footer = sibling_path(csv_path, ".summary.json")
        write_document(document, footer)
        _say(f"💾 Rows written to {csv_path}, summary to {footer}")
    write_document(document)
    return _exit_code(summary.violations == 0)


def handle_constants(args: argparse.Namespace, session: Session) -> int:
    table = constants_table(args.p, args.mode)
    _say(render.render_constants(args.p, table))
    payload = {
        "p": args.p,
        "mode": args.mode,
        "constants": {name: v if isinstance(v, str) else v.to_dict() for name, v in table.items()},
    }
    write_document(build_report_document("constants", payload))
    return EXIT_OK


def handle_sharpness(args: argparse.Namespace, session: Session) -> int:
    """
    Search for a large ratio; the trace CSV is written to ``<out stem>.trace.csv``
    when ``--out`` is given.
    """
    restarts = args.restarts if args.restarts is not None else session.search_restarts
    result = sharpness_search(args.p, args.dim, args.iters, args.seed, restarts)
    certified = cp(args.p).value
    exceeded = result.best_ratio > certified * (1 + 1e-6)

    _say(render.render_sharpness(args.p, args.dim, result, certified))
    a, b = result.best_pair
    payload = {
        "p": args.p,
        "dim": args.dim,
        "iterations": args.iters,
        "restarts": restarts,
        "seed": args.seed,
        "best_ratio": result.best_ratio,
        "certified_constant": certified,
        "exceeds_constant": exceeded,
        "best_pair": {"a": to_json_dense(a), "b": to_json_dense(b)},
        "evaluations": len(result.trace),
    }
    if args.out:
        trace_path = write_trace_csv(result.trace, sibling_path(args.out, ".trace.csv"))
        payload["trace_csv"] = str(trace_path)
    write_document(build_report_document("sharpness", payload), args.out)
    return _exit_code(not exceeded)
