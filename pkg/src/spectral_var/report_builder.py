import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from spectral_var import __version__
from spectral_var.harness import SweepRow, TracePoint
from spectral_var.utils import file_digest, format_float


SWEEP_COLUMNS = ("trial", "p", "dim", "check_name", "lhs", "rhs", "slack", "holds", "ratio")
TRACE_COLUMNS = ("evaluation", "restart", "best_ratio")


def build_report_document(
    check: str,
    payload: dict,
    inputs: Mapping[str, str | Path] | None = None,
    timestamp: str | None = None,
) -> dict:
    """
    Wrap a result payload into a ReportDocument.

    Args:
        check: Name of the command or bound that produced the payload
        payload: ``to_dict()`` of a BoundReport, ChainReport, SweepSummary or
            the constants/sharpness result
        inputs: Input files by role (``{"a": path, "b": path}``); each is
            recorded by its SHA-256 digest
        timestamp: ISO-8601 time; the current UTC time when omitted

    Returns:
        Dict with ``tool_version``, ``inputs``, ``check``, ``payload`` and
        ``timestamp``; everything but the timestamp depends only on the inputs
    """
    inputs = inputs or {}
    return {
        "tool_version": __version__,
        "inputs": {
            role: {"path": str(path), "digest": file_digest(path)}
            for role, path in sorted(inputs.items())
        },
        "check": check,
        "payload": payload,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def dumps_document(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, allow_nan=False)


def write_document(document: dict, out: str | Path | None = None) -> None:
    """Write the document as JSON to ``out``, or to stdout when no path is given."""
    text = dumps_document(document) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_sweep_csv(rows: Iterable[SweepRow], path: str | Path) -> Path:
    """One line per (trial, check) in the ``SWEEP_COLUMNS`` order."""
    return _write_csv(
        Path(path),
        SWEEP_COLUMNS,
        (
            [row.trial, format_float(row.p), row.dim, row.check_name, format_float(row.lhs),
             format_float(row.rhs), format_float(row.slack), str(row.holds).lower(), format_float(row.ratio)]
            for row in rows
        ),
    )


def write_trace_csv(trace: Iterable[TracePoint], path: str | Path) -> Path:
    """Best-so-far ratio after every objective evaluation, ready for plotting."""
    return _write_csv(
        Path(path),
        TRACE_COLUMNS,
        ([point.evaluation, point.restart, format_float(point.best_ratio)] for point in trace),
    )


def sibling_path(path: str | Path, suffix: str) -> Path:
    """``runs/sweep.csv`` + ``.summary.json`` -> ``runs/sweep.summary.json``."""
    path = Path(path)
    return path.with_name(path.stem + suffix)
