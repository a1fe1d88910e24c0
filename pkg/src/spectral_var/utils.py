import hashlib
import logging
import sys
from pathlib import Path

from spectral_var.errors import ParameterError


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
FLOAT_FORMAT = ".17g"


def configure_logging(verbose: bool = False) -> None:
    """
    Route package logs to stderr; stdout stays reserved for JSON/CSV output.

    Args:
        verbose: Log at DEBUG instead of WARNING
    """
    root = logging.getLogger("spectral_var")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def file_digest(path: str | Path) -> str:
    """SHA-256 of a file's bytes, as ``sha256:<hex>``."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def parse_selection(text: str) -> tuple[int, ...]:
    """
    Parse ``"i,j,..."`` into eigenvalue indices.

    Raises:
        ParameterError: on empty items or non-integer entries
    """
    items = [item.strip() for item in text.split(",")]
    if not text.strip() or any(not item for item in items):
        raise ParameterError(f"selection must look like 'i,j,...', got {text!r}")
    try:
        return tuple(int(item) for item in items)
    except ValueError:
        raise ParameterError(f"selection entries must be integers, got {text!r}")


def format_float(x: float) -> str:
    return format(float(x), FLOAT_FORMAT)
