"""
Reading and writing matrices as Matrix Market (complex, array or coordinate)
or as ``json_dense`` documents::

    {"rows": n, "cols": n, "data": [[re, im], ...]}   # row-major
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from spectral_var.errors import MatrixFileError
from spectral_var.linalg_core import as_matrix


logger = logging.getLogger(__name__)

MM_PRECISION = 17


class MatrixFormat(str, Enum):
    MATRIX_MARKET_COMPLEX = "matrix_market_complex"
    JSON_DENSE = "json_dense"


_SUFFIXES = {
    ".mtx": MatrixFormat.MATRIX_MARKET_COMPLEX,
    ".mm": MatrixFormat.MATRIX_MARKET_COMPLEX,
    ".json": MatrixFormat.JSON_DENSE,
}


@dataclass(frozen=True)
class MatrixFile:
    format: MatrixFormat
    path: Path

    @classmethod
    def from_path(cls, path: str | Path, fmt: MatrixFormat | str | None = None) -> "MatrixFile":
        """Pick the format from ``fmt`` or, when absent, from the file suffix."""
        path = Path(path)
        if fmt is not None:
            try:
                return cls(MatrixFormat(fmt), path)
            except ValueError:
                raise MatrixFileError(f"Unknown matrix format {fmt!r}")
        try:
            return cls(_SUFFIXES[path.suffix.lower()], path)
        except KeyError:
            raise MatrixFileError(
                f"Cannot infer the matrix format of {path.name}; use one of {sorted(_SUFFIXES)}"
            )


# ===== JSON DENSE =====

def to_json_dense(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    rows, cols = m.shape
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def from_json_dense(document: dict) -> np.ndarray:
    """
    Decode a ``json_dense`` document.

    Raises:
        MatrixFileError: on missing keys, wrong entry shapes or a length that
            is not ``rows * cols``
    """
    if not isinstance(document, dict):
        raise MatrixFileError("json_dense document must be an object")
    missing = {"rows", "cols", "data"} - set(document)
    if missing:
        raise MatrixFileError(f"json_dense document is missing {sorted(missing)}")

    rows, cols, data = document["rows"], document["cols"], document["data"]
    if not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in (rows, cols)):
        raise MatrixFileError(f"rows and cols must be positive integers, got {rows!r} x {cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        size = len(data) if isinstance(data, list) else type(data).__name__
        raise MatrixFileError(f"data must hold rows*cols = {rows * cols} entries, got {size}")

    try:
        pairs = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(f"data entries must be [re, im] number pairs: {exc}") from exc
    if pairs.shape != (rows * cols, 2):
        raise MatrixFileError("data entries must be [re, im] number pairs")
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(rows, cols)


# ===== FILES =====

def read_matrix(path: str | Path, fmt: MatrixFormat | str | None = None) -> np.ndarray:
    """
    Load a matrix file as a complex128 array.

    Raises:
        MatrixFileError: if the file cannot be read or parsed
        DimensionError, StructureError: if the decoded matrix is empty or non-finite
    """
    source = MatrixFile.from_path(path, fmt)
    if not source.path.is_file():
        raise MatrixFileError(f"Could not find {source.path}")

    try:
        if source.format is MatrixFormat.JSON_DENSE:
            with open(source.path, "r", encoding="utf-8") as f:
                m = from_json_dense(json.load(f))
        else:
            loaded = scipy.io.mmread(str(source.path))
            m = loaded.toarray() if scipy.sparse.issparse(loaded) else np.asarray(loaded)
    except MatrixFileError:
        raise
    except (OSError, ValueError, TypeError) as exc:
        raise MatrixFileError(f"Could not parse {source.path.name}: {exc}") from exc

    logger.debug("Read %s matrix %s from %s", source.format.value, m.shape, source.path)
    return as_matrix(m, source.path.name)


def write_matrix(m: np.ndarray, path: str | Path, fmt: MatrixFormat | str | None = None) -> Path:
    target = MatrixFile.from_path(path, fmt)
    m = np.asarray(m, dtype=np.complex128)
    target.path.parent.mkdir(parents=True, exist_ok=True)
    if target.format is MatrixFormat.JSON_DENSE:
        with open(target.path, "w", encoding="utf-8") as f:
            json.dump(to_json_dense(m), f)
    else:
        # a file handle keeps mmwrite from appending ".mtx" to other suffixes
        with open(target.path, "wb") as f:
            scipy.io.mmwrite(f, m, field="complex", precision=MM_PRECISION)
    return target.path
