import os
from dataclasses import dataclass, fields
from typing import Mapping

from spectral_var.errors import ParameterError


THREADS_ENV = "SPECTRAL_VAR_THREADS"


@dataclass(frozen=True)
class Session:
    """
    Run-wide numeric defaults shared by the library and the CLI.

    Tolerances are relative: a check against ``tol`` compares with
    ``tol * (1 + scale)`` where ``scale`` is the Frobenius norm of the input
    or the magnitude of the right-hand side.
    """

    verdict_tol: float = 1e-8
    hermitian_tol: float = 1e-10
    triangular_tol: float = 1e-12
    identity_tol: float = 1e-10
    angle_count: int = 128
    search_restarts: int = 8
    threads: int = 1


def _read_threads(environ: Mapping[str, str]) -> int:
    raw = environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return Session.threads
    try:
        threads = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if threads < 1:
        raise ParameterError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return threads


def init_session(environ: Mapping[str, str] | None = None, **overrides) -> Session:
    """
    Build the session defaults, filling in only what the caller did not set.

    Args:
        environ: Environment mapping to read ``SPECTRAL_VAR_THREADS`` from
            (defaults to ``os.environ``)
        **overrides: Explicit values for any ``Session`` field

    Returns:
        A frozen ``Session``
    """
    environ = os.environ if environ is None else environ
    known = {f.name for f in fields(Session)}
    unknown = set(overrides) - known
    if unknown:
        raise ParameterError(f"Unknown session settings: {sorted(unknown)}")

    values = dict(overrides)
    if "threads" not in values:
        values["threads"] = _read_threads(environ)
    return Session(**values)


DEFAULT_SESSION = Session()
