"""Singular values and Schatten p-norms (p = inf is the operator norm)."""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from spectral_var.errors import NumericalError, ParameterError


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values in descending order, clamped at zero."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def _check_p(p: float, allow_inf: bool = True) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ParameterError(f"Schatten index p must be >= 1, got {p}")
    if math.isinf(p) and not allow_inf:
        raise ParameterError("p = inf has no p-th power; use schatten_norm")
    return p


def _svdvals(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.complex128)
    if t.size == 0:
        return np.zeros(0)
    if not np.all(np.isfinite(t)):
        raise NumericalError("singular values requested for a matrix with non-finite entries")
    try:
        s = scipy.linalg.svdvals(t)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    # round-off can leave tiny negative values; fractional powers need >= 0
    return np.clip(np.sort(s)[::-1], 0.0, None)


def singular_values(t: np.ndarray) -> SingularSpectrum:
    """
    Singular values of ``t``, descending.

    Raises:
        NumericalError: if the SVD does not converge
    """
    return SingularSpectrum(values=tuple(float(v) for v in _svdvals(t)))


def schatten_power(t: np.ndarray, p: float) -> float:
    """``‖t‖_p^p = Σ s_k^p`` for finite ``p ≥ 1``; empty matrices give 0."""
    p = _check_p(p, allow_inf=False)
    s = _svdvals(t)
    return float(np.sum(s ** p))


def schatten_norm(t: np.ndarray, p: float) -> float:
    """
    Schatten p-norm ``(Σ s_k^p)^{1/p}``; ``p = inf`` gives the largest singular value.

    Raises:
        ParameterError: if ``p < 1``
    """
    p = _check_p(p)
    s = _svdvals(t)
    if s.size == 0:
        return 0.0
    if math.isinf(p):
        return float(s[0])
    # scale out the largest value to avoid overflow for large p
    top = s[0]
    if top == 0.0:
        return 0.0
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))
