"""
Eigenvalue multisets and the spectral-variation functionals: distances to
the spectrum of a Hermitian matrix, to a real interval, to the numerical
range, the band functional with endpoint weights, and Riesz subspaces.

In finite dimension the discrete spectrum of B is its whole eigenvalue
multiset (algebraic multiplicities included) and the spectrum of A is the
set of its eigenvalues.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from spectral_var.errors import DegenerateTermError, NumericalError, ParameterError
from spectral_var.linalg_core import (
    adjoint,
    frobenius,
    require_hermitian,
    require_same_shape,
    require_square,
    schur_decompose,
    validate_selection,
)


logger = logging.getLogger(__name__)

INVARIANCE_TOL = 1e-7
DEGENERATE_TERM_TOL = 1e-12
MIN_ANGLE_COUNT = 8


# ===== TYPES =====

@dataclass(frozen=True)
class EigenMultiset:
    """Eigenvalues counted with algebraic multiplicity, in Schur diagonal order."""

    values: tuple[complex, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.complex128)


@dataclass(frozen=True)
class BandSpectrum:
    """Union of bands ``[a1, a2] ∪ ... ∪ [a_{2n-1}, a_{2n}]`` on the real line."""

    endpoints: tuple[float, ...]

    def __post_init__(self):
        ends = tuple(float(e) for e in self.endpoints)
        if not ends or len(ends) % 2:
            raise ParameterError(f"BandSpectrum needs an even, non-zero number of endpoints, got {len(ends)}")
        if any(not math.isfinite(e) for e in ends):
            raise ParameterError("BandSpectrum endpoints must be finite")
        if any(b <= a for a, b in zip(ends, ends[1:])):
            raise ParameterError(f"BandSpectrum endpoints must be strictly increasing: {ends}")
        object.__setattr__(self, "endpoints", ends)

    @property
    def bands(self) -> list[tuple[float, float]]:
        ends = self.endpoints
        return [(ends[i], ends[i + 1]) for i in range(0, len(ends), 2)]

    def distance(self, lam: complex) -> float:
        return min(interval_distance(lam, a, b) for a, b in self.bands)

    def endpoint_distance(self, lam: complex) -> float:
        return float(np.min(np.abs(complex(lam) - np.asarray(self.endpoints))))


# ===== HELPERS =====

def _check_p(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ParameterError(f"p must be a finite real >= 1, got {p}")
    return p


def _distances(points: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest spectrum entry."""
    return np.min(np.abs(points[:, None] - spectrum[None, :]), axis=1)


def hermitian_spectrum(a: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    try:
        return scipy.linalg.eigvalsh(a)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc


def _pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = require_hermitian(a, "a")
    b = require_square(b, "b")
    require_same_shape(a, b)
    return a, b


# ===== OPERATIONS =====

def eigenvalues(b: np.ndarray) -> EigenMultiset:
    """Eigenvalue multiset of ``b`` read off the diagonal of its Schur form."""
    return EigenMultiset(values=schur_decompose(b).eigenvalue_order)


def spectrum_distance(lam: complex, spectrum: EigenMultiset | Sequence[complex]) -> float:
    """
    ``min |λ − μ|`` over the spectrum.

    Raises:
        ParameterError: for an empty spectrum
    """
    values = spectrum.as_array() if isinstance(spectrum, EigenMultiset) else np.asarray(spectrum, dtype=np.complex128)
    if values.size == 0:
        raise ParameterError("spectrum must not be empty")
    return float(np.min(np.abs(complex(lam) - values.ravel())))


def spectral_variation(a: np.ndarray, b: np.ndarray, p: float) -> float:
    """
    ``Σ_k dist(λ_k(B), σ(A))^p`` over the eigenvalue multiset of B.

    Raises:
        StructureError: if ``a`` is not Hermitian
        DimensionError: if ``a`` and ``b`` differ in size
    """
    p = _check_p(p)
    a, b = _pair(a, b)
    lam = eigenvalues(b).as_array()
    return float(np.sum(_distances(lam, hermitian_spectrum(a)) ** p))


def split_variation(a: np.ndarray, b: np.ndarray, p: float, imag_weight: float) -> float:
    """``Σ_k (dist(Re λ_k, σ(A))^p + imag_weight·|Im λ_k|^p)``."""
    p = _check_p(p)
    if not math.isfinite(imag_weight) or imag_weight < 0:
        raise ParameterError(f"imag_weight must be a non-negative real, got {imag_weight}")
    a, b = _pair(a, b)
    lam = eigenvalues(b).as_array()
    real_terms = _distances(lam.real, hermitian_spectrum(a)) ** p
    return float(np.sum(real_terms + imag_weight * np.abs(lam.imag) ** p))


def interval_distance(lam: complex, a: float, b: float) -> float:
    """
    Euclidean distance from ``λ`` to the real segment ``[a, b]``.

    Raises:
        ParameterError: if ``a > b``
    """
    if a > b:
        raise ParameterError(f"interval endpoints out of order: [{a}, {b}]")
    lam = complex(lam)
    nearest = min(max(lam.real, a), b)
    return float(abs(lam - nearest))


def numerical_range_support(a: np.ndarray, angle_count: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Supporting half-planes of the numerical range on a uniform angle grid.

    Returns:
        ``(theta, h)`` with ``Num(A) ⊆ {z : Re(e^{-iθ_j} z) ≤ h_j}`` for every j
    """
    if int(angle_count) != angle_count or angle_count < MIN_ANGLE_COUNT:
        raise ParameterError(f"angle_count must be an integer >= {MIN_ANGLE_COUNT}, got {angle_count}")
    a = require_square(a, "a")
    theta = 2 * np.pi * np.arange(int(angle_count)) / int(angle_count)
    rotated = np.exp(-1j * theta)[:, None, None] * a[None, :, :]
    hermitian = (rotated + np.conj(np.swapaxes(rotated, 1, 2))) / 2
    try:
        h = np.linalg.eigvalsh(hermitian)[:, -1]
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver failed in angle sweep: {exc}") from exc
    return theta, h


def numerical_range_polygon(a: np.ndarray, angle_count: int) -> np.ndarray:
    """
    Vertices (as complex numbers, counter-clockwise) of the outer polygon
    cut out by the supporting half-planes; vertex j lies on lines j and j+1.
    """
    return _polygon(*numerical_range_support(a, angle_count))


def _polygon(theta: np.ndarray, h: np.ndarray) -> np.ndarray:
    theta_next, h_next = np.roll(theta, -1), np.roll(h, -1)
    det = np.sin(theta_next - theta)
    x = (h * np.sin(theta_next) - h_next * np.sin(theta)) / det
    y = (h_next * np.cos(theta) - h * np.cos(theta_next)) / det
    return x + 1j * y


def numerical_range_distance(lam: complex, a: np.ndarray, angle_count: int) -> float:
    """
    Distance from ``λ`` to the outer polygonal approximation of ``Num(A)``.

    The polygon contains the numerical range, so the result never exceeds
    the true distance and increases towards it as the grid is refined.
    """
    theta, h = numerical_range_support(a, angle_count)
    lam = complex(lam)
    excess = lam.real * np.cos(theta) + lam.imag * np.sin(theta) - h
    if np.all(excess <= 0):
        return 0.0

    vertices = _polygon(theta, h)
    start = np.roll(vertices, 1)   # edge j runs from vertex j-1 to vertex j along line j
    edge = vertices - start
    length_sq = np.abs(edge) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(length_sq > 0, np.real(np.conj(edge) * (lam - start)) / length_sq, 0.0)
    nearest = start + np.clip(s, 0.0, 1.0) * edge
    return float(np.min(np.abs(lam - nearest)))


def gk_functional(bands: BandSpectrum, b: np.ndarray, p: float, epsilon: float) -> float:
    """
    ``Σ_λ dist(λ, σ)^{p+1+ε} / (dist(λ, {a_1..a_2n})·(1+|λ|))`` over the eigenvalues of B,
    with σ the band set.

    Raises:
        DegenerateTermError: if an eigenvalue lies on (or within 1e-12 of) the bands
    """
    p = _check_p(p)
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    total = 0.0
    for lam in eigenvalues(b):
        band_dist = bands.distance(lam)
        if band_dist < DEGENERATE_TERM_TOL:
            raise DegenerateTermError(f"eigenvalue {lam} lies on the band set; the term diverges", lam)
        total += band_dist ** (p + 1 + epsilon) / (bands.endpoint_distance(lam) * (1 + abs(lam)))
    return float(total)


def riesz_schur(b: np.ndarray, selection: Iterable[int]):
    """Reordered Schur form of ``b`` with the selected eigenvalues leading, plus the selection size."""
    b = require_square(b, "b")
    chosen = validate_selection(selection, b.shape[0])
    return schur_decompose(b, leading=chosen), len(chosen)


def riesz_subspace(b: np.ndarray, selection: Iterable[int]) -> np.ndarray:
    """
    Orthonormal basis (n x N) of the invariant subspace belonging to the
    selected eigenvalues (indices into the sorted eigenvalue list).

    Raises:
        ParameterError: for an empty or out-of-range selection
        NumericalError: if the computed subspace fails the invariance check
    """
    schur, dim = riesz_schur(b, selection)
    basis = schur.q[:, :dim]
    b = np.asarray(b, dtype=np.complex128)
    projector = basis @ adjoint(basis)
    leak = frobenius((np.eye(b.shape[0]) - projector) @ b @ projector)
    logger.debug("Riesz subspace of dim %d: invariance leak %.3e", dim, leak)
    if leak > INVARIANCE_TOL * (1.0 + frobenius(b)):
        raise NumericalError(f"selected subspace is not invariant (leak {leak:.3e})")
    return basis
