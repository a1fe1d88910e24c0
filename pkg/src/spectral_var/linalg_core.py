"""
Dense complex matrices: real/imaginary parts, 2x2 block partitions and
ordered Schur factorization.

Every matrix handled by the package is a square or rectangular
``numpy.ndarray`` of dtype ``complex128`` ("ComplexMatrix"). All functions
are pure; they never modify their inputs.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from spectral_var.errors import DimensionError, NumericalError, ParameterError, ShapeError, StructureError
from spectral_var.session import DEFAULT_SESSION


logger = logging.getLogger(__name__)

SCHUR_UNITARY_TOL = 1e-10
SCHUR_RESIDUAL_TOL = 1e-8
TRIANGULAR_TOL = DEFAULT_SESSION.triangular_tol
HERMITIAN_TOL = DEFAULT_SESSION.hermitian_tol


# ===== VALIDATION =====

def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """
    Convert ``data`` to a finite 2-D complex128 array.

    Raises:
        DimensionError: if the input is not two-dimensional or has an empty axis
        StructureError: if an entry is NaN or infinite
    """
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StructureError(f"{name} has non-finite entries")
    return m


def require_square(t: np.ndarray, name: str = "matrix") -> np.ndarray:
    t = as_matrix(t, name)
    if t.shape[0] != t.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {t.shape}")
    return t


def require_same_shape(s: np.ndarray, t: np.ndarray, names: tuple[str, str] = ("a", "b")) -> None:
    if s.shape != t.shape:
        raise DimensionError(f"{names[0]} and {names[1]} differ in shape: {s.shape} vs {t.shape}")


def frobenius(t: np.ndarray) -> float:
    return float(np.linalg.norm(t)) if t.size else 0.0


def adjoint(t: np.ndarray) -> np.ndarray:
    return np.conj(t).T


def is_hermitian(t: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """True when ``‖T − T*‖_F ≤ tol·(1 + ‖T‖_F)``."""
    t = np.asarray(t)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        return False
    return frobenius(t - adjoint(t)) <= tol * (1.0 + frobenius(t))


def require_hermitian(t: np.ndarray, name: str = "matrix", tol: float = HERMITIAN_TOL) -> np.ndarray:
    t = require_square(t, name)
    if not is_hermitian(t, tol):
        raise StructureError(f"{name} is not Hermitian (tolerance {tol:g})")
    return t


# ===== REAL AND IMAGINARY PARTS =====

def real_part(t: np.ndarray) -> np.ndarray:
    """Hermitian real part ``(T + T*)/2``."""
    t = require_square(t, "t")
    return (t + adjoint(t)) / 2


def imag_part(t: np.ndarray) -> np.ndarray:
    """Hermitian imaginary part ``(T − T*)/(2i)``."""
    t = require_square(t, "t")
    return (t - adjoint(t)) / 2j


# ===== BLOCK PARTITIONS =====

@dataclass(frozen=True)
class BlockPartition:
    """The four blocks of ``T = [[t1, t2], [t3, t4]]`` split after ``split_dim`` rows/columns."""

    split_dim: int
    t1: np.ndarray
    t2: np.ndarray
    t3: np.ndarray
    t4: np.ndarray

    @property
    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.t1, self.t2, self.t3, self.t4

    def assemble(self) -> np.ndarray:
        return np.block([[self.t1, self.t2], [self.t3, self.t4]])


def split_blocks(t: np.ndarray, split_dim: int) -> BlockPartition:
    """Partition without range checks; ``split_dim`` may be 0 or n (empty blocks)."""
    n1 = int(split_dim)
    return BlockPartition(
        split_dim=n1,
        t1=t[:n1, :n1].copy(),
        t2=t[:n1, n1:].copy(),
        t3=t[n1:, :n1].copy(),
        t4=t[n1:, n1:].copy(),
    )


def block_decompose(t: np.ndarray, split_dim: int) -> BlockPartition:
    """
    Split a square matrix with respect to the first ``split_dim`` coordinates
    and their orthogonal complement.

    Raises:
        DimensionError: for non-square input or ``split_dim`` outside ``(0, n)``
    """
    t = require_square(t, "t")
    n = t.shape[0]
    if not isinstance(split_dim, (int, np.integer)) or not 0 < split_dim < n:
        raise DimensionError(f"split_dim must be an integer in (0, {n}), got {split_dim!r}")
    return split_blocks(t, int(split_dim))


def block_diagonal(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    return scipy.linalg.block_diag(s1, s2).astype(np.complex128)


# ===== SCHUR FORMS =====

@dataclass(frozen=True)
class SchurForm:
    """Unitary ``q`` and upper-triangular ``t`` with ``M = q t q*``."""

    q: np.ndarray
    t: np.ndarray
    eigenvalue_order: tuple[complex, ...]

    @property
    def dim(self) -> int:
        return self.t.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.q @ self.t @ adjoint(self.q)


def sorted_eigen_order(values: Sequence[complex]) -> np.ndarray:
    """
    Positions of ``values`` sorted by real part descending, ties broken by
    imaginary part descending. The sort is stable.
    """
    values = np.asarray(values, dtype=np.complex128)
    return np.lexsort((-values.imag, -values.real))


def validate_selection(selection: Iterable[int], n: int) -> tuple[int, ...]:
    """Check an index set into the sorted eigenvalue list of an ``n``-dimensional matrix."""
    try:
        chosen = tuple(int(i) for i in selection)
    except (TypeError, ValueError):
        raise ParameterError(f"selection must be a collection of integers, got {selection!r}")
    if not chosen:
        raise ParameterError("selection must not be empty")
    if len(set(chosen)) != len(chosen):
        raise ParameterError(f"selection has repeated indices: {chosen}")
    bad = [i for i in chosen if not 0 <= i < n]
    if bad:
        raise ParameterError(f"selection indices {bad} out of range for {n} eigenvalues")
    return tuple(sorted(chosen))


def _swap_adjacent(t: np.ndarray, q: np.ndarray, k: int) -> None:
    """Exchange diagonal entries k and k+1 of ``t`` by a unitary rotation, in place."""
    a, b, x = t[k, k], t[k + 1, k + 1], t[k, k + 1]
    norm = np.hypot(abs(x), abs(b - a))
    if norm == 0.0:
        # a == b and the 2x2 block is diagonal: nothing to exchange
        return
    c, s = x / norm, (b - a) / norm
    g = np.array([[c, -np.conj(s)], [s, np.conj(c)]])
    t[k:k + 2, :] = adjoint(g) @ t[k:k + 2, :]
    t[:, k:k + 2] = t[:, k:k + 2] @ g
    q[:, k:k + 2] = q[:, k:k + 2] @ g
    t[k + 1, k] = 0.0
    t[k, k], t[k + 1, k + 1] = b, a


def _reorder(t: np.ndarray, q: np.ndarray, selected: np.ndarray) -> None:
    """Move the flagged diagonal entries to the leading positions by adjacent swaps."""
    flags = selected.copy()
    front = 0
    for pos in range(len(flags)):
        if not flags[pos]:
            continue
        for k in range(pos - 1, front - 1, -1):
            _swap_adjacent(t, q, k)
            flags[k], flags[k + 1] = flags[k + 1], flags[k]
        front += 1


def _check_schur(m: np.ndarray, q: np.ndarray, t: np.ndarray) -> None:
    n = m.shape[0]
    unitary_gap = frobenius(q @ adjoint(q) - np.eye(n))
    residual = frobenius(q @ t @ adjoint(q) - m)
    logger.debug("Schur form n=%d: unitarity gap %.3e, residual %.3e", n, unitary_gap, residual)
    if unitary_gap > SCHUR_UNITARY_TOL * n:
        raise NumericalError(f"Schur vectors lost orthogonality (gap {unitary_gap:.3e})")
    if residual > SCHUR_RESIDUAL_TOL * (1.0 + frobenius(m)):
        raise NumericalError(f"Schur residual {residual:.3e} exceeds tolerance")


def schur_decompose(m: np.ndarray, leading: Iterable[int] | None = None) -> SchurForm:
    """
    Complex Schur factorization ``M = Q T Q*``, optionally reordered.

    Args:
        m: Square complex matrix
        leading: Indices into the eigenvalue list sorted by
            ``sorted_eigen_order``; the selected eigenvalues are moved to the
            leading diagonal positions of ``T``

    Returns:
        SchurForm whose strictly-lower part of ``t`` is exactly zero

    Raises:
        DimensionError: for non-square input
        ParameterError: for an invalid selection
        NumericalError: if the eigensolver fails or the residual check fails
    """
    m = require_square(m, "m")
    try:
        t, q = scipy.linalg.schur(m, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Schur factorization failed: {exc}") from exc

    t = np.triu(t).astype(np.complex128)
    q = np.asarray(q, dtype=np.complex128)

    if leading is not None:
        n = m.shape[0]
        chosen = validate_selection(leading, n)
        order = sorted_eigen_order(np.diag(t))
        selected = np.zeros(n, dtype=bool)
        selected[order[list(chosen)]] = True
        _reorder(t, q, selected)
        t = np.triu(t)
        logger.debug("Reordered Schur form: %d of %d eigenvalues leading", len(chosen), n)

    _check_schur(m, q, t)
    return SchurForm(q=q, t=t, eigenvalue_order=tuple(complex(v) for v in np.diag(t)))


def complete_basis(e: np.ndarray) -> np.ndarray:
    """
    Extend the orthonormal columns of ``e`` (n x N) to a unitary n x n matrix
    whose first N columns are ``e`` itself.
    """
    n, k = e.shape
    if k == n:
        return e.copy()
    full, _ = scipy.linalg.qr(e)
    return np.hstack([e, full[:, k:]]).astype(np.complex128)


# ===== TRIANGULAR SPLITS =====

@dataclass(frozen=True)
class TriangularSplit:
    """``B1 = r1 + i·i1 + u1`` with real diagonal ``r1, i1`` and strictly upper ``u1``."""

    r1: np.ndarray
    i1: np.ndarray
    u1: np.ndarray

    def assemble(self) -> np.ndarray:
        return self.r1 + 1j * self.i1 + self.u1


def strictly_lower_size(t: np.ndarray) -> float:
    lower = np.tril(t, -1)
    return float(np.max(np.abs(lower))) if lower.size else 0.0


def strict_upper_split(b1: np.ndarray, tol: float = TRIANGULAR_TOL) -> TriangularSplit:
    """
    Split an upper-triangular matrix into its real diagonal, imaginary
    diagonal and strictly upper-triangular remainder.

    Raises:
        ShapeError: if a strictly-lower entry exceeds ``tol`` in modulus
    """
    b1 = require_square(b1, "b1")
    lower = strictly_lower_size(b1)
    if lower > tol:
        raise ShapeError(f"b1 is not upper-triangular (strictly-lower entry of size {lower:.3e})")
    diagonal = np.diag(b1)
    return TriangularSplit(
        r1=np.diag(diagonal.real),
        i1=np.diag(diagonal.imag),
        u1=np.triu(b1, 1),
    )
