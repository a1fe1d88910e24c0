"""
Checkable forms of the spectral-variation inequalities.

Each checker evaluates both sides of one inequality on concrete matrices and
returns a ``BoundReport``. A report ``holds`` when ``lhs ≤ rhs + tol`` with
``tol = 1e-8·(1 + |rhs|)`` unless overridden. Constants entering a verdict
are always certified upper bounds (see ``constants.CERTIFIED_MODE``); when
the caller asks for ``exact_when_known`` the mode's value is attached to
``details`` for information only.
"""

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import linear_sum_assignment

from spectral_var.constants import (
    CERTIFIED_MODE,
    UNIT,
    BpMode,
    ConstantValue,
    FormulaTag,
    bp,
    cp,
    lp,
    mp,
    np_const,
    parse_mode,
    theorem_constants,
)
from spectral_var.errors import ParameterError, ShapeError
from spectral_var.linalg_core import (
    as_matrix,
    block_decompose,
    block_diagonal,
    frobenius,
    imag_part,
    is_hermitian,
    real_part,
    require_hermitian,
    require_same_shape,
    require_square,
)
from spectral_var.schatten import schatten_norm, schatten_power
from spectral_var.session import DEFAULT_SESSION
from spectral_var.spectral import (
    eigenvalues,
    hermitian_spectrum,
    interval_distance,
    numerical_range_distance,
    spectral_variation,
    split_variation,
)


VERDICT_TOL = DEFAULT_SESSION.verdict_tol
IDENTITY_TOL = DEFAULT_SESSION.identity_tol
SPECTRUM_MATCH_TOL = 1e-7
NILPOTENT_TOL = 1e-12
DEFAULT_ANGLE_COUNT = DEFAULT_SESSION.angle_count


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality (``relation == "le"``) or identity (``"eq"``)."""

    name: str
    lhs: float
    rhs: float
    constant: ConstantValue
    slack: float
    holds: bool
    tol: float
    relation: str = "le"
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant.to_dict(),
            "slack": self.slack,
            "holds": self.holds,
            "tol": self.tol,
            "relation": self.relation,
            "details": dict(self.details),
        }


def make_report(
    name: str,
    lhs: float,
    rhs: float,
    constant: ConstantValue,
    relation: str = "le",
    tol: float | None = None,
    details: dict[str, Any] | None = None,
) -> BoundReport:
    lhs, rhs = float(lhs), float(rhs)
    if relation == "le":
        tol = VERDICT_TOL * (1.0 + abs(rhs)) if tol is None else float(tol)
        holds = lhs <= rhs + tol
    elif relation == "eq":
        tol = IDENTITY_TOL * (1.0 + abs(rhs)) if tol is None else float(tol)
        holds = abs(lhs - rhs) <= tol
    else:
        raise ParameterError(f"relation must be 'le' or 'eq', got {relation!r}")
    return BoundReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        constant=constant,
        slack=rhs - lhs,
        holds=bool(holds),
        tol=tol,
        relation=relation,
        details=details or {},
    )


def _check_p(p: float, strict: bool = False) -> float:
    p = float(p)
    if math.isnan(p) or math.isinf(p) or p < 1.0 or (strict and p <= 1.0):
        bound = "> 1" if strict else ">= 1"
        raise ParameterError(f"p must be a finite real {bound}, got {p}")
    return p


def _mode_details(p: float, mode: BpMode | str, certified: ConstantValue, value_of) -> dict[str, Any]:
    mode = parse_mode(mode)
    if mode is CERTIFIED_MODE:
        return {}
    informational = value_of(p, mode)
    return {"mode": mode.value, "mode_constant": informational.value, "certified_constant": certified.value}


def _hermitian_pair(a, b, names=("a", "b")):
    a = require_hermitian(a, names[0])
    b = require_square(b, names[1])
    require_same_shape(a, b, names)
    return a, b


# ===== THEOREM-LEVEL CHECKS =====

def check_corollary(a: np.ndarray, b: np.ndarray, p: float, mode: BpMode | str = CERTIFIED_MODE) -> BoundReport:
    """``Σ dist(λ, σ(A))^p ≤ C_p ‖B − A‖_p^p`` for p > 1."""
    p = _check_p(p, strict=True)
    a, b = _hermitian_pair(a, b)
    constant = cp(p, CERTIFIED_MODE)
    lhs = spectral_variation(a, b, p)
    rhs = constant.value * schatten_power(b - a, p)
    return make_report("corollary", lhs, rhs, constant, details=_mode_details(p, mode, constant, cp))


def check_main_theorem(a: np.ndarray, b: np.ndarray, p: float, mode: BpMode | str = CERTIFIED_MODE) -> BoundReport:
    """
    ``Σ (dist(Re λ, σ(A))^p + w_p |Im λ|^p) ≤ R_p ‖B − A‖_p^p`` with the
    branch constants of ``constants.theorem_constants``.
    """
    p = _check_p(p, strict=True)
    mode = parse_mode(mode)
    a, b = _hermitian_pair(a, b)
    weight, constant = theorem_constants(p, CERTIFIED_MODE)
    lhs = split_variation(a, b, p, weight.value)
    rhs = constant.value * schatten_power(b - a, p)
    details = {"imag_weight": weight.value}
    if mode is not CERTIFIED_MODE:
        details.update(mode=mode.value, mode_constant=theorem_constants(p, mode)[1].value)
    return make_report("main_theorem", lhs, rhs, constant, details=details)


def check_kato(a: np.ndarray, b: np.ndarray, p: float) -> BoundReport:
    """Both Hermitian: ``Σ dist(λ, σ(A))^p ≤ ‖B − A‖_p^p``."""
    p = _check_p(p)
    a, b = _hermitian_pair(a, b)
    require_hermitian(b, "b")
    return make_report("kato", spectral_variation(a, b, p), schatten_power(b - a, p), UNIT)


def check_interval_bound(a: np.ndarray, b: np.ndarray, p: float) -> BoundReport:
    """``Σ dist(λ, [λ_min(A), λ_max(A)])^p ≤ ‖B − A‖_p^p``."""
    p = _check_p(p)
    a, b = _hermitian_pair(a, b)
    spectrum = hermitian_spectrum(a)
    low, high = float(spectrum[0]), float(spectrum[-1])
    lhs = sum(interval_distance(lam, low, high) ** p for lam in eigenvalues(b))
    return make_report("interval", lhs, schatten_power(b - a, p), UNIT, details={"interval": [low, high]})


def check_numrange_bound(a: np.ndarray, b: np.ndarray, p: float, angle_count: int = DEFAULT_ANGLE_COUNT) -> BoundReport:
    """
    ``Σ dist(λ, Num(A))^p ≤ ‖B − A‖_p^p`` for arbitrary square A.

    The distances come from an outer polygon of ``Num(A)``, so the left side
    is a lower estimate of the true sum and a ``holds`` verdict is sound.
    """
    p = _check_p(p)
    a = require_square(a, "a")
    b = require_square(b, "b")
    require_same_shape(a, b)
    lhs = sum(numerical_range_distance(lam, a, angle_count) ** p for lam in eigenvalues(b))
    return make_report("numrange", lhs, schatten_power(b - a, p), UNIT, details={"angle_count": int(angle_count)})


# ===== LEMMA-LEVEL CHECKS =====

def check_block_norms(t: np.ndarray, split_dim: int, p: float) -> tuple[BoundReport, BoundReport]:
    """``L_p ‖T‖_p^p ≤ Σ ‖T_i‖_p^p ≤ M_p ‖T‖_p^p`` for the 2x2 block partition of T."""
    p = _check_p(p)
    partition = block_decompose(t, split_dim)
    block_sum = sum(schatten_power(block, p) for block in partition.blocks)
    total = schatten_power(t, p)
    lower, upper = lp(p), mp(p)
    return (
        make_report("block_norms.lower", lower.value * total, block_sum, lower),
        make_report("block_norms.upper", block_sum, upper.value * total, upper),
    )


def multiset_match_error(x, y) -> float:
    """
    Largest distance between optimally matched entries of two equally sized
    complex multisets (``inf`` when the sizes differ).
    """
    x = np.asarray(list(x), dtype=np.complex128)
    y = np.asarray(list(y), dtype=np.complex128)
    if x.size != y.size:
        return math.inf
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols]))


def check_block_spectrum(s1: np.ndarray, s2: np.ndarray) -> bool:
    """Eigenvalues of ``blockdiag(s1, s2)`` equal the union of both multisets."""
    s1 = require_square(s1, "s1")
    s2 = require_square(s2, "s2")
    whole = block_diagonal(s1, s2)
    union = list(eigenvalues(s1)) + list(eigenvalues(s2))
    return multiset_match_error(eigenvalues(whole), union) <= SPECTRUM_MATCH_TOL * (1.0 + frobenius(whole))


def check_selfadjoint_blocks(t: np.ndarray, split_dim: int) -> tuple[bool, bool]:
    """
    ``(T is Hermitian, T1 and T4 Hermitian with T3 = T2*)``; the two answers
    must agree for every matrix and split.
    """
    partition = block_decompose(t, split_dim)
    scale = 1.0 + frobenius(partition.assemble())
    coupled = frobenius(partition.t3 - np.conj(partition.t2).T) <= 1e-10 * scale
    blocks_say = is_hermitian(partition.t1) and is_hermitian(partition.t4) and coupled
    return is_hermitian(partition.assemble()), bool(blocks_say)


def diagonal_split(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(K_D, K_O)``: the diagonal of K and the rest."""
    k = require_square(k, "k")
    k_d = np.diag(np.diag(k))
    return k_d, k - k_d


def check_diag_split(k: np.ndarray, p: float) -> BoundReport:
    """
    ``‖K_D‖_p^p + ‖K_O‖_p^p ≤ N_p ‖K‖_p^p``; for ``p = inf`` the operator-norm
    form ``max(‖K_D‖_∞, ‖K_O‖_∞) ≤ 2 ‖K‖_∞``.
    """
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ParameterError(f"p must be >= 1 or inf, got {p}")
    k_d, k_o = diagonal_split(k)
    constant = np_const(p)
    if math.isinf(p):
        lhs = max(schatten_norm(k_d, p), schatten_norm(k_o, p))
        return make_report("diag_split", lhs, constant.value * schatten_norm(k, p), constant)
    lhs = schatten_power(k_d, p) + schatten_power(k_o, p)
    return make_report("diag_split", lhs, constant.value * schatten_power(k, p), constant)


def diagonal_split_ratio(k: np.ndarray, p: float) -> float:
    """
    ``(‖K_D‖_p^p + ‖K_O‖_p^p)/‖K‖_p^p`` (``max(‖K_D‖_∞, ‖K_O‖_∞)/‖K‖_∞`` at
    p = inf); never exceeds ``N_p``.
    """
    report = check_diag_split(k, p)
    denominator = report.rhs / report.constant.value
    if denominator == 0.0:
        raise ParameterError("diagonal split ratio is undefined for K = 0")
    return report.lhs / denominator


def check_clarkson(s: np.ndarray, t: np.ndarray, p: float) -> BoundReport:
    """``‖T‖_p^p + ‖S‖_p^p ≤ (M_p/2)(‖S+T‖_p^p + ‖S−T‖_p^p)``."""
    p = _check_p(p)
    s, t = as_matrix(s, "s"), as_matrix(t, "t")
    require_same_shape(s, t, ("s", "t"))
    constant = mp(p)
    lhs = schatten_power(t, p) + schatten_power(s, p)
    rhs = constant.value / 2.0 * (schatten_power(s + t, p) + schatten_power(s - t, p))
    return make_report("clarkson", lhs, rhs, constant)


def check_re_im(k: np.ndarray, p: float) -> BoundReport:
    """``‖Re K‖_p^p + ‖Im K‖_p^p ≤ M_p ‖K‖_p^p``."""
    p = _check_p(p)
    k = require_square(k, "k")
    constant = mp(p)
    lhs = schatten_power(real_part(k), p) + schatten_power(imag_part(k), p)
    return make_report("re_im", lhs, constant.value * schatten_power(k, p), constant)


def check_macaev(u: np.ndarray, p: float, mode: BpMode | str = CERTIFIED_MODE) -> BoundReport:
    """
    ``‖Re U‖_p ≤ b_p ‖Im U‖_p`` for strictly upper-triangular (nilpotent) U.

    Raises:
        ShapeError: if U has a diagonal or strictly-lower entry above 1e-12
    """
    p = _check_p(p, strict=True)
    u = require_square(u, "u")
    off = np.tril(u)
    if off.size and float(np.max(np.abs(off))) > NILPOTENT_TOL * (1.0 + frobenius(u)):
        raise ShapeError("u must be strictly upper-triangular")
    constant = bp(p, CERTIFIED_MODE)
    lhs = schatten_norm(real_part(u), p)
    im_norm = schatten_norm(imag_part(u), p)
    details = _mode_details(p, mode, constant, bp)
    if details:
        details["mode_rhs"] = details["mode_constant"] * im_norm
    return make_report("macaev", lhs, constant.value * im_norm, constant, details=details)


# ===== SCALAR STEPS =====

def check_holder_step(x: float, y: float, b: float, p: float) -> BoundReport:
    """``(x + b·y)^p ≤ (1 + b^{p/(p-1)})^{p-1} (x^p + y^p)`` for x, y, b ≥ 0 and p > 1."""
    p = _check_p(p, strict=True)
    if min(x, y, b) < 0:
        raise ParameterError("x, y and b must be non-negative")
    factor = (1.0 + b ** (p / (p - 1.0))) ** (p - 1.0)
    constant = ConstantValue(factor, True, FormulaTag.GAMMA)
    return make_report("holder_step", (x + b * y) ** p, factor * (x ** p + y ** p), constant)


def check_power_mean(a: float, b: float, q: float) -> BoundReport:
    """``min(2^{1-q}, 1)(a + b)^q ≤ a^q + b^q`` for a, b, q ≥ 0."""
    if min(a, b, q) < 0:
        raise ParameterError("a, b and q must be non-negative")
    factor = min(2.0 ** (1.0 - q), 1.0)
    return make_report("power_mean", factor * (a + b) ** q, a ** q + b ** q, ConstantValue(factor, True, FormulaTag.MP))
