"""
The explicit constants of the spectral-variation estimates.

``b_p`` is the constant of Macaev's inequality ``‖Re T‖_p ≤ b_p ‖Im T‖_p``
for nilpotent T. It is only known in closed form for p = 2^n, so two modes
are offered:

* ``upper_bound`` (default): a value that is provably ≥ b_p. At p = 2^n it is
  the exact ``cot(π/(2p))``; elsewhere it is the smaller of
  ``p/(ln 2·e^{2/3})`` and the exact value at the next power of two (b_p is
  increasing on [2, ∞)). It is monotone in p.
* ``exact_when_known``: ``cot(π/(2p))`` everywhere. This is exact at p = 2^n
  and only a lower bound elsewhere, so it is informational.

For 1 < p < 2 both modes use ``b_p = b_{p/(p-1)}``.
"""

import math
from dataclasses import dataclass
from enum import Enum

from spectral_var.errors import ParameterError


class BpMode(str, Enum):
    EXACT_WHEN_KNOWN = "exact_when_known"
    UPPER_BOUND = "upper_bound"


class FormulaTag(str, Enum):
    BP = "BP"
    GAMMA = "GAMMA"
    LP = "LP"
    MP = "MP"
    NP = "NP"
    CP = "CP"
    ONE = "ONE"
    MAIN = "MAIN"
    CHAIN = "CHAIN"


# Verdicts are always computed with values that are valid upper bounds.
CERTIFIED_MODE = BpMode.UPPER_BOUND

MACAEV_DENOMINATOR = math.log(2.0) * math.exp(2.0 / 3.0)
POWER_OF_TWO_TOL = 1e-12


@dataclass(frozen=True)
class ConstantValue:
    value: float
    exact: bool
    formula_tag: FormulaTag

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value <= 0:
            raise ParameterError(f"constant {self.formula_tag.value} must be finite and > 0, got {self.value}")

    def to_dict(self) -> dict:
        return {"value": self.value, "exact": self.exact, "formula_tag": self.formula_tag.value}


UNIT = ConstantValue(1.0, True, FormulaTag.ONE)


def parse_mode(mode: BpMode | str) -> BpMode:
    """Coerce a mode name to ``BpMode``, raising ParameterError for unknown names."""
    try:
        return BpMode(mode)
    except ValueError:
        raise ParameterError(f"unknown mode {mode!r}; expected one of {[m.value for m in BpMode]}")


def _require_above_one(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p <= 1.0 or math.isinf(p):
        raise ParameterError(f"p must be a finite real > 1, got {p}")
    return p


def _require_at_least_one(p: float, allow_inf: bool = False) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0 or (math.isinf(p) and not allow_inf):
        raise ParameterError(f"p must be a finite real >= 1, got {p}")
    return p


def dual_exponent(p: float) -> float:
    return p / (p - 1.0)


def is_power_of_two(p: float) -> bool:
    """True for p = 2^n with n ≥ 1, up to a float-safe tolerance on log2 p."""
    if p < 2.0:
        return False
    exponent = math.log2(p)
    return abs(exponent - round(exponent)) < POWER_OF_TWO_TOL


def _cot_half_pi_over(p: float) -> float:
    return 1.0 / math.tan(math.pi / (2.0 * p))


def bp_lower(p: float) -> ConstantValue:
    """``cot(π/(2p))``: a lower bound for b_p, exact at p = 2^n."""
    p = _require_above_one(p)
    if p < 2.0:
        p = dual_exponent(p)
    return ConstantValue(_cot_half_pi_over(p), is_power_of_two(p), FormulaTag.BP)


def bp(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> ConstantValue:
    """
    Macaev constant b_p.

    Raises:
        ParameterError: if ``p ≤ 1``
    """
    p = _require_above_one(p)
    mode = parse_mode(mode)
    if p < 2.0:
        return bp(dual_exponent(p), mode)

    if is_power_of_two(p):
        return ConstantValue(_cot_half_pi_over(2.0 ** round(math.log2(p))), True, FormulaTag.BP)
    if mode is BpMode.EXACT_WHEN_KNOWN:
        return ConstantValue(_cot_half_pi_over(p), False, FormulaTag.BP)

    next_power = 2.0 ** math.ceil(math.log2(p))
    value = min(p / MACAEV_DENOMINATOR, _cot_half_pi_over(next_power))
    return ConstantValue(value, False, FormulaTag.BP)


def gamma_p(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> ConstantValue:
    """``Γ_p = (1 + b_p^{p/(p-1)})^{p-1}``; at least 2 in ``upper_bound`` mode."""
    p = _require_above_one(p)
    b = bp(p, mode)
    value = (1.0 + b.value ** dual_exponent(p)) ** (p - 1.0)
    return ConstantValue(value, b.exact, FormulaTag.GAMMA)


def lp(p: float) -> ConstantValue:
    """Lower block constant: ``2^{2-p}`` for p ≥ 2, 1 on [1, 2)."""
    p = _require_at_least_one(p)
    return ConstantValue(2.0 ** (2.0 - p) if p >= 2.0 else 1.0, True, FormulaTag.LP)


def mp(p: float) -> ConstantValue:
    """Upper block constant: 1 for p ≥ 2, ``2^{2-p}`` on [1, 2)."""
    p = _require_at_least_one(p)
    return ConstantValue(1.0 if p >= 2.0 else 2.0 ** (2.0 - p), True, FormulaTag.MP)


def np_const(p: float) -> ConstantValue:
    """
    Diagonal-split constant: ``2^{p-2}`` for p ≥ 2, ``3^{2-p}`` on [1, 2).

    ``p = inf`` gives 2, the bound in the operator-norm reading
    ``max(‖K_D‖_∞, ‖K_O‖_∞) ≤ 2‖K‖_∞``.
    """
    p = _require_at_least_one(p, allow_inf=True)
    if math.isinf(p):
        return ConstantValue(2.0, True, FormulaTag.NP)
    return ConstantValue(2.0 ** (p - 2.0) if p >= 2.0 else 3.0 ** (2.0 - p), True, FormulaTag.NP)


def cp(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> ConstantValue:
    """
    Constant of ``Σ dist(λ, σ(A))^p ≤ C_p ‖B − A‖_p^p``.

    Raises:
        ParameterError: if ``p ≤ 1`` (no finite constant is established at p = 1)
    """
    p = _require_above_one(p)
    if p == 2.0:
        return ConstantValue(2.0, True, FormulaTag.CP)
    gamma = gamma_p(p, mode)
    if p > 2.0:
        value = 2.0 ** (p / 2.0 - 1.0) * 4.0 ** (p - 2.0) * gamma.value
    else:
        value = 12.0 ** (2.0 - p) * gamma.value
    return ConstantValue(value, gamma.exact, FormulaTag.CP)


def theorem_constants(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> tuple[ConstantValue, ConstantValue]:
    """
    Weight of ``|Im λ|^p`` and the right-hand constant of the split estimate
    ``Σ (dist(Re λ, σ(A))^p + w_p |Im λ|^p) ≤ R_p ‖B − A‖_p^p``.

    Returns:
        ``(w_p, R_p)``: (2, 2) at p = 2; (2^{p-2}Γ_p, 4^{p-2}Γ_p) for p > 2;
        (Γ_p, 12^{2-p}Γ_p) for 1 < p < 2
    """
    p = _require_above_one(p)
    if p == 2.0:
        return ConstantValue(2.0, True, FormulaTag.MAIN), ConstantValue(2.0, True, FormulaTag.MAIN)
    gamma = gamma_p(p, mode)
    if p > 2.0:
        weight, rhs = 2.0 ** (p - 2.0) * gamma.value, 4.0 ** (p - 2.0) * gamma.value
    else:
        weight, rhs = gamma.value, 12.0 ** (2.0 - p) * gamma.value
    return ConstantValue(weight, gamma.exact, FormulaTag.MAIN), ConstantValue(rhs, gamma.exact, FormulaTag.MAIN)


def chain_weight(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> ConstantValue:
    """``L_p^{-1} Γ_p``."""
    gamma = gamma_p(p, mode)
    return ConstantValue(gamma.value / lp(p).value, gamma.exact, FormulaTag.CHAIN)


def chain_constant(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> ConstantValue:
    """``L_p^{-1} Γ_p N_p M_p^2``; equals the theorem's right-hand constant."""
    weight = chain_weight(p, mode)
    value = weight.value * np_const(p).value * mp(p).value ** 2
    return ConstantValue(value, weight.exact, FormulaTag.CHAIN)


def constants_table(p: float, mode: BpMode | str = BpMode.UPPER_BOUND) -> dict[str, ConstantValue | str]:
    """
    All constants at ``p``; entries that are undefined at ``p`` hold a reason string.

    Raises:
        ParameterError: if ``p < 1``
    """
    p = _require_at_least_one(p)
    table: dict[str, ConstantValue | str] = {}
    if p > 1.0:
        table["b_p"] = bp(p, mode)
        table["Gamma_p"] = gamma_p(p, mode)
    else:
        table["b_p"] = table["Gamma_p"] = "unsupported (p>1 required)"
    table["L_p"] = lp(p)
    table["M_p"] = mp(p)
    table["N_p"] = np_const(p)
    table["C_p"] = cp(p, mode) if p > 1.0 else "unsupported (p>1 required)"
    return table
