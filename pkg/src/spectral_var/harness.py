"""
Random instances, batch soundness sweeps and the extremal search for
sharpness witnesses of ``Σ dist(λ, σ(A))^p / ‖B − A‖_p^p``.

Every random draw comes from ``numpy.random.default_rng`` seeded with a
tuple derived from (seed, trial) or (seed, restart), so sweeps give the same
result under any worker schedule.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np
import scipy.optimize
from sklearn.utils.parallel import Parallel, delayed

from spectral_var import bounds
from spectral_var.constants import cp
from spectral_var.errors import DegenerateError, NumericalError, ParameterError
from spectral_var.matrix_io import to_json_dense
from spectral_var.proof_chain import verify_proof_chain
from spectral_var.schatten import schatten_norm, schatten_power
from spectral_var.session import DEFAULT_SESSION, Session
from spectral_var.spectral import spectral_variation


logger = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-12
SHARP_FAMILY_B = (0.25, 0.5, 1.0, 2.0, 4.0)
MAX_SEED = 2 ** 64
JITTER_SCALE = 0.1
SIMPLEX_OPTIONS = {"adaptive": True, "xatol": 1e-12, "fatol": 1e-14}

SeedLike = int | Sequence[int]


class Ensemble(str, Enum):
    GUE_PLUS_GINIBRE = "gue_plus_ginibre"
    HERMITIAN_PAIR = "hermitian_pair"
    SHARP_FAMILY = "sharp_family"


class SharpKind(str, Enum):
    REMARK1 = "remark1"
    MAIN1_FAMILY = "main1_family"


# ===== GENERATORS =====

def gen_hermitian(n: int, seed: SeedLike) -> np.ndarray:
    """GUE-type matrix ``(G + G*)/2`` from a complex Ginibre draw G."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    g = _ginibre(n, np.random.default_rng(seed))
    return (g + np.conj(g).T) / 2


def _ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)


def _next_seed(seed: SeedLike) -> SeedLike:
    if isinstance(seed, (int, np.integer)):
        return int(seed) + 1
    seed = list(seed)
    return [*seed[:-1], seed[-1] + 1]


def gen_perturbation(n: int, seed: SeedLike, p: float, target_norm: float) -> np.ndarray:
    """
    Ginibre matrix rescaled to ``‖K‖_p = target_norm``.

    A zero draw is retried with the next seed.

    Raises:
        ParameterError: if ``n < 1`` or ``target_norm`` is not a positive real
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not math.isfinite(target_norm) or target_norm <= 0:
        raise ParameterError(f"target_norm must be a positive real, got {target_norm}")
    while True:
        k = _ginibre(n, np.random.default_rng(seed))
        norm = schatten_norm(k, p)
        if norm > 0.0:
            return k * (target_norm / norm)
        logger.debug("Zero Ginibre draw for seed %s, retrying", seed)
        seed = _next_seed(seed)


def _hermitian_perturbation(n: int, seed: SeedLike, p: float, target_norm: float) -> np.ndarray:
    h = gen_hermitian(n, seed)
    return h * (target_norm / schatten_norm(h, p))


def sharp_pair(kind: SharpKind | str, b: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    The two 2x2 equality witnesses.

    ``remark1``: A = [[0,1],[1,0]], B = [[0,1],[0,0]].
    ``main1_family``: the same A with B = [[ib,1],[0,ib]], b > 0.
    """
    try:
        kind = SharpKind(kind)
    except ValueError:
        raise ParameterError(f"Unknown sharp pair {kind!r}; expected one of {[k.value for k in SharpKind]}")
    a = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if kind is SharpKind.REMARK1:
        return a, np.array([[0, 1], [0, 0]], dtype=np.complex128)
    if b is None or not math.isfinite(b) or b <= 0:
        raise ParameterError(f"main1_family needs b > 0, got {b}")
    return a, np.array([[1j * b, 1], [0, 1j * b]], dtype=np.complex128)


def family_ratio(b: float) -> float:
    """Closed form of ``ratio`` on the ``main1_family`` pair at p = 2."""
    if not math.isfinite(b) or b <= 0:
        raise ParameterError(f"b must be > 0, got {b}")
    return 2.0 * (1.0 + b * b) / (1.0 + 2.0 * b * b)


def diag_split_witness(n: int, p: float) -> np.ndarray:
    """
    Matrices whose diagonal-split ratio approaches the constant: the all-ones
    matrix E for p = 1 (ratio (3n−2)/n) and ``E − (n/2)I`` for p = inf
    (ratio 2(n−1)/n).
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    ones = np.ones((n, n), dtype=np.complex128)
    if p == 1:
        return ones
    if math.isinf(p):
        return ones - (n / 2.0) * np.eye(n)
    raise ParameterError(f"diagonal-split witnesses exist for p = 1 and p = inf, got {p}")


def ratio(a: np.ndarray, b: np.ndarray, p: float) -> float:
    """
    ``spectral_variation(a, b, p) / ‖b − a‖_p^p``.

    Raises:
        DegenerateError: if ``‖b − a‖_p ≤ 1e-12``
    """
    k = np.asarray(b) - np.asarray(a)
    if schatten_norm(k, p) <= DEGENERATE_NORM:
        raise DegenerateError("ratio is undefined for B = A")
    return spectral_variation(a, b, p) / schatten_power(k, p)


# ===== SWEEPS =====

@dataclass(frozen=True)
class TrialConfig:
    dim: int
    p: float
    trials: int
    seed: int
    ensemble: Ensemble = Ensemble.GUE_PLUS_GINIBRE
    perturbation_norm: float = 1.0

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ParameterError(f"dim must be an integer >= 2, got {self.dim!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ParameterError(f"trials must be an integer >= 1, got {self.trials!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < MAX_SEED:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not math.isfinite(self.p) or self.p < 1.0:
            raise ParameterError(f"p must be a finite real >= 1, got {self.p}")
        if not math.isfinite(self.perturbation_norm) or self.perturbation_norm <= 0:
            raise ParameterError(f"perturbation_norm must be a positive real, got {self.perturbation_norm}")
        try:
            object.__setattr__(self, "ensemble", Ensemble(self.ensemble))
        except ValueError:
            raise ParameterError(f"Unknown ensemble {self.ensemble!r}; expected one of {[e.value for e in Ensemble]}")

    @property
    def exploratory(self) -> bool:
        """At p = 1 only the ratio is recorded for the p > 1 estimates."""
        return self.p == 1.0

    def to_dict(self) -> dict:
        return {
            "dim": int(self.dim),
            "p": float(self.p),
            "trials": int(self.trials),
            "seed": int(self.seed),
            "ensemble": self.ensemble.value,
            "perturbation_norm": float(self.perturbation_norm),
        }


class SweepRow(NamedTuple):
    trial: int
    p: float
    dim: int
    check_name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    ratio: float


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    ratio: float | None
    rows: tuple[SweepRow, ...]
    instance: dict | None
    failure: str | None = None


@dataclass(frozen=True)
class SweepSummary:
    config: TrialConfig
    max_ratio: float | None
    argmax_trial: int | None
    argmax_instance: dict | None
    violations: int
    slack_quantiles: dict[str, dict[str, float]]
    rows: tuple[SweepRow, ...] = field(repr=False)
    failures: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "max_ratio": self.max_ratio,
            "argmax_trial": self.argmax_trial,
            "argmax_instance": self.argmax_instance,
            "violations": self.violations,
            "slack_quantiles": self.slack_quantiles,
            "failures": list(self.failures),
            "row_count": len(self.rows),
        }


def trial_instance(config: TrialConfig, trial: int) -> tuple[np.ndarray, np.ndarray]:
    """The (A, B) pair of one trial; depends only on (config, trial)."""
    if config.ensemble is Ensemble.SHARP_FAMILY:
        if trial == 0:
            return sharp_pair(SharpKind.REMARK1)
        return sharp_pair(SharpKind.MAIN1_FAMILY, SHARP_FAMILY_B[(trial - 1) % len(SHARP_FAMILY_B)])

    n, p = int(config.dim), config.p
    a = gen_hermitian(n, [config.seed, trial, 0])
    if config.ensemble is Ensemble.HERMITIAN_PAIR:
        k = _hermitian_perturbation(n, [config.seed, trial, 1], p, config.perturbation_norm)
    else:
        k = gen_perturbation(n, [config.seed, trial, 1], p, config.perturbation_norm)
    return a, a + k


def _trial_reports(config: TrialConfig, a: np.ndarray, b: np.ndarray, angle_count: int) -> list[bounds.BoundReport]:
    p = config.p
    k = b - a
    reports = []
    if not config.exploratory:
        reports.append(bounds.check_corollary(a, b, p))
        reports.append(bounds.check_main_theorem(a, b, p))
    if config.ensemble is Ensemble.HERMITIAN_PAIR:
        reports.append(bounds.check_kato(a, b, p))
    reports.append(bounds.check_interval_bound(a, b, p))
    reports.append(bounds.check_numrange_bound(a, b, p, angle_count))
    reports.extend(bounds.check_block_norms(k, k.shape[0] // 2, p))
    reports.append(bounds.check_diag_split(k, p))
    reports.append(bounds.check_clarkson(a, k, p))
    reports.append(bounds.check_re_im(k, p))
    if not config.exploratory:
        reports.append(bounds.check_macaev(np.triu(k, 1), p))
        chain = verify_proof_chain(a, b, p)
        reports.extend(replace(step, name=f"chain.{step.name}") for step in chain.steps)
    return reports


def _run_trial(config: TrialConfig, trial: int, angle_count: int) -> TrialOutcome:
    a, b = trial_instance(config, trial)
    try:
        r = ratio(a, b, config.p)
        reports = _trial_reports(config, a, b, angle_count)
    except NumericalError as exc:
        logger.warning("Trial %d failed: %s", trial, exc)
        return TrialOutcome(trial=trial, ratio=None, rows=(), instance=None, failure=str(exc))

    rows = tuple(
        SweepRow(trial, float(config.p), int(a.shape[0]), rep.name, rep.lhs, rep.rhs, rep.slack, rep.holds, r)
        for rep in reports
    )
    instance = {"a": to_json_dense(a), "b": to_json_dense(b)}
    return TrialOutcome(trial=trial, ratio=r, rows=rows, instance=instance)


def summarize(config: TrialConfig, outcomes: Sequence[TrialOutcome]) -> SweepSummary:
    """Aggregate trial outcomes; the result does not depend on their order."""
    outcomes = sorted(outcomes, key=lambda o: o.trial)
    rows = tuple(row for o in outcomes for row in o.rows)
    failures = tuple({"trial": o.trial, "error": o.failure} for o in outcomes if o.failure is not None)

    scored = [o for o in outcomes if o.ratio is not None]
    best = max(scored, key=lambda o: (o.ratio, -o.trial), default=None)

    slacks: dict[str, list[float]] = {}
    for row in rows:
        slacks.setdefault(row.check_name, []).append(row.slack)
    quantiles = {
        name: {"min": float(np.min(v)), "median": float(np.median(v)), "max": float(np.max(v))}
        for name, v in slacks.items()
    }

    return SweepSummary(
        config=config,
        max_ratio=None if best is None else float(best.ratio),
        argmax_trial=None if best is None else best.trial,
        argmax_instance=None if best is None else best.instance,
        violations=sum(1 for row in rows if not row.holds),
        slack_quantiles=quantiles,
        rows=rows,
        failures=failures,
    )


def run_sweep(config: TrialConfig, session: Session = DEFAULT_SESSION) -> SweepSummary:
    """
    Run every checker on ``config.trials`` instances.

    Trials run on ``session.threads`` workers; numerical failures become
    per-trial records and the sweep continues.
    """
    logger.info("Sweep: %s on %d worker(s)", config.to_dict(), session.threads)
    outcomes = Parallel(n_jobs=session.threads, prefer="threads")(
        delayed(_run_trial)(config, trial, session.angle_count) for trial in range(config.trials)
    )
    summary = summarize(config, outcomes)
    if summary.violations:
        logger.warning("Sweep found %d violated checks", summary.violations)
    return summary


# ===== SHARPNESS SEARCH =====

class TracePoint(NamedTuple):
    evaluation: int
    restart: int
    best_ratio: float


@dataclass(frozen=True)
class SharpnessResult:
    best_ratio: float
    best_pair: tuple[np.ndarray, np.ndarray]
    trace: tuple[TracePoint, ...]


def parameter_count(n: int) -> int:
    """n real diagonal entries, n(n−1)/2 complex upper entries of A and 2n² reals for K."""
    return n + n * (n - 1) + 2 * n * n


def decode_pair(x: np.ndarray, n: int, p: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Map a real parameter vector to (A, B) with A Hermitian and ``‖B − A‖_p = 1``.

    Raises:
        DegenerateError: if the encoded K vanishes
    """
    x = np.asarray(x, dtype=float)
    upper = np.triu_indices(n, 1)
    m = len(upper[0])
    a = np.diag(x[:n]).astype(np.complex128)
    a[upper] = x[n:n + m] + 1j * x[n + m:n + 2 * m]
    a[upper[1], upper[0]] = np.conj(a[upper])

    offset = n + 2 * m
    k = (x[offset:offset + n * n] + 1j * x[offset + n * n:]).reshape(n, n)
    norm = schatten_norm(k, p)
    if norm <= DEGENERATE_NORM:
        raise DegenerateError("search point encodes K = 0")
    return a, a + k / norm


def search_start(n: int, seed: int, restart: int, best_x: np.ndarray | None = None) -> np.ndarray:
    """
    Starting point of one restart: a fresh Gaussian draw on even restarts
    (and whenever nothing has been found yet), a jittered copy of the best
    point so far on odd ones. The jitter is a tenth of the size of
    ``best_x`` spread over its coordinates.
    """
    rng = np.random.default_rng([seed, restart])
    draw = rng.standard_normal(parameter_count(n))
    if best_x is None or restart % 2 == 0:
        return draw
    scale = JITTER_SCALE * max(float(np.linalg.norm(best_x)), 1.0) / math.sqrt(draw.size)
    return best_x + scale * draw


def sharpness_search(
    p: float,
    n: int,
    iterations: int,
    seed: int,
    restarts: int = DEFAULT_SESSION.search_restarts,
) -> SharpnessResult:
    """
    Maximize ``ratio`` over (A Hermitian, ‖K‖_p = 1) with restarted Nelder-Mead.

    Args:
        p: Schatten index, > 1
        n: Matrix dimension, >= 2
        iterations: Simplex iterations per restart, shared by the relaunches
            of that restart; 1 evaluates only the starting points
        seed: Seed of the restart streams
        restarts: Number of restarts

    Returns:
        SharpnessResult with the best ratio, its (A, B) pair and the
        best-so-far trace over all evaluations
    """
    if not math.isfinite(p) or p <= 1.0:
        raise ParameterError(f"p must be a finite real > 1, got {p}")
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if iterations < 1 or restarts < 1:
        raise ParameterError(f"iterations and restarts must be >= 1, got {iterations}, {restarts}")

    best = {"ratio": -math.inf, "x": None}
    trace: list[TracePoint] = []

    def evaluate(x: np.ndarray, restart: int) -> float:
        try:
            value = spectral_variation(*decode_pair(x, n, p), p)
        except (DegenerateError, NumericalError):
            value = 0.0
        if value > best["ratio"]:
            best["ratio"], best["x"] = value, np.array(x, dtype=float)
        trace.append(TracePoint(len(trace) + 1, restart, best["ratio"]))
        return value

    for restart in range(restarts):
        x0 = search_start(n, seed, restart, best["x"])
        if iterations == 1:
            evaluate(x0, restart)
            continue
        x, value, remaining = x0, -math.inf, iterations
        # A collapsed simplex is relaunched from its best vertex until it stops paying off.
        while remaining > 0:
            res = scipy.optimize.minimize(
                lambda y, r=restart: -evaluate(y, r),
                x,
                method="Nelder-Mead",
                options={**SIMPLEX_OPTIONS, "maxiter": remaining},
            )
            remaining -= max(int(res.nit), 1)
            gain = -float(res.fun) - value
            x, value = res.x, max(value, -float(res.fun))
            if gain <= SIMPLEX_OPTIONS["fatol"]:
                break
        logger.debug("Restart %d: best ratio so far %.12g", restart, best["ratio"])

    certified = cp(p).value
    if best["ratio"] > certified * (1 + 1e-6):
        logger.warning("Search ratio %.12g exceeds C_p = %.12g at p=%g", best["ratio"], certified, p)

    return SharpnessResult(
        best_ratio=float(best["ratio"]),
        best_pair=decode_pair(best["x"], n, p),
        trace=tuple(trace),
    )
