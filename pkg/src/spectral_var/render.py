"""Plain-text summaries for the terminal (written to stderr by the CLI)."""

from spectral_var.bounds import BoundReport
from spectral_var.constants import ConstantValue
from spectral_var.harness import SharpnessResult, SweepSummary
from spectral_var.proof_chain import ChainReport


def _mark(holds: bool) -> str:
    return "✅" if holds else "❌"


def render_report(report: BoundReport) -> str:
    sign = "=" if report.relation == "eq" else "≤"
    return (
        f"{_mark(report.holds)} {report.name}: {report.lhs:.10g} {sign} {report.rhs:.10g} "
        f"(slack {report.slack:.3e}, constant {report.constant.value:.10g} {report.constant.formula_tag.value})"
    )


def render_chain(chain: ChainReport) -> str:
    """One line per proof step, preceded by the subspace summary."""
    lines = [
        f"🔗 Proof chain on N = {chain.subspace_dim} eigenvalue(s): "
        + ", ".join(f"{lam:.6g}" for lam in chain.lambda_set),
    ]
    width = max(len(step.name) for step in chain.steps)
    for index, step in enumerate(chain.steps, 1):
        sign = "=" if step.relation == "eq" else "≤"
        lines.append(
            f"  {index}. {_mark(step.holds)} {step.name:<{width}}  "
            f"{step.lhs:.10g} {sign} {step.rhs:.10g}  (slack {step.slack:.3e})"
        )
    lines.append(f"{_mark(chain.holds)} {'all steps hold' if chain.holds else 'failed: ' + ', '.join(chain.failed_steps)}")
    return "\n".join(lines)


def render_constants(p: float, table: dict[str, ConstantValue | str]) -> str:
    lines = [f"📐 Constants at p = {p:g}"]
    for name, value in table.items():
        if isinstance(value, ConstantValue):
            exact = "exact" if value.exact else "bound"
            lines.append(f"  {name:<8} {value.value:<22.17g} ({exact})")
        else:
            lines.append(f"  {name:<8} {value}")
    return "\n".join(lines)


def render_sweep_summary(summary: SweepSummary) -> str:
    config = summary.config
    lines = [
        f"📊 Sweep {config.ensemble.value}: n={config.dim}, p={config.p:g}, {config.trials} trial(s), seed {config.seed}",
        f"  max ratio: {summary.max_ratio if summary.max_ratio is None else format(summary.max_ratio, '.10g')}"
        f" (trial {summary.argmax_trial})",
        f"  violations: {summary.violations}",
    ]
    if summary.failures:
        lines.append(f"  ⚠️ numerical failures: {len(summary.failures)}")
    for name, q in sorted(summary.slack_quantiles.items()):
        lines.append(f"  {name:<24} slack min {q['min']:.3e}  median {q['median']:.3e}  max {q['max']:.3e}")
    lines.append(f"{_mark(summary.violations == 0)} {'no violations' if summary.violations == 0 else 'violations found'}")
    return "\n".join(lines)


def render_sharpness(p: float, n: int, result: SharpnessResult, certified: float) -> str:
    return (
        f"🔍 Sharpness search p={p:g}, n={n}: best ratio {result.best_ratio:.12g} "
        f"after {len(result.trace)} evaluation(s); C_p = {certified:.12g}"
    )
