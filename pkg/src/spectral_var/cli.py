import argparse
import sys

from spectral_var import __version__
from spectral_var.command_handlers import (
    EXIT_ERROR,
    handle_chain,
    handle_check,
    handle_constants,
    handle_sharpness,
    handle_sweep,
)
from spectral_var.constants import BpMode
from spectral_var.errors import SpectralVarError
from spectral_var.harness import Ensemble
from spectral_var.session import init_session
from spectral_var.utils import configure_logging


BOUNDS = ("corollary", "main", "kato", "interval", "numrange")
MODES = [m.value for m in BpMode]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; 2 is reserved for violated bounds."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ===== PARSER =====

def _add_pair(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--a", required=True, help="Hermitian matrix A (.mtx or .json)")
    sub.add_argument("--b", required=True, help="Perturbed matrix B (.mtx or .json)")
    sub.add_argument("--p", required=True, type=float, help="Schatten index")
    sub.add_argument("--mode", choices=MODES, default=BpMode.UPPER_BOUND.value, help="b_p mode")
    sub.add_argument("--out", help="Write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spectral-var",
        description="Check spectral-variation bounds for perturbations of Hermitian matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Evaluate one bound on a matrix pair")
    _add_pair(check)
    check.add_argument("--bound", required=True, choices=BOUNDS)
    check.add_argument("--angles", type=int, help="Angle count of the numerical-range polygon")
    check.set_defaults(handler=handle_check)

    chain = commands.add_parser("chain", help="Run every step of the proof on a matrix pair")
    _add_pair(chain)
    chain.add_argument("--select", help="Eigenvalue indices 'i,j,...' (sorted by real part, descending)")
    chain.set_defaults(handler=handle_chain)

    sweep = commands.add_parser("sweep", help="Seeded randomized soundness sweep")
    sweep.add_argument("--dim", required=True, type=int)
    sweep.add_argument("--p", required=True, type=float)
    sweep.add_argument("--trials", required=True, type=int)
    sweep.add_argument("--seed", required=True, type=int)
    sweep.add_argument("--ensemble", choices=[e.value for e in Ensemble], default=Ensemble.GUE_PLUS_GINIBRE.value)
    sweep.add_argument("--csv", help="Write per-check rows here (summary goes next to it)")
    sweep.set_defaults(handler=handle_sweep)

    constants = commands.add_parser("constants", help="Table of the explicit constants at p")
    constants.add_argument("--p", required=True, type=float)
    constants.add_argument("--mode", choices=MODES, default=BpMode.UPPER_BOUND.value)
    constants.set_defaults(handler=handle_constants)

    sharpness = commands.add_parser("sharpness", help="Search for pairs with a large variation ratio")
    sharpness.add_argument("--p", required=True, type=float)
    sharpness.add_argument("--dim", required=True, type=int)
    sharpness.add_argument("--iters", required=True, type=int)
    sharpness.add_argument("--restarts", type=int)
    sharpness.add_argument("--seed", required=True, type=int)
    sharpness.add_argument("--out", help="Write the JSON result here (and the trace CSV next to it)")
    sharpness.set_defaults(handler=handle_sharpness)

    return parser


# ===== ENTRY POINT =====

def main(argv: list[str] | None = None) -> int:
    """Run the CLI; returns 0 (holds), 2 (violated) or 1 (error)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_ERROR

    configure_logging(args.verbose)
    try:
        session = init_session()
        return args.handler(args, session)
    except SpectralVarError as e:
        print(f"❌ Error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
