import sys
from pathlib import Path


def main():
    """Run the spectral-var CLI from a source checkout."""
    src = Path(__file__).parent / "src"
    if not (src / "spectral_var").exists():
        print(f"❌ Error: Could not find {src / 'spectral_var'}", file=sys.stderr)
        sys.exit(1)
    sys.path.insert(0, str(src))

    from spectral_var.cli import main as cli_main

    try:
        sys.exit(cli_main(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\n⏹️  Interrupted", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
