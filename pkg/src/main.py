#!/usr/bin/env python3

"""
SkewForge - metric adjusted skew information toolkit
Launcher for the command-line interface
"""

import sys
import argparse
import platform
from pathlib import Path

# Add the src directory to the Python path
src_dir = Path(__file__).parent
sys.path.insert(0, str(src_dir))

from src import __version__

REQUIRED = ("numpy", "scipy", "click", "colorama", "psutil")


def check_dependencies():
    """Check if required dependencies are available"""
    missing_deps = []

    for name in REQUIRED:
        try:
            __import__(name)
        except ImportError:
            missing_deps.append(name)

    if missing_deps:
        print("❌ Missing required dependencies:", file=sys.stderr)
        for dep in missing_deps:
            print(f"   - {dep}", file=sys.stderr)
        print("\nPlease install them using:", file=sys.stderr)
        print("   pip install -r requirements.txt", file=sys.stderr)
        return False

    return True


def run_cli(args):
    """Run the command-line interface"""
    try:
        from src.cli.commands import cli
    except ImportError as e:
        print(f"❌ Error importing CLI module: {e}", file=sys.stderr)
        print("Make sure all dependencies are installed.", file=sys.stderr)
        sys.exit(1)
    cli.main(args=args, prog_name="skewforge")


def main():
    """Main entry point for SkewForge"""
    parser = argparse.ArgumentParser(
        description="SkewForge - metric adjusted skew information toolkit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        # --help belongs to the click commands
        add_help=False,
        epilog="""
Examples:
  %(prog)s uncertainty --state rho.json --f wy        # Q^f by every route
  %(prog)s detect --state iso.json --dims 3,3 --f sld  # Entanglement verdict (JSON)
  %(prog)s sweep --config sweep.json --out out.csv     # Isotropic family sweep
  %(prog)s selftest --seed 42                          # Built-in property suites
  %(prog)s info                                        # Catalog and environment

Exit codes:
  0 success, 1 selftest failure, 2 input error, 3 state invariant violation
        """
    )

    parser.add_argument(
        "--quiet",
        action="store_true",
        help="Do not print the banner"
    )

    parser.add_argument(
        "--version",
        action="version",
        version=f"SkewForge {__version__}"
    )

    # Parse known args to handle CLI passthrough
    args, remaining = parser.parse_known_args()

    # Banner on stderr, stdout carries command output
    if not args.quiet:
        print(f"🔬 SkewForge v{__version__} - Metric Adjusted Skew Information", file=sys.stderr)
        print(f"   Running on {platform.system()} {platform.release()}", file=sys.stderr)
        print(file=sys.stderr)

    if not check_dependencies():
        sys.exit(1)

    if not remaining:
        print(parser.format_help(), file=sys.stderr)
        remaining = ["--help"]

    run_cli(remaining)


if __name__ == "__main__":
    main()
