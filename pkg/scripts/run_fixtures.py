"""Run the fixture session script and print its text or JSON report."""

import argparse
import sys
from pathlib import Path

from schemic.arcshell.cli import main

DEFAULT = Path(__file__).resolve().parents[1] / "fixtures" / "session_fixtures.arc"


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--script", default=str(DEFAULT))
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--cache-dir", default=None)
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    argv = ["--script", args.script, "--all", "--format", args.format]
    if args.cache_dir:
        argv += ["--cache-dir", args.cache_dir]
    sys.exit(main(argv))
