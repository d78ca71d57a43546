"""Command-line entry point: ``arcshell --script FILE (--cmd NAME | --all)``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..errors import SchemicError
from .dsl import parse_script
from .executor import ExecOptions, Session
from .render import render_json, render_text


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arcshell", description=__doc__)
    ap.add_argument("--script", required=True, help="session script (UTF-8)")
    which = ap.add_mutually_exclusive_group(required=True)
    which.add_argument("--cmd", help="run one command, selected by bound name or command text")
    which.add_argument("--all", action="store_true", help="run every command in order")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--char", type=int, default=0,
                    help="field characteristic when the script has no field line")
    ap.add_argument("--max-depth", type=int, default=6, help="deepest level probed by traces")
    ap.add_argument("--truncation", type=int, default=6, help="number of series coefficients")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="arcshell: %(levelname)s: %(message)s")
    try:
        with open(args.script, encoding="utf-8") as fh:
            script = parse_script(fh.read())
        options = ExecOptions(char=args.char, max_depth=args.max_depth,
                              truncation=args.truncation, cache_dir=args.cache_dir)
        session = Session(script, options)
        if args.all:
            records = session.run_all()
        else:
            records = [session.run(script.find(args.cmd))]
    except (SchemicError, KeyError, OSError) as exc:
        print(f"arcshell: error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        out = render_json(records, single=not args.all)
    else:
        out = render_text(records)
    sys.stdout.buffer.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
