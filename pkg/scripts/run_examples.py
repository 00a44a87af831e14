#!/usr/bin/env python3
"""Run every built-in benchmark: condition check, solve, CSV artifacts.

Artifacts land in --out-dir prefixed exampleN_.  The square-root benchmark
(example 5) is expected to fail its uniqueness check and still solve; any
other failure makes the script exit nonzero.
"""

import argparse
import sys

from clampbeam.cli import main as cli_main
from clampbeam.examples import EXAMPLES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--n", type=int, default=100)
    args = parser.parse_args()

    worst = 0
    for ex in EXAMPLES:
        print(f"\n===== example {ex.ident}: {ex.slug} =====")
        code = cli_main([
            "examples", "--run", str(ex.ident),
            "--n", str(args.n),
            "--out-dir", args.out_dir,
        ])
        if code != 0:
            print(f"example {ex.ident} exited with {code}", file=sys.stderr)
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
