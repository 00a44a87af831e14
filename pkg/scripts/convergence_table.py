#!/usr/bin/env python3
"""Grid-refinement study for the quartic benchmark (built-in example 1).

Solves at n = 100, 200, 500, 1000 and prints the iteration count, the
exact-solution error eu(K) and the last successive-iterate difference e(K)
per grid, then writes table.csv.  Pass --out-dir to choose where.
"""

import argparse
import sys

from clampbeam.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grids", default="100,200,500,1000")
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--example", type=int, default=1)
    args = parser.parse_args()
    return cli_main([
        "table", f"example:{args.example}",
        "--grids", args.grids,
        "--out-dir", args.out_dir,
    ])


if __name__ == "__main__":
    sys.exit(main())
