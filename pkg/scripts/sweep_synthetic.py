#!/usr/bin/env python3
"""Reproduce the synthetic sweep grid: graph size, rule size, and noise.

Writes one CSV per (generator, axis) combination under --out.
"""

import argparse
import sys

from vrgc.cli import main as cli_main

SWEEPS = [
    ("bintree", "nodes", "100,300,1000,3000"),
    ("treerings", "nodes", "100,300,1000,3000"),
    ("ringlat", "nodes", "100,300,1000,3000"),
    ("bintree", "kmax", "2,3,4,5,6,7"),
    ("bintree", "rewire", "0,0.08,0.32,1.0"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/sweeps")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--kmax", type=int, default=4)
    args = parser.parse_args()
    for generator, axis, values in SWEEPS:
        out = f"{args.out}/{generator}_{axis}"
        print(f"== {generator} over {axis} -> {out}")
        code = cli_main(
            [
                "sweep",
                "--generator", generator,
                "--nodes", "1000",
                "--kmax", str(args.kmax),
                "--seed", str(args.seed),
                "--axis", axis,
                "--values", values,
                "--out", out,
            ]
        )
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
