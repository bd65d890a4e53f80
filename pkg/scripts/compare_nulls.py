#!/usr/bin/env python3
"""Rank the distinctive rules of a graph against ER and Chung-Lu nulls.

Thin wrapper over `vrgc compare`; pass --input for a real edge list or
--generator for a synthetic source.
"""

import argparse
import sys

from vrgc.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input")
    parser.add_argument("--generator", default="bintree")
    parser.add_argument("--nodes", type=int, default=1000)
    parser.add_argument("--kmax", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--top", type=int, default=5)
    parser.add_argument("--out", default="out/compare")
    args = parser.parse_args()
    argv = ["compare", "--kmax", str(args.kmax), "--seed", str(args.seed),
            "--top", str(args.top), "--out", args.out, "--emit", "json,dot"]
    if args.input:
        argv += ["--input", args.input]
    else:
        argv += ["--generator", args.generator, "--nodes", str(args.nodes)]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
