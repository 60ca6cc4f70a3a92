#!/usr/bin/env python3
"""Print the factor-count table with all four routes cross-checked."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from tmprover import cli  # noqa: E402


def main():
    n_max = sys.argv[1] if len(sys.argv) > 1 else "64"
    return cli.main(["count", n_max])


if __name__ == "__main__":
    sys.exit(main())
