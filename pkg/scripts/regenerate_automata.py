#!/usr/bin/env python3
"""Regenerate the pattern-automaton snapshots under snapshots/.

Writes the canonical compact text form (LSD convention, the engine's
internal one) and an MSD DOT rendering for each of the four pattern
predicates.  Output is deterministic, so a clean checkout regenerates
byte-identical files; tests/test_snapshots.py enforces that.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from tmprover import automata as au  # noqa: E402
from tmprover import cli  # noqa: E402


def main():
    out_dir = pathlib.Path(__file__).resolve().parents[1] / "snapshots"
    out_dir.mkdir(exist_ok=True)
    machines = cli._pattern_machines(au.DEFAULT_STATE_CAP)
    for name in cli.PATTERN_NAMES:
        machine = machines[name]
        (out_dir / f"{name}.aut").write_text(au.to_compact_text(machine))
        (out_dir / f"{name}.dot").write_text(au.export_dot(machine, "msd"))
        print(f"{name}: {machine.num_states} states (lsd), "
              f"dot rendered msd-first")
    return 0


if __name__ == "__main__":
    sys.exit(main())
