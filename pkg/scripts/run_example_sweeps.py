#!/usr/bin/env python3
"""Run every bundled scenario sweep and the reproduction checks.

Writes plot-ready CSV/JSON tables into out/ and prints one pass/fail
line per reproduction check.  Exit status is nonzero if any check
fails.
"""

import pathlib
import sys

from wrenyi.cli import main as wrenyi_main

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCENARIOS = sorted((ROOT / "scenarios").glob("*.sweep"))


def run() -> int:
    status = 0
    for scenario in SCENARIOS:
        print(f"== sweep {scenario.name}")
        status |= wrenyi_main(["sweep", str(scenario)])
    print("== repro all")
    status |= wrenyi_main(["repro", "all"])
    return status


if __name__ == "__main__":
    sys.exit(run())
