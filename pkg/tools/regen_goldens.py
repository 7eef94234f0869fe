#!/usr/bin/env python3
"""Regenerate the golden validation reports for the bundled examples.

Run from the repository root after an intentional change to the report
format, then review the diff:

    python3 tools/regen_goldens.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from fanifolds.cli import run  # noqa: E402
from fanifolds.examples import EXAMPLES  # noqa: E402

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "goldens")


def main() -> None:
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    for name in sorted(EXAMPLES):
        path = os.path.join(GOLDEN_DIR, f"{name}.validate.json")
        code = run(
            ["validate", "--file", f"{name}.json", "--format", "json", "--out", path]
        )
        if code != 0:
            raise SystemExit(f"{name}: validate exited {code}")
        print("wrote", os.path.relpath(path))


if __name__ == "__main__":
    main()
