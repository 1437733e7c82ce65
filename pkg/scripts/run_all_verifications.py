#!/usr/bin/env python3
"""Run every verification suite over all builtin braidings and write the
JSON reports to reports/.  Exits nonzero if any gating check failed."""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qfock.cli import main  # noqa: E402

TARGETS = [
    ["--braiding", "flip", "--n", "2"],
    ["--braiding", "flip", "--n", "3"],
    ["--braiding", "superflip", "--mn", "1,1"],
    ["--braiding", "std-hecke", "--n", "2"],
    ["--braiding", "std-hecke", "--n", "3"],
    ["--braiding", "bmw-orth", "--n", "3"],
    ["--braiding", "bmw-sympl", "--n", "2"],
]


def run() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "reports"
    out_dir.mkdir(exist_ok=True)
    worst = 0
    for target in TARGETS:
        tag = "-".join(t.lstrip("-").replace(",", "_") for t in target)
        out = out_dir / f"verify-{tag}.json"
        argv = ["verify", *target, "--suite", "all", "--out", str(out)]
        print(f"=== qfock {' '.join(argv)}")
        code = main(argv)
        worst = max(worst, code)
        print(f"--- exit {code}, report at {out}\n")
    return worst


if __name__ == "__main__":
    sys.exit(run())
