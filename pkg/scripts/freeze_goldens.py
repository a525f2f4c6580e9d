#!/usr/bin/env python3
"""Regenerate the frozen codegen snapshots under tests/golden/.

Run after an intentional template change, then review the diff by hand.
"""

from __future__ import annotations

import shutil
from dataclasses import replace
from pathlib import Path

from icb import Platform, parse
from icb.codegen import generate

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def main() -> None:
    source = ROOT / "samples" / "vehicle_auction.icb"
    model = parse(source.read_text(encoding="utf-8"))
    GOLDEN.mkdir(parents=True, exist_ok=True)
    shutil.copy(source, GOLDEN / "vehicle_auction.icb")
    for platform in Platform:
        retargeted = replace(model, contract=replace(model.contract, platform=platform))
        base = GOLDEN / platform.value
        if base.exists():
            shutil.rmtree(base)
        for artifact in generate(retargeted):
            target = base / artifact.rel_path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(artifact.content, encoding="utf-8", newline="\n")
            print(f"froze {target.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
