"""Regenerate the golden report files under tests/golden/.

Run from the repository root after a deliberate change to report layout:

    python3 scripts/regen_goldens.py

Both fixture models are fully deterministic (fixed inputs, and either no
timestamp or a pinned one), so reruns on an unchanged tree are no-ops.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hometm.catalog import load_catalog
from hometm.engine import ModelInput, score_model
from hometm.report import FORMATS, render

GOLDEN_DIR = pathlib.Path(__file__).resolve().parents[1] / "tests" / "golden"

SUFFIX = {"text": "txt", "markdown": "md", "machine": "json"}


def models():
    lighting = ModelInput(devices=frozenset({"smart-lighting"}))
    rich = ModelInput(
        devices=frozenset({"home-virtual-assistant", "smart-lighting"}),
        risk_factors=frozenset({"R1", "R6"}),
        connections=(("home-virtual-assistant", "smart-lighting"),),
        display_name="Alex",
    )
    return [("lighting", lighting, None),
            ("rich", rich, "2026-08-15T12:00:00Z")]


def main() -> int:
    catalog = load_catalog()
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name, model, stamp in models():
        report = score_model(model, catalog, generated_at=stamp)
        for fmt in FORMATS:
            path = GOLDEN_DIR / f"{name}.{SUFFIX[fmt]}"
            path.write_text(render(report, fmt, catalog).body, encoding="utf-8")
            print(f"wrote {path.relative_to(GOLDEN_DIR.parents[1])}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
