"""Score a few example homes and show how single answers move the ranking.

Run from the repository root:

    python3 scripts/demo_report.py
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hometm.catalog import load_catalog
from hometm.engine import ModelInput, score_model

HOMES = {
    "renter with a smart speaker": ModelInput(
        devices=frozenset({"home-virtual-assistant", "smart-lighting"}),
        risk_factors=frozenset({"R3", "R11"}),
    ),
    "family with camera and locks": ModelInput(
        devices=frozenset({"smart-security-cam", "smart-doorbell",
                           "smart-locks", "smart-thermostat"}),
        risk_factors=frozenset({"R4", "R8"}),
    ),
    "everything switched on": ModelInput(
        devices=frozenset({"home-virtual-assistant", "smart-home-controller",
                           "smart-locks", "smart-security-cam"}),
        risk_factors=frozenset(f"R{n}" for n in range(1, 15)),
    ),
}


def show_home(name: str, model: ModelInput, catalog) -> None:
    report = score_model(model, catalog)
    print(f"\n{name}")
    print("-" * len(name))
    for rank, (s, record) in enumerate(report.entries[:5], start=1):
        print(f"  {rank}. {record.short_name:32} {s.final:6.2f}")
    if len(report.entries) > 5:
        print(f"  ... and {len(report.entries) - 5} more")


def factor_sweep(catalog) -> None:
    """How much does each single yes answer raise the top score?"""
    base_model = ModelInput(devices=frozenset({"home-virtual-assistant"}))
    baseline = score_model(base_model, catalog).entries[0][0].final
    print("\nOne answer at a time (home virtual assistant only)")
    print("--------------------------------------------------")
    print(f"  top score with every answer 'no': {baseline:.2f}")
    for rid, factor in catalog.risk_factors.items():
        model = ModelInput(devices=frozenset({"home-virtual-assistant"}),
                           risk_factors=frozenset({rid}))
        top = score_model(model, catalog).entries[0][0].final
        print(f"  {rid:>3} yes: top {top:6.2f} ({top - baseline:+.2f})  "
              f"{factor.question_text[:58]}")


def main() -> int:
    catalog = load_catalog()
    for name, model in HOMES.items():
        show_home(name, model, catalog)
    factor_sweep(catalog)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
