"""Independent oracle for the composite ranking pipeline.

Single naive procedure with its own transcribed tables; shares no code or
data files with the package under test. Score triples come from the frozen
table in score_table.py. Every intermediate value is tracked so tests can
assert the running value never dips below zero.
"""

from score_table import EXPECTED_TRIPLES

DEVICE_CATEGORIES = {
    "home-virtual-assistant": {1, 2, 3, 4, 5},
    "smart-security-cam": {2, 3, 4, 5},
    "smart-doorbell": {2, 3, 5},
    "smart-lighting": {3},
    "smart-fitness-aid": {2, 3, 4},
    "smart-kitchenware": {3},
    "smart-locks": {3, 4, 5},
    "amazon-dash": {2, 3, 4},
    "smart-thermostat": {2, 3, 4, 5},
    "smart-home-controller": {1, 2, 3, 4, 5},
    "smart-sleep-tracker": {2, 3},
    "other-smart-devices": {1, 2, 3, 4, 5},
}

CATEGORY_THREATS = {
    1: {1, 4, 7, 10, 11, 12},
    2: {2, 8},
    3: {3, 6, 7, 9, 13, 14, 15, 16},
    4: {2, 5, 8, 11, 13, 15},
    5: {3, 6, 7, 9, 14, 16},
}

CATEGORY_BONUS = {1: 5.5, 2: 8.5, 3: 2.0, 4: 5.0, 5: 2.0}

# factor id -> (weight, related threat ids, reduced-when-off threat ids)
FACTORS = {
    "R1": (3, {2, 3, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16}, {2, 3}),
    "R2": (1, {1, 6}, {1}),
    "R3": (2, {2, 3, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16}, {5, 7, 8, 9}),
    "R4": (2, {2, 3, 6, 9, 15, 16}, {7, 8, 9}),
    "R5": (1, {1, 4, 10, 12}, {10, 12}),
    "R6": (1, {11}, {11}),
    "R7": (2, {1, 11, 12}, set()),
    "R8": (3, {15, 16}, {5, 7}),
    "R9": (3, {2, 3, 5, 6, 7, 8, 11, 13, 14, 15, 16}, {13, 14}),
    "R10": (3, {2, 3, 5, 6, 7, 8, 9, 11, 13, 14, 15, 16}, {13, 14}),
    "R11": (2, {1, 10, 11, 12}, set()),
    "R12": (2, {9}, {9}),
    "R13": (1, {11}, {11}),
    "R14": (1, {11}, set()),
}

FACTOR_ORDER = ["R1", "R2", "R3", "R4", "R5", "R6", "R7",
                "R8", "R9", "R10", "R11", "R12", "R13", "R14"]


def naive_rank(devices, selected_factors):
    """Return (ranked rows, min intermediate value seen).

    Each row is a dict carrying the same decomposition fields the engine
    reports, in ranked order.
    """
    categories = set()
    for device in devices:
        categories |= DEVICE_CATEGORIES[device]
    threats = set()
    for cid in categories:
        threats |= CATEGORY_THREATS[cid]

    minimum_seen = float("inf") if threats else 0.0
    rows = []
    for tid in sorted(threats):
        base, temporal, environmental = EXPECTED_TRIPLES[tid]
        value = (base + temporal + environmental) / 3
        minimum_seen = min(minimum_seen, value)
        row = {
            "threat_id": tid,
            "base_mean": value,
            "additions": [],
            "subtractions_applied": 0,
            "lindunn_bonus": 0.0,
            "zeroed_by_rule": False,
        }
        for rid in FACTOR_ORDER:
            weight, related, _ = FACTORS[rid]
            if rid in selected_factors and tid in related:
                value += weight
                minimum_seen = min(minimum_seen, value)
                row["additions"].append((rid, weight))
        for rid in FACTOR_ORDER:
            _, _, reduced = FACTORS[rid]
            if rid not in selected_factors and tid in reduced:
                value = max(0.0, value - 1.0)
                minimum_seen = min(minimum_seen, value)
                row["subtractions_applied"] += 1
        bonus = 0.0
        for cid in sorted(categories):
            if tid in CATEGORY_THREATS[cid]:
                bonus += CATEGORY_BONUS[cid]
        value += bonus
        minimum_seen = min(minimum_seen, value)
        row["lindunn_bonus"] = bonus
        if tid == 11 and "R6" not in selected_factors \
                and "R13" not in selected_factors:
            value = 0.0
            row["zeroed_by_rule"] = True
        row["final"] = value
        if value > 0.0:
            rows.append(row)

    rows.sort(key=lambda r: (-r["final"], r["threat_id"]))
    return rows, minimum_seen
