"""Threat catalog: loading, validation and lookup.

The default catalog ships inside the package as ``data/catalog.json`` and can
be overridden with any file following the same schema. Prose (descriptions,
questions, glossary, guidance) is free layout; the structural relationships
(ids, weights, relation sets, category membership) are pinned by this module
and checked on every load, so an edited catalog cannot silently change how
scores are computed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .cvss import CvssVector, ScoreTriple, parse_vector, score

SCHEMA_VERSION = 1

STRIDE_LETTERS = ("S", "T", "R", "I", "D", "E")


class CatalogError(Exception):
    """Base class for catalog loading and validation failures."""


class SchemaError(CatalogError):
    """The document does not match the catalog schema."""


class IntegrityError(CatalogError):
    """The document is well-formed but internally inconsistent."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class ThreatRecord:
    id: int
    stride: str
    short_name: str
    description: str
    mitigation: str
    vector: CvssVector
    scores: ScoreTriple


@dataclass(frozen=True)
class DeviceType:
    id: str
    label: str
    categories: frozenset[int]


@dataclass(frozen=True)
class RiskFactor:
    id: str
    weight: int
    question_text: str
    justification: str
    related_threats: frozenset[int]
    off_reductions: frozenset[int]


@dataclass(frozen=True)
class CategoryProfile:
    id: int
    description: str
    threat_ids: frozenset[int]
    lindunn_factors: tuple[str, ...]
    bonus: float


@dataclass(frozen=True)
class GuidanceLink:
    label: str
    url: str


@dataclass(frozen=True)
class Catalog:
    """Deeply immutable view of a loaded catalog document.

    Mapping iteration order follows the document, so "catalog order" is
    well-defined for devices and risk factors.
    """

    schema_version: int
    threats: Mapping[int, ThreatRecord]
    devices: Mapping[str, DeviceType]
    risk_factors: Mapping[str, RiskFactor]
    categories: Mapping[int, CategoryProfile]
    glossary: Mapping[str, str]
    guidance_links: Mapping[str, tuple[GuidanceLink, ...]]


TOP_LEVEL_KEYS = {
    "schema_version", "threats", "devices", "risk_factors",
    "categories", "glossary", "guidance_links",
}

# --- pinned structure -------------------------------------------------------
# These tables define the model's fixed relationships. A custom catalog may
# reword any prose but must keep the structure, otherwise load fails.

EXPECTED_SHORT_NAMES = {
    1: "outsider-commands",
    2: "fake-server-signals",
    3: "fake-device-signals",
    4: "tampered-voice-command",
    5: "compromised-server-signals",
    6: "modified-device-requests",
    7: "compromised-action-signals",
    8: "personal-data-leaks",
    9: "action-leaks",
    10: "eavesdroppers",
    11: "private-conversation-leaks",
    12: "interfering-commands",
    13: "congesting-server-signals",
    14: "congesting-action-signals",
    15: "server-privilege-escalation",
    16: "action-privilege-escalation",
}

EXPECTED_STRIDE = {
    1: "S", 2: "S", 3: "S",
    4: "T", 5: "T", 6: "T", 7: "T",
    8: "I", 9: "I", 10: "I", 11: "I",
    12: "D", 13: "D", 14: "D",
    15: "E", 16: "E",
}

EXPECTED_DEVICE_CATEGORIES = {
    "home-virtual-assistant": frozenset({1, 2, 3, 4, 5}),
    "smart-security-cam": frozenset({2, 3, 4, 5}),
    "smart-doorbell": frozenset({2, 3, 5}),
    "smart-lighting": frozenset({3}),
    "smart-fitness-aid": frozenset({2, 3, 4}),
    "smart-kitchenware": frozenset({3}),
    "smart-locks": frozenset({3, 4, 5}),
    "amazon-dash": frozenset({2, 3, 4}),
    "smart-thermostat": frozenset({2, 3, 4, 5}),
    "smart-home-controller": frozenset({1, 2, 3, 4, 5}),
    "smart-sleep-tracker": frozenset({2, 3}),
    "other-smart-devices": frozenset({1, 2, 3, 4, 5}),
}

EXPECTED_FACTOR_WEIGHTS = {
    "R1": 3, "R2": 1, "R3": 2, "R4": 2, "R5": 1, "R6": 1, "R7": 2,
    "R8": 3, "R9": 3, "R10": 3, "R11": 2, "R12": 2, "R13": 1, "R14": 1,
}

EXPECTED_RELATED_THREATS = {
    "R1": frozenset({2, 3, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16}),
    "R2": frozenset({1, 6}),
    "R3": frozenset({2, 3, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16}),
    "R4": frozenset({2, 3, 6, 9, 15, 16}),
    "R5": frozenset({1, 4, 10, 12}),
    "R6": frozenset({11}),
    "R7": frozenset({1, 11, 12}),
    "R8": frozenset({15, 16}),
    "R9": frozenset({2, 3, 5, 6, 7, 8, 11, 13, 14, 15, 16}),
    "R10": frozenset({2, 3, 5, 6, 7, 8, 9, 11, 13, 14, 15, 16}),
    "R11": frozenset({1, 10, 11, 12}),
    "R12": frozenset({9}),
    "R13": frozenset({11}),
    "R14": frozenset({11}),
}

EXPECTED_OFF_REDUCTIONS = {
    "R1": frozenset({2, 3}),
    "R2": frozenset({1}),
    "R3": frozenset({5, 7, 8, 9}),
    "R4": frozenset({7, 8, 9}),
    "R5": frozenset({10, 12}),
    "R6": frozenset({11}),
    "R7": frozenset(),
    "R8": frozenset({5, 7}),
    "R9": frozenset({13, 14}),
    "R10": frozenset({13, 14}),
    "R11": frozenset(),
    "R12": frozenset({9}),
    "R13": frozenset({11}),
    "R14": frozenset(),
}

EXPECTED_CATEGORY_THREATS = {
    1: frozenset({1, 4, 7, 10, 11, 12}),
    2: frozenset({2, 8}),
    3: frozenset({3, 6, 7, 9, 13, 14, 15, 16}),
    4: frozenset({2, 5, 8, 11, 13, 15}),
    5: frozenset({3, 6, 7, 9, 14, 16}),
}

EXPECTED_FACTOR_COUNTS = {1: 11, 2: 17, 3: 4, 4: 10, 5: 4}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _check_unique(values, what: str) -> None:
    seen = set()
    for value in values:
        if value in seen:
            raise IntegrityError([f"duplicate {what}: {value!r}"])
        seen.add(value)


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and fully validate a catalog document.

    ``path=None`` loads the catalog bundled with the package. Raises
    :class:`SchemaError` for shape problems, :class:`IntegrityError` for
    consistency problems, and lets :class:`~hometm.cvss.VectorError`
    propagate for malformed vector strings.
    """
    if path is None:
        text = (
            resources.files("hometm").joinpath("data/catalog.json")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"catalog is not valid JSON: {exc}") from None

    _require(isinstance(doc, dict), "catalog document must be a JSON object")
    unknown = set(doc) - TOP_LEVEL_KEYS
    _require(not unknown, f"unknown top-level keys: {sorted(unknown)}")
    missing = TOP_LEVEL_KEYS - set(doc)
    _require(not missing, f"missing top-level keys: {sorted(missing)}")
    _require(
        doc["schema_version"] == SCHEMA_VERSION,
        f"unsupported schema_version {doc['schema_version']!r}, "
        f"expected {SCHEMA_VERSION}",
    )

    threats: dict[int, ThreatRecord] = {}
    _require(isinstance(doc["threats"], list), "threats must be a list")
    _check_unique((t.get("id") for t in doc["threats"]), "threat id")
    for entry in doc["threats"]:
        _require(isinstance(entry, dict), "each threat must be an object")
        for key in ("id", "stride", "short_name", "description",
                    "mitigation", "vector"):
            _require(key in entry, f"threat missing field {key!r}")
        _require(isinstance(entry["id"], int), "threat id must be an integer")
        vector = parse_vector(entry["vector"])
        threats[entry["id"]] = ThreatRecord(
            id=entry["id"],
            stride=entry["stride"],
            short_name=entry["short_name"],
            description=entry["description"],
            mitigation=entry["mitigation"],
            vector=vector,
            scores=score(vector),
        )

    devices: dict[str, DeviceType] = {}
    _require(isinstance(doc["devices"], list), "devices must be a list")
    _check_unique((d.get("id") for d in doc["devices"]), "device id")
    for entry in doc["devices"]:
        _require(isinstance(entry, dict), "each device must be an object")
        for key in ("id", "label", "categories"):
            _require(key in entry, f"device missing field {key!r}")
        devices[entry["id"]] = DeviceType(
            id=entry["id"],
            label=entry["label"],
            categories=frozenset(entry["categories"]),
        )

    risk_factors: dict[str, RiskFactor] = {}
    _require(isinstance(doc["risk_factors"], list),
             "risk_factors must be a list")
    _check_unique((r.get("id") for r in doc["risk_factors"]),
                  "risk factor id")
    for entry in doc["risk_factors"]:
        _require(isinstance(entry, dict), "each risk factor must be an object")
        for key in ("id", "weight", "question_text", "justification",
                    "related_threats", "off_reductions"):
            _require(key in entry, f"risk factor missing field {key!r}")
        risk_factors[entry["id"]] = RiskFactor(
            id=entry["id"],
            weight=entry["weight"],
            question_text=entry["question_text"],
            justification=entry["justification"],
            related_threats=frozenset(entry["related_threats"]),
            off_reductions=frozenset(entry["off_reductions"]),
        )

    categories: dict[int, CategoryProfile] = {}
    _require(isinstance(doc["categories"], list), "categories must be a list")
    _check_unique((c.get("id") for c in doc["categories"]), "category id")
    for entry in doc["categories"]:
        _require(isinstance(entry, dict), "each category must be an object")
        for key in ("id", "description", "threat_ids", "lindunn_factors",
                    "bonus"):
            _require(key in entry, f"category missing field {key!r}")
        categories[entry["id"]] = CategoryProfile(
            id=entry["id"],
            description=entry["description"],
            threat_ids=frozenset(entry["threat_ids"]),
            lindunn_factors=tuple(entry["lindunn_factors"]),
            bonus=float(entry["bonus"]),
        )

    _require(isinstance(doc["glossary"], dict), "glossary must be an object")
    _require(
        all(isinstance(k, str) and isinstance(v, str)
            for k, v in doc["glossary"].items()),
        "glossary must map strings to strings",
    )

    _require(isinstance(doc["guidance_links"], dict),
             "guidance_links must be an object")
    guidance: dict[str, tuple[GuidanceLink, ...]] = {}
    for device_id, links in doc["guidance_links"].items():
        _require(isinstance(links, list),
                 f"guidance for {device_id!r} must be a list")
        built = []
        for link in links:
            _require(
                isinstance(link, dict) and "label" in link and "url" in link,
                f"guidance link for {device_id!r} must carry label and url",
            )
            built.append(GuidanceLink(label=link["label"], url=link["url"]))
        guidance[device_id] = tuple(built)

    catalog = Catalog(
        schema_version=doc["schema_version"],
        threats=MappingProxyType(threats),
        devices=MappingProxyType(devices),
        risk_factors=MappingProxyType(risk_factors),
        categories=MappingProxyType(categories),
        glossary=MappingProxyType(dict(doc["glossary"])),
        guidance_links=MappingProxyType(guidance),
    )
    violations = validate(catalog)
    if violations:
        raise IntegrityError(violations)
    return catalog


def validate(catalog: Catalog) -> list[str]:
    """Return every integrity violation in the catalog (empty when sound)."""
    out: list[str] = []

    if set(catalog.threats) != set(EXPECTED_SHORT_NAMES):
        out.append("threat ids must be exactly 1..16")
    for tid, threat in sorted(catalog.threats.items()):
        expected_name = EXPECTED_SHORT_NAMES.get(tid)
        if expected_name and threat.short_name != expected_name:
            out.append(
                f"threat {tid} short_name {threat.short_name!r} "
                f"!= {expected_name!r}"
            )
        expected_stride = EXPECTED_STRIDE.get(tid)
        if threat.stride not in STRIDE_LETTERS:
            out.append(f"threat {tid} stride {threat.stride!r} is not a "
                       "STRIDE letter")
        elif expected_stride and threat.stride != expected_stride:
            out.append(f"threat {tid} stride {threat.stride!r} "
                       f"!= {expected_stride!r}")
        if threat.scores != score(threat.vector):
            out.append(f"threat {tid} stored scores do not match its vector")

    if set(catalog.devices) != set(EXPECTED_DEVICE_CATEGORIES):
        out.append("device ids do not match the fixed device key")
    for device_id, device in catalog.devices.items():
        expected = EXPECTED_DEVICE_CATEGORIES.get(device_id)
        if not device.categories or not device.categories <= {1, 2, 3, 4, 5}:
            out.append(f"device {device_id!r} categories must be a non-empty "
                       "subset of 1..5")
        elif expected is not None and device.categories != expected:
            out.append(
                f"device {device_id!r} categories {sorted(device.categories)} "
                f"!= {sorted(expected)}"
            )
        if not device.label.strip():
            out.append(f"device {device_id!r} has an empty label")

    if set(catalog.risk_factors) != set(EXPECTED_FACTOR_WEIGHTS):
        out.append("risk factor ids must be exactly R1..R14")
    for rid, factor in catalog.risk_factors.items():
        if rid not in EXPECTED_FACTOR_WEIGHTS:
            continue
        if factor.weight != EXPECTED_FACTOR_WEIGHTS[rid]:
            out.append(f"{rid} weight {factor.weight} "
                       f"!= {EXPECTED_FACTOR_WEIGHTS[rid]}")
        if factor.related_threats != EXPECTED_RELATED_THREATS[rid]:
            out.append(f"{rid} related_threats "
                       f"{sorted(factor.related_threats)} "
                       f"!= {sorted(EXPECTED_RELATED_THREATS[rid])}")
        if factor.off_reductions != EXPECTED_OFF_REDUCTIONS[rid]:
            out.append(f"{rid} off_reductions {sorted(factor.off_reductions)} "
                       f"!= {sorted(EXPECTED_OFF_REDUCTIONS[rid])}")
        dangling = factor.off_reductions - set(catalog.threats)
        if dangling:
            out.append(f"{rid} off_reductions reference missing threats "
                       f"{sorted(dangling)}")
        if not factor.question_text.strip():
            out.append(f"{rid} has an empty question_text")

    if set(catalog.categories) != set(EXPECTED_CATEGORY_THREATS):
        out.append("category ids must be exactly 1..5")
    covered: set[int] = set()
    for cid, category in catalog.categories.items():
        if cid not in EXPECTED_CATEGORY_THREATS:
            continue
        if category.threat_ids != EXPECTED_CATEGORY_THREATS[cid]:
            out.append(f"category {cid} threat_ids "
                       f"{sorted(category.threat_ids)} "
                       f"!= {sorted(EXPECTED_CATEGORY_THREATS[cid])}")
        covered |= category.threat_ids
        expected_count = EXPECTED_FACTOR_COUNTS[cid]
        if len(category.lindunn_factors) != expected_count:
            out.append(f"category {cid} lists "
                       f"{len(category.lindunn_factors)} privacy factors, "
                       f"expected {expected_count}")
        expected_bonus = 0.5 * len(category.lindunn_factors)
        if category.bonus != expected_bonus:
            out.append(f"category {cid} bonus {category.bonus} "
                       f"!= 0.5 x factor count ({expected_bonus})")
        dangling = category.threat_ids - set(catalog.threats)
        if dangling:
            out.append(f"category {cid} references missing threats "
                       f"{sorted(dangling)}")
    uncovered = set(catalog.threats) - covered
    if uncovered:
        out.append(f"threats {sorted(uncovered)} belong to no category")

    unknown_guidance = set(catalog.guidance_links) - set(catalog.devices)
    if unknown_guidance:
        out.append(f"guidance_links reference unknown devices "
                   f"{sorted(unknown_guidance)}")
    for device_id in catalog.devices:
        links = catalog.guidance_links.get(device_id, ())
        if not links:
            out.append(f"device {device_id!r} has no guidance links")
        for link in links:
            if not link.label.strip() or not link.url.startswith("https://"):
                out.append(f"guidance link for {device_id!r} must have a "
                           "label and an https URL")

    if not catalog.glossary:
        out.append("glossary must not be empty")

    return out


_LOOKUP_TABLES = {
    "threat": "threats",
    "device": "devices",
    "risk_factor": "risk_factors",
    "category": "categories",
    "glossary": "glossary",
}


def lookup(catalog: Catalog, kind: str, key):
    """Fetch one record by kind and id; returns None when absent.

    Kinds: ``threat`` (int id), ``device`` (str id), ``risk_factor``
    (``"R1"``..), ``category`` (int id), ``glossary`` (term). Hyphenated
    kind spellings are accepted for CLI convenience.
    """
    kind = kind.replace("-", "_")
    if kind not in _LOOKUP_TABLES:
        raise ValueError(
            f"unknown lookup kind {kind!r}, expected one of "
            f"{tuple(_LOOKUP_TABLES)}"
        )
    table = getattr(catalog, _LOOKUP_TABLES[kind])
    if kind in ("threat", "category") and isinstance(key, str):
        if not key.isdigit():
            return None
        key = int(key)
    return table.get(key)
