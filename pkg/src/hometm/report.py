"""Renderers for evaluation reports.

Three output formats share one Report object. ``text`` and ``markdown`` are
for people and round display values to two decimals; ``machine`` is JSON with
full-precision floats so that a parsed document compares equal to the report
it came from (see parse_machine).
"""

from __future__ import annotations

import json
import textwrap
from dataclasses import dataclass

from .catalog import Catalog, DeviceType, GuidanceLink
from .cvss import canonical_string
from .engine import (
    ActiveCategory,
    ModelInput,
    Report,
    ThreatScore,
    UnknownDeviceError,
    decomposition_lines,
)

MACHINE_SCHEMA_VERSION = 1
FORMATS = ("text", "markdown", "machine")

_WRAP = 76


class UnknownFormatError(ValueError):
    """Requested output format is not one of FORMATS."""


class MachineReportError(ValueError):
    """A machine-format document could not be read back into a Report."""


@dataclass(frozen=True)
class RenderedReport:
    format: str
    body: str
    warnings: tuple[str, ...]


def guidance_links(
    devices, catalog: Catalog
) -> tuple[tuple[DeviceType, tuple[GuidanceLink, ...]], ...]:
    """Per-device reading links for the given device ids, in catalog order."""
    wanted = set(devices)
    unknown = wanted - set(catalog.devices)
    if unknown:
        raise UnknownDeviceError(f"unknown device ids: {sorted(unknown)}")
    out = []
    for did, device in catalog.devices.items():
        if did in wanted:
            out.append((device, catalog.guidance_links.get(did, ())))
    return tuple(out)


def render(report: Report, fmt: str, catalog: Catalog) -> RenderedReport:
    """Render a report in one of the supported formats."""
    if fmt not in FORMATS:
        raise UnknownFormatError(
            f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}"
        )
    warnings: tuple[str, ...] = ()
    if report.input.connections:
        warnings = (
            "connections are recorded for context and do not change scores",
        )
    if fmt == "machine":
        body = _machine(report, catalog)
    elif fmt == "markdown":
        body = _markdown(report, catalog, warnings)
    else:
        body = _text(report, catalog, warnings)
    return RenderedReport(format=fmt, body=body, warnings=warnings)


# ---------------------------------------------------------------- machine --


def _machine(report: Report, catalog: Catalog) -> str:
    doc: dict = {"schema_version": MACHINE_SCHEMA_VERSION}
    if report.generated_at is not None:
        doc["generated_at"] = report.generated_at
    model = report.input
    doc["input"] = {
        "devices": sorted(model.devices),
        "risk_factors": sorted(model.risk_factors, key=lambda r: int(r[1:])),
        "connections": [list(pair) for pair in model.connections],
    }
    if model.display_name is not None:
        doc["input"]["display_name"] = model.display_name
    doc["active_categories"] = [
        {
            "id": cat.id,
            "description": cat.description,
            "bonus": cat.bonus,
            "lindunn_factors": list(cat.lindunn_factors),
        }
        for cat in report.active_categories
    ]
    threats = []
    for rank, (s, record) in enumerate(report.entries, start=1):
        triple = record.scores
        threats.append({
            "rank": rank,
            "threat_id": s.threat_id,
            "short_name": record.short_name,
            "stride": record.stride,
            "description": record.description,
            "mitigation": record.mitigation,
            "vector": canonical_string(record.vector),
            "scores": {
                "base": triple.base,
                "temporal": triple.temporal,
                "environmental": triple.environmental,
                "base_severity": triple.base_severity.value,
                "temporal_severity": triple.temporal_severity.value,
                "environmental_severity": triple.environmental_severity.value,
            },
            "base_mean": s.base_mean,
            "additions": [[rid, weight] for rid, weight in s.additions],
            "subtractions_applied": s.subtractions_applied,
            "lindunn_bonus": s.lindunn_bonus,
            "zeroed_by_rule": s.zeroed_by_rule,
            "final": s.final,
        })
    doc["threats"] = threats
    doc["guidance"] = [
        {
            "device": device.id,
            "label": device.label,
            "links": [{"label": link.label, "url": link.url} for link in links],
        }
        for device, links in guidance_links(model.devices, catalog)
    ]
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def parse_machine(text: str, catalog: Catalog) -> Report:
    """Read a machine-format document back into a Report.

    The threat records are looked up in the given catalog, so the result
    compares equal to the original report whenever both used that catalog.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MachineReportError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MachineReportError("top level must be an object")
    version = doc.get("schema_version")
    if version != MACHINE_SCHEMA_VERSION:
        raise MachineReportError(
            f"unsupported schema_version {version!r}, "
            f"expected {MACHINE_SCHEMA_VERSION}"
        )
    try:
        raw_input = doc["input"]
        model = ModelInput(
            devices=frozenset(raw_input["devices"]),
            risk_factors=frozenset(raw_input["risk_factors"]),
            connections=tuple(
                (pair[0], pair[1]) for pair in raw_input["connections"]
            ),
            display_name=raw_input.get("display_name"),
        )
        categories = tuple(
            ActiveCategory(
                id=cat["id"],
                description=cat["description"],
                bonus=cat["bonus"],
                lindunn_factors=tuple(cat["lindunn_factors"]),
            )
            for cat in doc["active_categories"]
        )
        entries = []
        for row in doc["threats"]:
            tid = row["threat_id"]
            record = catalog.threats.get(tid)
            if record is None:
                raise MachineReportError(f"unknown threat id {tid!r}")
            score = ThreatScore(
                threat_id=tid,
                base_mean=row["base_mean"],
                additions=tuple(
                    (rid, weight) for rid, weight in row["additions"]
                ),
                subtractions_applied=row["subtractions_applied"],
                lindunn_bonus=row["lindunn_bonus"],
                final=row["final"],
                zeroed_by_rule=row["zeroed_by_rule"],
            )
            entries.append((score, record))
    except (KeyError, IndexError, TypeError) as exc:
        raise MachineReportError(f"malformed document: {exc!r}") from None
    return Report(
        input=model,
        active_categories=categories,
        entries=tuple(entries),
        generated_at=doc.get("generated_at"),
    )


# ------------------------------------------------------------------- text --


def _wrap(text: str, indent: str) -> list[str]:
    return textwrap.wrap(
        text, width=_WRAP, initial_indent=indent, subsequent_indent=indent
    )


def _model_summary(report: Report, catalog: Catalog) -> dict:
    """Shared lookups for the human-readable renderers."""
    model = report.input
    devices = [catalog.devices[d] for d in sorted(model.devices)]
    factors = [
        catalog.risk_factors[r]
        for r in sorted(model.risk_factors, key=lambda rid: int(rid[1:]))
    ]
    return {"model": model, "devices": devices, "factors": factors}


def _text(report: Report, catalog: Catalog, warnings: tuple[str, ...]) -> str:
    ctx = _model_summary(report, catalog)
    model = ctx["model"]
    lines: list[str] = ["Home threat report", "=================="]
    if model.display_name:
        lines.append(f"Prepared for: {model.display_name}")
    if report.generated_at:
        lines.append(f"Generated: {report.generated_at}")
    lines.append("")

    lines.append("Devices")
    lines.append("-------")
    if ctx["devices"]:
        for device in ctx["devices"]:
            lines.append(f"- {device.label} ({device.id})")
    else:
        lines.append("(none selected)")
    lines.append("")

    lines.append("Reported gaps")
    lines.append("-------------")
    if ctx["factors"]:
        for factor in ctx["factors"]:
            lines.append(f"- {factor.id} (+{factor.weight}) {factor.question_text}")
    else:
        lines.append("None reported.")
    lines.append("")

    if model.connections:
        lines.append("Connections noted")
        lines.append("-----------------")
        for a, b in model.connections:
            lines.append(f"- {a} <-> {b}")
        for warning in warnings:
            lines.append(f"Note: {warning}.")
        lines.append("")

    if not report.entries:
        lines.append("No threats were identified for this selection.")
        lines.append(
            "Check the device list and reported gaps, then run the model again."
        )
        lines.append("")
        return "\n".join(lines)

    lines.append("Active device categories")
    lines.append("------------------------")
    for cat in report.active_categories:
        lines.extend(_wrap(f"[{cat.id}] {cat.description}", ""))
        lines.append(
            f"    {len(cat.lindunn_factors)} privacy factors x 0.5 each: "
            f"+{cat.bonus:.1f} to every threat in this category"
        )
    lines.append("")

    lines.append("Ranked threats")
    lines.append("--------------")
    for rank, (score, record) in enumerate(report.entries, start=1):
        lines.append(f"{rank:2d}. {record.short_name}  {score.final:.2f}")
        lines.extend(_wrap(record.description, "    "))
        for step in decomposition_lines(score, record):
            lines.extend(_wrap(step, "    ") or ["    " + step])
        lines.extend(_wrap(f"What to do: {record.mitigation}", "    "))
        lines.append("")

    lines.append("Where to read more")
    lines.append("------------------")
    for device, links in guidance_links(model.devices, catalog):
        lines.append(f"{device.label}:")
        for link in links:
            lines.append(f"- {link.label} <{link.url}>")
    lines.append("")
    return "\n".join(lines)


# --------------------------------------------------------------- markdown --


def _markdown(report: Report, catalog: Catalog, warnings: tuple[str, ...]) -> str:
    ctx = _model_summary(report, catalog)
    model = ctx["model"]
    lines: list[str] = ["# Home threat report", ""]
    if model.display_name:
        lines.append(f"**Prepared for:** {model.display_name}")
        lines.append("")
    if report.generated_at:
        lines.append(f"**Generated:** {report.generated_at}")
        lines.append("")

    lines.append("## Model")
    lines.append("")
    device_text = (
        ", ".join(d.label for d in ctx["devices"]) or "none selected"
    )
    lines.append(f"- **Devices:** {device_text}")
    factor_text = (
        ", ".join(f.id for f in ctx["factors"]) or "none reported"
    )
    lines.append(f"- **Reported gaps:** {factor_text}")
    if model.connections:
        joined = "; ".join(f"{a} and {b}" for a, b in model.connections)
        lines.append(f"- **Connections noted:** {joined}")
    lines.append("")
    for warning in warnings:
        lines.append(f"> Note: {warning}.")
        lines.append("")

    if not report.entries:
        lines.append("No threats were identified for this selection.")
        lines.append("")
        lines.append(
            "Check the device list and reported gaps, then run the model again."
        )
        lines.append("")
        return "\n".join(lines)

    lines.append("## Active device categories")
    lines.append("")
    lines.append("| Id | Category | Privacy factors | Bonus |")
    lines.append("|---:|----------|----------------:|------:|")
    for cat in report.active_categories:
        lines.append(
            f"| {cat.id} | {cat.description} | "
            f"{len(cat.lindunn_factors)} | +{cat.bonus:.1f} |"
        )
    lines.append("")

    lines.append("## Ranked threats")
    lines.append("")
    lines.append("| Rank | Threat | Score |")
    lines.append("|-----:|--------|------:|")
    for rank, (score, record) in enumerate(report.entries, start=1):
        lines.append(f"| {rank} | {record.short_name} | {score.final:.2f} |")
    lines.append("")

    for rank, (score, record) in enumerate(report.entries, start=1):
        lines.append(f"### {rank}. {record.short_name} ({score.final:.2f})")
        lines.append("")
        lines.append(record.description)
        lines.append("")
        lines.append("Why this score:")
        lines.append("")
        for step in decomposition_lines(score, record):
            lines.append(f"- {step}")
        lines.append("")
        lines.append(f"**What to do:** {record.mitigation}")
        lines.append("")

    lines.append("## Where to read more")
    lines.append("")
    for device, links in guidance_links(model.devices, catalog):
        lines.append(f"**{device.label}**")
        lines.append("")
        for link in links:
            lines.append(f"- [{link.label}]({link.url})")
        lines.append("")
    return "\n".join(lines)
