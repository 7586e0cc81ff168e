"""Composite risk ranking over the threat catalog.

The pipeline runs in a fixed order for every active threat: mean of the
three CVSS scores, plus the weight of each selected risk factor that relates
to the threat, minus one (floored at zero after every step) for each
unselected factor that lists the threat as reduced-when-off, plus the privacy
bonus of every active category containing the threat. Threat 11 is zeroed
outright unless R6 or R13 is selected: with human review and third-party
sharing both ruled out, that leak path does not exist. Zero-scored threats
are dropped and the rest ranked descending, ties broken by ascending id.

Iteration order is deterministic everywhere (factors in R-number order,
categories ascending) so identical inputs produce bit-identical floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .catalog import Catalog, ThreatRecord


class EvaluationError(Exception):
    """Base class for model evaluation failures."""


class UnknownDeviceError(EvaluationError):
    """The input names a device the catalog does not define."""


class UnknownRiskFactorError(EvaluationError):
    """The input names a risk factor the catalog does not define."""


class NotInReportError(EvaluationError):
    """The requested threat is not part of the ranked report."""


@dataclass(frozen=True)
class ModelInput:
    """One evaluation request: what the home contains and which gaps apply.

    ``connections`` records which devices the user says talk to each other.
    They are echoed in reports for context but do not influence scores.
    """

    devices: frozenset[str]
    risk_factors: frozenset[str] = frozenset()
    connections: tuple[tuple[str, str], ...] = ()
    display_name: str | None = None


@dataclass(frozen=True)
class ThreatScore:
    """Full decomposition of one threat's composite score."""

    threat_id: int
    base_mean: float
    additions: tuple[tuple[str, int], ...]
    subtractions_applied: int
    lindunn_bonus: float
    final: float
    zeroed_by_rule: bool


@dataclass(frozen=True)
class ActiveCategory:
    id: int
    description: str
    bonus: float
    lindunn_factors: tuple[str, ...]


@dataclass(frozen=True)
class Report:
    """Ranked threats for one model, highest composite score first."""

    input: ModelInput
    active_categories: tuple[ActiveCategory, ...]
    entries: tuple[tuple[ThreatScore, ThreatRecord], ...]
    generated_at: str | None = None


@dataclass(frozen=True)
class Explanation:
    """One ranked threat unpacked: prose plus the score arithmetic."""

    rank: int
    score: ThreatScore
    threat: ThreatRecord
    narrative: tuple[str, ...]


def _factor_order(factor_ids: Iterable[str]) -> list[str]:
    return sorted(factor_ids, key=lambda rid: int(rid[1:]))


def active_categories(devices: Iterable[str], catalog: Catalog) -> frozenset[int]:
    """Union of the category memberships of the given devices."""
    out: set[int] = set()
    for device_id in devices:
        device = catalog.devices.get(device_id)
        if device is None:
            raise UnknownDeviceError(f"unknown device id {device_id!r}")
        out |= device.categories
    return frozenset(out)


def active_threats(categories: Iterable[int], catalog: Catalog) -> frozenset[int]:
    """Union of the threat sets of the given categories."""
    out: set[int] = set()
    for cid in categories:
        category = catalog.categories.get(cid)
        if category is None:
            raise EvaluationError(f"unknown category id {cid!r}")
        out |= category.threat_ids
    return frozenset(out)


def score_model(
    model: ModelInput,
    catalog: Catalog,
    *,
    generated_at: str | None = None,
) -> Report:
    """Rank every active threat for the model.

    Pure function of its arguments; ``generated_at`` is carried verbatim
    into the report (pass None for reproducible output).
    """
    for rid in model.risk_factors:
        if rid not in catalog.risk_factors:
            raise UnknownRiskFactorError(f"unknown risk factor id {rid!r}")
    for left, right in model.connections:
        for endpoint in (left, right):
            if endpoint not in model.devices:
                raise UnknownDeviceError(
                    f"connection endpoint {endpoint!r} is not among the "
                    "selected devices"
                )

    cat_ids = active_categories(model.devices, catalog)
    threats = active_threats(cat_ids, catalog)

    selected = set(model.risk_factors)
    factor_sequence = [catalog.risk_factors[rid]
                       for rid in _factor_order(catalog.risk_factors)]

    scored: list[ThreatScore] = []
    for tid in sorted(threats):
        record = catalog.threats[tid]
        triple = record.scores
        value = (triple.base + triple.temporal + triple.environmental) / 3
        base_mean = value

        additions: list[tuple[str, int]] = []
        for factor in factor_sequence:
            if factor.id in selected and tid in factor.related_threats:
                value += factor.weight
                additions.append((factor.id, factor.weight))

        subtractions = 0
        for factor in factor_sequence:
            if factor.id not in selected and tid in factor.off_reductions:
                value = max(0.0, value - 1.0)
                subtractions += 1

        bonus = 0.0
        for cid in sorted(cat_ids):
            if tid in catalog.categories[cid].threat_ids:
                bonus += catalog.categories[cid].bonus
        value += bonus

        zeroed = False
        if tid == 11 and "R6" not in selected and "R13" not in selected:
            value = 0.0
            zeroed = True

        scored.append(ThreatScore(
            threat_id=tid,
            base_mean=base_mean,
            additions=tuple(additions),
            subtractions_applied=subtractions,
            lindunn_bonus=bonus,
            final=value,
            zeroed_by_rule=zeroed,
        ))

    ranked = sorted(
        (s for s in scored if s.final > 0.0),
        key=lambda s: (-s.final, s.threat_id),
    )
    return Report(
        input=model,
        active_categories=tuple(
            ActiveCategory(
                id=cid,
                description=catalog.categories[cid].description,
                bonus=catalog.categories[cid].bonus,
                lindunn_factors=catalog.categories[cid].lindunn_factors,
            )
            for cid in sorted(cat_ids)
        ),
        entries=tuple(
            (s, catalog.threats[s.threat_id]) for s in ranked
        ),
        generated_at=generated_at,
    )


def explain(threat_id: int, report: Report) -> Explanation:
    """Unpack one ranked threat: catalog prose plus the score arithmetic."""
    for index, (threat_score, record) in enumerate(report.entries):
        if threat_score.threat_id == threat_id:
            return Explanation(
                rank=index + 1,
                score=threat_score,
                threat=record,
                narrative=decomposition_lines(threat_score, record),
            )
    raise NotInReportError(
        f"threat {threat_id} is not in this report (inactive, zero-scored, "
        "or not a known id)"
    )


def decomposition_lines(s: ThreatScore, record: ThreatRecord) -> tuple[str, ...]:
    """Human-readable walk through one threat's score arithmetic."""
    triple = record.scores
    lines = [
        f"Mean of the three CVSS scores (base {triple.base:.1f}, temporal "
        f"{triple.temporal:.1f}, environmental {triple.environmental:.1f}): "
        f"{s.base_mean:.2f}",
    ]
    for rid, weight in s.additions:
        lines.append(f"+{weight} reported gap {rid} relates to this threat")
    if s.subtractions_applied:
        lines.append(
            f"-1 x {s.subtractions_applied} protective measure"
            f"{'s' if s.subtractions_applied != 1 else ''} already in place "
            "(never below zero)"
        )
    if s.lindunn_bonus:
        lines.append(
            f"+{s.lindunn_bonus:.1f} privacy exposure bonus from the active "
            "device categories"
        )
    if s.zeroed_by_rule:
        lines.append(
            "Set to zero: with human review and third-party sharing both "
            "ruled out, this leak path is closed"
        )
    lines.append(f"Composite score: {s.final:.2f}")
    return tuple(lines)
