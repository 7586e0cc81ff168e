"""CVSS v3.1 vector parsing and scoring.

Implements the FIRST v3.1 equations and weight tables verbatim. Scores are
held as integer tenths internally so golden-value tests never compare floats
for equality; the float views are exact because every tenth is representable
after a single division.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class VectorError(ValueError):
    """A vector string violates the v3.1 grammar."""


class MissingPrefixError(VectorError):
    """Vector does not start with the literal ``CVSS:3.1/`` head."""


class UnknownMetricError(VectorError):
    """A segment names a metric the specification does not define."""


class IllegalValueError(VectorError):
    """A metric carries a value outside its legal set."""


class DuplicateMetricError(VectorError):
    """The same metric appears more than once."""


class MissingBaseMetricError(VectorError):
    """One of the eight mandatory base metrics is absent."""


PREFIX = "CVSS:3.1/"

# Specification order; canonical strings emit metrics in exactly this order.
METRIC_ORDER = (
    "AV", "AC", "PR", "UI", "S", "C", "I", "A",
    "E", "RL", "RC",
    "CR", "IR", "AR",
    "MAV", "MAC", "MPR", "MUI", "MS", "MC", "MI", "MA",
)
BASE_METRICS = METRIC_ORDER[:8]

ALLOWED_VALUES = {
    "AV": ("N", "A", "L", "P"),
    "AC": ("L", "H"),
    "PR": ("N", "L", "H"),
    "UI": ("N", "R"),
    "S": ("U", "C"),
    "C": ("N", "L", "H"),
    "I": ("N", "L", "H"),
    "A": ("N", "L", "H"),
    "E": ("X", "U", "P", "F", "H"),
    "RL": ("X", "O", "T", "W", "U"),
    "RC": ("X", "U", "R", "C"),
    "CR": ("X", "L", "M", "H"),
    "IR": ("X", "L", "M", "H"),
    "AR": ("X", "L", "M", "H"),
    "MAV": ("X", "N", "A", "L", "P"),
    "MAC": ("X", "L", "H"),
    "MPR": ("X", "N", "L", "H"),
    "MUI": ("X", "N", "R"),
    "MS": ("X", "U", "C"),
    "MC": ("X", "N", "L", "H"),
    "MI": ("X", "N", "L", "H"),
    "MA": ("X", "N", "L", "H"),
}

AV_WEIGHT = {"N": 0.85, "A": 0.62, "L": 0.55, "P": 0.2}
AC_WEIGHT = {"L": 0.77, "H": 0.44}
# Privileges Required weighs higher when the scope changes.
PR_WEIGHT = {
    "U": {"N": 0.85, "L": 0.62, "H": 0.27},
    "C": {"N": 0.85, "L": 0.68, "H": 0.5},
}
UI_WEIGHT = {"N": 0.85, "R": 0.62}
CIA_WEIGHT = {"N": 0.0, "L": 0.22, "H": 0.56}
E_WEIGHT = {"X": 1.0, "U": 0.91, "P": 0.94, "F": 0.97, "H": 1.0}
RL_WEIGHT = {"X": 1.0, "O": 0.95, "T": 0.96, "W": 0.97, "U": 1.0}
RC_WEIGHT = {"X": 1.0, "U": 0.92, "R": 0.96, "C": 1.0}
REQUIREMENT_WEIGHT = {"X": 1.0, "L": 0.5, "M": 1.0, "H": 1.5}


class Severity(enum.Enum):
    """Qualitative rating bands from the v3.1 specification."""

    NONE = "None"
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class CvssVector:
    """One field per metric; unset optional metrics hold ``"X"``."""

    av: str
    ac: str
    pr: str
    ui: str
    s: str
    c: str
    i: str
    a: str
    e: str = "X"
    rl: str = "X"
    rc: str = "X"
    cr: str = "X"
    ir: str = "X"
    ar: str = "X"
    mav: str = "X"
    mac: str = "X"
    mpr: str = "X"
    mui: str = "X"
    ms: str = "X"
    mc: str = "X"
    mi: str = "X"
    ma: str = "X"

    def __post_init__(self) -> None:
        for metric in METRIC_ORDER:
            value = getattr(self, metric.lower())
            if value not in ALLOWED_VALUES[metric]:
                raise IllegalValueError(
                    f"metric {metric} cannot take value {value!r}"
                )


@dataclass(frozen=True)
class ScoreTriple:
    """Base, temporal and environmental scores in integer tenths."""

    base_tenths: int
    temporal_tenths: int
    environmental_tenths: int

    @property
    def base(self) -> float:
        return self.base_tenths / 10

    @property
    def temporal(self) -> float:
        return self.temporal_tenths / 10

    @property
    def environmental(self) -> float:
        return self.environmental_tenths / 10

    @property
    def base_severity(self) -> Severity:
        return severity(self.base)

    @property
    def temporal_severity(self) -> Severity:
        return severity(self.temporal)

    @property
    def environmental_severity(self) -> Severity:
        return severity(self.environmental)


def parse_vector(text: str) -> CvssVector:
    """Parse a v3.1 vector string, strictly.

    Metrics may appear in any order; every violation of the grammar raises a
    dedicated :class:`VectorError` subclass, never a warning.
    """
    if not isinstance(text, str) or not text.startswith(PREFIX):
        raise MissingPrefixError(
            f"vector must start with {PREFIX!r}: {text!r}"
        )
    seen: dict[str, str] = {}
    for segment in text[len(PREFIX):].split("/"):
        key, colon, value = segment.partition(":")
        if key not in ALLOWED_VALUES:
            raise UnknownMetricError(f"unknown metric {key!r} in {text!r}")
        if not colon or not value:
            raise IllegalValueError(f"metric {key} has no value in {text!r}")
        if key in seen:
            raise DuplicateMetricError(f"metric {key} appears twice in {text!r}")
        if value not in ALLOWED_VALUES[key]:
            raise IllegalValueError(
                f"metric {key} cannot take value {value!r} in {text!r}"
            )
        seen[key] = value
    for metric in BASE_METRICS:
        if metric not in seen:
            raise MissingBaseMetricError(
                f"base metric {metric} missing from {text!r}"
            )
    return CvssVector(**{m.lower(): v for m, v in seen.items()})


def canonical_string(v: CvssVector) -> str:
    """Serialise in specification order, omitting X-valued optional metrics."""
    parts = []
    for metric in METRIC_ORDER:
        value = getattr(v, metric.lower())
        if value == "X" and metric not in BASE_METRICS:
            continue
        parts.append(f"{metric}:{value}")
    return PREFIX + "/".join(parts)


def round_up(value: float) -> float:
    """The specification's RoundUp: smallest 1-decimal value >= the input.

    Works on an integer view of the first five decimal places so that
    accumulated binary noise (the well-known 8.6*0.915 case) cannot push a
    score across a tenth boundary.
    """
    return _round_up_tenths(value) / 10


def _round_up_tenths(value: float) -> int:
    scaled = round(value * 100000)
    quotient, remainder = divmod(scaled, 10000)
    return int(quotient) if remainder == 0 else int(quotient) + 1


def severity(score: float) -> Severity:
    """Map a score to its qualitative band (None/Low/Medium/High/Critical)."""
    if not 0.0 <= score <= 10.0 or math.isnan(score):
        raise ValueError(f"score out of range: {score!r}")
    if score == 0.0:
        return Severity.NONE
    if score < 4.0:
        return Severity.LOW
    if score < 7.0:
        return Severity.MEDIUM
    if score < 9.0:
        return Severity.HIGH
    return Severity.CRITICAL


def _modified(v: CvssVector, metric: str) -> str:
    """Effective value of a modified metric: X inherits the base metric."""
    value = getattr(v, "m" + metric.lower())
    return getattr(v, metric.lower()) if value == "X" else value


def score(v: CvssVector) -> ScoreTriple:
    """Score a vector: base, temporal and environmental with severities."""
    iss = 1 - (
        (1 - CIA_WEIGHT[v.c]) * (1 - CIA_WEIGHT[v.i]) * (1 - CIA_WEIGHT[v.a])
    )
    if v.s == "U":
        impact = 6.42 * iss
    else:
        impact = 7.52 * (iss - 0.029) - 3.25 * (iss - 0.02) ** 15
    exploitability = (
        8.22
        * AV_WEIGHT[v.av]
        * AC_WEIGHT[v.ac]
        * PR_WEIGHT[v.s][v.pr]
        * UI_WEIGHT[v.ui]
    )
    if impact <= 0:
        base = 0
    elif v.s == "U":
        base = _round_up_tenths(min(impact + exploitability, 10))
    else:
        base = _round_up_tenths(min(1.08 * (impact + exploitability), 10))

    temporal_multiplier = E_WEIGHT[v.e] * RL_WEIGHT[v.rl] * RC_WEIGHT[v.rc]
    temporal = _round_up_tenths(base / 10 * temporal_multiplier)

    ms = _modified(v, "S")
    miss = min(
        1 - (
            (1 - REQUIREMENT_WEIGHT[v.cr] * CIA_WEIGHT[_modified(v, "C")])
            * (1 - REQUIREMENT_WEIGHT[v.ir] * CIA_WEIGHT[_modified(v, "I")])
            * (1 - REQUIREMENT_WEIGHT[v.ar] * CIA_WEIGHT[_modified(v, "A")])
        ),
        0.915,
    )
    if ms == "U":
        modified_impact = 6.42 * miss
    else:
        # v3.1 uses a different exponent and factor here than the base
        # equation; with a changed scope this can move the environmental
        # score one tenth away from the base even when all environmental
        # metrics are unset.
        modified_impact = (
            7.52 * (miss - 0.029) - 3.25 * (miss * 0.9731 - 0.02) ** 13
        )
    modified_exploitability = (
        8.22
        * AV_WEIGHT[_modified(v, "AV")]
        * AC_WEIGHT[_modified(v, "AC")]
        * PR_WEIGHT[ms][_modified(v, "PR")]
        * UI_WEIGHT[_modified(v, "UI")]
    )
    if modified_impact <= 0:
        environmental = 0
    else:
        if ms == "U":
            inner = _round_up_tenths(
                min(modified_impact + modified_exploitability, 10)
            )
        else:
            inner = _round_up_tenths(
                min(1.08 * (modified_impact + modified_exploitability), 10)
            )
        environmental = _round_up_tenths(inner / 10 * temporal_multiplier)

    return ScoreTriple(base, temporal, environmental)
