import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hometm import cvss
from hometm.cvss import (
    CvssVector,
    DuplicateMetricError,
    IllegalValueError,
    MissingBaseMetricError,
    MissingPrefixError,
    Severity,
    UnknownMetricError,
    canonical_string,
    parse_vector,
    round_up,
    score,
    severity,
)

from cvss_reference import reference_score
from score_table import (
    DIVERGENT_ROWS,
    EXPECTED_TRIPLES,
    PUBLISHED_SEVERITIES,
    VECTORS,
)

SEVERITY_LETTER = {"L": Severity.LOW, "M": Severity.MEDIUM, "H": Severity.HIGH}


def metric_values(metric):
    return st.sampled_from(cvss.ALLOWED_VALUES[metric])


full_vectors = st.builds(
    CvssVector,
    **{m.lower(): metric_values(m) for m in cvss.METRIC_ORDER},
)

base_only_vectors = st.builds(
    CvssVector,
    **{m.lower(): metric_values(m) for m in cvss.BASE_METRICS},
)


class TestParse:
    def test_parses_catalog_vector_with_unset_modified_metrics(self):
        v = parse_vector(VECTORS[1])
        assert (v.av, v.ac, v.pr, v.ui) == ("P", "L", "N", "N")
        assert (v.s, v.c, v.i, v.a) == ("U", "L", "L", "L")
        assert (v.e, v.rl, v.rc) == ("H", "U", "C")
        assert (v.cr, v.ir, v.ar) == ("L", "L", "L")
        for field in ("mav", "mac", "mpr", "mui", "ms", "mc", "mi", "ma"):
            assert getattr(v, field) == "X"

    def test_metric_order_in_input_is_free(self):
        shuffled = "CVSS:3.1/C:L/AV:P/I:L/AC:L/A:L/PR:N/S:U/UI:N/E:H"
        v = parse_vector(shuffled)
        assert canonical_string(v) == (
            "CVSS:3.1/AV:P/AC:L/PR:N/UI:N/S:U/C:L/I:L/A:L/E:H"
        )

    def test_missing_prefix(self):
        with pytest.raises(MissingPrefixError):
            parse_vector("AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(MissingPrefixError):
            parse_vector("CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(MissingPrefixError):
            parse_vector("cvss:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")

    def test_unknown_metric(self):
        with pytest.raises(UnknownMetricError):
            parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/ZZ:A")

    def test_illegal_value(self):
        with pytest.raises(IllegalValueError):
            parse_vector("CVSS:3.1/AV:Q/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(IllegalValueError):
            # values are case-sensitive
            parse_vector("CVSS:3.1/AV:n/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(IllegalValueError):
            # base metrics may not be X
            parse_vector("CVSS:3.1/AV:X/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(IllegalValueError):
            parse_vector("CVSS:3.1/AV/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")

    def test_duplicate_metric(self):
        with pytest.raises(DuplicateMetricError):
            parse_vector("CVSS:3.1/AV:N/AV:L/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
        with pytest.raises(DuplicateMetricError):
            # duplicate with the same value is still a duplicate
            parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/E:U/E:U")

    def test_missing_base_metric(self):
        with pytest.raises(MissingBaseMetricError):
            parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/C:H/I:H/A:H")
        with pytest.raises(MissingBaseMetricError):
            parse_vector("CVSS:3.1/AV:N")

    def test_explicit_x_is_legal_for_optional_metrics(self):
        v = parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H/E:X")
        assert v.e == "X"
        # and drops out of the canonical form
        assert canonical_string(v).endswith("/A:H")

    def test_direct_construction_validates(self):
        with pytest.raises(IllegalValueError):
            CvssVector("N", "L", "N", "N", "U", "H", "H", "banana")


class TestCanonical:
    @given(full_vectors)
    def test_round_trip(self, v):
        assert parse_vector(canonical_string(v)) == v

    @given(full_vectors)
    def test_canonical_is_fixed_point(self, v):
        text = canonical_string(v)
        assert canonical_string(parse_vector(text)) == text

    def test_catalog_vectors_are_already_canonical(self):
        for text in VECTORS.values():
            assert canonical_string(parse_vector(text)) == text


class TestRoundUp:
    def test_exact_tenths_are_unchanged(self):
        assert round_up(4.0) == 4.0
        assert round_up(0.0) == 0.0
        assert round_up(10.0) == 10.0

    def test_fractions_round_toward_ten(self):
        assert round_up(4.02) == 4.1
        assert round_up(4.0001) == 4.1
        assert round_up(9.91) == 10.0

    def test_resolution_is_five_decimal_places(self):
        # the integer view keeps five decimals, so anything closer to a
        # tenth than 5e-6 collapses onto it instead of rounding up
        assert round_up(4.000001) == 4.0

    def test_binary_noise_does_not_cross_a_boundary(self):
        # 0.1 + 0.2 is 0.30000000000000004 in binary; a naive ceil on the
        # first decimal place would answer 0.4.
        assert round_up(0.1 + 0.2) == 0.3
        assert round_up(8.6 / 2) == 4.3

    @given(st.integers(min_value=0, max_value=100))
    def test_idempotent_on_valid_scores(self, tenths):
        assert round_up(tenths / 10) == tenths / 10


class TestSeverity:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (0.0, Severity.NONE),
            (0.1, Severity.LOW),
            (3.9, Severity.LOW),
            (4.0, Severity.MEDIUM),
            (6.9, Severity.MEDIUM),
            (7.0, Severity.HIGH),
            (8.9, Severity.HIGH),
            (9.0, Severity.CRITICAL),
            (10.0, Severity.CRITICAL),
        ],
    )
    def test_band_edges(self, value, expected):
        assert severity(value) is expected

    def test_out_of_range_is_rejected(self):
        for bad in (-0.1, 10.1, math.nan):
            with pytest.raises(ValueError):
                severity(bad)

    def test_published_letters_for_all_catalog_cells(self):
        # 16 rows x 3 columns, every letter as published
        for tid, text in VECTORS.items():
            triple = score(parse_vector(text))
            letters = PUBLISHED_SEVERITIES[tid]
            assert triple.base_severity is SEVERITY_LETTER[letters[0]]
            assert triple.temporal_severity is SEVERITY_LETTER[letters[1]]
            assert triple.environmental_severity is SEVERITY_LETTER[letters[2]]


class TestScore:
    @pytest.mark.parametrize("tid", sorted(VECTORS))
    def test_catalog_golden_triples(self, tid):
        triple = score(parse_vector(VECTORS[tid]))
        assert (
            triple.base,
            triple.temporal,
            triple.environmental,
        ) == EXPECTED_TRIPLES[tid]

    def test_divergent_rows_are_documented(self):
        import pathlib

        note = pathlib.Path(__file__).resolve().parent.parent / "CONFORMANCE.md"
        text = note.read_text(encoding="utf-8")
        for tid in DIVERGENT_ROWS:
            assert f"Threat {tid}" in text

    def test_well_known_anchor_vectors(self):
        anchors = {
            "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H": 9.8,
            "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:C/C:H/I:H/A:H": 10.0,
            "CVSS:3.1/AV:N/AC:L/PR:N/UI:R/S:C/C:L/I:L/A:N": 6.1,
            "CVSS:3.1/AV:N/AC:H/PR:N/UI:N/S:U/C:H/I:N/A:N": 5.9,
            "CVSS:3.1/AV:L/AC:L/PR:L/UI:N/S:U/C:H/I:H/A:H": 7.8,
            "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N": 0.0,
        }
        for text, expected in anchors.items():
            assert score(parse_vector(text)).base == expected

    def test_zero_impact_zeroes_all_three_scores(self):
        triple = score(parse_vector("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N/E:U/RL:O/RC:U/CR:H"))
        assert triple.base == 0.0
        assert triple.temporal == 0.0
        assert triple.environmental == 0.0
        assert triple.base_severity is Severity.NONE

    @given(full_vectors)
    def test_matches_independent_reference(self, v):
        got = score(v)
        expected = reference_score(canonical_string(v))
        assert (got.base, got.temporal, got.environmental) == expected

    @given(full_vectors)
    def test_scores_stay_in_range(self, v):
        triple = score(v)
        for tenths in (
            triple.base_tenths,
            triple.temporal_tenths,
            triple.environmental_tenths,
        ):
            assert 0 <= tenths <= 100

    @given(full_vectors)
    def test_temporal_never_exceeds_base(self, v):
        triple = score(v)
        assert triple.temporal_tenths <= triple.base_tenths

    @given(base_only_vectors)
    def test_unset_temporal_metrics_leave_base_unchanged(self, v):
        triple = score(v)
        assert triple.temporal_tenths == triple.base_tenths

    @given(base_only_vectors)
    def test_unset_environmental_metrics_track_base(self, v):
        triple = score(v)
        if v.s == "U":
            assert triple.environmental_tenths == triple.base_tenths
        else:
            # With a changed scope the v3.1 environmental impact equation
            # replaces 3.25*(ISS-0.02)^15 with 3.25*(MISS*0.9731-0.02)^13,
            # so even an all-unset environmental group may land one tenth
            # away from the base score.
            assert abs(triple.environmental_tenths - triple.base_tenths) <= 1

    @given(base_only_vectors)
    def test_raising_confidentiality_never_lowers_base(self, v):
        ladder = ["N", "L", "H"]
        scores = []
        for value in ladder:
            scores.append(
                score(CvssVector(v.av, v.ac, v.pr, v.ui, v.s, value, v.i, v.a)).base_tenths
            )
        assert scores == sorted(scores)

    @given(full_vectors, st.sampled_from(["U", "P", "F", "H"]))
    def test_defined_exploit_maturity_never_raises_temporal(self, v, e_value):
        import dataclasses

        defined = dataclasses.replace(v, e=e_value)
        undefined = dataclasses.replace(v, e="X")
        assert score(defined).temporal_tenths <= score(undefined).temporal_tenths
