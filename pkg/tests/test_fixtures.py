import numpy as np
import pytest

from lmflows.estimation import TransitionMatrix
from lmflows.fixtures import (
    EFPT_YEARS_REFERENCE,
    fixture_names,
    get_fixture,
)
from lmflows.states import STATE_CODES, AgeBand, QuarterId

# The published probability blocks, retyped verbatim (two decimals, row
# order SE TE PE U NLFET EDU FS). The transcription test compares the
# package fixtures against this independent copy, so a typo has to happen
# twice, identically, to slip through.
PRINTED = {
    "early_2019Q2": """
        0.78 0.02 0.05 0    0.03 0.13 0
        0.01 0.78 0.05 0.06 0.02 0.08 0
        0.01 0.01 0.92 0.02 0.02 0.02 0
        0.01 0.13 0.02 0.46 0.24 0.13 0
        0.02 0.08 0.02 0.21 0.59 0.08 0
        0.01 0.04 0.01 0.02 0.03 0.88 0
        0.14 0.14 0.14 0.14 0.14 0.14 0.14
    """,
    "early_2019Q3": """
        0.72 0.04 0.03 0.02 0.04 0.15 0
        0    0.79 0.07 0.03 0.05 0.06 0
        0    0.04 0.89 0.01 0.01 0.04 0
        0.02 0.17 0.01 0.36 0.31 0.13 0
        0.02 0.10 0.04 0.16 0.63 0.06 0
        0.01 0.06 0.01 0.01 0.03 0.88 0
        0.14 0.14 0.14 0.14 0.14 0.14 0.14
    """,
    "early_2020Q2": """
        0.64 0.01 0.10 0.05 0.05 0.15 0
        0.01 0.66 0.06 0.07 0.10 0.06 0.05
        0.03 0.06 0.65 0.03 0.04 0.02 0.18
        0.01 0.07 0.02 0.29 0.52 0.07 0.01
        0.01 0.04 0.01 0.19 0.69 0.05 0
        0.01 0.03 0.01 0.01 0.03 0.91 0.01
        0    0    1    0    0    0    0
    """,
    "early_2020Q3": """
        0.75 0.09 0.01 0.02 0.02 0.11 0
        0.01 0.80 0.06 0.04 0.03 0.07 0
        0.01 0.05 0.85 0.02 0.02 0.03 0.02
        0.02 0.12 0.02 0.41 0.32 0.10 0
        0    0.13 0.01 0.32 0.41 0.12 0
        0.01 0.04 0.01 0.04 0.02 0.87 0
        0    0.04 0.75 0.05 0.06 0.02 0.08
    """,
    "late_2019Q2": """
        0.88 0.04 0.02 0.02 0.04 0.02 0
        0.01 0.83 0.07 0.03 0.03 0.02 0
        0.01 0.03 0.93 0.01 0.02 0.01 0
        0.03 0.11 0.04 0.46 0.29 0.07 0
        0.01 0.07 0.03 0.21 0.63 0.06 0
        0.01 0.06 0.02 0.05 0.04 0.82 0
        0    0    0.36 0    0    0    0.64
    """,
    "late_2019Q3": """
        0.87 0.04 0.01 0.04 0.04 0.01 0
        0.01 0.77 0.09 0.04 0.07 0.02 0
        0.01 0.03 0.94 0    0.02 0    0
        0.02 0.12 0.03 0.40 0.37 0.07 0
        0.02 0.08 0.01 0.19 0.67 0.04 0
        0.01 0.06 0.01 0.03 0.07 0.81 0
        0.14 0.14 0.14 0.14 0.14 0.14 0.14
    """,
    "late_2020Q2": """
        0.88 0.02 0.03 0.02 0.01 0.02 0.01
        0.02 0.68 0.06 0.07 0.10 0.04 0.04
        0    0.04 0.76 0    0.03 0.01 0.16
        0.01 0.09 0.03 0.31 0.48 0.06 0.02
        0.01 0.03 0.02 0.16 0.74 0.03 0
        0.03 0.05 0.02 0.05 0.06 0.79 0
        0    0.01 0.84 0    0.15 0    0
    """,
    "late_2020Q3": """
        0.86 0.02 0.03 0.03 0.02 0.04 0
        0.02 0.76 0.06 0.05 0.09 0.02 0
        0.02 0.02 0.94 0.01 0.01 0    0.01
        0.03 0.09 0.01 0.46 0.28 0.14 0
        0    0.07 0.02 0.23 0.61 0.06 0
        0.04 0.06 0.01 0.08 0.06 0.76 0
        0    0.10 0.76 0.01 0.05 0    0.07
    """,
}

EXPECTED_FALLBACK = {
    "early_2019Q2": {"FS"},
    "early_2019Q3": {"FS"},
    "early_2020Q2": set(),
    "early_2020Q3": set(),
    "late_2019Q2": set(),
    "late_2019Q3": {"FS"},
    "late_2020Q2": set(),
    "late_2020Q3": set(),
}


def parse_block(text):
    rows = [[float(v) for v in line.split()] for line in text.strip().splitlines()]
    return np.array(rows)


class TestTranscription:
    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_raw_entries_match_printed_values(self, name):
        printed = parse_block(PRINTED[name])
        assert printed.shape == (7, 7)
        np.testing.assert_array_equal(get_fixture(name).raw_entries(), printed)

    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_raw_rows_reproduce_at_two_decimals(self, name):
        # Renormalization must stay close enough that rounding back to two
        # decimals returns the printed table.
        f = get_fixture(name)
        rounded = np.round(f.matrix().entries * f.raw_entries().sum(axis=1)[:, None], 2)
        np.testing.assert_array_equal(rounded, f.raw_entries())

    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_raw_row_sums_near_one(self, name):
        sums = get_fixture(name).raw_entries().sum(axis=1)
        assert sums.min() > 0.97
        assert sums.max() < 1.03

    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_fallback_rows_flagged(self, name):
        f = get_fixture(name)
        assert f.fallback_states == frozenset(EXPECTED_FALLBACK[name])
        m = f.matrix()
        expected_idx = {STATE_CODES.index(s) for s in EXPECTED_FALLBACK[name]}
        assert m.fallback_rows == frozenset(expected_idx)


class TestRenormalizedMatrices:
    @pytest.mark.parametrize("name", sorted(PRINTED))
    def test_matrix_is_row_stochastic(self, name):
        m = get_fixture(name).matrix()
        assert isinstance(m, TransitionMatrix)
        np.testing.assert_allclose(np.asarray(m.entries).sum(axis=1), np.ones(7), atol=1e-12)
        assert m.states == STATE_CODES

    @pytest.mark.parametrize("name,band,q_from,q_to", [
        ("early_2019Q2", AgeBand.EARLY_YOUNG, "2019.1", "2019.2"),
        ("early_2019Q3", AgeBand.EARLY_YOUNG, "2019.2", "2019.3"),
        ("early_2020Q2", AgeBand.EARLY_YOUNG, "2020.1", "2020.2"),
        ("early_2020Q3", AgeBand.EARLY_YOUNG, "2020.2", "2020.3"),
        ("late_2019Q2", AgeBand.LATE_YOUNG, "2019.1", "2019.2"),
        ("late_2019Q3", AgeBand.LATE_YOUNG, "2019.2", "2019.3"),
        ("late_2020Q2", AgeBand.LATE_YOUNG, "2020.1", "2020.2"),
        ("late_2020Q3", AgeBand.LATE_YOUNG, "2020.2", "2020.3"),
    ])
    def test_cohort_metadata(self, name, band, q_from, q_to):
        f = get_fixture(name)
        assert f.age_band is band
        assert f.from_quarter == QuarterId.parse(q_from)
        assert f.to_quarter == QuarterId.parse(q_to)
        m = f.matrix()
        assert m.from_quarter == f.from_quarter
        assert m.cohort.age_band is band

    def test_uniform_fallback_renormalizes_to_exact_seventh(self):
        m = get_fixture("early_2019Q3").matrix()
        fs = STATE_CODES.index("FS")
        np.testing.assert_allclose(m.entries[fs], np.full(7, 1.0 / 7), atol=1e-15)


class TestRegistry:
    def test_names_cover_both_age_bands_and_demo(self):
        names = fixture_names()
        assert set(PRINTED) <= set(names)
        assert "demo_geometric_q25" in names
        assert len(names) == 9

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown fixture"):
            get_fixture("nope")

    def test_demo_fixture_is_the_geometric_chain(self):
        f = get_fixture("demo_geometric_q25")
        assert f.states == ("A", "B")
        np.testing.assert_array_equal(f.raw_entries(), [[0.75, 0.25], [0.0, 1.0]])
        m = f.matrix()
        assert m.fallback_rows == frozenset()
        assert m.from_quarter is None

    def test_efpt_reference_targets(self):
        assert set(EFPT_YEARS_REFERENCE) == {"early_2019Q3", "early_2020Q3"}
        for targets in EFPT_YEARS_REFERENCE.values():
            assert set(targets) == {"PE", "TE"}
            assert all(v > 0 for v in targets.values())
