import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boxcast.errors import (
    DuplicateError,
    InsufficientDataError,
    MonthFormatError,
    ParseError,
    StructuralError,
    UnknownBoroughError,
)
from boxcast.ingest import (
    Month,
    MonthlySeries,
    RawTable,
    clean_series,
    parse_long_csv,
    parse_month,
    parse_wide_csv,
    read_table,
    records_to_table,
    select_boroughs,
    serialize_wide_csv,
)

FOUR = ("Barking and Dagenham", "Barnet", "Bexley", "Brent")


def table_from_column(cells, start=Month(2012, 1)):
    return RawTable(("Barnet",), tuple((start + i, (c,)) for i, c in enumerate(cells)))


@pytest.mark.parametrize("label, expected", [
    ("12-Jan", Month(2012, 1)),
    ("16-Dec", Month(2016, 12)),
    ("Jan-17", Month(2017, 1)),
    ("2015-12", Month(2015, 12)),
    ("2015-3", Month(2015, 3)),
])
def test_parse_month(label, expected):
    assert parse_month(label) == expected


@pytest.mark.parametrize("label", ["2012-13", "12-Foo", "January 2012", "", "12/01"])
def test_parse_month_rejects(label):
    with pytest.raises(MonthFormatError):
        parse_month(label)


def test_month_arithmetic():
    assert Month(2015, 12) + 1 == Month(2016, 1)
    assert Month(2016, 1) - Month(2012, 1) == 48
    assert (Month(2017, 1)).short() == "Jan-17"
    assert Month(2012, 1) - 1 == Month(2011, 12)


def test_wide_first_cell():
    table = parse_wide_csv(b"month,Barnet\n12-Jan,1240\n")
    assert table.header == ("Barnet",)
    assert table.rows == ((Month(2012, 1), (1240.0,)),)


def test_wide_header_only_is_empty():
    table = parse_wide_csv(b"month,Barnet,Brent\n")
    assert table.rows == ()
    assert table.header == ("Barnet", "Brent")


def test_wide_non_numeric_cell_position():
    with pytest.raises(ParseError) as info:
        parse_wide_csv(b"month,Barnet\n12-Jan,1240\n12-Feb,abc\n")
    assert (info.value.row, info.value.column) == (2, 2)
    assert "row 2 column 2" in str(info.value)


def test_wide_inconsistent_columns():
    with pytest.raises(StructuralError):
        parse_wide_csv(b"month,Barnet,Brent\n12-Jan,1240\n")


def test_wide_bad_month_label():
    with pytest.raises(MonthFormatError):
        parse_wide_csv(b"month,Barnet\nsomeday,1240\n")


def test_wide_missing_cells_and_bom():
    table = parse_wide_csv("﻿month,A,B\n2012-01,,3\n2012-02,4,\n".encode())
    assert table.rows[0][1] == (None, 3.0)
    assert table.rows[1][1] == (4.0, None)


def test_long_mapping():
    records = parse_long_csv(b"month,borough,count\n2012-01,Barnet,1240\n")
    assert len(records) == 1
    r = records[0]
    assert (r.month, r.borough, r.count) == (Month(2012, 1), "Barnet", 1240.0)


def test_long_duplicate():
    with pytest.raises(DuplicateError):
        parse_long_csv(b"month,borough,count\n2012-01,Barnet,1\n2012-01,Barnet,2\n")


def test_long_empty_after_header():
    assert parse_long_csv(b"month,borough,count\n") == []


def test_long_missing_column():
    with pytest.raises(StructuralError, match="count"):
        parse_long_csv(b"month,borough\n2012-01,Barnet\n")


def test_long_pivot_and_autodetect():
    text = b"month,borough,count\n2012-01,A,1\n2012-03,A,3\n2012-01,B,5\n"
    table = read_table(text)
    assert table.header == ("A", "B")
    assert [m for m, _ in table.rows] == [Month(2012, 1), Month(2012, 2), Month(2012, 3)]
    assert table.column("A") == [1.0, None, 3.0]
    assert clean_series(table, "A").values.tolist() == [1.0, 2.0, 3.0]
    assert records_to_table([]) == RawTable((), ())


def test_clean_interpolates_and_trims():
    s = clean_series(table_from_column([None, 10.0, None, 14.0, None]), "Barnet")
    assert s.start == Month(2012, 2)
    assert s.values.tolist() == [10.0, 12.0, 14.0]


def test_clean_identity_without_gaps():
    cells = [5.0, 7.0, 1.0, 0.0]
    s = clean_series(table_from_column(cells), "Barnet")
    assert s.start == Month(2012, 1)
    assert s.values.tolist() == cells


def test_clean_all_missing():
    with pytest.raises(InsufficientDataError):
        clean_series(table_from_column([None, None, None]), "Barnet")


def test_clean_unknown_borough():
    with pytest.raises(UnknownBoroughError):
        clean_series(table_from_column([1.0, 2.0]), "Camden")


def test_clean_rejects_non_consecutive_months():
    table = RawTable(("A",), ((Month(2012, 1), (1.0,)), (Month(2012, 1), (2.0,))))
    with pytest.raises(StructuralError):
        clean_series(table, "A")


def test_select_four_boroughs():
    header = "month," + ",".join(FOUR) + "\n"
    body = "".join(f"2012-{m:02d}," + ",".join(str(100 * (j + 1) + m) for j in range(4)) + "\n"
                   for m in range(1, 13))
    table = parse_wide_csv((header + body).encode())
    series = select_boroughs(table, list(FOUR))
    assert [s.name for s in series] == list(FOUR)
    assert all(len(s) == 12 for s in series)
    assert select_boroughs(table, []) == []


def test_select_reports_every_missing_label():
    table = table_from_column([1.0, 2.0])
    with pytest.raises(UnknownBoroughError) as info:
        select_boroughs(table, ["Camden", "Barnet", "Hackney"])
    assert info.value.missing == ["Camden", "Hackney"]
    assert "Camden" in str(info.value)


def test_series_validation():
    with pytest.raises(ValueError):
        MonthlySeries("x", Month(2012, 1), [1.0, -2.0])
    with pytest.raises(InsufficientDataError):
        MonthlySeries("x", Month(2012, 1), [])


cells = st.one_of(st.none(), st.floats(min_value=0, max_value=1e6, allow_nan=False))


@st.composite
def raw_tables(draw):
    ncol = draw(st.integers(0, 4))
    header = tuple(draw(st.lists(st.text("abcXYZ ", min_size=1, max_size=6)
                                 .map(str.strip).filter(bool),
                                 min_size=ncol, max_size=ncol, unique=True)))
    nrow = draw(st.integers(0, 8))
    start = Month(draw(st.integers(2000, 2030)), draw(st.integers(1, 12)))
    rows = tuple((start + i, tuple(draw(cells) for _ in header)) for i in range(nrow))
    return RawTable(header, rows)


@given(raw_tables())
def test_wide_round_trip(table):
    assert parse_wide_csv(serialize_wide_csv(table)) == table


@given(st.lists(cells, min_size=2, max_size=30))
def test_clean_properties(column):
    table = table_from_column(column)
    present = [i for i, c in enumerate(column) if c is not None]
    if len(present) < 2:
        with pytest.raises(InsufficientDataError):
            clean_series(table, "Barnet")
        return
    s = clean_series(table, "Barnet")
    assert np.all(np.isfinite(s.values))
    assert len(s) <= len(column)
    lo = present[0]
    for i, v in enumerate(s.values):
        k = lo + i
        if column[k] is not None:
            assert v == column[k]
            continue
        left = max(j for j in present if j < k)
        right = min(j for j in present if j > k)
        a, b = column[left], column[right]
        assert min(a, b) - 1e-9 * max(1.0, abs(a), abs(b)) <= v
        assert v <= max(a, b) + 1e-9 * max(1.0, abs(a), abs(b))
