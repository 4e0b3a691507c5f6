import pytest
from hypothesis import given, strategies as st

from repbench.archive import (
    ArchiveError,
    ParseError,
    ResultsArchive,
    from_json,
    ingest_dict_literal,
    parse_dict_literal,
    read_archive,
    to_dict_literal,
    to_json,
    write_archive,
)


def test_parse_examples():
    archive = ingest_dict_literal("{3: {'0': {'000 00': 1024}}}")
    assert archive.entries == {3: {"0": {"000 00": 1024}}}
    assert archive.rounds == {3: 1}
    assert len(ingest_dict_literal("{}")) == 0
    assert len(ingest_dict_literal("  {\n}\n")) == 0


def test_parse_is_whitespace_insensitive():
    text = "{ 3 :\n  { '0' : { '000 00 00' : 5 ,\n '000 00 01': 1 } ,\n'1':{} } }"
    archive = ingest_dict_literal(text)
    assert archive.entries[3]["0"] == {"000 00 00": 5, "000 00 01": 1}
    assert archive.rounds[3] == 2


def test_layout_errors():
    with pytest.raises(ArchiveError, match="'000 0'"):
        ingest_dict_literal("{3: {'0': {'000 0': 1}}}")
    with pytest.raises(ArchiveError):
        ingest_dict_literal("{3: {'2': {'000 00': 1}}}")
    with pytest.raises(ArchiveError):
        ingest_dict_literal("{'x': {'0': {'000 00': 1}}}")
    with pytest.raises(ArchiveError):
        ingest_dict_literal("{3: {'0': {'000 00': 1, '000 00 00': 1}}}")
    with pytest.raises(ArchiveError):
        ingest_dict_literal("{3: {'0': {'000 00': {}}}}")


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("{3: {'0': {'000 00' 1}}}", 1, 21),
        ("{3:\n {'0': x}}", 2, 8),
        ("{3: {'0': {'000 00: 1}}}", 1, 12),
        ("{3: 1,\n 3: 2}", 2, 2),
        ("{3: 1} extra", 1, 8),
        ("{3: 1", 1, 6),
        ("", 1, 1),
        ('{"3": 1}', 1, 2),
    ],
)
def test_parse_errors_are_positioned(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_dict_literal(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_python_repr_compatibility():
    data = {3: {"0": {"000 00": 988, "001 00": 9}, "1": {"111 00": 974}}, 5: {"0": {}}}
    assert parse_dict_literal(str(data)) == data


counts = st.dictionaries(
    st.tuples(st.text("01", min_size=3, max_size=3), st.text("01", min_size=2, max_size=2),
              st.text("01", min_size=2, max_size=2)).map(" ".join),
    st.integers(0, 10**6),
    max_size=8,
)


@given(counts, counts)
def test_round_trips(c0, c1):
    archive = ResultsArchive()
    archive.add(3, 2, {"0": c0, "1": c1})
    lit = to_dict_literal(archive)
    again = ingest_dict_literal(lit)
    assert again.entries == archive.entries
    assert to_dict_literal(again) == lit
    js = to_json(archive)
    again = from_json(js)
    assert again.entries == archive.entries and again.rounds == archive.rounds
    assert to_json(again) == js


def test_json_validation():
    with pytest.raises(ParseError):
        from_json("{not json")
    with pytest.raises(ArchiveError):
        from_json('{"format": "other"}')
    with pytest.raises(ArchiveError):
        from_json('{"format": "repbench.results", "version": 99, "entries": []}')
    with pytest.raises(ArchiveError):
        from_json('{"format": "repbench.results", "version": 1, "entries": [{"n": 3}]}')


def test_file_round_trip(tmp_path):
    archive = ResultsArchive(config={"shots": 10})
    archive.add(3, 1, {"0": {"000 00": 10}})
    for fmt in ("json", "dict-literal"):
        path = tmp_path / f"a.{fmt}"
        write_archive(archive, path, fmt)
        assert read_archive(path).entries == archive.entries
        assert read_archive(path, fmt).entries == archive.entries
