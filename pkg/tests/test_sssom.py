import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mappergpt.sssom import (
    COLUMNS,
    MappingRecord,
    MappingSet,
    SssomError,
    canonical_key,
    parse_sssom,
    write_sssom,
)
from strategies import mapping_sets, records

HEADER = "subject_id\tpredicate_id\tobject_id\tmapping_justification"


def _rec(s, o, p="skos:exactMatch", **kw):
    return MappingRecord(subject_id=s, predicate_id=p, object_id=o, mapping_justification="semapv:LexicalMatching", **kw)


def test_two_rows():
    text = f"{HEADER}\nA:1\tskos:exactMatch\tB:1\tsemapv:LexicalMatching\nA:2\tskos:closeMatch\tB:2\tsemapv:LexicalMatching\n"
    ms = parse_sssom(text)
    assert len(ms) == 2
    assert ms.records[1].predicate_id == "skos:closeMatch"
    assert ms.records[0].confidence is None


def test_colon_row_labels_and_verbatim_write():
    text = (
        "subject_id\tsubject_label\tpredicate_id\tobject_id\tobject_label\tmapping_justification\n"
        "GAZ:00000446\tColon\tskos:exactMatch\tUBERON:0001155\tcolon\tsemapv:LexicalMatching\n"
    )
    rec = parse_sssom(text).records[0]
    assert (rec.subject_label, rec.object_label) == ("Colon", "colon")
    row = write_sssom(MappingSet((rec,))).splitlines()[1]
    assert row == "GAZ:00000446\tColon\tskos:exactMatch\tUBERON:0001155\tcolon\tsemapv:LexicalMatching\t\t\t"


def test_empty_set_with_metadata():
    out = write_sssom(MappingSet((), {"mapping_set_id": "x"}))
    assert out == "#mapping_set_id: x\n" + "\t".join(COLUMNS) + "\n"


def test_column_order_is_canonical_regardless_of_input():
    text = "object_id\tmapping_justification\tsubject_id\tpredicate_id\tconfidence\nB:1\tj:x\tA:1\tskos:exactMatch\t0.5\n"
    out = write_sssom(parse_sssom(text))
    assert out.splitlines()[0] == "\t".join(COLUMNS)
    assert out.splitlines()[1].split("\t")[:7] == ["A:1", "", "skos:exactMatch", "B:1", "", "j:x", "0.5"]


@pytest.mark.parametrize(
    "value,text",
    [(0.9, "0.9"), (1.0, "1"), (0.0, "0"), (0.12346, "0.1235"), (0.12344, "0.1234"), (0.30000000000000004, "0.3"), (0.25, "0.25")],
)
def test_confidence_formatting(value, text):
    row = write_sssom(MappingSet((_rec("A:1", "B:1", confidence=value),))).splitlines()[1]
    assert row.split("\t")[6] == text


def test_missing_required_column():
    with pytest.raises(SssomError, match="mapping_justification"):
        parse_sssom("subject_id\tpredicate_id\tobject_id\nA:1\tskos:exactMatch\tB:1\n")


def test_non_numeric_confidence_names_row():
    text = f"#k: v\n{HEADER}\tconfidence\nA:1\tskos:exactMatch\tB:1\tj:x\thigh\n"
    with pytest.raises(SssomError, match="row 3"):
        parse_sssom(text)


def test_duplicate_triple_names_both_rows():
    row = "A:1\tskos:exactMatch\tB:1\tj:x"
    with pytest.raises(SssomError, match="rows 2 and 4"):
        parse_sssom(f"{HEADER}\n{row}\nA:2\tskos:exactMatch\tB:1\tj:x\n{row}\n")


def test_extra_columns_ignored_with_warning(caplog):
    ms = parse_sssom(f"{HEADER}\tauthor_id\nA:1\tskos:exactMatch\tB:1\tj:x\torcid:1\n")
    assert len(ms) == 1
    assert "author_id" in caplog.text


def test_record_invariants():
    with pytest.raises(SssomError):
        _rec("A:1", "A:1", p="skos:closeMatch")
    with pytest.raises(SssomError):
        _rec("A:1", "B:1", confidence=1.5)
    with pytest.raises(SssomError):
        _rec("A:1", "B:1", p="skos:sameAs")
    with pytest.raises(SssomError):
        _rec("A:1", "B:1", comment="a\tb")
    with pytest.raises(SssomError):
        MappingSet((_rec("A:1", "B:1"), _rec("A:1", "B:1")))
    assert _rec("A:1", "A:1").predicate_id == "skos:exactMatch"


def test_canonical_key_examples():
    assert canonical_key(_rec("FBbt:1", "ZFA:2"), source_first=True) == ("FBbt:1", "ZFA:2")
    assert canonical_key(_rec("ZFA:2", "FBbt:1"), source_first=False) == ("FBbt:1", "ZFA:2")


@given(records())
def test_canonical_key_swap_invariant(rec):
    swapped = rec.evolve(subject_id=rec.object_id, object_id=rec.subject_id)
    assert canonical_key(rec, source_first=False) == canonical_key(swapped, source_first=False)


@settings(max_examples=100)
@given(mapping_sets())
def test_round_trip_structural(ms):
    assert parse_sssom(write_sssom(ms)) == ms


@settings(max_examples=100)
@given(mapping_sets())
def test_round_trip_bytes(ms):
    once = write_sssom(ms)
    assert write_sssom(parse_sssom(once)) == once
