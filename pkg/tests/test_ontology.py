import pytest
from hypothesis import given
from hypothesis import strategies as st

from mappergpt.ontology import Concept, OboParseError, Synonym, get_concept, parse_obo
from oracles import count_obo_fields

WORKED_STANZA = """[Term]
id: FBbt:00001906
name: embryonic/larval Malpighian tubule Type I cell
def: "Type I cell of the embryonic/larval Malpighian tubules." []
synonym: "PC" RELATED
is_a: FBbt:00005805 ! embryonic/larval specialized Malpighian tubule cell
is_a: FBbt:00058456 ! Malpighian tubule Type I cell
"""


def test_worked_example_stanza():
    onto = parse_obo(WORKED_STANZA)
    c = onto.get("FBbt:00001906")
    assert c.name == "embryonic/larval Malpighian tubule Type I cell"
    assert c.definition == "Type I cell of the embryonic/larval Malpighian tubules."
    assert c.synonyms == (Synonym("PC", "RELATED"),)
    assert c.parents == ("FBbt:00005805", "FBbt:00058456")


def test_empty_input():
    assert len(parse_obo("")) == 0


def test_three_term_fixture_matches_line_counts(data_dir):
    text = (data_dir / "three_terms.obo").read_text()
    expected = count_obo_fields(text)
    onto = parse_obo(text)
    assert sorted(onto.concepts) == sorted(expected)
    for cid, counts in expected.items():
        c = onto.concepts[cid]
        assert len(c.synonyms) == counts["synonym"]
        assert len(c.parents) == counts["is_a"]
        assert len(c.relationships) == counts["relationship"]
        assert (c.definition is not None) == bool(counts["def"])
    assert onto.source_name == "toy"


def test_tag_details(data_dir):
    onto = parse_obo((data_dir / "three_terms.obo").read_text())
    limb = onto.get("TOY:0000001")
    assert [s.scope for s in limb.synonyms] == ["EXACT", "BROAD", "UNSCOPED"]
    wing = onto.get("TOY:0000003")
    assert wing.parents == ("TOY:0000002", "EXT:0001")
    assert [(r.predicate, r.target) for r in wing.relationships] == [
        ("part_of", "TOY:0000099"),
        ("has_part", "TOY:0000010"),
    ]
    # Typedef stanza is skipped even though it has id and name
    assert "part_of" not in onto


def test_crlf_and_escaped_quotes():
    text = '[Term]\r\nid: X:1\r\nname: thing\r\ndef: "a \\"quoted\\" thing" [ref]\r\n'
    c = parse_obo(text).get("X:1")
    assert c.definition == 'a "quoted" thing'


def test_duplicate_id_is_an_error():
    text = "[Term]\nid: X:1\nname: a\n\n[Term]\nid: X:1\nname: b\n"
    with pytest.raises(OboParseError, match="X:1"):
        parse_obo(text)


def test_missing_id_reports_line():
    text = "[Term]\nid: X:1\nname: a\n\n[Term]\nname: b\n"
    with pytest.raises(OboParseError, match="line 5"):
        parse_obo(text)


def test_missing_name_skips_with_warning():
    onto = parse_obo("[Term]\nid: X:1\n\n[Term]\nid: X:2\nname: two\n")
    assert list(onto.concepts) == ["X:2"]
    assert len(onto.warnings) == 1 and "X:1" in onto.warnings[0]


def test_duplicate_synonyms_collapse():
    onto = parse_obo('[Term]\nid: X:1\nname: a\nsynonym: "b" EXACT []\nsynonym: "b" EXACT []\nsynonym: "b" BROAD []\n')
    assert len(onto.get("X:1").synonyms) == 2


def test_get_concept(zfa):
    assert get_concept(zfa, "ZFA:0000320").name == "caudal commissure"
    assert get_concept(zfa, "NOPE:000") is None


@pytest.mark.parametrize("bad", ["nocolon", "a:b:c", ":x", "x:", "a b:c"])
def test_concept_id_must_be_curie(bad):
    with pytest.raises(ValueError):
        Concept(id=bad, name="n")


_local = st.text(alphabet="abcdefghij0123456789", min_size=1, max_size=6)
_name = st.text(alphabet="abcdefgh XYZ-/", min_size=1, max_size=20).map(str.strip).filter(bool)


@st.composite
def obo_documents(draw):
    ids = draw(st.lists(_local, min_size=0, max_size=8, unique=True))
    stanzas = []
    named = 0
    for local in ids:
        lines = ["[Term]", f"id: T:{local}"]
        if draw(st.booleans()) or not ids:
            lines.append(f"name: {draw(_name)}")
            named += 1
        for syn in draw(st.lists(_name, max_size=3, unique=True)):
            lines.append(f'synonym: "{syn}" {draw(st.sampled_from(["EXACT", "RELATED", ""]))}')
        for parent in draw(st.lists(_local, max_size=2)):
            lines.append(f"is_a: T:{parent} ! parent")
        stanzas.append("\n".join(lines))
    return "\n\n".join(stanzas) + "\n", named


@given(obo_documents())
def test_parse_properties(doc):
    text, named = doc
    first, second = parse_obo(text), parse_obo(text)
    assert first == second
    assert len(first) == named
    for c in first:
        assert get_concept(first, c.id) is c
