import random

from hypothesis import given
from hypothesis import strategies as st

from mappergpt.lexmatch import lexical_match, normalize_label
from mappergpt.ontology import Concept, Ontology, Synonym
from oracles import brute_force_lexmatch, normalize_by_hand


def _onto(prefix, entries):
    concepts = {}
    for i, (name, syns) in enumerate(entries):
        cid = f"{prefix}:{i:04d}"
        concepts[cid] = Concept(cid, name, synonyms=tuple(Synonym(s) for s in dict.fromkeys(syns)))
    return Ontology(concepts, prefix.lower())


def test_normalize_examples():
    assert normalize_label("Colon") == "colon"
    assert normalize_label("") == ""
    assert normalize_label("Wilms tumor, Type-I ") == "wilms tumor type i"
    assert normalize_label("--!!--") == ""
    assert normalize_label("ÉCOLE  Straße") == "école strasse"


@given(st.text())
def test_normalize_idempotent(s):
    n = normalize_label(s)
    assert normalize_label(n) == n
    assert "  " not in n and n == n.strip()


def test_colon_false_positive():
    gaz = Ontology({"GAZ:00000446": Concept("GAZ:00000446", "Colon")})
    uberon = Ontology({"UBERON:0001155": Concept("UBERON:0001155", "colon")})
    out = lexical_match(gaz, uberon)
    assert [(r.subject_id, r.predicate_id, r.object_id) for r in out] == [
        ("GAZ:00000446", "skos:exactMatch", "UBERON:0001155")
    ]
    assert out.records[0].mapping_justification == "semapv:LexicalMatching"
    assert "'Colon' ~ 'colon'" in out.records[0].comment


def test_worked_example_pair_found(fly, zfa):
    pairs = {r.pair for r in lexical_match(fly, zfa)}
    assert ("FBbt:00001906", "ZFA:0000320") in pairs


def test_self_match_contains_every_concept():
    o = _onto("X", [(f"term {i}", []) for i in range(20)])
    pairs = {r.pair for r in lexical_match(o, o)}
    assert {(c, c) for c in o.concepts} <= pairs


def test_punctuation_only_synonyms_never_match():
    a = _onto("A", [("alpha", ["..."])])
    b = _onto("B", [("beta", ["?!"])])
    assert len(lexical_match(a, b)) == 0


def test_smallest_shared_string_recorded():
    a = _onto("A", [("zeta", ["alpha"])])
    b = _onto("B", [("Zeta", ["Alpha"])])
    rec = lexical_match(a, b).records[0]
    assert rec.comment == "lexical match: 'alpha' ~ 'Alpha'"


WORDS = ["colon", "Colon", "wing", "wing-", "limb", "PC", "fore limb", "Fore-Limb", "tail", "cell", "Cell.", "...", ""]


def _random_pair(rng, n_a, n_b):
    def entries(n):
        return [
            (rng.choice(WORDS[:-2]) + f" {rng.randint(0, 30)}" * rng.randint(0, 1), rng.sample(WORDS, rng.randint(0, 3)))
            for _ in range(n)
        ]

    return _onto("A", entries(n_a)), _onto("B", entries(n_b))


def _labels(o):
    return {c.id: c.labels for c in o}


def test_matches_brute_force_oracle():
    rng = random.Random(1234)
    for _ in range(30):
        a, b = _random_pair(rng, rng.randint(0, 100), rng.randint(0, 100))
        out = lexical_match(a, b)
        assert {r.pair for r in out} == brute_force_lexmatch(_labels(a), _labels(b))
        assert [r.pair for r in out] == sorted(r.pair for r in out)
        assert all(r.predicate_id == "skos:exactMatch" for r in out)


def test_symmetry():
    rng = random.Random(99)
    for _ in range(20):
        a, b = _random_pair(rng, 40, 40)
        forward = {r.pair for r in lexical_match(a, b)}
        backward = {(o, s) for s, o in (r.pair for r in lexical_match(b, a))}
        assert forward == backward


def test_hand_normalizer_agrees_on_ascii():
    for w in WORDS + ["Wilms tumor, Type-I "]:
        assert normalize_label(w) == normalize_by_hand(w)
