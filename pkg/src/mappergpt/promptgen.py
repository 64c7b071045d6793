"""Concept descriptions and the mapping-review prompt."""

from __future__ import annotations

from dataclasses import dataclass

from .ontology import Concept, Ontology
from .vocab import Category, Confidence

QUESTION = "What is the relationship between the two specified concepts?"

ANSWER_FORMAT = (
    "Give your answer in the form:\n"
    "\n"
    "category: <one of: EXACT_MATCH, BROADER_THAN, NARROWER_THAN, RELATED_TO, DIFFERENT>\n"
    "confidence: <one of: LOW, HIGH, MEDIUM>\n"
    "similarities: <semicolon-separated list of similarities>\n"
    "differences: <semicolon-separated list of differences>"
)

INSTRUCTION = "Make use of all provided information, including the concept names, definitions, and relationships."

CONCEPT_A = "[Concept A]"
CONCEPT_B = "[Concept B]"


@dataclass(frozen=True)
class PromptExample:
    """One in-context example: two concept blocks and the expected answer."""

    concept_a_block: str
    concept_b_block: str
    expected_category: Category
    expected_confidence: Confidence
    similarities: str
    differences: str

    def __post_init__(self):
        if not self.concept_a_block.strip() or not self.concept_b_block.strip():
            raise ValueError("example concept blocks must be non-empty")

    def render(self) -> str:
        return "\n".join(
            [
                CONCEPT_A,
                self.concept_a_block,
                CONCEPT_B,
                self.concept_b_block,
                f"category: {self.expected_category.value}",
                f"confidence: {self.expected_confidence.value}",
                f"similarities: {self.similarities}",
                f"differences: {self.differences}",
            ]
        )


WING_EXAMPLE = PromptExample(
    concept_a_block=(
        "id: F00:125\n"
        "name: wing\n"
        "def: part of a bird that is flapped to enable flight\n"
        "is_a: Limb\n"
        "relationship: part_of Bird\n"
        "relationship: has_part Feather"
    ),
    concept_b_block="id: BAR:458\nname: wing\nrelationship: part_of Aeroplane",
    expected_category=Category.DIFFERENT,
    expected_confidence=Confidence.HIGH,
    similarities="function",
    differences="A is an anatomical part; B is a part of a vehicle",
)

DEFAULT_EXAMPLES = (WING_EXAMPLE,)


def _predicate_text(predicate: str) -> str:
    return predicate.replace("_", " ")


def describe(concept: Concept, ontology: Ontology) -> str:
    """Render ``concept`` as ``key: value`` lines for the prompt.

    Lines with no content are left out. Parent and relationship targets are
    shown by name when ``ontology`` knows them and verbatim otherwise.
    """
    lines = [f"id: {concept.id}", f"name: {concept.name}"]
    if concept.definition:
        lines.append(f"def: {concept.definition}")
    if concept.synonyms:
        lines.append("synonyms: " + " ; ".join(s.text for s in concept.synonyms))
    if concept.parents:
        lines.append("is_a: " + " ; ".join(ontology.label_of(p) for p in concept.parents))
    for rel in concept.relationships:
        lines.append(f"relationship: {_predicate_text(rel.predicate)} {ontology.label_of(rel.target)}")
    return "\n".join(lines)


def render_examples(examples) -> str:
    return "\n\n".join(ex.render() for ex in examples)


def build_prompt(description_a: str, description_b: str, examples=DEFAULT_EXAMPLES) -> str:
    """Fill the review template with two pre-rendered concept descriptions."""
    return (
        f"{QUESTION}\n"
        "\n"
        f"{ANSWER_FORMAT}\n"
        "\n"
        f"{INSTRUCTION}\n"
        "\n"
        "Examples:\n"
        "\n"
        f"{render_examples(examples)}\n"
        "\n"
        "Here are the two concepts:\n"
        "\n"
        f"{CONCEPT_A}\n"
        f"{description_a}\n"
        "\n"
        f"{CONCEPT_B}\n"
        f"{description_b}\n"
    )


def generate_prompt(a: Concept, b: Concept, o1: Ontology, o2: Ontology, examples=DEFAULT_EXAMPLES) -> str:
    return build_prompt(describe(a, o1), describe(b, o2), examples)


def parse_examples(text: str) -> list[PromptExample]:
    """Read in-context examples from a plain-text file.

    Each example starts with a ``[Concept A]`` line, followed by that
    concept's description lines, a ``[Concept B]`` line with its lines, and
    then the four answer lines (``category:``, ``confidence:``,
    ``similarities:``, ``differences:``). Blank lines are ignored.
    """
    examples: list[PromptExample] = []
    current: dict | None = None
    section = None

    def flush():
        if current is None:
            return
        missing = [k for k in ("category", "confidence") if k not in current["answer"]]
        if missing:
            raise ValueError(f"example {len(examples) + 1} lacks {', '.join(missing)}")
        ans = current["answer"]
        examples.append(
            PromptExample(
                concept_a_block="\n".join(current["a"]),
                concept_b_block="\n".join(current["b"]),
                expected_category=Category(ans["category"].upper()),
                expected_confidence=Confidence(ans["confidence"].upper()),
                similarities=ans.get("similarities", ""),
                differences=ans.get("differences", ""),
            )
        )

    for raw in text.splitlines():
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.strip() == CONCEPT_A:
            flush()
            current = {"a": [], "b": [], "answer": {}}
            section = "a"
            continue
        if current is None:
            raise ValueError(f"text before the first {CONCEPT_A} line: {line!r}")
        if line.strip() == CONCEPT_B:
            section = "b"
            continue
        key, sep, value = line.partition(":")
        if section == "b" and sep and key.strip().lower() in ("category", "confidence", "similarities", "differences"):
            current["answer"][key.strip().lower()] = value.strip()
            continue
        if current["answer"]:
            raise ValueError(f"unexpected line after answer lines: {line!r}")
        current[section].append(line)
    flush()
    return examples


def load_examples(path) -> list[PromptExample]:
    with open(path, encoding="utf-8") as fh:
        return parse_examples(fh.read())
