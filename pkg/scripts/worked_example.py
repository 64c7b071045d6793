"""Run the FBbt/ZFA "PC" false positive through describe, prompt, mock answer and review.

    python scripts/worked_example.py [--show-prompt]
"""

import argparse
from pathlib import Path

from mappergpt.llm import BUILTIN_PAIR_RESPONSES, CompletionRequest, MockBackend
from mappergpt.ontology import load_obo
from mappergpt.promptgen import generate_prompt
from mappergpt.refine import parse_response, refine_mappings
from mappergpt.sssom import load_sssom, write_sssom

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--show-prompt", action="store_true")
    args = parser.parse_args()

    fly, zfa = load_obo(DATA / "fbbt.obo"), load_obo(DATA / "zfa.obo")
    a, b = fly.get("FBbt:00001906"), zfa.get("ZFA:0000320")
    prompt = generate_prompt(a, b, fly, zfa)
    if args.show_prompt:
        print(prompt)
        print("-" * 72)

    backend = MockBackend(by_pair=BUILTIN_PAIR_RESPONSES)
    reply = backend.complete(CompletionRequest("gpt-3.5-turbo", prompt))
    result = parse_response(reply)
    print(f"prompt length: {len(prompt)} characters")
    print(f"category:      {result.category.value}")
    print(f"confidence:    {result.confidence.value}")
    print(f"similarities:  {result.similarities}")
    print(f"differences:   {result.differences}")
    print()
    refined = refine_mappings(load_sssom(DATA / "cand.sssom.tsv"), fly, zfa, backend)
    print(write_sssom(refined), end="")


if __name__ == "__main__":
    main()
