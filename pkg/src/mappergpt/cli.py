"""Command-line entry point: ``mappergpt <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import evaluate, llm
from .lexmatch import lexical_match
from .ontology import OboParseError, load_obo
from .promptgen import DEFAULT_EXAMPLES, describe, load_examples
from .refine import RefineConfig, RefinementAborted, RefineSummary, refine_mappings
from .sssom import SssomError, load_sssom, write_sssom

logger = logging.getLogger("mappergpt")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BACKEND = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, output) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


def cmd_lexmatch(args) -> int:
    result = lexical_match(load_obo(args.source), load_obo(args.target))
    write_atomic(args.output, write_sssom(result))
    logger.info("wrote %d candidate mappings to %s", len(result), args.output)
    return EXIT_OK


def _backend(args):
    if args.backend == "http":
        return llm.HttpBackend()
    if args.backend == "cache-only":
        if args.cache is None:
            raise UsageError("--backend cache-only requires --cache")
        return llm.CacheOnlyBackend()
    defaults = {"by_pair": llm.BUILTIN_PAIR_RESPONSES}
    if args.mock_responses:
        return llm.MockBackend.from_dir(args.mock_responses, **defaults)
    return llm.MockBackend(**defaults)


def cmd_categorize(args) -> int:
    backend = _backend(args)
    examples = tuple(load_examples(args.examples)) if args.examples else DEFAULT_EXAMPLES
    config = RefineConfig(
        model_name=args.model,
        temperature=args.temperature,
        max_output_tokens=args.max_tokens,
        cache_dir=args.cache,
        parallel=args.parallel,
        lenient=args.lenient,
        examples=examples,
    )
    candidates = load_sssom(args.input)
    source, target = load_obo(args.source), load_obo(args.target)
    summary = RefineSummary()
    refined = refine_mappings(candidates, source, target, backend, config, summary)
    write_atomic(args.output, write_sssom(refined))
    logger.info("wrote %d reviewed mappings to %s (%s)", len(refined), args.output, summary.categories)
    return EXIT_OK


def cmd_eval(args) -> int:
    report = evaluate.compare(
        load_sssom(args.pred), load_sssom(args.gold), exact_only=args.exact_only, undirected=args.undirected
    )
    _emit(evaluate.format_report(report, args.format), args.output)
    return EXIT_OK


def cmd_threshold_scan(args) -> int:
    curve = evaluate.threshold_scan(load_sssom(args.scored), load_sssom(args.gold))
    write_atomic(args.output, evaluate.format_curve_csv(curve))
    logger.info("best threshold %.6f (F1 %.6f)", curve.best_threshold, curve.best_f1)
    return EXIT_OK


def cmd_make_testset(args) -> int:
    gold = evaluate.bridge_testset(load_sssom(args.left), load_sssom(args.right))
    write_atomic(args.output, write_sssom(gold))
    logger.info("wrote %d gold mappings to %s", len(gold), args.output)
    return EXIT_OK


def cmd_describe(args) -> int:
    ontology = load_obo(args.ontology)
    concept = ontology.get(args.id)
    if concept is None:
        print(f"error: {args.id} not found in {args.ontology}", file=sys.stderr)
        return EXIT_DATA
    print(describe(concept, ontology))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mappergpt", description="Lexical matching and model-assisted review of ontology mappings.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lexmatch", help="generate lexical candidate mappings")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_lexmatch)

    p = sub.add_parser("categorize-mappings", help="review candidate mappings with a language model")
    p.add_argument("--model", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--backend", choices=("http", "mock", "cache-only"), default="http")
    p.add_argument("--cache", type=Path)
    p.add_argument("--mock-responses", type=Path, help="fixture directory for --backend mock")
    p.add_argument("--temperature", type=float, default=llm.DEFAULT_TEMPERATURE)
    p.add_argument("--max-tokens", type=int, default=llm.DEFAULT_MAX_OUTPUT_TOKENS)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--lenient", action="store_true", help="flag and keep records whose review failed")
    p.add_argument("--examples", help="file of in-context examples")
    p.set_defaults(func=cmd_categorize)

    p = sub.add_parser("eval", help="score predicted mappings against a gold set")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--exact-only", action="store_true")
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--format", choices=("text", "tsv"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("threshold-scan", help="F1 at every score threshold")
    p.add_argument("--scored", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_threshold_scan)

    p = sub.add_parser("make-testset", help="bridge two mapping sets into a gold set")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_make_testset)

    p = sub.add_parser("describe", help="print the prompt description of one concept")
    p.add_argument("--ontology", required=True)
    p.add_argument("--id", required=True)
    p.set_defaults(func=cmd_describe)
    return parser


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "parallel", 1) < 1:
            raise UsageError("--parallel must be at least 1")
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.INFO
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(level)

    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except (RefinementAborted, llm.LLMError) as exc:
        print(f"error: backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (OboParseError, SssomError, evaluate.EvaluationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
