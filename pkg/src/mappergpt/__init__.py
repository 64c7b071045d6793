"""Lexical candidate generation, model-assisted review and evaluation of ontology mappings."""

from .evaluate import EvalReport, ThresholdCurve, bridge_testset, compare, f1_score, threshold_scan
from .lexmatch import lexical_match, normalize_label
from .llm import CompletionRequest, HttpBackend, MockBackend, cached_complete, complete
from .ontology import Concept, Ontology, get_concept, parse_obo
from .promptgen import PromptExample, describe, generate_prompt
from .refine import RefineConfig, RefinementResult, parse_response, refine_mappings
from .sssom import MappingRecord, MappingSet, canonical_key, parse_sssom, write_sssom
from .vocab import Category, Confidence, category_to_predicate

__version__ = "0.1.0"
