"""Generate, prune, answer, and review corpus-derived queries.

The pipeline turns ingested text corpora into journalist-style,
comparative, analogy, and correlation queries; prunes nonsense by type
rules and answer confidence; and measures coverage and precision over
human review labels.
"""

from .answer import (
    AnswerCandidate,
    CooccurrenceModel,
    SentenceIndex,
    answer_query,
    build_cooccurrence_model,
    build_index,
    correlate,
    nearest,
    reverse_check,
    similarity,
)
from .errors import DataError, UsageError
from .ingest import Corpus, Document, Sentence, Token, analyze_corpus, corpus_tense, read_corpus_file
from .lexicons import Lexicons, load_lexicons
from .metrics import (
    CoverageReport,
    Label,
    PrecisionEstimate,
    coverage,
    gap_report,
    precision_with_interval,
    sample_for_review,
    utility_breakdown,
    wilson_interval,
)
from .objects import CanonicalObject, ObjectMention, extract_objects, load_gazetteer
from .pairing import PairScore, cross_queries, group_corpuses, usefulness_score
from .pipeline import Config, load_config
from .pruning import (
    NonsenseHistory,
    PruneRuleTable,
    VerbFrameTable,
    apply_rule_pruning,
    load_prune_rules,
    load_verb_frames,
    prune_by_confidence,
)
from .querygen import (
    KINDS,
    Query,
    cap_queries,
    gen_analogy_extensions,
    gen_analogy_queries,
    gen_comparative_queries,
    gen_correlation_queries,
    gen_object_queries,
    gen_pair_queries,
    generate,
    load_comparatives,
    load_verbs,
)
from .workspace import Workspace

__version__ = "0.1.0"

__all__ = [
    "AnswerCandidate",
    "CanonicalObject",
    "Config",
    "CooccurrenceModel",
    "Corpus",
    "CoverageReport",
    "DataError",
    "Document",
    "KINDS",
    "Label",
    "Lexicons",
    "NonsenseHistory",
    "ObjectMention",
    "PairScore",
    "PrecisionEstimate",
    "PruneRuleTable",
    "Query",
    "Sentence",
    "SentenceIndex",
    "Token",
    "UsageError",
    "VerbFrameTable",
    "Workspace",
    "analyze_corpus",
    "answer_query",
    "apply_rule_pruning",
    "build_cooccurrence_model",
    "build_index",
    "cap_queries",
    "correlate",
    "corpus_tense",
    "coverage",
    "cross_queries",
    "extract_objects",
    "gap_report",
    "gen_analogy_extensions",
    "gen_analogy_queries",
    "gen_comparative_queries",
    "gen_correlation_queries",
    "gen_object_queries",
    "gen_pair_queries",
    "generate",
    "group_corpuses",
    "load_comparatives",
    "load_config",
    "load_gazetteer",
    "load_lexicons",
    "load_prune_rules",
    "load_verb_frames",
    "load_verbs",
    "nearest",
    "precision_with_interval",
    "prune_by_confidence",
    "read_corpus_file",
    "reverse_check",
    "sample_for_review",
    "similarity",
    "usefulness_score",
    "utility_breakdown",
    "wilson_interval",
]
