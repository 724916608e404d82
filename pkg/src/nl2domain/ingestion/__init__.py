"""Text ingestion: CoNLL-U reading, the built-in parser, and normalization."""

from .conllu import ConlluError, parse_conllu, serialize_conllu
from .grammar import Lexicon, ParseError, builtin_parse, propn_mentions
from .graphs import GraphError, SentenceGraph, Token, renumber, validate_tree
from .transform import (
    CorefIssue,
    classify_state_kind,
    resolve_coreferences,
    simplify,
    split_text,
)

__all__ = [
    "ConlluError", "CorefIssue", "GraphError", "Lexicon", "ParseError",
    "SentenceGraph", "Token", "builtin_parse", "classify_state_kind",
    "parse_conllu", "propn_mentions", "renumber", "resolve_coreferences",
    "serialize_conllu", "simplify", "split_text", "validate_tree",
]
