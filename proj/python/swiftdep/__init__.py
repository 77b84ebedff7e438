"""Transition-based dependency parsing toolkit.

The heavy lifting lives in the compiled `_core` module; this package
re-exports its surface. Sentences travel as CoNLL-U text in both
directions, so the API composes directly with treebank files.
"""

from swiftdep._core import (
    ContractError,
    Model,
    OracleError,
    ParseError,
    evaluate,
    is_projective_tree,
    load,
    oracle,
    parse,
    stats,
    train,
)

__all__ = [
    "ContractError",
    "Model",
    "OracleError",
    "ParseError",
    "evaluate",
    "is_projective_tree",
    "load",
    "oracle",
    "parse",
    "stats",
    "train",
]
