"""Linting, linking and network analysis for AIDA sentences.

AIDA sentences are English sentences that are atomic, independent,
declarative and absolute. This package checks sentences against those
constraints, ingests them into a deduplicated claim corpus, links them to
Linked-Data entities, analyses the component structure of the resulting
network and exports claims as nanopublications.
"""

__version__ = "0.1.0"

from aida.core import Claim, Corpus, ingest_corpus, load_corpus, normalize_text, claim_id  # noqa: E402
from aida.validate import validate, load_lexicon  # noqa: E402

__all__ = [
    "__version__",
    "Claim",
    "Corpus",
    "claim_id",
    "ingest_corpus",
    "load_corpus",
    "load_lexicon",
    "normalize_text",
    "validate",
]
