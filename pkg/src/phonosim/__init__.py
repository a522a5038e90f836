"""Phonetic word similarity and sound-based word embeddings.

Scores how alike two words sound from their phoneme sequences using
feature-set Jaccard similarity composed through a penalized
dynamic-programming alignment, and trains dense vectors whose dot
products reproduce that score.
"""

from phonosim.inventory import (
    Feature,
    FeatureSet,
    Inventory,
    InventoryError,
    Phoneme,
    jaccard,
    load_inventory,
)
from phonosim.lexicon import (
    Lexicon,
    LexiconError,
    parse_cmu,
    parse_plain,
    serialize_plain,
)
from phonosim.similarity import (
    Bigram,
    SimilarityConfig,
    alignment_table,
    bigram_similarity,
    similarity_scan,
    to_bigram_sequence,
    vowel_weighted_similarity,
    word_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "Feature",
    "FeatureSet",
    "Phoneme",
    "Inventory",
    "InventoryError",
    "jaccard",
    "load_inventory",
    "Lexicon",
    "LexiconError",
    "parse_cmu",
    "parse_plain",
    "serialize_plain",
    "Bigram",
    "SimilarityConfig",
    "to_bigram_sequence",
    "bigram_similarity",
    "vowel_weighted_similarity",
    "word_similarity",
    "alignment_table",
    "similarity_scan",
    "__version__",
]
