"""
Counting module initialization.
"""

from .ngram_counter import (
    ModelCaps,
    NgramCounts,
    count_ngrams,
    count_ngrams_sharded,
    coverage,
    coverage_curve,
    dump_counts,
)
from .vocabulary import Vocabulary, select_vocabulary, TAG_IDS

__all__ = [
    'ModelCaps', 'NgramCounts', 'count_ngrams', 'count_ngrams_sharded',
    'coverage', 'coverage_curve', 'dump_counts',
    'Vocabulary', 'select_vocabulary', 'TAG_IDS',
]
