"""
Frequent Word Optimisation lists: global top-K unigrams for context-free
prediction and per-first-character top-K unigrams for one-letter completion.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from ..counting.ngram_counter import NgramCounts
from ..counting.vocabulary import Vocabulary

logger = logging.getLogger(__name__)


@dataclass
class FwoTables:
    k: int
    prediction: List[int] = field(default_factory=list)
    completion: Dict[str, List[int]] = field(default_factory=dict)


def build_fwo(counts: NgramCounts, vocab: Vocabulary, k: int) -> FwoTables:
    """
    Rank non-tag vocabulary words by count and keep the top K globally and per initial.
    
    Args:
        counts: Corpus counts
        vocab: Model vocabulary
        k: List length
        
    Returns:
        FwoTables; completion keys ordered by code point
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(
        (word_id for word_id in range(len(vocab)) if not vocab.is_tag(word_id) and vocab.word(word_id)),
        key=lambda word_id: (-counts.uni.get(vocab.word(word_id), 0), word_id),
    )
    completion: Dict[str, List[int]] = {}
    for word_id in ranked:
        bucket = completion.setdefault(vocab.word(word_id)[0], [])
        if len(bucket) < k:
            bucket.append(word_id)
    tables = FwoTables(
        k=k,
        prediction=ranked[:k],
        completion={ch: completion[ch] for ch in sorted(completion)},
    )
    logger.info(f"Built FWO lists: {len(tables.prediction)} predictions, "
                f"{len(tables.completion)} initials")
    return tables
