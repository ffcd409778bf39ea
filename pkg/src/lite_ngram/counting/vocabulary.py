"""
Frequency-ranked vocabulary with fixed tag IDs.
"""

import heapq
import logging
from typing import Dict, Iterator, Optional, Sequence, Tuple

from ..preprocessing.tokens import TAG_SURFACES, TagToken, is_tag
from .ngram_counter import ModelCaps, NgramCounts

logger = logging.getLogger(__name__)

# <s>, <e>, <unk>, <bad> occupy IDs 0..3
TAG_IDS: Dict[str, int] = {surface: idx for idx, surface in enumerate(TAG_SURFACES)}
NUM_TAGS = len(TAG_SURFACES)
SENTENCE_START_ID = TAG_IDS[TagToken.SENTENCE_START.value]
SENTENCE_END_ID = TAG_IDS[TagToken.SENTENCE_END.value]
UNKNOWN_ID = TAG_IDS[TagToken.UNKNOWN.value]


class Vocabulary:
    """Bidirectional word <-> ID mapping in rank order."""
    
    def __init__(self, words: Sequence[str], counts: Optional[Sequence[int]] = None):
        """
        Initialize the vocabulary.
        
        Args:
            words: Words in ID order; the four tags must come first
            counts: Unigram count per ID (zeros if unknown)
            
        Raises:
            ValueError: If tags are misplaced or words repeat
        """
        if tuple(words[:NUM_TAGS]) != TAG_SURFACES:
            raise ValueError(f"Vocabulary must start with the tags {TAG_SURFACES}")
        self.words: Tuple[str, ...] = tuple(words)
        self.counts: Tuple[int, ...] = tuple(counts) if counts is not None else (0,) * len(words)
        if len(self.counts) != len(self.words):
            raise ValueError("counts must align with words")
        self._ids: Dict[str, int] = {}
        for idx, word in enumerate(self.words):
            if word in self._ids:
                raise ValueError(f"Duplicate vocabulary word {word!r}")
            self._ids[word] = idx

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self.words == other.words

    def __repr__(self) -> str:
        return f"Vocabulary[size={len(self)}]"

    def get(self, word: str) -> Optional[int]:
        """Return the ID of a word, or None if absent."""
        return self._ids.get(word)

    def id_of(self, word: str) -> int:
        """Return the ID of a word, mapping unknown words to <unk>."""
        return self._ids.get(word, UNKNOWN_ID)

    def word(self, word_id: int) -> str:
        return self.words[word_id]

    def count(self, word_id: int) -> int:
        return self.counts[word_id]

    @staticmethod
    def is_tag(word_id: int) -> bool:
        return 0 <= word_id < NUM_TAGS


def select_vocabulary(counts: NgramCounts, caps: ModelCaps) -> Vocabulary:
    """
    Keep the four tags plus the (n_uni - 4) most frequent words.
    
    Args:
        counts: Corpus counts
        caps: Model caps
        
    Returns:
        Vocabulary ranked by count descending, ties broken by word ascending
    """
    candidates = ((count, word) for word, count in counts.uni.items() if not is_tag(word))
    ranked = heapq.nsmallest(
        caps.n_uni - NUM_TAGS, candidates, key=lambda item: (-item[0], item[1])
    )
    words = list(TAG_SURFACES) + [word for _, word in ranked]
    word_counts = [counts.uni.get(tag, 0) for tag in TAG_SURFACES] + [c for c, _ in ranked]
    logger.info(f"Selected vocabulary of {len(words)} words (cap {caps.n_uni})")
    return Vocabulary(words, word_counts)
