"""
Unigram, bigram and trigram counting over preprocessed sentences.
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, List, Sequence, TextIO, Tuple, TYPE_CHECKING

from ..config.model_config import get_model_caps_config
from ..preprocessing.tokens import Sentence, TagToken, is_tag

if TYPE_CHECKING:
    from .vocabulary import Vocabulary

logger = logging.getLogger(__name__)

Bigram = Tuple[str, str]
Trigram = Tuple[str, str, str]

ORDER = 3


@dataclass(frozen=True)
class ModelCaps:
    """Upper bounds on the number of stored n-grams per order."""
    
    n_uni: int = 100_000
    n_bi: int = 200_000
    n_tri: int = 250_000
    order: int = ORDER

    def __post_init__(self) -> None:
        if self.n_uni < 5:
            raise ValueError("n_uni must be at least 5 (four tags plus one word)")
        if self.n_bi < 0 or self.n_tri < 0:
            raise ValueError("n_bi and n_tri must be non-negative")
        if self.order != ORDER:
            raise ValueError(f"Only order {ORDER} models are supported")

    @classmethod
    def from_config(cls) -> "ModelCaps":
        """Build caps from the environment-driven defaults."""
        config = get_model_caps_config()
        return cls(n_uni=config['n_uni'], n_bi=config['n_bi'], n_tri=config['n_tri'])


@dataclass
class NgramCounts:
    """Raw occurrence counts for every within-sentence window of length 1-3."""
    
    uni: Counter = field(default_factory=Counter)
    bi: Counter = field(default_factory=Counter)
    tri: Counter = field(default_factory=Counter)
    total_tokens: int = 0

    def add_sentence(self, sentence: Sentence) -> None:
        """Count all windows of one sentence; windows never cross sentences."""
        tokens = sentence.tokens
        self.uni.update(tokens)
        self.bi.update(zip(tokens, tokens[1:]))
        self.tri.update(zip(tokens, tokens[1:], tokens[2:]))
        self.total_tokens += len(tokens)

    def merge(self, other: "NgramCounts") -> "NgramCounts":
        """
        Combine two count sets; merging is associative and commutative.
        
        Args:
            other: Counts from another shard
            
        Returns:
            New NgramCounts holding the sums
        """
        return NgramCounts(
            uni=self.uni + other.uni,
            bi=self.bi + other.bi,
            tri=self.tri + other.tri,
            total_tokens=self.total_tokens + other.total_tokens,
        )

    @property
    def total_non_start(self) -> int:
        """Token count excluding <s>; the unigram relative-frequency denominator."""
        return self.total_tokens - self.uni.get(TagToken.SENTENCE_START.value, 0)

    @property
    def non_tag_mass(self) -> int:
        """Total count of all non-tag unigrams."""
        return sum(count for word, count in self.uni.items() if not is_tag(word))

    def is_empty(self) -> bool:
        return not self.uni


def count_ngrams(sentences: Iterable[Sentence]) -> NgramCounts:
    """
    Count unigrams, bigrams and trigrams.
    
    Args:
        sentences: Sentence stream
        
    Returns:
        NgramCounts for the stream
    """
    counts = NgramCounts()
    for sentence in sentences:
        counts.add_sentence(sentence)
    logger.info(
        f"Counted {len(counts.uni)} unigrams, {len(counts.bi)} bigrams, "
        f"{len(counts.tri)} trigrams over {counts.total_tokens} tokens"
    )
    return counts


def count_ngrams_sharded(shards: Sequence[Sequence[Sentence]], max_workers: int = 1) -> NgramCounts:
    """
    Count shards independently and merge the results in shard order.
    
    Args:
        shards: Sentence shards
        max_workers: Worker processes; 1 counts inline
        
    Returns:
        Merged NgramCounts, identical to counting the concatenated shards
    """
    if max_workers <= 1 or len(shards) <= 1:
        partials: List[NgramCounts] = [count_ngrams(shard) for shard in shards]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            partials = list(executor.map(count_ngrams, [list(s) for s in shards]))
    return reduce(NgramCounts.merge, partials, NgramCounts())


def coverage(counts: NgramCounts, vocab: "Vocabulary") -> float:
    """
    Fraction of non-tag token mass covered by the vocabulary.
    
    Args:
        counts: Corpus counts
        vocab: Selected vocabulary
        
    Returns:
        Coverage in [0, 1]; 0 for a corpus without non-tag tokens
    """
    total = counts.non_tag_mass
    if total == 0:
        return 0.0
    covered = sum(counts.uni.get(word, 0) for word in vocab.words if not is_tag(word))
    return covered / total


def coverage_curve(counts: NgramCounts, sizes: Iterable[int]) -> List[Tuple[int, float]]:
    """
    Corpus coverage for a sweep of vocabulary sizes.
    
    Args:
        counts: Corpus counts
        sizes: Candidate n_uni values (each at least 5)
        
    Returns:
        (n_uni, coverage) pairs in the given order
    """
    from .vocabulary import select_vocabulary

    curve = []
    for n_uni in sizes:
        vocab = select_vocabulary(counts, ModelCaps(n_uni=n_uni, n_bi=0, n_tri=0))
        curve.append((n_uni, coverage(counts, vocab)))
    return curve


def dump_counts(counts: NgramCounts, sink: TextIO) -> int:
    """
    Write every count as "w1[ w2[ w3]]<TAB>count", sorted.
    
    Args:
        counts: Counts to dump
        sink: Text output
        
    Returns:
        Number of lines written
    """
    lines = [f"{word}\t{count}" for word, count in counts.uni.items()]
    lines += [f"{' '.join(gram)}\t{count}" for gram, count in counts.bi.items()]
    lines += [f"{' '.join(gram)}\t{count}" for gram, count in counts.tri.items()]
    lines.sort()
    for line in lines:
        sink.write(line + "\n")
    return len(lines)
