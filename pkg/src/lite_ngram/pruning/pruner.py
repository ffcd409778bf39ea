"""
Count-based bigram pruning and score-based trigram pruning.

Bigrams are ranked by raw count. Trigrams are ranked by the importance score

    S(w1, w2, w3) = c123 * (c123 / c12 - alpha * c12 / c1)

and selection respects closure: a trigram is only eligible when its context
bigram was kept and its last word is in the vocabulary.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from ..config.model_config import get_prune_config
from ..counting.ngram_counter import ModelCaps, NgramCounts
from ..counting.vocabulary import Vocabulary

logger = logging.getLogger(__name__)

IdBigram = Tuple[int, int]
IdTrigram = Tuple[int, int, int]


@dataclass(frozen=True)
class PruneParams:
    """Pruning parameters."""
    
    caps: ModelCaps = field(default_factory=ModelCaps)
    alpha: float = 0.4

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    @classmethod
    def from_config(cls, caps: Optional[ModelCaps] = None) -> "PruneParams":
        return cls(caps=caps or ModelCaps.from_config(), alpha=get_prune_config()['alpha'])


@dataclass
class PruneReport:
    """Candidates examined and kept per order."""
    
    unigrams: int = 0
    bigram_candidates: int = 0
    bigrams_kept: int = 0
    trigram_candidates: int = 0
    trigrams_kept: int = 0
    min_kept_trigram_score: Optional[float] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class PrunedNgrams:
    """Capped, closure-consistent n-gram sets keyed by word IDs."""
    
    kept_uni: Vocabulary
    kept_bi: Dict[IdBigram, int]
    kept_tri: Dict[IdTrigram, int]
    report: PruneReport = field(default_factory=PruneReport)

    def check_closure(self) -> None:
        """
        Verify every stored reference resolves.
        
        Raises:
            ValueError: If a bigram word or trigram context is missing
        """
        size = len(self.kept_uni)
        for w1, w2 in self.kept_bi:
            if not (0 <= w1 < size and 0 <= w2 < size):
                raise ValueError(f"Bigram ({w1}, {w2}) refers to an unknown unigram")
        for w1, w2, w3 in self.kept_tri:
            if (w1, w2) not in self.kept_bi:
                raise ValueError(f"Trigram ({w1}, {w2}, {w3}) has no context bigram")
            if not 0 <= w3 < size:
                raise ValueError(f"Trigram ({w1}, {w2}, {w3}) refers to an unknown unigram")


def trigram_score(tri: Tuple[str, str, str], counts: NgramCounts, alpha: float) -> float:
    """
    Importance score of a trigram.
    
    Args:
        tri: (w1, w2, w3)
        counts: Corpus counts
        alpha: Backoff factor inside the score
        
    Returns:
        c123 * (c123/c12 - alpha * c12/c1); may be negative
        
    Raises:
        ValueError: If any of the three counts is missing
    """
    w1, w2, _ = tri
    c123 = counts.tri.get(tri, 0)
    c12 = counts.bi.get((w1, w2), 0)
    c1 = counts.uni.get(w1, 0)
    if c123 < 1 or c12 < 1 or c1 < 1:
        raise ValueError(f"Trigram {tri} lacks the counts needed for scoring")
    return c123 * (c123 / c12 - alpha * c12 / c1)


def prune(counts: NgramCounts, vocab: Vocabulary, params: PruneParams) -> PrunedNgrams:
    """
    Reduce bigrams and trigrams to the caps while keeping closure.
    
    Args:
        counts: Corpus counts
        vocab: Vocabulary selected from the same counts
        params: Caps and alpha
        
    Returns:
        PrunedNgrams with ID-keyed kept sets
    """
    caps = params.caps
    report = PruneReport(unigrams=len(vocab))

    bigram_candidates = []
    for (w1, w2), count in counts.bi.items():
        id1, id2 = vocab.get(w1), vocab.get(w2)
        if id1 is not None and id2 is not None:
            bigram_candidates.append((count, id1, id2))
    report.bigram_candidates = len(bigram_candidates)
    top_bigrams = heapq.nsmallest(
        caps.n_bi, bigram_candidates, key=lambda c: (-c[0], c[1], c[2])
    )
    kept_bi = {(id1, id2): count for count, id1, id2 in top_bigrams}
    report.bigrams_kept = len(kept_bi)

    trigram_candidates = []
    for tri, count in counts.tri.items():
        w1, w2, w3 = tri
        id1, id2, id3 = vocab.get(w1), vocab.get(w2), vocab.get(w3)
        if id1 is None or id2 is None or id3 is None or (id1, id2) not in kept_bi:
            continue
        score = trigram_score(tri, counts, params.alpha)
        trigram_candidates.append((score, count, id1, id2, id3))
    report.trigram_candidates = len(trigram_candidates)
    top_trigrams = heapq.nsmallest(
        caps.n_tri, trigram_candidates, key=lambda c: (-c[0], c[2], c[3], c[4])
    )
    kept_tri = {(id1, id2, id3): count for _, count, id1, id2, id3 in top_trigrams}
    report.trigrams_kept = len(kept_tri)
    if top_trigrams:
        report.min_kept_trigram_score = min(c[0] for c in top_trigrams)

    logger.info(
        f"Kept {report.bigrams_kept}/{report.bigram_candidates} bigrams and "
        f"{report.trigrams_kept}/{report.trigram_candidates} trigrams"
    )
    return PrunedNgrams(kept_uni=vocab, kept_bi=kept_bi, kept_tri=kept_tri, report=report)


def format_prune_report(report: PruneReport) -> str:
    """Render the pruning report as a short text summary."""
    min_score = (
        f"{report.min_kept_trigram_score:.6f}"
        if report.min_kept_trigram_score is not None else "n/a"
    )
    return "\n".join([
        f"unigrams kept:      {report.unigrams}",
        f"bigrams examined:   {report.bigram_candidates}",
        f"bigrams kept:       {report.bigrams_kept}",
        f"trigrams examined:  {report.trigram_candidates}",
        f"trigrams kept:      {report.trigrams_kept}",
        f"min kept score:     {min_score}",
    ])
