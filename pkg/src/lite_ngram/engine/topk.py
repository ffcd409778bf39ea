"""
Bounded top-K selection over scored word IDs.
"""

import heapq
from typing import List, Tuple


class TopKSelector:
    """
    Keeps the K best (score, word ID) pairs seen so far.
    
    Higher score wins; equal scores prefer the lower word ID. The heap root
    is the worst retained pair, so each offer costs O(log K).
    """
    
    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k
        # entries are (score, -word_id): the root is the weakest retained pair
        self._heap: List[Tuple[float, int]] = []

    def __len__(self) -> int:
        return len(self._heap)

    def offer(self, score: float, word_id: int) -> None:
        entry = (score, -word_id)
        if len(self._heap) < self.k:
            heapq.heappush(self._heap, entry)
        elif entry > self._heap[0]:
            heapq.heapreplace(self._heap, entry)

    def ranked(self) -> List[Tuple[int, float]]:
        """(word ID, score) pairs, best first. Does not consume the selector."""
        return [(-neg_id, score) for score, neg_id in sorted(self._heap, reverse=True)]
