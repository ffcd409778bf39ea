"""
Zipf-distributed synthetic corpora for scaling benchmarks.
"""

import string
from typing import List

import numpy as np

_LETTERS = string.ascii_lowercase


def synthetic_word(rank: int) -> str:
    """Distinct lowercase word for a frequency rank (two letters minimum)."""
    letters = []
    value = rank
    while True:
        value, digit = divmod(value, len(_LETTERS))
        letters.append(_LETTERS[digit])
        if value == 0 and len(letters) >= 2:
            break
    return "".join(reversed(letters))


def synthetic_corpus(vocab_size: int, n_tokens: int, seed: int = 0,
                     exponent: float = 1.1) -> List[str]:
    """
    Sentences of words drawn with probability proportional to 1 / rank^exponent.
    
    Args:
        vocab_size: Number of distinct word types
        n_tokens: Tokens to draw
        seed: RNG seed; equal seeds give equal corpora
        exponent: Zipf exponent
        
    Returns:
        Lines of 5 to 15 words, each ending with a full stop
    """
    if vocab_size < 1 or n_tokens < 0:
        raise ValueError("vocab_size must be positive and n_tokens non-negative")
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, vocab_size + 1, dtype=np.float64) ** exponent
    draws = rng.choice(vocab_size, size=n_tokens, p=weights / weights.sum())
    words = [synthetic_word(int(rank)) for rank in draws]

    lines: List[str] = []
    position = 0
    while position < len(words):
        length = int(rng.integers(5, 16))
        lines.append(" ".join(words[position:position + length]) + ".")
        position += length
    return lines
