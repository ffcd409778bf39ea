"""
Tag tokens and the sentence record shared by every pipeline stage.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple


class TagToken(Enum):
    """Reserved tag tokens; the declaration order fixes their vocabulary IDs."""

    SENTENCE_START = "<s>"
    SENTENCE_END = "<e>"
    UNKNOWN = "<unk>"
    BLACKLISTED = "<bad>"

    @property
    def surface(self) -> str:
        return self.value


TAG_SURFACES: Tuple[str, ...] = tuple(tag.value for tag in TagToken)
_TAG_SET = frozenset(TAG_SURFACES)


def is_tag(token: str) -> bool:
    """Return True if the token is one of the reserved tag surfaces."""
    return token in _TAG_SET


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence framed by <s> and <e>."""
    
    tokens: Tuple[str, ...]

    def __post_init__(self) -> None:
        tokens = self.tokens
        if len(tokens) < 2:
            raise ValueError("Sentence needs at least the <s> and <e> tags")
        start, end = TagToken.SENTENCE_START.value, TagToken.SENTENCE_END.value
        if tokens[0] != start or tokens[-1] != end:
            raise ValueError(f"Sentence must start with {start} and end with {end}")
        for token in tokens[1:-1]:
            if token in (start, end):
                raise ValueError(f"Boundary tag {token!r} inside sentence")
            if not token or any(ch.isspace() for ch in token):
                raise ValueError(f"Invalid token {token!r}")

    @classmethod
    def from_words(cls, words: Sequence[str]) -> "Sentence":
        """Frame a word sequence with the boundary tags."""
        return cls((TagToken.SENTENCE_START.value, *words, TagToken.SENTENCE_END.value))

    @property
    def words(self) -> Tuple[str, ...]:
        """Tokens between the boundary tags."""
        return self.tokens[1:-1]

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return " ".join(self.tokens)
