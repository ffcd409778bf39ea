"""
Corpus preprocessing: raw text to tagged sentences.

This module turns raw UTF-8 corpus text into sentences framed by <s>/<e>,
replaces blacklisted words with <bad> and rare words with <unk>. The stages
compose as clean -> blacklist -> rare tagging.
"""

import io
import logging
import re
import string
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    FrozenSet, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple, Union,
)

from ..config.model_config import get_prep_config
from .tokens import Sentence, TagToken, is_tag

logger = logging.getLogger(__name__)

RawText = Union[bytes, str, Iterable[bytes], Iterable[str]]

REPLACEMENT_CHAR = "�"
_REPLACEMENT_BYTES = REPLACEMENT_CHAR.encode("utf-8")

# Terminal punctuation ends a sentence when followed by whitespace or end of line
_SENTENCE_BOUNDARY = re.compile(r"[.!?]+(?=\s|$)")
_CONTROL_CHARS = re.compile(r"[\x00-\x08\x0B\x0C\x0E-\x1F\x7F]")
_ASCII_PUNCTUATION = frozenset(string.punctuation)


@dataclass(frozen=True)
class PrepConfig:
    """Preprocessing parameters."""
    
    rare_threshold: int = 3
    blacklist: FrozenSet[str] = frozenset()
    lowercase_input: bool = True
    max_bytes: Optional[int] = None

    def __post_init__(self) -> None:
        if self.rare_threshold < 1:
            raise ValueError("rare_threshold must be at least 1")
        if self.max_bytes is not None and self.max_bytes < 0:
            raise ValueError("max_bytes must be non-negative")

    @classmethod
    def from_config(cls, blacklist: Iterable[str] = ()) -> "PrepConfig":
        """Build a PrepConfig from the environment-driven defaults."""
        config = get_prep_config()
        return cls(
            rare_threshold=config['rare_threshold'],
            blacklist=frozenset(blacklist),
            lowercase_input=config['lowercase_input'],
            max_bytes=config['max_bytes'],
        )


@dataclass
class PrepSummary:
    """Counters collected while cleaning a corpus."""
    
    bytes_read: int = 0
    lines: int = 0
    sentences: int = 0
    tokens: int = 0
    invalid_sequences: int = 0
    budget_reached: bool = False
    blacklisted: int = 0
    rare_replaced: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _is_punctuation(ch: str) -> bool:
    return ch in _ASCII_PUNCTUATION or unicodedata.category(ch).startswith("P")


def _strip_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and _is_punctuation(token[start]):
        start += 1
    while end > start and _is_punctuation(token[end - 1]):
        end -= 1
    return token[start:end]


class TextPreprocessor:
    """Streams raw corpus lines into tagged sentences."""
    
    def __init__(self, config: Optional[PrepConfig] = None):
        """
        Initialize the preprocessor.
        
        Args:
            config: Preprocessing parameters; environment defaults if omitted.
        """
        self.config = config or PrepConfig.from_config()
        self.summary = PrepSummary()
        self.logger = logging.getLogger(__name__)

    def _decode(self, chunk: Union[bytes, str]) -> str:
        """Decode one line, replacing invalid byte sequences."""
        if isinstance(chunk, str):
            self.summary.bytes_read += len(chunk.encode("utf-8"))
            return chunk
        self.summary.bytes_read += len(chunk)
        try:
            return chunk.decode("utf-8")
        except UnicodeDecodeError:
            text = chunk.decode("utf-8", errors="replace")
            self.summary.invalid_sequences += (
                text.count(REPLACEMENT_CHAR) - chunk.count(_REPLACEMENT_BYTES)
            )
            return text

    def _iter_lines(self, raw: RawText) -> Iterator[Union[bytes, str]]:
        if isinstance(raw, bytes):
            yield from io.BytesIO(raw)
        elif isinstance(raw, str):
            yield from io.StringIO(raw)
        else:
            yield from raw

    def _within_budget(self, chunk: Union[bytes, str]) -> bool:
        budget = self.config.max_bytes
        if budget is None:
            return True
        size = len(chunk) if isinstance(chunk, bytes) else len(chunk.encode("utf-8"))
        return self.summary.bytes_read + size <= budget

    def _clean_text(self, text: str) -> str:
        """
        Normalize a decoded line before segmentation.
        
        Args:
            text: Raw line
            
        Returns:
            Line without control characters, lowercased when configured
        """
        text = _CONTROL_CHARS.sub(" ", text)
        if self.config.lowercase_input:
            text = text.lower()
        return text

    def tokenize(self, segment: str) -> List[str]:
        """
        Split a sentence segment into punctuation-stripped tokens.
        
        Args:
            segment: Text of one sentence
            
        Returns:
            Tokens with leading/trailing punctuation removed; empty tokens dropped
        """
        tokens = []
        for piece in segment.split():
            token = _strip_punctuation(piece)
            if token:
                tokens.append(token)
        return tokens

    def split_sentences(self, line: str) -> List[List[str]]:
        """
        Segment a cleaned line on terminal punctuation.
        
        Args:
            line: Cleaned text line
            
        Returns:
            Token lists, one per non-empty sentence
        """
        sentences = []
        for segment in _SENTENCE_BOUNDARY.split(line):
            tokens = self.tokenize(segment)
            if tokens:
                sentences.append(tokens)
        return sentences

    def line_sentences(self, line: str) -> List[List[str]]:
        """Clean one raw line and segment it, without tags."""
        return self.split_sentences(self._clean_text(line))

    def clean_corpus(self, raw: RawText) -> Iterator[Sentence]:
        """
        Stream sentences out of raw corpus text.
        
        Args:
            raw: Bytes, text, or an iterable of byte/text lines
            
        Yields:
            Sentence objects framed by <s> and <e>
        """
        for chunk in self._iter_lines(raw):
            if not self._within_budget(chunk):
                self.summary.budget_reached = True
                self.logger.info(f"Sampling budget of {self.config.max_bytes} bytes reached")
                break
            line = self._clean_text(self._decode(chunk))
            self.summary.lines += 1
            for words in self.split_sentences(line):
                self.summary.sentences += 1
                self.summary.tokens += len(words)
                yield Sentence.from_words(words)

        if self.summary.invalid_sequences:
            self.logger.warning(
                f"Replaced {self.summary.invalid_sequences} invalid byte sequences "
                f"with {REPLACEMENT_CHAR!r}"
            )


def clean_corpus(raw: RawText, config: Optional[PrepConfig] = None) -> Iterator[Sentence]:
    """
    Stream sentences out of raw corpus text with a fresh preprocessor.
    
    Args:
        raw: Bytes, text, or an iterable of byte/text lines
        config: Preprocessing parameters
        
    Returns:
        Iterator of Sentence objects
    """
    return TextPreprocessor(config).clean_corpus(raw)


def apply_blacklist(sentences: Iterable[Sentence], blacklist: FrozenSet[str]) -> Iterator[Sentence]:
    """
    Replace every blacklisted word with <bad>.
    
    Args:
        sentences: Sentence stream
        blacklist: Lowercase single-token words
        
    Yields:
        Sentences with the same token count
    """
    bad = TagToken.BLACKLISTED.value
    for sentence in sentences:
        if not blacklist:
            yield sentence
            continue
        yield Sentence(tuple(
            bad if (token in blacklist and not is_tag(token)) else token
            for token in sentence.tokens
        ))


def tag_rare_words(sentences: Sequence[Sentence], rare_threshold: int) -> List[Sentence]:
    """
    Replace words whose corpus frequency is below the threshold with <unk>.
    
    Args:
        sentences: Materialized sentence collection (two passes are made)
        rare_threshold: Minimum frequency a word needs to be kept
        
    Returns:
        New sentence list with the same token counts
    """
    if rare_threshold < 1:
        raise ValueError("rare_threshold must be at least 1")
    frequencies = Counter(
        token for sentence in sentences for token in sentence.words if not is_tag(token)
    )
    rare = {word for word, count in frequencies.items() if count < rare_threshold}
    if not rare:
        return list(sentences)

    unk = TagToken.UNKNOWN.value
    logger.info(f"Tagging {len(rare)} rare word types with {unk}")
    return [
        Sentence(tuple(unk if token in rare else token for token in sentence.tokens))
        for sentence in sentences
    ]


def preprocess(raw: RawText, config: Optional[PrepConfig] = None) -> Tuple[List[Sentence], PrepSummary]:
    """
    Run the full clean -> blacklist -> rare tagging pipeline.
    
    Args:
        raw: Corpus text
        config: Preprocessing parameters
        
    Returns:
        Tuple of (sentences, summary)
    """
    preprocessor = TextPreprocessor(config)
    config = preprocessor.config
    cleaned = list(apply_blacklist(preprocessor.clean_corpus(raw), config.blacklist))
    summary = preprocessor.summary
    bad = TagToken.BLACKLISTED.value
    summary.blacklisted = sum(s.tokens.count(bad) for s in cleaned)

    tagged = tag_rare_words(cleaned, config.rare_threshold)
    unk = TagToken.UNKNOWN.value
    summary.rare_replaced = (
        sum(s.tokens.count(unk) for s in tagged) - sum(s.tokens.count(unk) for s in cleaned)
    )
    logger.info(
        f"Preprocessed {summary.lines} lines into {summary.sentences} sentences "
        f"({summary.tokens} tokens, {summary.blacklisted} blacklisted, "
        f"{summary.rare_replaced} rare)"
    )
    return tagged, summary


def load_blacklist(path: Union[str, Path]) -> FrozenSet[str]:
    """
    Load a blacklist file with one lowercase word per line.
    
    Args:
        path: Blacklist file path
        
    Returns:
        Frozen set of words
    """
    with open(path, 'r', encoding='utf-8') as f:
        return frozenset(line.strip().lower() for line in f if line.strip())


def write_sentences(sentences: Iterable[Sentence], sink: TextIO) -> int:
    """
    Write sentences one per line, tokens space-separated.
    
    Args:
        sentences: Sentences to write
        sink: Text output
        
    Returns:
        Number of sentences written
    """
    written = 0
    for sentence in sentences:
        sink.write(str(sentence) + "\n")
        written += 1
    return written
