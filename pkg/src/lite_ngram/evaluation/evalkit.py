"""
Keystroke saving ratio and next-word prediction rate under a greedy typing
simulation.

Per word w with its true preceding words as context:
  1. the NWP list contains w: one tap inserts it, cost 1;
  2. otherwise w is typed character by character (cost 1 each) and after
     every character the WC list is checked; a hit costs one more tap;
  3. no hit at all: |w| characters plus the separator.
Every word contributes |w| + 1 characters to n_c.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Protocol, Sequence, Union

from ..errors import EvaluationError
from ..preprocessing.text_preprocessor import PrepConfig, TextPreprocessor

logger = logging.getLogger(__name__)


class SuggestionSource(Protocol):
    """Anything answering the two query kinds, e.g. Engine or TimedEngine."""

    def next_word_prediction(self, ctx: Sequence[str], k: Optional[int] = None) -> list: ...

    def word_completion(self, ctx: Sequence[str], prefix: str, k: Optional[int] = None) -> list: ...


@dataclass
class TestSetStats:
    __test__ = False

    lines: int = 0
    words: int = 0
    characters: int = 0


@dataclass
class TestSet:
    """Raw evaluation lines plus their statistics."""
    
    __test__ = False

    sentences: List[str]
    stats: TestSetStats
    prep: PrepConfig = field(default_factory=PrepConfig, compare=False)

    @classmethod
    def from_lines(cls, lines: Iterable[str], prep: Optional[PrepConfig] = None) -> "TestSet":
        prep = prep or PrepConfig()
        sentences = [line.strip() for line in lines if line.strip()]
        return cls(sentences=sentences, stats=compute_stats(sentences, prep), prep=prep)

    @classmethod
    def load(cls, path: Union[str, Path], prep: Optional[PrepConfig] = None) -> "TestSet":
        """Read a UTF-8 test set, one sentence per line."""
        with open(path, 'r', encoding='utf-8') as f:
            testset = cls.from_lines(f, prep)
        logger.info(f"Loaded test set {path}: {testset.stats.lines} lines, "
                    f"{testset.stats.words} words")
        return testset

    def tokenized(self) -> List[List[str]]:
        """Word sequences as the model's preprocessing would produce them."""
        return _tokenize(self.sentences, self.prep)

    def validate(self) -> None:
        """
        Raises:
            EvaluationError: If the stored stats disagree with the content
        """
        if compute_stats(self.sentences, self.prep) != self.stats:
            raise EvaluationError("test set statistics do not match its content")


def _tokenize(sentences: Sequence[str], prep: PrepConfig) -> List[List[str]]:
    preprocessor = TextPreprocessor(prep)
    out: List[List[str]] = []
    for line in sentences:
        out.extend(preprocessor.line_sentences(line))
    return out


def compute_stats(sentences: Sequence[str], prep: PrepConfig) -> TestSetStats:
    words = sum(len(tokens) for tokens in _tokenize(sentences, prep))
    return TestSetStats(lines=len(sentences), words=words,
                        characters=sum(len(line) for line in sentences))


@dataclass
class TypingTrace:
    """Keystroke accounting for one sentence."""
    
    words: int = 0
    n_c: int = 0
    n_k: int = 0
    nwp_queries: int = 0
    wc_queries: int = 0
    nwp_hits: int = 0
    wc_hits: int = 0


@dataclass
class EvalReport:
    k: int
    ksr_percent: float
    nwp_percent: float
    n_c: int
    n_k: int
    words: int
    nwp_hits: int
    testset: TestSetStats
    sentences: List[TypingTrace] = field(default_factory=list)
    timing: Optional[Dict[str, Any]] = None
    sizes: Dict[str, int] = field(default_factory=dict)
    resident_bytes: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _contains(suggestions: list, word: str) -> bool:
    return any(s.word == word for s in suggestions)


def simulate_typing(sentence: Sequence[str], engine: SuggestionSource, k: int) -> TypingTrace:
    """
    Simulate typing one tokenised sentence.
    
    Args:
        sentence: Words of the sentence
        engine: Suggestion source
        k: Suggestions shown per query
        
    Returns:
        TypingTrace with n_c and n_k
    """
    trace = TypingTrace()
    for position, word in enumerate(sentence):
        ctx = sentence[:position]
        trace.words += 1
        trace.n_c += len(word) + 1

        trace.nwp_queries += 1
        if _contains(engine.next_word_prediction(ctx, k=k), word):
            trace.n_k += 1
            trace.nwp_hits += 1
            continue

        for typed in range(1, len(word) + 1):
            trace.n_k += 1
            trace.wc_queries += 1
            if _contains(engine.word_completion(ctx, word[:typed], k=k), word):
                trace.n_k += 1
                trace.wc_hits += 1
                break
        else:
            trace.n_k += 1
    return trace


def _require_words(sentences: List[List[str]]) -> None:
    if not any(sentences):
        raise EvaluationError("test set has no words")


def ksr(testset: TestSet, engine: SuggestionSource, k: int) -> float:
    """
    Keystroke saving ratio, (n_c - n_k) / n_c * 100.
    
    Raises:
        EvaluationError: If the test set has no words
    """
    sentences = testset.tokenized()
    _require_words(sentences)
    traces = [simulate_typing(words, engine, k) for words in sentences]
    n_c = sum(t.n_c for t in traces)
    n_k = sum(t.n_k for t in traces)
    return (n_c - n_k) / n_c * 100


def nwp_rate(testset: TestSet, engine: SuggestionSource, k: int) -> float:
    """
    Share of words found in the NWP list given their true history, in percent.
    
    Raises:
        EvaluationError: If the test set has no words
    """
    sentences = testset.tokenized()
    _require_words(sentences)
    hits = total = 0
    for words in sentences:
        for position, word in enumerate(words):
            total += 1
            if _contains(engine.next_word_prediction(words[:position], k=k), word):
                hits += 1
    return 100 * hits / total


def evaluate(testset: TestSet, engine: SuggestionSource, k: int,
             max_workers: int = 1) -> EvalReport:
    """
    Run the typing simulation over the whole test set.
    
    Args:
        testset: Test set
        engine: Suggestion source (read-only, safe to share between threads)
        k: Suggestions shown per query
        max_workers: Sentences simulated concurrently
        
    Returns:
        EvalReport without timing or size fields
        
    Raises:
        EvaluationError: If the test set has no words
    """
    sentences = testset.tokenized()
    _require_words(sentences)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            traces = list(executor.map(lambda words: simulate_typing(words, engine, k), sentences))
    else:
        traces = [simulate_typing(words, engine, k) for words in sentences]

    n_c = sum(t.n_c for t in traces)
    n_k = sum(t.n_k for t in traces)
    words = sum(t.words for t in traces)
    nwp_hits = sum(t.nwp_hits for t in traces)
    report = EvalReport(
        k=k,
        ksr_percent=(n_c - n_k) / n_c * 100,
        nwp_percent=100 * nwp_hits / words,
        n_c=n_c,
        n_k=n_k,
        words=words,
        nwp_hits=nwp_hits,
        testset=testset.stats,
        sentences=traces,
    )
    logger.info(f"Evaluated {words} words at K={k}: KSR {report.ksr_percent:.2f}%, "
                f"NWP {report.nwp_percent:.2f}%")
    return report
