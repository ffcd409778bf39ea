"""
Stupid Backoff scores and the ARPA text format.

Scores are log10 relative frequencies. No backoff column is written: the
backoff factor is a single constant applied at query time, recorded as a
comment line ahead of the \\data\\ header.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

from ..counting.ngram_counter import ORDER, NgramCounts
from ..counting.vocabulary import SENTENCE_START_ID, Vocabulary
from ..errors import ArpaParseError, SerializationError
from ..pruning.pruner import PrunedNgrams

logger = logging.getLogger(__name__)

# Conventional ARPA floor for entries with no emission probability (<s>, unseen tags)
NO_PROBABILITY_LOG10 = -99.0
SCORE_DECIMALS = 6

_LAMBDA_COMMENT = re.compile(r"^#\s*stupid-backoff lambda=(\S+)\s*$")
_NGRAM_COUNT = re.compile(r"^ngram\s+(\d+)\s*=\s*(\d+)\s*$")
_SECTION = re.compile(r"^\\(\d+)-grams:\s*$")


@dataclass(frozen=True)
class ArpaEntry:
    """One n-gram with its log10 score."""
    
    log10_score: float
    ids: Tuple[int, ...]


@dataclass
class ArpaModel:
    """Per-order score lists over vocabulary IDs."""
    
    vocab: Vocabulary
    orders: Dict[int, List[ArpaEntry]] = field(
        default_factory=lambda: {order: [] for order in range(1, ORDER + 1)}
    )
    lam: float = 0.4

    def header_counts(self) -> Dict[int, int]:
        return {order: len(self.orders.get(order, [])) for order in range(1, ORDER + 1)}

    def entries(self, order: int) -> List[ArpaEntry]:
        return self.orders.get(order, [])


def _log10_ratio(numerator: int, denominator: int) -> float:
    return round(math.log10(numerator / denominator), SCORE_DECIMALS) + 0.0


def assign_scores(pruned: PrunedNgrams, counts: NgramCounts, lam: float = 0.4) -> ArpaModel:
    """
    Give every kept n-gram its relative-frequency log10 score.
    
    Args:
        pruned: Closure-consistent pruned n-grams
        counts: Counts the n-grams were pruned from
        lam: Stupid Backoff factor recorded as model metadata
        
    Returns:
        ArpaModel with entries sorted by ID tuple within each order
    """
    vocab = pruned.kept_uni
    total = counts.total_non_start

    unigrams = []
    for word_id, word in enumerate(vocab.words):
        count = counts.uni.get(word, 0)
        if word_id == SENTENCE_START_ID or count == 0 or total == 0:
            score = NO_PROBABILITY_LOG10
        else:
            score = _log10_ratio(count, total)
        unigrams.append(ArpaEntry(score, (word_id,)))

    bigrams = []
    for (id1, id2), c12 in sorted(pruned.kept_bi.items()):
        c1 = counts.uni[vocab.word(id1)]
        bigrams.append(ArpaEntry(_log10_ratio(c12, c1), (id1, id2)))

    trigrams = []
    for (id1, id2, id3), c123 in sorted(pruned.kept_tri.items()):
        c12 = counts.bi[(vocab.word(id1), vocab.word(id2))]
        trigrams.append(ArpaEntry(_log10_ratio(c123, c12), (id1, id2, id3)))

    return ArpaModel(vocab=vocab, orders={1: unigrams, 2: bigrams, 3: trigrams}, lam=lam)


def write_arpa(model: ArpaModel, sink: TextIO) -> None:
    """
    Write the model in ARPA layout.
    
    Args:
        model: Model to write
        sink: Text output
        
    Raises:
        SerializationError: If the sink fails; the output is partial
    """
    counts = model.header_counts()
    words = model.vocab.words
    try:
        sink.write(f"# stupid-backoff lambda={model.lam}\n")
        sink.write("\\data\\\n")
        for order in range(1, ORDER + 1):
            sink.write(f"ngram {order}={counts[order]}\n")
        for order in range(1, ORDER + 1):
            if counts[order] == 0:
                continue
            sink.write(f"\n\\{order}-grams:\n")
            for entry in model.entries(order):
                surface = " ".join(words[i] for i in entry.ids)
                sink.write(f"{entry.log10_score:.{SCORE_DECIMALS}f}\t{surface}\n")
        sink.write("\n\\end\\\n")
    except OSError as e:
        logger.error(f"ARPA write failed: {e}")
        raise SerializationError(f"ARPA write failed, output is partial: {e}") from e


def read_arpa(source: Iterable[str], vocab: Vocabulary) -> ArpaModel:
    """
    Parse ARPA text into an ArpaModel.
    
    Args:
        source: ARPA lines
        vocab: Vocabulary resolving surfaces to IDs (unknown words -> <unk>)
        
    Returns:
        Parsed model, entries sorted by ID tuple
        
    Raises:
        ArpaParseError: On malformed headers, count mismatches or bad scores
    """
    lam = 0.4
    declared: Dict[int, int] = {}
    orders: Dict[int, List[ArpaEntry]] = {order: [] for order in range(1, ORDER + 1)}
    state = "preamble"
    current: Optional[int] = None
    line_no = 0

    def close_section(order: Optional[int], at_line: int) -> None:
        if order is not None and len(orders[order]) != declared.get(order, 0):
            raise ArpaParseError(
                f"header declares {declared.get(order, 0)} entries but section has "
                f"{len(orders[order])}", line_no=at_line, section=f"{order}-grams")

    for line_no, raw_line in enumerate(source, start=1):
        line = raw_line.rstrip("\r\n")
        stripped = line.strip()

        if state == "preamble":
            match = _LAMBDA_COMMENT.match(stripped)
            if match:
                try:
                    lam = float(match.group(1))
                except ValueError:
                    raise ArpaParseError(f"bad lambda value {match.group(1)!r}",
                                         line_no=line_no, section="preamble")
            elif stripped == "\\data\\":
                state = "header"
            continue

        if state == "header":
            if not stripped:
                continue
            match = _NGRAM_COUNT.match(stripped)
            if match:
                order, count = int(match.group(1)), int(match.group(2))
                if not 1 <= order <= ORDER:
                    raise ArpaParseError(f"unsupported order {order}", line_no=line_no, section="data")
                declared[order] = count
                continue
            state = "body"

        if state == "body":
            if not stripped:
                continue
            section = _SECTION.match(stripped)
            if section:
                close_section(current, line_no)
                current = int(section.group(1))
                if current not in declared:
                    raise ArpaParseError("section missing from header", line_no=line_no,
                                         section=f"{current}-grams")
                continue
            if stripped == "\\end\\":
                close_section(current, line_no)
                current = None
                state = "end"
                continue
            if current is None:
                raise ArpaParseError(f"unexpected line {stripped!r}", line_no=line_no, section="data")
            fields = stripped.split()
            if len(fields) not in (current + 1, current + 2):
                raise ArpaParseError(f"expected {current} words", line_no=line_no,
                                     section=f"{current}-grams")
            try:
                score = float(fields[0])
            except ValueError:
                raise ArpaParseError(f"unparsable score {fields[0]!r}", line_no=line_no,
                                     section=f"{current}-grams")
            ids = tuple(vocab.id_of(word) for word in fields[1:current + 1])
            orders[current].append(ArpaEntry(score, ids))
            continue

    if state in ("preamble", "header"):
        raise ArpaParseError("missing \\data\\ header or sections", line_no=line_no, section="data")
    if state != "end":
        raise ArpaParseError("missing \\end\\ marker", line_no=line_no,
                             section=f"{current}-grams" if current else "data")
    for order, count in declared.items():
        if count and not orders[order]:
            raise ArpaParseError(f"header declares {count} entries but section is missing",
                                 line_no=line_no, section=f"{order}-grams")

    for entries in orders.values():
        entries.sort(key=lambda entry: entry.ids)
    logger.info(f"Read ARPA model with counts {[len(orders[o]) for o in sorted(orders)]}")
    return ArpaModel(vocab=vocab, orders=orders, lam=lam)


def save_arpa(model: ArpaModel, path: Union[str, Path]) -> None:
    """Write an ARPA file (UTF-8, LF line endings)."""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        write_arpa(model, f)


def load_arpa(path: Union[str, Path], vocab: Vocabulary) -> ArpaModel:
    """Read an ARPA file."""
    with open(path, 'r', encoding='utf-8') as f:
        return read_arpa(f, vocab)
